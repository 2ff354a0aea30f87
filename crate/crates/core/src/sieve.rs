//! The `O(n log n)` divisor sieve for `‖1‖_q, …, ‖n‖_q`.
//!
//! Every cell starts at the diameter `1/(q(q−1))`; each `i >= 2` then
//! subtracts `q^-i` from all of its multiples. Once `q^-i` underflows to zero
//! the remaining passes are no-ops and are skipped.

use crate::error::{Error, Result};
use crate::qnorm::QParam;

/// `‖m‖_q` for `m = 1..=n`, indexed from 1 through [`SieveTable::get`].
#[derive(Debug, Clone, PartialEq)]
pub struct SieveTable {
    q: QParam,
    values: Vec<f64>,
}

impl SieveTable {
    pub fn q(&self) -> QParam {
        self.q
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `‖m‖_q` for `1 <= m <= n`.
    pub fn get(&self, m: usize) -> Option<f64> {
        m.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    /// The values for `m = 1..=n` in order (slot 0 holds `‖1‖_q`).
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

fn filled(n: u64, fill: f64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::domain("sieve length must be >= 1"));
    }
    let len = usize::try_from(n).map_err(|_| Error::capacity(format!("sieve length {n} exceeds usize")))?;
    let mut v = Vec::new();
    v.try_reserve_exact(len)
        .map_err(|e| Error::capacity(format!("cannot allocate {n} cells: {e}")))?;
    v.resize(len, fill);
    Ok(v)
}

/// Cells per block of the cache-blocked pass (256 KiB of `f64`).
const BLOCK: usize = 1 << 15;

/// Subtracts `w` from every multiple of `i` in the 1-indexed `cells`.
#[inline]
fn subtract_multiples(cells: &mut [f64], i: usize, w: f64) {
    let mut m = i;
    while m <= cells.len() {
        cells[m - 1] -= w;
        m += i;
    }
}

/// For `i = 2, 3, …` subtracts `weights[i − 2]` from every multiple of `i`.
///
/// Divisors below [`BLOCK`] are swept one cache-sized block at a time, the
/// rest one divisor at a time. Every cell still receives its subtractions in
/// ascending `i`, so the result is bit-identical to the plain double loop.
fn divisor_sieve(cells: &mut [f64], weights: &[f64]) {
    let n = cells.len();
    let small = weights.len().min(BLOCK);
    let mut lo = 1;
    while lo <= n {
        let hi = (lo + BLOCK - 1).min(n);
        let block = &mut cells[lo - 1..hi];
        for (idx, &w) in weights[..small].iter().enumerate() {
            let i = idx + 2;
            if i > hi {
                break;
            }
            if w == 0.0 {
                continue;
            }
            let mut m = lo.div_ceil(i) * i;
            while m <= hi {
                block[m - lo] -= w;
                m += i;
            }
        }
        lo = hi + 1;
    }
    for (idx, &w) in weights.iter().enumerate().skip(small) {
        if w != 0.0 {
            subtract_multiples(cells, idx + 2, w);
        }
    }
}

/// `q^-i` for `i = 2, 3, …, n` by repeated multiplication, cut at the first
/// power that underflows to zero.
fn inverse_powers(q: QParam, n: usize) -> Vec<f64> {
    let inv = 1.0 / q.value();
    let mut pows = Vec::new();
    let mut pow = inv;
    for _ in 2..=n {
        pow *= inv;
        if pow == 0.0 {
            break;
        }
        pows.push(pow);
    }
    pows
}

/// Sequential, bit-deterministic sieve.
pub fn sieve_qnorms(q: QParam, n: u64) -> Result<SieveTable> {
    let mut values = filled(n, q.diameter())?;
    let pows = inverse_powers(q, values.len());
    divisor_sieve(&mut values, &pows);
    Ok(SieveTable { q, values })
}

/// Parallel sieve over `workers` threads.
///
/// Worker `w` handles `i ≡ w (mod workers)` in a private difference array;
/// the arrays are folded in ascending worker order, so the result is
/// deterministic for a fixed worker count and agrees with [`sieve_qnorms`]
/// to within a few ulps of the diameter.
pub fn sieve_qnorms_parallel(q: QParam, n: u64, workers: usize) -> Result<SieveTable> {
    if workers == 0 {
        return Err(Error::domain("worker count must be >= 1"));
    }
    let mut values = filled(n, q.diameter())?;
    let len = values.len();
    let pows = inverse_powers(q, len);
    let mut partials = Vec::with_capacity(workers);
    for _ in 0..workers {
        partials.push(filled(n, 0.0)?);
    }
    std::thread::scope(|scope| {
        for (w, partial) in partials.iter_mut().enumerate() {
            let pows = &pows;
            scope.spawn(move || {
                for (idx, &p) in pows.iter().enumerate().skip(w).step_by(workers) {
                    subtract_multiples(partial, idx + 2, p);
                }
            });
        }
    });
    for partial in &partials {
        for (v, d) in values.iter_mut().zip(partial) {
            *v += d;
        }
    }
    Ok(SieveTable { q, values })
}

/// `out[m] = base − Σ_{k>=2, k|m} weight(k)` for `m = 1..=n` (slot 0 is
/// `m = 1`), with the loop structure of [`sieve_qnorms`].
pub fn sieve_divisor_weights(weight: impl Fn(u64) -> f64, base: f64, n: u64) -> Result<Vec<f64>> {
    let mut out = filled(n, base)?;
    let mut weights: Vec<f64> = (2..=n).map(weight).collect();
    while weights.last() == Some(&0.0) {
        weights.pop();
    }
    divisor_sieve(&mut out, &weights);
    Ok(out)
}

/// One histogram class `[lo, hi)`; the last class is closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
}

/// Counts of the table values in `bins` equal classes over `[0, 1/(q(q−1))]`.
pub fn histogram(table: &SieveTable, bins: usize) -> Result<Vec<HistogramBin>> {
    if bins == 0 {
        return Err(Error::domain("histogram needs at least one bin"));
    }
    let d = table.q.diameter();
    let edge = |i: usize| d * i as f64 / bins as f64;
    let mut out: Vec<HistogramBin> =
        (0..bins).map(|i| HistogramBin { lo: edge(i), hi: edge(i + 1), count: 0 }).collect();
    for &v in &table.values {
        let mut i = ((v / d) * bins as f64).floor().max(0.0) as usize;
        i = i.min(bins - 1);
        // the division may round across an edge
        while i > 0 && v < out[i].lo {
            i -= 1;
        }
        while i + 1 < bins && v >= out[i].hi {
            i += 1;
        }
        out[i].count += 1;
    }
    Ok(out)
}
