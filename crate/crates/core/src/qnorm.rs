//! The q-norm `‖n‖_q = Σ_{k ∤ n} q^-k`, its metric and the translations
//! between metric balls and arithmetic progressions.
//!
//! For literal integers the infinite defining series is never truncated:
//! since `Σ_{k>=2} q^-k = 1/(q(q−1))`, the norm equals that diameter minus
//! the finite sum of `q^-k` over divisors `k >= 2`.

use crate::arith::PrimeTable;
use crate::error::{Error, Result};
use crate::sequences::StructuredInteger;

/// The base `q > 1` of a q-norm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct QParam(f64);

impl QParam {
    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && q > 1.0 {
            Ok(QParam(q))
        } else {
            Err(Error::domain(format!("q must be a finite real > 1, got {q}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `1/(q(q−1))`, the norm of ±1 and the diameter of `(ℤ, d_q)`.
    pub fn diameter(self) -> f64 {
        1.0 / (self.0 * (self.0 - 1.0))
    }

    /// `q^-k`; zero once the power underflows.
    pub fn inv_pow(self, k: u64) -> f64 {
        if k > i32::MAX as u64 {
            0.0
        } else {
            self.0.recip().powi(k as i32)
        }
    }
}

/// A norm value with a truncation bound.
///
/// Exact evaluations carry `tail_bound == 0`. Truncated evaluations of
/// symbolic integers omit divisor terms, so they over-estimate: the true norm
/// lies in `[value − tail_bound, value]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormValue {
    pub value: f64,
    pub tail_bound: f64,
}

impl NormValue {
    pub fn exact(value: f64) -> Self {
        NormValue { value, tail_bound: 0.0 }
    }
}

/// The arithmetic progression `offset + modulus·ℤ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Progression {
    pub offset: i64,
    pub modulus: u64,
}

impl Progression {
    pub fn new(offset: i64, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::domain("progression modulus must be >= 1"));
        }
        Ok(Progression { offset, modulus })
    }

    pub fn contains(&self, x: i64) -> bool {
        (x as i128 - self.offset as i128).rem_euclid(self.modulus as i128) == 0
    }

    /// A radius `r` with `B_q(a, r) ⊆ a + bℤ` for every member `a`.
    pub fn inner_radius(&self, q: QParam) -> Result<f64> {
        progression_radius(self.modulus, q)
    }

    /// The progression through `center` that fits inside `B_q(center, r)`.
    pub fn inside_ball(center: i64, r: f64, q: QParam) -> Result<Self> {
        Progression::new(center, ball_cover_modulus(r, q)?)
    }
}

/// Exact `‖n‖_q` over the finite divisor set of `n`.
pub fn qnorm(table: &PrimeTable, n: i64, q: QParam) -> Result<NormValue> {
    if n == 0 {
        return Ok(NormValue::exact(0.0));
    }
    Ok(NormValue::exact(q.diameter() - deficit(table, n, q)?))
}

/// `Σ_{k>=2, k|n} q^-k = 1/(q(q−1)) − ‖n‖_q` for `n != 0`.
///
/// Kept separate from [`qnorm`] because the difference from the diameter is
/// resolvable in binary64 long after `‖n‖_q` itself has rounded to it.
pub fn deficit(table: &PrimeTable, n: i64, q: QParam) -> Result<f64> {
    let divisors = table.divisors(n)?;
    // smallest terms first
    Ok(divisors.iter().rev().filter(|&&k| k >= 2).map(|&k| q.inv_pow(k)).sum())
}

/// Truncation index `K` with geometric tail `q^-K/(q−1) <= tol`.
pub fn truncation_index(q: QParam, tol: f64) -> Result<u64> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let q = q.value();
    let k = (1.0 / (tol * (q - 1.0))).ln() / q.ln();
    let mut k = k.ceil().max(1.0) as u64;
    // guard against rounding in the logarithms
    while q.powf(-(k as f64)) / (q - 1.0) > tol {
        k += 1;
    }
    Ok(k)
}

/// `‖x‖_q` for a symbolic integer, deciding `k | x` by predicate.
///
/// Plain values inside the prime table take the exact path; everything else
/// is truncated after `K = truncation_index(q, tol)` divisor candidates.
pub fn qnorm_structured(
    table: &PrimeTable,
    x: &StructuredInteger,
    q: QParam,
    tol: f64,
) -> Result<NormValue> {
    let k_max = truncation_index(q, tol)?;
    if let Some(v) = x.value() {
        if v.unsigned_abs() <= table.limit() {
            return qnorm(table, v, q);
        }
    }
    let test = x.divisibility()?;
    let inv = 1.0 / q.value();
    let mut pow = inv;
    let mut removed = Vec::new();
    for k in 2..=k_max {
        pow *= inv;
        if pow == 0.0 {
            break;
        }
        if test.divides(k) {
            removed.push(pow);
        }
    }
    let removed: f64 = removed.iter().rev().sum();
    Ok(NormValue {
        value: q.diameter() - removed,
        tail_bound: q.value().powf(-(k_max as f64)) / (q.value() - 1.0),
    })
}

/// `d_q(m, n) = ‖m − n‖_q`.
pub fn metric(table: &PrimeTable, m: i64, n: i64, q: QParam) -> Result<NormValue> {
    let diff = m
        .checked_sub(n)
        .ok_or_else(|| Error::capacity(format!("{m} − {n} overflows i64")))?;
    qnorm(table, diff, q)
}

/// Every `n <= cap` with `q^-n > ‖a‖_q`; each of them divides `a`.
///
/// Sound but not complete: a divisor of `a` is only reported when the norm
/// is small enough to force it.
pub fn forced_divisors(v: NormValue, q: QParam, cap: u64) -> Vec<u64> {
    if v.value == 0.0 && v.tail_bound == 0.0 {
        return (1..=cap).collect();
    }
    // keeps floating rounding in `v` from producing a false positive
    let threshold = v.value + v.tail_bound + 8.0 * f64::EPSILON * q.diameter();
    let inv = 1.0 / q.value();
    let mut pow = 1.0;
    let mut out = Vec::new();
    for n in 1..=cap {
        pow *= inv;
        if pow <= threshold {
            break;
        }
        out.push(n);
    }
    out
}

/// `q^-b`: the `d_q`-ball of this radius around `a` lies inside `a + bℤ`.
pub fn progression_radius(b: u64, q: QParam) -> Result<f64> {
    if b == 0 {
        return Err(Error::domain("progression modulus must be >= 1"));
    }
    let r = q.inv_pow(b);
    if r > 0.0 {
        Ok(r)
    } else {
        Err(Error::capacity(format!("q^-{b} underflows binary64")))
    }
}

/// `N!` for the least `N >= 1` with `q^-N/(q−1) < r`; then
/// `a + N!·ℤ ⊆ B_q(a, r)`.
pub fn ball_cover_modulus(r: f64, q: QParam) -> Result<u64> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("radius must be positive, got {r}")));
    }
    let q = q.value();
    let mut bound = 1.0 / (q - 1.0);
    let mut factorial = 1u64;
    for n in 1u64.. {
        bound /= q;
        factorial = factorial
            .checked_mul(n)
            .ok_or_else(|| Error::capacity(format!("{n}! overflows u64 (radius {r})")))?;
        if bound < r {
            return Ok(factorial);
        }
    }
    unreachable!()
}
