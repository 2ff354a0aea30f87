//! Number-theoretic primitives shared by every other module.
//!
//! Divisor enumeration runs off a smallest-prime-factor table that is built
//! once and then only read. Everything that has to work for integers far
//! beyond the table (the divisibility predicates for `n!`, primorials and lcm
//! towers) factors the *divisor candidate* `k` instead, which stays small.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Default tolerance for `ζ(s)` and `Li(s, z)`.
pub const DEFAULT_SERIES_TOL: f64 = 1e-13;

/// Largest integer argument for which `ζ(k) − 1` is tabulated.
pub const ZETA_INT_CACHE_MAX: u64 = 64;

/// Smallest-prime-factor table for `2..=limit`.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    spf: Vec<u32>,
}

impl PrimeTable {
    /// Builds the table with a linear sieve.
    pub fn new(limit: u64) -> Result<Self> {
        if limit == 0 {
            return Err(Error::domain("prime table limit must be positive"));
        }
        if limit >= u32::MAX as u64 {
            return Err(Error::capacity(format!(
                "prime table limit {limit} exceeds {}",
                u32::MAX - 1
            )));
        }
        let len = limit as usize + 1;
        let mut spf: Vec<u32> = Vec::new();
        spf.try_reserve_exact(len)
            .map_err(|_| Error::capacity(format!("cannot allocate prime table of {len} cells")))?;
        spf.resize(len, 0);
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..len {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                if p > si {
                    break;
                }
                let m = i * p as usize;
                if m >= len {
                    break;
                }
                spf[m] = p;
            }
        }
        Ok(PrimeTable { limit, spf })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of `n` for `2 <= n <= limit`.
    pub fn smallest_prime_factor(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit {
            None
        } else {
            Some(self.spf[n as usize] as u64)
        }
    }

    pub fn is_prime(&self, n: u64) -> Option<bool> {
        if n > self.limit {
            return None;
        }
        Some(n >= 2 && self.spf[n as usize] as u64 == n)
    }

    fn check(&self, n: i64) -> Result<u64> {
        if n == 0 {
            return Err(Error::domain("every k divides 0; divisor set of 0 is infinite"));
        }
        let a = n.unsigned_abs();
        if a > self.limit {
            return Err(Error::capacity(format!(
                "|{n}| exceeds prime table limit {}",
                self.limit
            )));
        }
        Ok(a)
    }

    /// Prime factorization of `|n|`.
    pub fn factorize(&self, n: i64) -> Result<Factorization> {
        let mut m = self.check(n)?;
        let mut factors: Vec<(u64, u32)> = Vec::new();
        while m > 1 {
            let p = self.spf[m as usize] as u64;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        Ok(Factorization { factors })
    }

    /// Positive divisors of `|n|` in ascending order.
    pub fn divisors(&self, n: i64) -> Result<Vec<u64>> {
        self.factorize(n)?.divisors()
    }

    pub fn divisor_count(&self, n: i64) -> Result<u64> {
        self.factorize(n)?.divisor_count()
    }

    /// Möbius function `μ(n)` for `n >= 1`.
    pub fn moebius(&self, n: u64) -> Result<i8> {
        if n == 0 {
            return Err(Error::domain("μ(0) is undefined"));
        }
        let n = i64::try_from(n).map_err(|_| Error::capacity("argument exceeds i64"))?;
        Ok(self.factorize(n)?.moebius())
    }
}

/// Prime factorization as `(p, e)` pairs with `p` strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Factors `n >= 1` by trial division. Intended for divisor candidates,
    /// not for large composites.
    pub fn trial_division(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("cannot factor 0"));
        }
        let mut m = n;
        let mut factors = Vec::new();
        let mut push = |m: &mut u64, p: u64| {
            let mut e = 0;
            while *m % p == 0 {
                *m /= p;
                e += 1;
            }
            if e > 0 {
                factors.push((p, e));
            }
        };
        push(&mut m, 2);
        push(&mut m, 3);
        let mut p = 5u64;
        while p.saturating_mul(p) <= m {
            push(&mut m, p);
            push(&mut m, p + 2);
            p += 6;
        }
        if m > 1 {
            factors.push((m, 1));
        }
        Ok(Factorization { factors })
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// The represented integer, `None` on overflow.
    pub fn value(&self) -> Option<u64> {
        self.factors
            .iter()
            .try_fold(1u64, |acc, &(p, e)| acc.checked_mul(p.checked_pow(e)?))
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn largest_prime(&self) -> Option<u64> {
        self.factors.last().map(|&(p, _)| p)
    }

    pub fn moebius(&self) -> i8 {
        if !self.is_squarefree() {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn divisor_count(&self) -> Result<u64> {
        self.factors.iter().try_fold(1u64, |acc, &(_, e)| {
            acc.checked_mul(e as u64 + 1)
                .ok_or_else(|| Error::capacity("divisor count overflows u64"))
        })
    }

    pub fn divisors(&self) -> Result<Vec<u64>> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let current = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk = pk
                    .checked_mul(p)
                    .ok_or_else(|| Error::capacity("divisor overflows u64"))?;
                for i in 0..current {
                    let d = divs[i]
                        .checked_mul(pk)
                        .ok_or_else(|| Error::capacity("divisor overflows u64"))?;
                    divs.push(d);
                }
            }
        }
        divs.sort_unstable();
        Ok(divs)
    }
}

/// Which side of the true value a [`SeriesEval`] sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Enclosure {
    /// `value <= true <= value + tail_bound` (partial sums of nonnegative terms).
    Lower,
    /// `value - tail_bound <= true <= value`.
    Upper,
    /// `|true - value| <= tail_bound`.
    Symmetric,
}

/// A truncated series together with a bound on what was left out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEval {
    pub value: f64,
    pub tail_bound: f64,
    pub terms_used: u64,
    pub enclosure: Enclosure,
}

impl SeriesEval {
    pub fn lower(&self) -> f64 {
        match self.enclosure {
            Enclosure::Lower => self.value,
            Enclosure::Upper | Enclosure::Symmetric => self.value - self.tail_bound,
        }
    }

    pub fn upper(&self) -> f64 {
        match self.enclosure {
            Enclosure::Upper => self.value,
            Enclosure::Lower | Enclosure::Symmetric => self.value + self.tail_bound,
        }
    }

    /// Whether `x` lies in the enclosure widened by `slack`.
    pub fn contains(&self, x: f64, slack: f64) -> bool {
        x >= self.lower() - slack && x <= self.upper() + slack
    }
}

// B_2, B_4, ..., B_32
const BERNOULLI_EVEN: [f64; 16] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
];

/// `Σ_{n >= start} n^-s` by Euler–Maclaurin summation.
///
/// `x^-s` is completely monotone for real `s > 0`, so the remainder after the
/// last correction is bounded by the first omitted correction term.
fn euler_maclaurin_tail(s: f64, start: f64, tol: f64) -> Option<(f64, f64, u64)> {
    let mut sum = start.powf(1.0 - s) / (s - 1.0) + 0.5 * start.powf(-s);
    // (s)_{2k-1} / (2k)! * start^{-s-2k+1}, built up incrementally.
    let mut factor = s / 2.0 * start.powf(-s - 1.0);
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = b * factor;
        let next_factor = {
            let two_k = 2.0 * (k as f64 + 1.0);
            factor * (s + two_k - 1.0) * (s + two_k) / ((two_k + 1.0) * (two_k + 2.0))
                / (start * start)
        };
        if k + 1 < BERNOULLI_EVEN.len() {
            let omitted = (BERNOULLI_EVEN[k + 1] * next_factor).abs();
            sum += term;
            if omitted < tol {
                return Some((sum, omitted, k as u64 + 1));
            }
        }
        factor = next_factor;
    }
    None
}

fn zeta_core(s: f64, tol: f64, skip_one: bool) -> Result<SeriesEval> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::domain(format!("ζ(s) requires real s > 1, got {s}")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    // the truncation error is pushed well below binary64 resolution so the
    // reported bound is dominated by rounding, not by the series
    let mut em_tol = (tol / 2.0).min(1e-18);
    if skip_one {
        // ζ(s) − 1 > 2^-s, so this keeps the relative error near one ulp
        em_tol = em_tol.min(1e-4 * f64::EPSILON * 2f64.powf(-s));
    }
    let mut start = s.ceil().max(10.0);
    loop {
        if let Some((tail, bound, corrections)) = euler_maclaurin_tail(s, start, em_tol) {
            let first = if skip_one { 2u64 } else { 1 };
            let head: f64 = (first..start as u64).rev().map(|n| (n as f64).powf(-s)).sum();
            let value = head + tail;
            let rounding = 4.0 * f64::EPSILON * value * (start.log2() + 1.0);
            return Ok(SeriesEval {
                value,
                tail_bound: bound + rounding,
                terms_used: start as u64 - first + corrections,
                enclosure: Enclosure::Symmetric,
            });
        }
        start *= 2.0;
        if start > 1e7 {
            return Err(Error::Internal(format!(
                "Euler–Maclaurin failed to reach tolerance {tol} at s = {s}"
            )));
        }
    }
}

/// Riemann zeta at real `s > 1` with the default tolerance.
pub fn zeta(s: f64) -> Result<SeriesEval> {
    zeta_core(s, DEFAULT_SERIES_TOL, false)
}

pub fn zeta_with_tol(s: f64, tol: f64) -> Result<SeriesEval> {
    zeta_core(s, tol, false)
}

/// `ζ(s) − 1`, evaluated without the cancellation of subtracting 1.
pub fn zeta_minus_one(s: f64) -> Result<SeriesEval> {
    zeta_core(s, 1e-18, true)
}

fn zeta_int_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (2..=ZETA_INT_CACHE_MAX)
            .map(|k| {
                zeta_minus_one(k as f64)
                    .expect("integer zeta arguments are in domain")
                    .value
            })
            .collect()
    })
}

/// `ζ(k) − 1` for integer `k >= 2`, tabulated up to [`ZETA_INT_CACHE_MAX`].
///
/// Beyond the table `ζ(k) − 1 = 2^-k + 3^-k + O(4^-k)`, and `4^-k` is far
/// below the resolution of `2^-k` in binary64.
pub fn zeta_int_minus_one(k: u64) -> f64 {
    assert!(k >= 2, "ζ(k) − 1 requires k >= 2");
    if k <= ZETA_INT_CACHE_MAX {
        zeta_int_table()[(k - 2) as usize]
    } else {
        let k = k.min(i32::MAX as u64) as i32;
        0.5f64.powi(k) + (1.0f64 / 3.0).powi(k)
    }
}

/// Polylogarithm `Li(s, z) = Σ z^n / n^s` for `s >= 1`, `|z| < 1`.
pub fn polylog(s: f64, z: f64) -> Result<SeriesEval> {
    polylog_with_tol(s, z, DEFAULT_SERIES_TOL)
}

pub fn polylog_with_tol(s: f64, z: f64, tol: f64) -> Result<SeriesEval> {
    if !(s >= 1.0) || !s.is_finite() {
        return Err(Error::domain(format!("Li(s, z) requires s >= 1, got {s}")));
    }
    if !(z.abs() < 1.0) {
        return Err(Error::domain(format!("Li(s, z) requires |z| < 1, got {z}")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let enclosure = if z >= 0.0 { Enclosure::Lower } else { Enclosure::Symmetric };
    if z == 0.0 {
        return Ok(SeriesEval { value: 0.0, tail_bound: 0.0, terms_used: 0, enclosure });
    }
    const MAX_TERMS: u64 = 100_000_000;
    let a = z.abs();
    let mut zn = 1.0;
    let mut terms = Vec::new();
    let mut n = 0u64;
    let bound = loop {
        n += 1;
        zn *= z;
        terms.push(zn / (n as f64).powf(s));
        let next = (n + 1) as f64;
        let bound = a.powf(next) / ((1.0 - a) * next.powf(s));
        if bound <= tol || n >= MAX_TERMS {
            break bound;
        }
    };
    // smallest terms first
    let value: f64 = terms.iter().rev().sum();
    Ok(SeriesEval {
        value,
        tail_bound: bound + 2.0 * f64::EPSILON * value.abs(),
        terms_used: n,
        enclosure,
    })
}

/// Exponent of `p` in `n!` (Legendre).
pub fn factorial_valuation(n: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut m = n;
    while m >= p {
        m /= p;
        total += m;
    }
    total
}

/// Whether `k | n!`.
pub fn divides_factorial(k: u64, n: u64) -> bool {
    if k == 0 {
        return false;
    }
    if k == 1 || k <= n {
        return true;
    }
    let f = Factorization::trial_division(k).expect("k >= 1");
    f.factors()
        .iter()
        .all(|&(p, e)| p <= n && factorial_valuation(n, p) >= e as u64)
}

/// Whether `k` divides the product of the first `n` primes.
pub fn divides_primorial(k: u64, n: u64) -> bool {
    if k == 0 {
        return false;
    }
    let f = Factorization::trial_division(k).expect("k >= 1");
    if !f.is_squarefree() {
        return false;
    }
    match f.largest_prime() {
        None => true,
        // p_n > n, so every prime up to n is among the first n primes.
        Some(p) if p <= n => true,
        Some(p) => prime_pi(p) <= n,
    }
}

/// Whether `k | lcm(1, …, n)`.
pub fn divides_lcm(k: u64, n: u64) -> bool {
    if k == 0 {
        return false;
    }
    let f = Factorization::trial_division(k).expect("k >= 1");
    f.factors()
        .iter()
        .all(|&(p, e)| p.checked_pow(e).is_some_and(|pe| pe <= n))
}

/// All primes `<= limit` (sieve of Eratosthenes).
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let len = limit as usize + 1;
    let mut composite = vec![false; len];
    let mut i = 2usize;
    while i * i < len {
        if !composite[i] {
            let mut j = i * i;
            while j < len {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    (2..len).filter(|&i| !composite[i]).map(|i| i as u64).collect()
}

/// Number of primes `<= x`.
pub fn prime_pi(x: u64) -> u64 {
    primes_up_to(x).len() as u64
}

fn nth_prime_upper_bound(n: u64) -> u64 {
    if n < 6 {
        return 15;
    }
    let x = n as f64;
    (x * (x.ln() + x.ln().ln())).ceil() as u64 + 1
}

/// The first `n` primes.
pub fn first_primes(n: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let bound = nth_prime_upper_bound(n);
    if bound > 4_000_000_000 {
        return Err(Error::capacity(format!("prime index {n} too large to sieve")));
    }
    let mut primes = primes_up_to(bound);
    primes.truncate(n as usize);
    Ok(primes)
}

/// The `n`-th prime, 1-indexed (`nth_prime(1) == 2`).
pub fn nth_prime(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::domain("primes are indexed from 1"));
    }
    first_primes(n)?
        .last()
        .copied()
        .ok_or_else(|| Error::Internal("prime bound too small".into()))
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut result = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    result
}

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
