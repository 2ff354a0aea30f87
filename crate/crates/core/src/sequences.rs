//! Symbolic integers and finite-window convergence certificates.
//!
//! Terms like `25!`, `p_11#` or `lcm(1..40)` are never materialised. Every
//! question asked about them is a divisibility question `k | x` for a small
//! `k`, answered from prime valuations or modular products.
//!
//! Convergence in the q-norm (or in the Fürstenberg topology) quantifies over
//! all indices, so a finite window can only ever *certify* a stable suffix.
//! Reports therefore carry per-key certificates and fall back to
//! [`Verdict::Undecided`] whenever the window is silent.

use crate::arith::{
    divides_factorial, divides_lcm, first_primes, is_prime, mul_mod, primes_up_to,
    Factorization, PrimeTable,
};
use crate::error::{Error, Result};
use crate::qnorm::{qnorm, qnorm_structured, NormValue, QParam};

/// An integer given literally or by a closed-form recipe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructuredInteger {
    Plain(i64),
    /// `n!`
    Factorial(u64),
    /// `p_1 · p_2 ⋯ p_n`
    Primorial(u64),
    /// `lcm(1, …, n)`
    Lcm(u64),
    /// the `n`-th prime `p_n`
    PrimeIndex(u64),
    /// `p_n · p_{n+1} ⋯ p_{2n}`
    PrimeBlock(u64),
    Shifted { base: Box<StructuredInteger>, offset: i64 },
}

impl StructuredInteger {
    /// `self + offset`, folded into a literal when it fits in `i64`.
    pub fn shifted(&self, offset: i64) -> StructuredInteger {
        if let Some(v) = self.value().and_then(|v| v.checked_add(offset)) {
            return StructuredInteger::Plain(v);
        }
        match self {
            StructuredInteger::Shifted { base, offset: inner } => match inner.checked_add(offset) {
                Some(total) => StructuredInteger::Shifted { base: base.clone(), offset: total },
                None => StructuredInteger::Shifted { base: Box::new(self.clone()), offset },
            },
            _ => StructuredInteger::Shifted { base: Box::new(self.clone()), offset },
        }
    }

    /// The represented value if it fits in `i64`.
    pub fn value(&self) -> Option<i64> {
        use StructuredInteger::*;
        let product = |xs: &[u64]| {
            xs.iter()
                .try_fold(1i64, |acc, &p| acc.checked_mul(i64::try_from(p).ok()?))
        };
        match self {
            Plain(v) => Some(*v),
            Factorial(n) => (1..=*n).try_fold(1i64, |acc, i| acc.checked_mul(i as i64)),
            Primorial(n) => {
                if *n > 20 {
                    return None;
                }
                product(&first_primes(*n).ok()?)
            }
            Lcm(n) => {
                if *n > 50 {
                    return None;
                }
                lcm_prime_powers(*n)
                    .iter()
                    .try_fold(1i64, |acc, &pe| acc.checked_mul(pe as i64))
            }
            PrimeIndex(n) => {
                if *n == 0 || *n > 10_000_000 {
                    return None;
                }
                first_primes(*n).ok()?.last().map(|&p| p as i64)
            }
            PrimeBlock(n) => {
                if *n == 0 || *n > 10 {
                    return None;
                }
                product(&first_primes(2 * n).ok()?[*n as usize - 1..])
            }
            Shifted { base, offset } => base.value()?.checked_add(*offset),
        }
    }

    /// Resolves the prime data once so repeated `k | x` queries are cheap.
    pub fn divisibility(&self) -> Result<Divisibility> {
        use StructuredInteger::*;
        let resolved = match self {
            Plain(v) => Resolved::Plain(*v),
            Factorial(n) => Resolved::Factorial(*n),
            Primorial(n) => Resolved::SquarefreeOver(first_primes(*n)?),
            Lcm(n) => Resolved::Lcm { n: *n, prime_powers: lcm_prime_powers(*n) },
            PrimeIndex(n) => {
                if *n == 0 {
                    return Err(Error::domain("primes are indexed from 1"));
                }
                Resolved::Prime(*first_primes(*n)?.last().expect("n >= 1"))
            }
            PrimeBlock(n) => {
                if *n == 0 {
                    return Err(Error::domain("prime blocks are indexed from 1"));
                }
                let mut primes = first_primes(2 * n)?;
                primes.drain(..*n as usize - 1);
                Resolved::SquarefreeOver(primes)
            }
            Shifted { base, offset } => {
                Resolved::Shifted { base: Box::new(base.divisibility()?.0), offset: *offset }
            }
        };
        Ok(Divisibility(resolved))
    }
}

fn lcm_prime_powers(n: u64) -> Vec<u64> {
    primes_up_to(n)
        .into_iter()
        .map(|p| {
            let mut pe = p;
            while pe <= n / p {
                pe *= p;
            }
            pe
        })
        .collect()
}

#[derive(Debug, Clone)]
enum Resolved {
    Plain(i64),
    Factorial(u64),
    /// products of distinct primes from an ascending list
    SquarefreeOver(Vec<u64>),
    Lcm { n: u64, prime_powers: Vec<u64> },
    Prime(u64),
    Shifted { base: Box<Resolved>, offset: i64 },
}

impl Resolved {
    fn divides(&self, k: u64) -> bool {
        if k == 0 {
            return false;
        }
        match self {
            Resolved::Plain(v) => (*v as i128) % (k as i128) == 0,
            Resolved::Factorial(n) => divides_factorial(k, *n),
            Resolved::SquarefreeOver(primes) => {
                let f = Factorization::trial_division(k).expect("k >= 1");
                f.is_squarefree() && f.factors().iter().all(|(p, _)| primes.binary_search(p).is_ok())
            }
            Resolved::Lcm { n, .. } => divides_lcm(k, *n),
            Resolved::Prime(p) => k == 1 || k == *p,
            Resolved::Shifted { .. } => self.residue(k) == 0,
        }
    }

    fn residue(&self, k: u64) -> u64 {
        match self {
            Resolved::Plain(v) => (*v as i128).rem_euclid(k as i128) as u64,
            Resolved::Factorial(n) => {
                if *n >= k {
                    0
                } else {
                    (1..=*n).fold(1 % k, |acc, i| mul_mod(acc, i, k))
                }
            }
            Resolved::SquarefreeOver(primes) => primes.iter().fold(1 % k, |acc, &p| mul_mod(acc, p, k)),
            Resolved::Lcm { prime_powers, .. } => {
                prime_powers.iter().fold(1 % k, |acc, &pe| mul_mod(acc, pe, k))
            }
            Resolved::Prime(p) => p % k,
            Resolved::Shifted { base, offset } => {
                let off = (*offset as i128).rem_euclid(k as i128) as u64;
                ((base.residue(k) as u128 + off as u128) % k as u128) as u64
            }
        }
    }
}

/// Answers `k | x` for a resolved [`StructuredInteger`].
#[derive(Debug, Clone)]
pub struct Divisibility(Resolved);

impl Divisibility {
    pub fn divides(&self, k: u64) -> bool {
        self.0.divides(k)
    }

    /// `x mod k` in `0..k`.
    pub fn residue(&self, k: u64) -> u64 {
        assert!(k >= 1, "residue modulo 0");
        self.0.residue(k)
    }
}

/// Named integer sequences, indexed from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Primes,
    Factorial,
    Primorial,
    Lcm,
    /// `a_n = p_n ⋯ p_{2n}`, a prime-factor-increasing family
    PrimeBlock,
}

impl Family {
    pub fn term(self, n: u64) -> Result<StructuredInteger> {
        family_term(self, n)
    }

    /// Terms `1..=count`.
    pub fn window(self, count: u64) -> Result<Vec<StructuredInteger>> {
        (1..=count).map(|n| family_term(self, n)).collect()
    }
}

pub fn family_term(family: Family, n: u64) -> Result<StructuredInteger> {
    if n == 0 {
        return Err(Error::domain("sequence terms are indexed from 1"));
    }
    Ok(match family {
        Family::Primes => StructuredInteger::PrimeIndex(n),
        Family::Factorial => StructuredInteger::Factorial(n),
        Family::Primorial => StructuredInteger::Primorial(n),
        Family::Lcm => StructuredInteger::Lcm(n),
        Family::PrimeBlock => StructuredInteger::PrimeBlock(n),
    })
}

/// `‖a_1‖_q, …, ‖a_count‖_q` with truncation below `tol`.
pub fn norm_trace(
    table: &PrimeTable,
    family: Family,
    q: QParam,
    count: u64,
    tol: f64,
) -> Result<Vec<NormValue>> {
    family
        .window(count)?
        .iter()
        .map(|x| qnorm_structured(table, x, q, tol))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    ConvergesToZero,
    PrimeFactorIncreasing,
    Undecided,
}

/// A key (prime or modulus) and the first 1-based window index from which
/// the key's property holds for every remaining term; `None` if the last
/// term already violates it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Certificate {
    pub key: u64,
    pub first_good_index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub window_length: usize,
    pub certificates: Vec<Certificate>,
    pub verdict: Verdict,
}

impl ConvergenceReport {
    fn from_certificates(window_length: usize, certificates: Vec<Certificate>, success: Verdict) -> Self {
        let verdict = if certificates.iter().all(|c| c.first_good_index.is_some()) {
            success
        } else {
            Verdict::Undecided
        };
        ConvergenceReport { window_length, certificates, verdict }
    }

    pub fn certificate(&self, key: u64) -> Option<&Certificate> {
        self.certificates.iter().find(|c| c.key == key)
    }

    /// The index from which every certified property holds simultaneously.
    pub fn stable_from(&self) -> Option<usize> {
        self.certificates
            .iter()
            .try_fold(1, |acc, c| c.first_good_index.map(|i| acc.max(i)))
    }
}

fn resolve_window(window: &[StructuredInteger]) -> Result<Vec<Divisibility>> {
    if window.is_empty() {
        return Err(Error::domain("empty sequence window"));
    }
    window.iter().map(StructuredInteger::divisibility).collect()
}

/// First index after the last term failing `holds`, or `None` if the last
/// term fails.
fn suffix_start(terms: &[Divisibility], holds: impl Fn(&Divisibility) -> bool) -> Option<usize> {
    match terms.iter().rposition(|t| !holds(t)) {
        None => Some(1),
        Some(i) if i + 1 == terms.len() => None,
        Some(i) => Some(i + 2),
    }
}

/// For each prime `p <= prime_bound`, the index `N(p)` after which `p`
/// divides no term of the window.
pub fn prime_factor_increasing_report(
    window: &[StructuredInteger],
    prime_bound: u64,
) -> Result<ConvergenceReport> {
    let terms = resolve_window(window)?;
    let certificates = primes_up_to(prime_bound)
        .into_iter()
        .map(|p| Certificate { key: p, first_good_index: suffix_start(&terms, |t| !t.divides(p)) })
        .collect();
    Ok(ConvergenceReport::from_certificates(terms.len(), certificates, Verdict::PrimeFactorIncreasing))
}

/// For each `k <= k_bound`, the index `ν(k)` after which `k` divides every
/// term of the window.
pub fn divisibility_convergence_report(
    window: &[StructuredInteger],
    k_bound: u64,
) -> Result<ConvergenceReport> {
    let terms = resolve_window(window)?;
    let certificates = (1..=k_bound)
        .map(|k| Certificate { key: k, first_good_index: suffix_start(&terms, |t| t.divides(k)) })
        .collect();
    Ok(ConvergenceReport::from_certificates(terms.len(), certificates, Verdict::ConvergesToZero))
}

/// `N(p, e)`: the index after which `p^e` divides every term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimePowerCertificate {
    pub prime: u64,
    pub exponent: u32,
    pub first_good_index: Option<usize>,
}

/// Certificates for every prime power `p^e <= bound`.
pub fn prime_power_certificates(
    window: &[StructuredInteger],
    bound: u64,
) -> Result<Vec<PrimePowerCertificate>> {
    let terms = resolve_window(window)?;
    let mut out = Vec::new();
    for p in primes_up_to(bound) {
        let mut pe = p;
        let mut e = 1;
        loop {
            out.push(PrimePowerCertificate {
                prime: p,
                exponent: e,
                first_good_index: suffix_start(&terms, |t| t.divides(pe)),
            });
            match pe.checked_mul(p) {
                Some(next) if next <= bound => {
                    pe = next;
                    e += 1;
                }
                _ => break,
            }
        }
    }
    Ok(out)
}

/// `ν(k) = max_i N(p_i, e_i)` over the prime-power parts of `k`.
pub fn nu_from_prime_powers(k: u64, certificates: &[PrimePowerCertificate]) -> Result<Option<usize>> {
    let f = Factorization::trial_division(k)?;
    let mut nu = 1;
    for &(p, e) in f.factors() {
        let cert = certificates
            .iter()
            .find(|c| c.prime == p && c.exponent == e)
            .ok_or_else(|| Error::domain(format!("no certificate for {p}^{e}")))?;
        match cert.first_good_index {
            Some(i) => nu = nu.max(i),
            None => return Ok(None),
        }
    }
    Ok(Some(nu))
}

/// Norm traces of `a_n` and `a_n + 1` for a window converging to 0.
#[derive(Debug, Clone)]
pub struct ShiftTraces {
    pub report: ConvergenceReport,
    pub base: Vec<NormValue>,
    pub shifted: Vec<NormValue>,
}

/// Certifies `a_n → 0` on the window (all `k <= k_bound`), then evaluates
/// `‖a_n‖_q` and `‖a_n + 1‖_q`; the latter should approach the diameter.
pub fn furstenberg_shift_check(
    table: &PrimeTable,
    window: &[StructuredInteger],
    k_bound: u64,
    q: QParam,
    tol: f64,
) -> Result<ShiftTraces> {
    let report = divisibility_convergence_report(window, k_bound)?;
    if report.verdict != Verdict::ConvergesToZero {
        return Err(Error::domain(format!(
            "window is not certified to converge to 0 for k <= {k_bound}"
        )));
    }
    let base = window
        .iter()
        .map(|x| qnorm_structured(table, x, q, tol))
        .collect::<Result<Vec<_>>>()?;
    let shifted = window
        .iter()
        .map(|x| qnorm_structured(table, &x.shifted(1), q, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(ShiftTraces { report, base, shifted })
}

/// Smallest prime `p <= search_bound` with `p ≡ a (mod b)`.
pub fn find_prime_in_progression(a: i64, b: u64, search_bound: u64) -> Result<Option<u64>> {
    if b == 0 {
        return Err(Error::domain("progression modulus must be >= 1"));
    }
    let mut x = (a as i128).rem_euclid(b as i128) as u64;
    while x <= search_bound {
        if is_prime(x) {
            return Ok(Some(x));
        }
        x = match x.checked_add(b) {
            Some(next) => next,
            None => break,
        };
    }
    Ok(None)
}

/// Whether every prime `p <= prime_bound` with `p ≡ 3 (mod 4)` has
/// `‖p − 1‖_q >= q^-4` (since `4 ∤ p − 1`).
pub fn mod4_obstruction_check(table: &PrimeTable, prime_bound: u64, q: QParam) -> Result<bool> {
    let floor = q.inv_pow(4);
    for p in primes_up_to(prime_bound).into_iter().filter(|p| p % 4 == 3) {
        if qnorm(table, p as i64 - 1, q)?.value < floor {
            return Ok(false);
        }
    }
    Ok(true)
}
