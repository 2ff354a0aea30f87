//! Dirichlet series of the q-norm and of `ξ`.
//!
//! Each generating function has a closed form in `ζ(s)` and `Li(s, 1/q)`
//! and a partial sum over a sieve table; the partial sums carry a rigorous
//! tail bound so the two can be compared.

use crate::aggregate::xi_table;
use crate::arith::{polylog, zeta, zeta_int_minus_one, Enclosure, PrimeTable, SeriesEval};
use crate::error::{Error, Result};
use crate::qnorm::{qnorm, QParam};
use crate::sieve::{sieve_divisor_weights, sieve_qnorms};

/// Last index of the rearranged inner sum of `Ξ(s)`; `ζ(n) − 1 < 2^-79` past it.
const XI_INNER_TERMS: u64 = 80;

fn require_s_above_one(s: f64) -> Result<()> {
    if s.is_finite() && s > 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("s must be a finite real > 1, got {s}")))
    }
}

fn require_terms(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::domain("partial sums need at least one term"))
    } else {
        Ok(())
    }
}

/// `Σ_{n<=N} a_n n^-s`, smallest terms first.
fn dirichlet_sum(coeffs: &[f64], s: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .rev()
        .map(|(i, a)| a * ((i + 1) as f64).powf(-s))
        .sum()
}

/// `Q_q(s) = Σ ‖n‖_q n^-s = ζ(s)(1/(q−1) − Li(s, 1/q))`.
pub fn q_closed(q: QParam, s: f64) -> Result<f64> {
    require_s_above_one(s)?;
    let li = polylog(s, 1.0 / q.value())?.value;
    Ok(zeta(s)?.value * (1.0 / (q.value() - 1.0) - li))
}

/// `Σ_{n<=N} ‖n‖_q n^-s`; the remainder lies in
/// `[0, N^{1−s}/((s−1) q(q−1))]`.
pub fn q_partial(q: QParam, s: f64, n: u64) -> Result<SeriesEval> {
    require_s_above_one(s)?;
    require_terms(n)?;
    let table = sieve_qnorms(q, n)?;
    Ok(SeriesEval {
        value: dirichlet_sum(table.values(), s),
        tail_bound: q.diameter() * (n as f64).powf(1.0 - s) / (s - 1.0),
        terms_used: n,
        enclosure: Enclosure::Lower,
    })
}

/// Dirichlet coefficients with `Σ γ_q(n) n^-s = 1/(q−1) − Li(s, 1/q)`:
/// `γ_q(1) = 1/(q−1) − 1/q` and `γ_q(n) = −q^-n` for `n > 1`.
pub fn gamma_q(n: u64, q: QParam) -> Result<f64> {
    match n {
        0 => Err(Error::domain("γ_q is indexed from 1")),
        1 => Ok(1.0 / (q.value() - 1.0) - 1.0 / q.value()),
        _ => Ok(-q.inv_pow(n)),
    }
}

/// `Σ_{i|n} μ(i) ‖n/i‖_q`, the Möbius inverse of the q-norm.
pub fn gamma_q_inversion(table: &PrimeTable, n: u64, q: QParam) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("γ_q is indexed from 1"));
    }
    let n_i = i64::try_from(n).map_err(|_| Error::capacity(format!("{n} exceeds i64")))?;
    let mut acc = 0.0;
    for i in table.divisors(n_i)? {
        let mu = table.moebius(i)?;
        if mu != 0 {
            acc += f64::from(mu) * qnorm(table, (n / i) as i64, q)?.value;
        }
    }
    Ok(acc)
}

/// `Σ_{n<=N} γ_q(n) n^-s` for `s >= 1`. The omitted terms are negative and
/// total at most `q^-N/((q−1) N^s)` in size.
pub fn gamma_series(q: QParam, s: f64, n: u64) -> Result<SeriesEval> {
    if !(s.is_finite() && s >= 1.0) {
        return Err(Error::domain(format!("s must be a finite real >= 1, got {s}")));
    }
    require_terms(n)?;
    let mut tail_sum = 0.0;
    for k in (2..=n).rev() {
        let p = q.inv_pow(k);
        if p != 0.0 {
            tail_sum += p * (k as f64).powf(-s);
        }
    }
    let qv = q.value();
    Ok(SeriesEval {
        value: gamma_q(1, q)? - tail_sum,
        tail_bound: q.inv_pow(n) / ((qv - 1.0) * (n as f64).powf(s)),
        terms_used: n,
        enclosure: Enclosure::Upper,
    })
}

/// `Ξ(s) = Σ ξ(n) n^-s = ζ(s)(1 − Σ_{n>=2} (ζ(n) − 1) n^-s)`.
pub fn xi_closed(s: f64) -> Result<f64> {
    require_s_above_one(s)?;
    let inner: f64 = (2..=XI_INNER_TERMS)
        .rev()
        .map(|n| zeta_int_minus_one(n) * (n as f64).powf(-s))
        .sum();
    Ok(zeta(s)?.value * (1.0 - inner))
}

/// `Σ_{n<=N} ξ(n) n^-s`; since `0 <= ξ <= 1` the remainder lies in
/// `[0, N^{1−s}/(s−1)]`.
pub fn xi_partial(s: f64, n: u64) -> Result<SeriesEval> {
    require_s_above_one(s)?;
    require_terms(n)?;
    let xs = xi_table(n)?;
    Ok(SeriesEval {
        value: dirichlet_sum(&xs, s),
        tail_bound: (n as f64).powf(1.0 - s) / (s - 1.0),
        terms_used: n,
        enclosure: Enclosure::Lower,
    })
}

/// Checks `ζ(s)² = Σ d(n) n^-s` against the partial sum to `N`, whose
/// remainder is at most `N^{2−s}/(s−2)` because `d(n) <= n`.
///
/// `None` when `s <= 2`, where that bound is unavailable.
pub fn dirichlet_square_check(n: u64, s: f64) -> Result<Option<bool>> {
    require_s_above_one(s)?;
    require_terms(n)?;
    if s <= 2.0 {
        return Ok(None);
    }
    let d = sieve_divisor_weights(|_| -1.0, 1.0, n)?;
    let partial = dirichlet_sum(&d, s);
    let tail = (n as f64).powf(2.0 - s) / (s - 2.0);
    let z = zeta(s)?;
    let target = z.value * z.value;
    let slack = 4.0 * z.value * z.tail_bound + 1e-12;
    let gap = target - partial;
    Ok(Some(gap >= -slack && gap <= tail + slack))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::means::mean_limit;
    use std::f64::consts::LN_2;

    fn q(v: f64) -> QParam {
        QParam::new(v).unwrap()
    }

    #[test]
    fn q_closed_examples() {
        let z2 = std::f64::consts::PI.powi(2) / 6.0;
        let li = polylog(2.0, 0.5).unwrap().value;
        let v = q_closed(q(2.0), 2.0).unwrap();
        assert!((v - z2 * (1.0 - li)).abs() < 1e-12);
        assert!((v - 0.68718679).abs() < 1e-8);
        assert!((q_closed(q(2.0), 20.0).unwrap() - 0.5).abs() < 1e-6);
        let li3 = polylog(2.0, 1.0 / 3.0).unwrap().value;
        assert!((q_closed(q(3.0), 2.0).unwrap() - z2 * (0.5 - li3)).abs() < 1e-12);
        assert!(q_closed(q(2.0), 1.0).is_err());
    }

    #[test]
    fn q_partial_agrees() {
        assert_eq!(q_partial(q(2.0), 2.0, 1).unwrap().value, 0.5);
        for qv in [2.0, 3.0] {
            for s in [1.5, 2.0, 3.0] {
                let p = q_partial(q(qv), s, 100_000).unwrap();
                let c = q_closed(q(qv), s).unwrap();
                assert!(p.contains(c, 1e-10), "q={qv} s={s}: {p:?} vs {c}");
            }
        }
        assert!((q_partial(q(2.0), 2.0, 100_000).unwrap().value - q_closed(q(2.0), 2.0).unwrap()).abs() < 1e-5);
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_q(1, q(2.0)).unwrap(), 0.5);
        assert_eq!(gamma_q(3, q(2.0)).unwrap(), -0.125);
        assert_eq!(gamma_q(12, q(2.0)).unwrap(), -(2f64.powi(-12)));
        assert!(gamma_q(0, q(2.0)).is_err());
        let t = PrimeTable::new(1_000).unwrap();
        for qv in [2.0, 3.0] {
            for n in 1..=1_000 {
                let a = gamma_q(n, q(qv)).unwrap();
                let b = gamma_q_inversion(&t, n, q(qv)).unwrap();
                assert!((a - b).abs() < 1e-12, "q={qv} n={n}");
            }
        }
    }

    #[test]
    fn gamma_series_examples() {
        for qv in [2.0, 3.0, 5.0] {
            let g = gamma_series(q(qv), 1.0, 100).unwrap();
            assert!((g.value - mean_limit(q(qv))).abs() < 1e-12, "q={qv}");
            assert_eq!(gamma_series(q(qv), 2.5, 1).unwrap().value, 1.0 / (qv - 1.0) - 1.0 / qv);
        }
        assert!((gamma_series(q(2.0), 1.0, 100).unwrap().value - (1.0 - LN_2)).abs() < 1e-12);
        let g = gamma_series(q(2.0), 2.0, 100).unwrap();
        assert!((g.value - (1.0 - polylog(2.0, 0.5).unwrap().value)).abs() < 1e-12);
        let g = gamma_series(q(2.0), 2.0, 10).unwrap();
        assert!(g.contains(1.0 - polylog(2.0, 0.5).unwrap().value, 1e-15));
        assert!(gamma_series(q(2.0), 0.5, 10).is_err());
    }

    #[test]
    fn xi_series() {
        assert_eq!(xi_partial(2.0, 1).unwrap().value, 1.0);
        for (s, n) in [(2.0, 100_000), (3.0, 10_000)] {
            let p = xi_partial(s, n).unwrap();
            let c = xi_closed(s).unwrap();
            assert!(p.contains(c, 1e-12), "s={s}: {p:?} vs {c}");
        }
        assert!((xi_closed(20.0).unwrap() - 1.0).abs() < 1e-5);
    }

    #[test]
    fn divisor_square() {
        assert_eq!(dirichlet_square_check(100_000, 3.0).unwrap(), Some(true));
        assert_eq!(dirichlet_square_check(100_000, 4.0).unwrap(), Some(true));
        assert_eq!(dirichlet_square_check(10, 3.0).unwrap(), Some(true));
        assert_eq!(dirichlet_square_check(10, 1.5).unwrap(), None);
    }
}
