//! Norms aggregated over the base `q`.
//!
//! Summing `‖n‖_q` over integer `q >= 2` gives the sum-norm
//! `ξ(n) = d(n) − Σ_{k>=2, k|n} ζ(k)`; integrating over real `q >= 2` gives
//! `I(n) = ln 2 − Σ_{k>=2, k|n} 2/((k−1)2^k)`. Both are norms whose metrics
//! are equivalent to `d_2`, so they induce the same topology.

use std::f64::consts::LN_2;

use crate::arith::{zeta, zeta_int_minus_one, PrimeTable};
use crate::error::{Error, Result};
use crate::qnorm::QParam;
use crate::sieve::sieve_divisor_weights;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggregateKind {
    Xi,
    Integral,
}

/// `ξ(n)` or `I(n)` with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateNorm {
    pub kind: AggregateKind,
    pub value: f64,
    pub tail_bound: f64,
}

impl AggregateNorm {
    fn zero(kind: AggregateKind) -> Self {
        AggregateNorm { kind, value: 0.0, tail_bound: 0.0 }
    }
}

/// Proper divisors `k >= 2` of `n`, largest first so small terms add first.
fn divisors_desc(table: &PrimeTable, n: i64) -> Result<Vec<u64>> {
    let mut ds = table.divisors(n)?;
    ds.retain(|&k| k >= 2);
    ds.reverse();
    Ok(ds)
}

/// `ξ(n) = 1 − Σ_{k>=2, k|n} (ζ(k) − 1)`, which equals
/// `d(n) − Σ_{k>=2, k|n} ζ(k)`; `ξ(0) = 0`.
pub fn xi(table: &PrimeTable, n: i64) -> Result<AggregateNorm> {
    if n == 0 {
        return Ok(AggregateNorm::zero(AggregateKind::Xi));
    }
    let ds = divisors_desc(table, n)?;
    let s: f64 = ds.iter().map(|&k| zeta_int_minus_one(k)).sum();
    Ok(AggregateNorm {
        kind: AggregateKind::Xi,
        value: 1.0 - s,
        tail_bound: (ds.len() + 1) as f64 * f64::EPSILON,
    })
}

pub use xi as f;

/// `Σ_{q=2}^{Q} ‖n‖_q` straight from the definition; the omitted tail is
/// at most `Σ_{q>Q} 1/(q(q−1)) = 1/Q`.
pub fn xi_truncated(table: &PrimeTable, n: i64, q_max: u64) -> Result<AggregateNorm> {
    if q_max < 2 {
        return Err(Error::domain(format!("truncation point must be >= 2, got {q_max}")));
    }
    if n == 0 {
        return Ok(AggregateNorm::zero(AggregateKind::Xi));
    }
    let ds = divisors_desc(table, n)?;
    let mut value = 0.0;
    for qi in (2..=q_max).rev() {
        let q = QParam::new(qi as f64)?;
        let deficit: f64 = ds.iter().map(|&k| q.inv_pow(k)).sum();
        value += q.diameter() - deficit;
    }
    Ok(AggregateNorm { kind: AggregateKind::Xi, value, tail_bound: 1.0 / q_max as f64 })
}

/// `ζ(n) = Σ_{k|n} μ(k) (d(n/k) − ξ(n/k))`.
pub fn zeta_from_inversion(table: &PrimeTable, n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("inversion needs n > 1, got {n}")));
    }
    let n_i = i64::try_from(n).map_err(|_| Error::capacity(format!("{n} exceeds i64")))?;
    let mut acc = 0.0;
    for k in table.divisors(n_i)? {
        let mu = table.moebius(k)?;
        if mu == 0 {
            continue;
        }
        let m = (n / k) as i64;
        acc += f64::from(mu) * (table.divisor_count(m)? as f64 - xi(table, m)?.value);
    }
    Ok(acc)
}

/// `2/((k−1)2^k)`, the integral over `q >= 2` of `q^-k`.
pub fn integral_weight(k: u64) -> f64 {
    if k > 1100 {
        return 0.0;
    }
    2.0 / (k as f64 - 1.0) * 2f64.powi(-(k as i32))
}

/// `I(n) = ln 2 − Σ_{k>=2, k|n} 2/((k−1)2^k)`; `I(0) = 0`.
pub fn integral_norm(table: &PrimeTable, n: i64) -> Result<AggregateNorm> {
    if n == 0 {
        return Ok(AggregateNorm::zero(AggregateKind::Integral));
    }
    let ds = divisors_desc(table, n)?;
    let s: f64 = ds.iter().map(|&k| integral_weight(k)).sum();
    Ok(AggregateNorm {
        kind: AggregateKind::Integral,
        value: LN_2 - s,
        tail_bound: (ds.len() + 1) as f64 * f64::EPSILON,
    })
}

fn difference(m: i64, n: i64) -> Result<i64> {
    m.checked_sub(n)
        .ok_or_else(|| Error::capacity(format!("{m} − {n} overflows i64")))
}

/// `d_ξ(m, n) = ξ(m − n)`.
pub fn d_xi(table: &PrimeTable, m: i64, n: i64) -> Result<f64> {
    Ok(xi(table, difference(m, n)?)?.value)
}

pub use d_xi as delta;

/// `d_I(m, n) = I(m − n)`.
pub fn d_i(table: &PrimeTable, m: i64, n: i64) -> Result<f64> {
    Ok(integral_norm(table, difference(m, n)?)?.value)
}

/// `B = 2 + ζ(1.1) − 2^-1.1 − 3^-1.1 − 4^-1.1`, so that `d_ξ <= B·d_2`.
pub fn equivalence_constant_b() -> Result<f64> {
    let s = 1.1f64;
    Ok(2.0 + zeta(s)?.value - 2f64.powf(-s) - 3f64.powf(-s) - 4f64.powf(-s))
}

/// `ξ(1), …, ξ(n)` by the divisor sieve.
pub fn xi_table(n: u64) -> Result<Vec<f64>> {
    sieve_divisor_weights(zeta_int_minus_one, 1.0, n)
}

/// `I(1), …, I(n)` by the divisor sieve.
pub fn integral_table(n: u64) -> Result<Vec<f64>> {
    sieve_divisor_weights(integral_weight, LN_2, n)
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// `(1/N) Σ_{n<=N} ξ(n)`, which tends to Euler's constant `γ`.
pub fn xi_mean(n: u64) -> Result<f64> {
    Ok(mean(&xi_table(n)?))
}

/// `(1/N) Σ_{n<=N} I(n)`, which tends to `ln 4 − 1`.
pub fn integral_mean(n: u64) -> Result<f64> {
    Ok(mean(&integral_table(n)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{primes_up_to, zeta};
    use crate::qnorm::qnorm;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    fn table() -> PrimeTable {
        PrimeTable::new(100_000).unwrap()
    }

    fn z(k: u64) -> f64 {
        zeta(k as f64).unwrap().value
    }

    #[test]
    fn xi_examples() {
        let t = table();
        assert_eq!(xi(&t, 1).unwrap().value, 1.0);
        assert_eq!(xi(&t, 0).unwrap().value, 0.0);
        assert!((xi(&t, 2).unwrap().value - 0.3550660).abs() < 1e-7);
        assert!((xi(&t, 4).unwrap().value - 0.2727427).abs() < 1e-7);
        assert!((xi(&t, 6).unwrap().value - (4.0 - z(2) - z(3) - z(6))).abs() < 1e-14);
        assert_eq!(xi(&t, -6).unwrap().value, xi(&t, 6).unwrap().value);
        for p in primes_up_to(97) {
            assert!((xi(&t, p as i64).unwrap().value + z(p) - 2.0).abs() < 1e-10);
        }
        assert_eq!(f(&t, 5).unwrap(), xi(&t, 5).unwrap());
    }

    #[test]
    fn xi_bounds() {
        let t = table();
        for n in 1..=5_000 {
            let v = xi(&t, n).unwrap().value;
            assert!(v > 0.0 && v <= 1.0, "n={n}");
            let i = integral_norm(&t, n).unwrap().value;
            assert!(i > 0.0 && i <= LN_2, "n={n}");
        }
    }

    #[test]
    fn truncated_oracle() {
        let t = table();
        let one = xi_truncated(&t, 1, 100).unwrap();
        assert!(one.value >= 1.0 - 0.01 - 1e-14 && one.value <= 1.0);
        assert!((one.value - 0.99).abs() < 1e-14);
        for n in [2, 6, 12, 97, 360] {
            let tr = xi_truncated(&t, n, 10_000).unwrap();
            let exact = xi(&t, n).unwrap().value;
            assert!(exact - tr.value >= -1e-12 && exact - tr.value <= tr.tail_bound + 1e-12, "n={n}");
        }
        assert!(xi_truncated(&t, 3, 1).is_err());
    }

    #[test]
    fn inversion_recovers_zeta() {
        let t = table();
        for n in [2u64, 3, 6, 12, 30, 64] {
            assert!((zeta_from_inversion(&t, n).unwrap() - z(n)).abs() < 1e-10, "n={n}");
        }
        assert!(zeta_from_inversion(&t, 1).is_err());
    }

    #[test]
    fn integral_examples() {
        let t = table();
        assert_eq!(integral_norm(&t, 1).unwrap().value, LN_2);
        assert!((integral_norm(&t, 2).unwrap().value - (LN_2 - 0.5)).abs() < 1e-16);
        assert!((integral_norm(&t, 6).unwrap().value - (LN_2 - 0.63125)).abs() < 1e-15);
        assert_eq!(integral_norm(&t, 0).unwrap().value, 0.0);
    }

    #[test]
    fn integral_dual_representation() {
        let t = table();
        for n in 1..=1_000u64 {
            let complement: f64 = (2..=200u64)
                .rev()
                .filter(|k| n % k != 0)
                .map(integral_weight)
                .sum();
            let v = integral_norm(&t, n as i64).unwrap().value;
            assert!((v - complement).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn metric_examples() {
        let t = table();
        assert_eq!(d_xi(&t, 8, 7).unwrap(), 1.0);
        assert_eq!(d_i(&t, 5, 5).unwrap(), 0.0);
        assert!((d_xi(&t, 7, 5).unwrap() - 0.3550660).abs() < 1e-7);
        assert_eq!(delta(&t, 9, 2).unwrap(), d_xi(&t, 9, 2).unwrap());
        assert!(d_xi(&t, i64::MIN, 1).is_err());
    }

    #[test]
    fn subadditivity() {
        let t = table();
        let mut rng = StdRng::seed_from_u64(0x5eed);
        for _ in 0..20_000 {
            let m = rng.gen_range(-10_000i64..=10_000);
            let n = rng.gen_range(-10_000i64..=10_000);
            let lhs = xi(&t, m + n).unwrap().value;
            assert!(lhs <= xi(&t, m).unwrap().value + xi(&t, n).unwrap().value + 1e-15);
            let lhs = integral_norm(&t, m + n).unwrap().value;
            assert!(lhs <= integral_norm(&t, m).unwrap().value + integral_norm(&t, n).unwrap().value + 1e-15);
        }
    }

    #[test]
    fn sandwiches() {
        let t = table();
        let b = equivalence_constant_b().unwrap();
        assert!(b > 3.0 && (b - 11.6).abs() < 0.1, "B={b}");
        let two = QParam::new(2.0).unwrap();
        let four = QParam::new(4.0).unwrap();
        for d in -400i64..=400 {
            let d2 = qnorm(&t, d, two).unwrap().value;
            let d4 = qnorm(&t, d, four).unwrap().value;
            let dx = xi(&t, d).unwrap().value;
            let di = integral_norm(&t, d).unwrap().value;
            assert!(d2 <= dx && dx <= b * d2, "d={d}");
            assert!(d4 <= di && di <= 2.0 * d2, "d={d}");
        }
    }

    #[test]
    fn scaled_norm_inequality() {
        let t = table();
        let two = QParam::new(2.0).unwrap();
        for qv in [5.0, 7.0, 10.0] {
            let q = QParam::new(qv).unwrap();
            let scale = qv.powf(1.1);
            for n in 1..=10_000 {
                let lhs = scale * qnorm(&t, n, q).unwrap().value;
                assert!(lhs <= qnorm(&t, n, two).unwrap().value, "q={qv} n={n}");
            }
        }
    }

    #[test]
    fn tables_and_means() {
        let t = table();
        let xs = xi_table(2_000).unwrap();
        let is = integral_table(2_000).unwrap();
        for n in 1..=2_000usize {
            assert!((xs[n - 1] - xi(&t, n as i64).unwrap().value).abs() < 1e-14);
            assert!((is[n - 1] - integral_norm(&t, n as i64).unwrap().value).abs() < 1e-15);
        }
        assert_eq!(xi_mean(1).unwrap(), 1.0);
        assert!((xi_mean(100_000).unwrap() - EULER_GAMMA).abs() < 1e-4);
        assert!((integral_mean(100_000).unwrap() - (4f64.ln() - 1.0)).abs() < 1e-4);
    }
}
