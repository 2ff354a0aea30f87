use std::sync::OnceLock;

use furst_core::aggregate::{integral_norm, xi};
use furst_core::qnorm::{forced_divisors, metric, qnorm, qnorm_structured};
use furst_core::sequences::divisibility_convergence_report;
use furst_core::{sieve, PrimeTable, QParam, StructuredInteger};
use proptest::prelude::*;

fn table() -> &'static PrimeTable {
    static T: OnceLock<PrimeTable> = OnceLock::new();
    T.get_or_init(|| PrimeTable::new(200_000).unwrap())
}

fn q_strategy() -> impl Strategy<Value = QParam> {
    prop_oneof![Just(1.5), Just(furst_core::means::PHI), Just(2.0), Just(3.0), 1.01f64..20.0]
        .prop_map(|q| QParam::new(q).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn metric_axioms(m in -50_000i64..50_000, n in -50_000i64..50_000, k in -50_000i64..50_000, q in q_strategy()) {
        let t = table();
        let d = |a, b| metric(t, a, b, q).unwrap().value;
        prop_assert_eq!(d(m, n), d(n, m));
        prop_assert_eq!(d(m, n) == 0.0, m == n);
        prop_assert!(d(m, k) <= d(m, n) + d(n, k) + 4.0 * f64::EPSILON * q.diameter());
        prop_assert!(d(m, n) <= q.diameter());
    }

    #[test]
    fn aggregate_norms_are_subadditive(m in -90_000i64..90_000, n in -90_000i64..90_000) {
        let t = table();
        let x = |a| xi(t, a).unwrap().value;
        let i = |a| integral_norm(t, a).unwrap().value;
        prop_assert!(x(m + n) <= x(m) + x(n) + 1e-15);
        prop_assert!(i(m + n) <= i(m) + i(n) + 1e-15);
        prop_assert!((0.0..=1.0).contains(&x(m)));
    }

    #[test]
    fn forced_divisors_divide(a in -100_000i64..100_000, q in q_strategy()) {
        let v = qnorm(table(), a, q).unwrap();
        for n in forced_divisors(v, q, 40) {
            prop_assert_eq!(a % n as i64, 0);
        }
    }

    #[test]
    fn structured_agrees_with_divisor_oracle(n in 1u64..=30, offset in -3i64..=3, q in q_strategy()) {
        let x = StructuredInteger::Factorial(n).shifted(offset);
        let structured = qnorm_structured(&PrimeTable::new(10).unwrap(), &x, q, 1e-14).unwrap();
        // n! + offset mod k by a running product, one divisor candidate at a time
        let oracle_deficit: f64 = (2..=8_000u64)
            .rev()
            .filter(|&k| {
                let f = (1..=n).fold(1u128, |acc, i| acc * i as u128 % k as u128);
                (f as i128 + offset as i128).rem_euclid(k as i128) == 0
            })
            .map(|k| q.inv_pow(k))
            .sum();
        let oracle = q.diameter() - oracle_deficit;
        if StructuredInteger::Factorial(n).value().unwrap_or(i64::MAX).checked_add(offset) != Some(0) {
            prop_assert!(structured.value - oracle >= -1e-15);
            prop_assert!(structured.value - oracle <= structured.tail_bound + 1e-15);
        }
    }

    #[test]
    fn residues_match_arithmetic(n in 1u64..=20, offset in -1000i64..1000, k in 1u64..10_000) {
        let x = StructuredInteger::Factorial(n).shifted(offset);
        let v = StructuredInteger::Factorial(n).value().unwrap() as i128 + offset as i128;
        let d = StructuredInteger::Shifted { base: Box::new(StructuredInteger::Factorial(n)), offset }
            .divisibility()
            .unwrap();
        prop_assert_eq!(d.residue(k) as i128, v.rem_euclid(k as i128));
        prop_assert_eq!(x.divisibility().unwrap().divides(k), v % k as i128 == 0);
    }

    #[test]
    fn sieve_matches_pointwise(n in 1u64..3_000, q in q_strategy()) {
        let s = sieve::sieve_qnorms(q, n).unwrap();
        for m in (1..=n).step_by(97) {
            let exact = qnorm(table(), m as i64, q).unwrap().value;
            prop_assert!((s.get(m as usize).unwrap() - exact).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn certificates_are_honest(values in proptest::collection::vec(-10_000i64..10_000, 1..40), k_bound in 1u64..30) {
        let window: Vec<StructuredInteger> = values.iter().map(|&v| StructuredInteger::Plain(v)).collect();
        let r = divisibility_convergence_report(&window, k_bound).unwrap();
        for c in &r.certificates {
            if let Some(start) = c.first_good_index {
                prop_assert!(values[start - 1..].iter().all(|v| v % c.key as i64 == 0));
                if start > 1 {
                    prop_assert!(values[start - 2] % c.key as i64 != 0);
                }
            } else {
                prop_assert!(values.last().unwrap() % c.key as i64 != 0);
            }
        }
    }
}
