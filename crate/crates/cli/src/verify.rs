//! The `verify` command: invariant suites for every core module.
//!
//! Sieve-dependent checks take the kernel as a parameter so a deliberately
//! broken kernel can be shown to fail the suite.

use clap::ValueEnum;
use furst_core::arith::{is_prime, primes_up_to, zeta, PrimeTable};
use furst_core::qnorm::{ball_cover_modulus, forced_divisors, metric, progression_radius, qnorm};
use furst_core::sequences::{
    divisibility_convergence_report, find_prime_in_progression, mod4_obstruction_check,
    prime_factor_increasing_report, Family,
};
use furst_core::{aggregate, dirichlet, means, sieve, QParam, Result, Verdict};

use crate::output::CheckRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Metric,
    Sieve,
    Means,
    Sequences,
    Aggregate,
    Dirichlet,
}

/// Computes `‖1‖_q, …, ‖n‖_q`.
pub type SieveKernel = dyn Fn(QParam, u64) -> Result<Vec<f64>>;

pub fn default_kernel(q: QParam, n: u64) -> Result<Vec<f64>> {
    sieve::sieve_qnorms(q, n).map(sieve::SieveTable::into_values)
}

struct Checks {
    suite: &'static str,
    rows: Vec<CheckRow>,
}

impl Checks {
    fn new(suite: &'static str) -> Self {
        Checks { suite, rows: Vec::new() }
    }

    fn add(&mut self, check: &str, passed: bool, detail: String) {
        self.rows.push(CheckRow { suite: self.suite.into(), check: check.into(), passed, detail });
    }
}

fn q(v: f64) -> QParam {
    QParam::new(v).expect("suite grids use q > 1")
}

/// Runs `suite` at problem size `scale` (clamped to the prime table).
pub fn run_suite(suite: Suite, scale: u64, table: &PrimeTable, kernel: &SieveKernel) -> Result<Vec<CheckRow>> {
    let scale = scale.clamp(100, table.limit());
    let suites: &[Suite] = match suite {
        Suite::All => &[Suite::Metric, Suite::Sieve, Suite::Means, Suite::Sequences, Suite::Aggregate, Suite::Dirichlet],
        other => std::slice::from_ref(match other {
            Suite::Metric => &Suite::Metric,
            Suite::Sieve => &Suite::Sieve,
            Suite::Means => &Suite::Means,
            Suite::Sequences => &Suite::Sequences,
            Suite::Aggregate => &Suite::Aggregate,
            _ => &Suite::Dirichlet,
        }),
    };
    let mut rows = Vec::new();
    for s in suites {
        rows.extend(match s {
            Suite::Metric => metric_suite(scale, table)?,
            Suite::Sieve => sieve_suite(scale, table, kernel)?,
            Suite::Means => means_suite(scale, kernel)?,
            Suite::Sequences => sequences_suite(table)?,
            Suite::Aggregate => aggregate_suite(scale, table)?,
            Suite::Dirichlet => dirichlet_suite(scale, table)?,
            Suite::All => unreachable!(),
        });
    }
    Ok(rows)
}

fn metric_suite(scale: u64, table: &PrimeTable) -> Result<Vec<CheckRow>> {
    let mut c = Checks::new("metric");
    let n = scale as i64;
    let grid = [1.5, means::PHI, 2.0, 3.0, 10.0];

    let mut bad = 0;
    for &qv in &grid {
        let qq = q(qv);
        for m in -n..=n {
            let v = qnorm(table, m, qq)?.value;
            if !(0.0..=qq.diameter()).contains(&v) || v != qnorm(table, -m, qq)?.value || (v == 0.0) != (m == 0) {
                bad += 1;
            }
        }
    }
    c.add("bounds_symmetry_definiteness", bad == 0, format!("{bad} violations on [-{n}, {n}]"));

    let mut bad = 0;
    let step = (n / 200).max(1);
    for &qv in &grid {
        let qq = q(qv);
        let slack = 4.0 * f64::EPSILON * qq.diameter();
        for a in (-n / 2..=n / 2).step_by(step as usize) {
            for b in (-n / 2..=n / 2).step_by((step * 7) as usize) {
                let lhs = qnorm(table, a + b, qq)?.value;
                if lhs > qnorm(table, a, qq)?.value + qnorm(table, b, qq)?.value + slack {
                    bad += 1;
                }
            }
        }
    }
    c.add("triangle_inequality", bad == 0, format!("{bad} violations"));

    let mut bad = 0;
    for &qv in &grid {
        let qq = q(qv);
        for a in 1..=n {
            let v = qnorm(table, a, qq)?;
            bad += forced_divisors(v, qq, 30).iter().filter(|&&k| a % k as i64 != 0).count();
        }
    }
    c.add("forced_divisors_sound", bad == 0, format!("{bad} false divisors for a <= {n}"));

    let mut bad = 0;
    for qv in [2.0, 3.0] {
        let qq = q(qv);
        for b in 1..=20u64 {
            let r = progression_radius(b, qq)?;
            for d in -n..=n {
                if metric(table, d, 0, qq)?.value < r && d % b as i64 != 0 {
                    bad += 1;
                }
            }
        }
        for r in [0.3, 0.1, 0.02] {
            let modulus = ball_cover_modulus(r, qq)? as i64;
            for t in -(n / modulus).min(1_000)..=(n / modulus).min(1_000) {
                if metric(table, modulus * t, 0, qq)?.value >= r {
                    bad += 1;
                }
            }
        }
    }
    c.add("ball_progression_inclusions", bad == 0, format!("{bad} violations"));
    Ok(c.rows)
}

fn sieve_suite(scale: u64, table: &PrimeTable, kernel: &SieveKernel) -> Result<Vec<CheckRow>> {
    let mut c = Checks::new("sieve");
    let small = kernel(q(2.0), 6)?;
    let want = [0.5, 0.25, 0.375, 0.1875, 0.46875, 7.0 / 64.0];
    c.add("small_table", small == want, format!("{small:?}"));
    let mut worst: f64 = 0.0;
    for qv in [1.5, 2.0, 3.0] {
        let values = kernel(q(qv), scale)?;
        for (i, v) in values.iter().enumerate() {
            worst = worst.max((v - qnorm(table, i as i64 + 1, q(qv))?.value).abs());
        }
    }
    c.add("closed_form_agreement", worst < 1e-12, format!("max error {worst:.3e} for n <= {scale}"));
    Ok(c.rows)
}

fn means_suite(scale: u64, kernel: &SieveKernel) -> Result<Vec<CheckRow>> {
    let mut c = Checks::new("means");
    for qv in [2.0, 3.0] {
        let values = kernel(q(qv), scale)?;
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let err = (mean - means::mean_limit(q(qv))).abs();
        c.add(&format!("prefix_mean_q{qv}"), err <= 2.0 / scale as f64, format!("|m_N − limit| = {err:.3e}, N = {scale}"));
    }
    let values = kernel(q(2.0), scale)?;
    let bad = values
        .iter()
        .enumerate()
        .skip(1)
        .filter(|&(i, &v)| if (i + 1) % 2 == 1 { v <= 1.0 / 3.0 } else { v > 0.25 })
        .count();
    c.add("parity_gap_q2", bad == 0, format!("{bad} violations for n <= {scale}"));
    let lambda = means::lambda_root(1e-12)?;
    let residual = means::lambda_residual(lambda).abs();
    c.add("lambda_residual", residual < 1e-12, format!("λ = {lambda:.12}, |g(λ)| = {residual:.2e}"));
    let p = means::gap_profile(q(means::PHI));
    c.add("phi_threshold", (p.odd_lower - p.even_upper).abs() < 1e-12, format!("bounds differ by {:.2e}", (p.odd_lower - p.even_upper).abs()));
    Ok(c.rows)
}

fn sequences_suite(table: &PrimeTable) -> Result<Vec<CheckRow>> {
    let mut c = Checks::new("sequences");
    for family in [Family::Factorial, Family::Lcm] {
        let r = divisibility_convergence_report(&family.window(25)?, 12)?;
        let ok = r.verdict == Verdict::ConvergesToZero
            && r.certificates.iter().all(|x| x.first_good_index.is_some_and(|i| i as u64 <= x.key));
        c.add(&format!("{family:?}_converges").to_lowercase(), ok, format!("{:?}", r.verdict));
    }
    let r = divisibility_convergence_report(&Family::Primorial.window(15)?, 4)?;
    c.add("primorial_fails_at_4", r.verdict == Verdict::Undecided && r.certificate(4).is_some_and(|x| x.first_good_index.is_none()), format!("{:?}", r.verdict));
    let r = prime_factor_increasing_report(&Family::Primes.window(50)?, 13)?;
    c.add("primes_prime_factor_increasing", r.verdict == Verdict::PrimeFactorIncreasing, format!("{:?}", r.verdict));
    let ok = mod4_obstruction_check(table, 1_000.min(table.limit()), q(2.0))?;
    c.add("mod4_obstruction", ok, String::new());
    let mut missing = Vec::new();
    for b in 1..=50u64 {
        match find_prime_in_progression(1, b, 1_000_000)? {
            Some(p) if is_prime(p) && p % b == 1 % b => {}
            _ => missing.push(b),
        }
    }
    c.add("primes_in_progressions", missing.is_empty(), format!("missing moduli {missing:?}"));
    Ok(c.rows)
}

fn aggregate_suite(scale: u64, table: &PrimeTable) -> Result<Vec<CheckRow>> {
    let mut c = Checks::new("aggregate");
    let worst = primes_up_to(97)
        .into_iter()
        .map(|p| Ok((aggregate::xi(table, p as i64)?.value + zeta(p as f64)?.value - 2.0).abs()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    c.add("xi_plus_zeta_at_primes", worst < 1e-10, format!("max error {worst:.2e}"));
    let mut worst: f64 = 0.0;
    for n in [2u64, 6, 12] {
        worst = worst.max((aggregate::zeta_from_inversion(table, n)? - zeta(n as f64)?.value).abs());
    }
    c.add("moebius_inversion", worst < 1e-10, format!("max error {worst:.2e}"));
    let b = aggregate::equivalence_constant_b()?;
    let (two, four) = (q(2.0), q(4.0));
    let mut bad = 0;
    let r = 200i64.min(scale as i64 / 2);
    for d in -2 * r..=2 * r {
        let d2 = qnorm(table, d, two)?.value;
        let dx = aggregate::xi(table, d)?.value;
        let di = aggregate::integral_norm(table, d)?.value;
        if !(d2 <= dx && dx <= b * d2 && qnorm(table, d, four)?.value <= di && di <= 2.0 * d2) {
            bad += 1;
        }
    }
    c.add("metric_sandwiches", bad == 0, format!("B = {b:.6}, {bad} violations"));
    let mut bad = 0;
    let n = (scale as i64 / 2).min(5_000);
    for m in (-n..=n).step_by(37) {
        for k in (-n..=n).step_by(41) {
            if aggregate::xi(table, m + k)?.value > aggregate::xi(table, m)?.value + aggregate::xi(table, k)?.value + 1e-15 {
                bad += 1;
            }
        }
    }
    c.add("xi_subadditive", bad == 0, format!("{bad} violations"));
    let xm = aggregate::xi_mean(scale)?;
    let im = aggregate::integral_mean(scale)?;
    let ex = (xm - 0.577_215_664_901_532_9).abs();
    let ei = (im - (4f64.ln() - 1.0)).abs();
    c.add("means", ex < 1.0 / scale as f64 && ei < 1.0 / scale as f64, format!("|ξ-mean − γ| = {ex:.2e}, |I-mean − (ln 4 − 1)| = {ei:.2e}"));
    Ok(c.rows)
}

fn dirichlet_suite(scale: u64, table: &PrimeTable) -> Result<Vec<CheckRow>> {
    let mut c = Checks::new("dirichlet");
    for qv in [2.0, 3.0] {
        for s in [1.5, 2.0, 3.0] {
            let p = dirichlet::q_partial(q(qv), s, scale)?;
            let closed = dirichlet::q_closed(q(qv), s)?;
            c.add(&format!("q_series_q{qv}_s{s}"), p.contains(closed, 1e-10), format!("|diff| = {:.3e}, tail {:.3e}", (p.value - closed).abs(), p.tail_bound));
        }
    }
    let mut worst: f64 = 0.0;
    for qv in [2.0, 3.0] {
        for n in 1..=1_000u64.min(table.limit()) {
            worst = worst.max((dirichlet::gamma_q(n, q(qv))? - dirichlet::gamma_q_inversion(table, n, q(qv))?).abs());
        }
    }
    c.add("gamma_inversion", worst < 1e-12, format!("max error {worst:.2e}"));
    let mut worst: f64 = 0.0;
    for qv in [2.0, 3.0, 5.0] {
        worst = worst.max((dirichlet::gamma_series(q(qv), 1.0, 100)?.value - means::mean_limit(q(qv))).abs());
    }
    c.add("gamma_series_mean_limit", worst < 1e-12, format!("max error {worst:.2e}"));
    for s in [2.0, 3.0] {
        let p = dirichlet::xi_partial(s, scale)?;
        let closed = dirichlet::xi_closed(s)?;
        c.add(&format!("xi_series_s{s}"), p.contains(closed, 1e-12), format!("|diff| = {:.3e}, tail {:.3e}", (p.value - closed).abs(), p.tail_bound));
    }
    for s in [3.0, 4.0] {
        let ok = dirichlet::dirichlet_square_check(scale, s)? == Some(true);
        c.add(&format!("zeta_squared_s{s}"), ok, String::new());
    }
    Ok(c.rows)
}
