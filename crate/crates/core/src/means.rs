//! Prefix means of the q-norm and the odd/even gap.
//!
//! No even `k` divides an odd `n > 1`, so `‖n‖_q > Σ_{k even} q^-k =
//! 1/(q²−1)`. Even `n` are divisible by 1 and 2, so `‖n‖_q <= 1/(q²(q−1))`.
//! The two bounds separate exactly when `q > Φ`, and the limiting mean falls
//! strictly between them exactly when `q > λ`.

use crate::error::{Error, Result};
use crate::qnorm::QParam;
use crate::sieve::SieveTable;

/// The golden ratio `(1 + √5)/2`.
pub const PHI: f64 = 1.618_033_988_749_895;

const LAMBDA_BRACKET: (f64, f64) = (1.6, 1.9);
const LAMBDA_ITERATIONS: usize = 60;

/// Gap bounds and mean limit at one `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapProfile {
    pub q: f64,
    /// `1/(q²−1)`, exceeded by `‖n‖_q` for every odd `n > 1`
    pub odd_lower: f64,
    /// `1/(q²(q−1))`, an upper bound on `‖n‖_q` for every even `n`
    pub even_upper: f64,
    pub mean_limit: f64,
    pub gap_exists: bool,
    pub mean_in_gap: bool,
}

/// `m_N(q) = (1/N) Σ_{n<=N} ‖n‖_q` over the whole table.
pub fn mean_prefix(table: &SieveTable) -> f64 {
    table.values().iter().sum::<f64>() / table.len() as f64
}

/// `lim m_N(q) = 1/(q−1) + ln((q−1)/q)`.
pub fn mean_limit(q: QParam) -> f64 {
    // x − ln(1 + x) with x = 1/(q−1); avoids cancellation for large q
    let x = 1.0 / (q.value() - 1.0);
    x - x.ln_1p()
}

pub fn gap_profile(q: QParam) -> GapProfile {
    let qv = q.value();
    let odd_lower = 1.0 / (qv * qv - 1.0);
    let even_upper = 1.0 / (qv * qv * (qv - 1.0));
    let mean_limit = mean_limit(q);
    GapProfile {
        q: qv,
        odd_lower,
        even_upper,
        mean_limit,
        gap_exists: even_upper < odd_lower,
        mean_in_gap: even_upper < mean_limit && mean_limit < odd_lower,
    }
}

/// `g(λ) = λ/(λ−1) − (λ+1) ln(λ/(λ−1))`; its root is the threshold `λ`.
pub fn lambda_residual(l: f64) -> f64 {
    let r = l / (l - 1.0);
    r - (l + 1.0) * r.ln()
}

/// The threshold `λ ≈ 1.75` by bisection on `[1.6, 1.9]`.
///
/// Fails if the final residual `|g(λ)|` is not below `tol`.
pub fn lambda_root(tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let (mut lo, mut hi) = LAMBDA_BRACKET;
    let g_lo = lambda_residual(lo);
    if g_lo * lambda_residual(hi) >= 0.0 {
        return Err(Error::Internal("λ bracket does not straddle a sign change".into()));
    }
    for _ in 0..LAMBDA_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        let g = lambda_residual(mid);
        if g == 0.0 {
            return Ok(mid);
        }
        if (g > 0.0) == (g_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = if lambda_residual(lo).abs() <= lambda_residual(hi).abs() { lo } else { hi };
    let residual = lambda_residual(root).abs();
    if residual < tol {
        Ok(root)
    } else {
        Err(Error::Internal(format!("λ residual {residual:e} does not reach {tol:e}")))
    }
}

/// Profiles on `steps` evenly spaced values from `q_min` to `q_max`
/// inclusive.
pub fn gap_table(q_min: f64, q_max: f64, steps: usize) -> Result<Vec<GapProfile>> {
    QParam::new(q_min)?;
    QParam::new(q_max)?;
    if steps == 0 {
        return Err(Error::domain("gap table needs at least one step"));
    }
    if q_max < q_min {
        return Err(Error::domain(format!("q range is empty: {q_min} > {q_max}")));
    }
    (0..steps)
        .map(|i| {
            let q = if i + 1 == steps && steps > 1 {
                q_max
            } else if steps == 1 {
                q_min
            } else {
                q_min + (q_max - q_min) * i as f64 / (steps - 1) as f64
            };
            QParam::new(q).map(gap_profile)
        })
        .collect()
}
