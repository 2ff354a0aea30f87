//! q-norms on the integers and the metrics they induce.
//!
//! For `q > 1` the q-norm of an integer `n` is the sum of `q^-k` over all
//! positive `k` that do **not** divide `n`. The induced metric
//! `d_q(m, n) = ‖m − n‖_q` generates the Fürstenberg topology, whose basic
//! open sets are the arithmetic progressions `a + bℤ`.
//!
//! The crate is organised bottom-up:
//!
//! - [`arith`]: prime tables, divisors, `d`, `μ`, real `ζ(s)` and `Li(s, z)`,
//!   divisibility predicates for factorials, primorials and lcm towers.
//! - [`qnorm`]: the norm, the metric, the forced-divisor bound and the
//!   ball/progression translations.
//! - [`sieve`]: the `O(n log n)` batch kernel and its weighted generalisation.
//! - [`means`]: prefix means, their limit, the odd/even gap and the `Φ`/`λ`
//!   thresholds.
//! - [`sequences`]: symbolic integers and finite-window convergence
//!   certificates.
//! - [`aggregate`]: the summed norm `ξ` and the integrated norm `I`.
//! - [`dirichlet`]: Dirichlet generating functions with closed forms and
//!   partial-sum cross-checks.
//!
//! ```
//! use furst_core::{PrimeTable, QParam, qnorm};
//!
//! let table = PrimeTable::new(1_000).unwrap();
//! let q = QParam::new(2.0).unwrap();
//! assert_eq!(qnorm::qnorm(&table, 6, q).unwrap().value, 7.0 / 64.0);
//! ```

pub mod aggregate;
pub mod arith;
pub mod dirichlet;
pub mod error;
pub mod means;
pub mod qnorm;
pub mod sequences;
pub mod sieve;

pub use aggregate::{AggregateKind, AggregateNorm};
pub use arith::{Enclosure, Factorization, PrimeTable, SeriesEval};
pub use error::{Error, Result};
pub use means::GapProfile;
pub use qnorm::{NormValue, Progression, QParam};
pub use sequences::{Certificate, ConvergenceReport, Family, StructuredInteger, Verdict};
pub use sieve::SieveTable;

/// Default size of the smallest-prime-factor table.
pub const DEFAULT_TABLE_LIMIT: u64 = 10_000_000;
