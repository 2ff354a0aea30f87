//! Benchmark inputs shared by the criterion targets.

use furst_core::QParam;

/// Sieve lengths for the doubling-ratio check.
pub const SIEVE_SIZES: [u64; 3] = [1_000_000, 2_000_000, 4_000_000];

pub fn q2() -> QParam {
    QParam::new(2.0).expect("2 > 1")
}
