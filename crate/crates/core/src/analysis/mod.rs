//! Fixed-point decision, stabilization and cycle census.

mod bound;
mod fixed_point;
mod moebius;
mod period;
mod product;

pub use bound::{ceil_log2, iteration_bound, iteration_bound_with, BoundMode};
pub use fixed_point::{
    decide_fixed_point, image_chain, lfps_test, lfps_test_with, minimal_fixed_exponent, stabilize,
    unit_det_shortcut, DecidedBy, FixedPointDecision, LfpsOutcome, ShortcutVerdict,
    StabilizationReport,
};
pub use moebius::{divisors, moebius, moebius_divisors};
pub use period::{cycle_structure, eventual_period, CycleClass, CycleStructure};
pub use product::{decompose_product, ProductDecision, ProductSystem};

/// Knobs for the period search and the early-exit refinement of the
/// fixed-point test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeriodSearchConfig {
    /// Largest eventual period searched for before giving up.
    pub max_period: u64,
    /// Test `X A = X` after every square-and-multiply step.
    pub early_exit: bool,
}

pub const DEFAULT_MAX_PERIOD: u64 = 1 << 20;

impl Default for PeriodSearchConfig {
    fn default() -> Self {
        PeriodSearchConfig {
            max_period: DEFAULT_MAX_PERIOD,
            early_exit: false,
        }
    }
}
