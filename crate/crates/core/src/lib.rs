//! Linear dynamical systems `x -> A x` over Z/qZ and finite products of such
//! rings.
//!
//! The central question is whether every trajectory ends in a fixed point.
//! The image chain `A^k (R^n)` stops shrinking after at most
//! `B = ceil(n log2 |R|)` steps, so the system is a fixed-point system exactly
//! when `A^B = A^(B+1)`; [`lfps_test`] decides that with `O(log B)` matrix
//! products. When the answer is no, [`cycle_structure`] counts the cycles of
//! every length by measuring kernels of `A^k - I` with Howell forms and
//! applying Möbius inversion. Neither path factors the modulus.
//!
//! [`oracle`] enumerates the full phase graph of small systems and is used as
//! the independent ground truth in tests.

pub mod analysis;
pub mod error;
pub mod matrix;
pub mod oracle;
pub mod par;
pub mod ring;

#[cfg(test)]
pub(crate) mod testing;

pub use analysis::{
    cycle_structure, decide_fixed_point, decompose_product, divisors, eventual_period, image_chain,
    iteration_bound, iteration_bound_with, lfps_test, lfps_test_with, minimal_fixed_exponent,
    moebius, moebius_divisors, stabilize, unit_det_shortcut, BoundMode, CycleClass, CycleStructure,
    DecidedBy, FixedPointDecision, LfpsOutcome, PeriodSearchConfig, ProductDecision, ProductSystem,
    ShortcutVerdict, StabilizationReport, DEFAULT_MAX_PERIOD,
};
pub use error::{Error, Result};
pub use matrix::{square_multiply_schedule, HowellForm, MatrixZq, Pivot, PolyZq, PowStep};
pub use oracle::{
    enumerate_phase_graph, enumerate_product_phase_graph, oracle_crosscheck,
    oracle_crosscheck_product, Check, CrosscheckReport, PhaseGraph, DEFAULT_ORACLE_CAP,
};
pub use ring::{is_prime, Modulus, Residue, ResidueOp, RingSpec};
