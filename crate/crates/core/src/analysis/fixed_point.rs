//! Deciding whether every trajectory of `x -> A x` ends in a fixed point.
//!
//! The images `M_k = A^k (R^n)` form a descending chain of subgroups. Each
//! strict step at least halves the size, so the chain is constant from
//! `B = ceil(n log2 |R|)` on, and `A` permutes `M_B`. A permutation has only
//! fixed points iff it is the identity, hence the system is a fixed-point
//! system iff `A^(B+1) = A^B`.

use std::ops::ControlFlow;

use num_bigint::BigUint;

use super::bound::iteration_bound;
use super::PeriodSearchConfig;
use crate::error::Result;
use crate::matrix::{modulus_power, MatrixZq};
use crate::ring::{Residue, RingSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LfpsOutcome {
    pub is_fixed_point: bool,
    /// The exponent `B` the test is built on.
    pub bound: u64,
    /// Exponent `e < B` at which the early-exit check already saw
    /// `A^e = A^(e+1)`.
    pub stopped_at: Option<u64>,
}

/// Verdict of the unit-determinant shortcut.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShortcutVerdict {
    /// `A != I` and `det A` is a unit: a non-identity permutation.
    NotFixedPoint,
    /// `det A` is not a unit; the power test must decide.
    Inconclusive,
    FixedPointIdentity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecidedBy {
    UnitDeterminant,
    PowerTest,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointDecision {
    pub is_fixed_point: bool,
    pub bound: u64,
    pub decided_by: DecidedBy,
    pub determinant: Residue,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizationReport {
    pub bound: u64,
    /// `A^B`; its image is the set of periodic states.
    pub stabilized: MatrixZq,
    pub is_fixed_point: bool,
    pub minimal_fixed_exponent: Option<u64>,
    /// `|A^0 (R^n)|, |A^1 (R^n)|, ...` up to the first repeat (exclusive).
    pub image_chain: Vec<BigUint>,
}

pub(crate) fn bound_for(a: &MatrixZq) -> Result<u64> {
    let n = a.require_square()?;
    Ok(iteration_bound(n, &RingSpec::single(a.modulus())))
}

pub fn lfps_test(a: &MatrixZq) -> Result<bool> {
    Ok(lfps_test_with(a, &PeriodSearchConfig::default())?.is_fixed_point)
}

/// Computes `X = A^B` by square-and-multiply and answers `X = X A`.
///
/// With `cfg.early_exit`, the same check runs after every bit of the
/// exponentiation and the test returns as soon as it holds.
pub fn lfps_test_with(a: &MatrixZq, cfg: &PeriodSearchConfig) -> Result<LfpsOutcome> {
    let bound = bound_for(a)?;
    let mut stopped_at = None;
    let x = a.pow_with(&BigUint::from(bound), |e, x| {
        if cfg.early_exit && x.mul(a).is_ok_and(|xa| &xa == x) {
            stopped_at = u64::try_from(e).ok();
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;
    let is_fixed_point = stopped_at.is_some() || x.mul(a)? == x;
    Ok(LfpsOutcome {
        is_fixed_point,
        bound,
        stopped_at: stopped_at.filter(|&e| e < bound),
    })
}

pub fn unit_det_shortcut(a: &MatrixZq) -> Result<ShortcutVerdict> {
    a.require_square()?;
    if a.is_identity() {
        return Ok(ShortcutVerdict::FixedPointIdentity);
    }
    if a.determinant()?.is_unit() {
        Ok(ShortcutVerdict::NotFixedPoint)
    } else {
        Ok(ShortcutVerdict::Inconclusive)
    }
}

/// Shortcut first, power test when the shortcut is inconclusive.
pub fn decide_fixed_point(a: &MatrixZq, cfg: &PeriodSearchConfig) -> Result<FixedPointDecision> {
    let bound = bound_for(a)?;
    let determinant = a.determinant()?;
    let shortcut = unit_det_shortcut(a)?;
    let (is_fixed_point, decided_by) = match shortcut {
        ShortcutVerdict::NotFixedPoint => (false, DecidedBy::UnitDeterminant),
        ShortcutVerdict::FixedPointIdentity => (true, DecidedBy::UnitDeterminant),
        ShortcutVerdict::Inconclusive => {
            (lfps_test_with(a, cfg)?.is_fixed_point, DecidedBy::PowerTest)
        }
    };
    Ok(FixedPointDecision {
        is_fixed_point,
        bound,
        decided_by,
        determinant,
    })
}

/// Least `r` with `A^r = A^(r+1)`, or `None` for a system that is not a
/// fixed-point system.
///
/// The property is monotone in `r`, so after the squarings `A^(2^j)` a binary
/// lifting over those powers finds the largest failing `r`; `O(log B)`
/// products in total.
pub fn minimal_fixed_exponent(a: &MatrixZq) -> Result<Option<u64>> {
    let bound = bound_for(a)?;
    let holds = |x: &MatrixZq| -> Result<bool> { Ok(&x.mul(a)? == x) };

    if holds(&MatrixZq::identity(a.modulus(), a.rows()))? {
        return Ok(Some(0));
    }
    let mut squares = vec![a.clone()];
    while 1u64 << squares.len() <= bound {
        let last = squares.last().expect("nonempty");
        squares.push(last.mul(last)?);
    }
    // Holds at B iff the system is a fixed-point system.
    let mut at_bound = MatrixZq::identity(a.modulus(), a.rows());
    for (j, sq) in squares.iter().enumerate() {
        if bound >> j & 1 == 1 {
            at_bound = at_bound.mul(sq)?;
        }
    }
    if !holds(&at_bound)? {
        return Ok(None);
    }

    let mut r = 0u64;
    let mut x = MatrixZq::identity(a.modulus(), a.rows());
    for (j, sq) in squares.iter().enumerate().rev() {
        let candidate = r + (1u64 << j);
        if candidate > bound {
            continue;
        }
        let y = x.mul(sq)?;
        if !holds(&y)? {
            x = y;
            r = candidate;
        }
    }
    Ok(Some(r + 1))
}

/// Sizes of `A^k (R^n)` for `k = 0, 1, ...` until the chain stops shrinking.
/// The last entry is the number of periodic states.
pub fn image_chain(a: &MatrixZq) -> Result<Vec<BigUint>> {
    let n = a.require_square()?;
    let bound = bound_for(a)?;
    let mut sizes = vec![modulus_power(a.modulus(), n)];
    let mut power = MatrixZq::identity(a.modulus(), n);
    for _ in 0..bound {
        power = power.mul(a)?;
        let size = power.column_span_size();
        if Some(&size) == sizes.last() {
            break;
        }
        sizes.push(size);
    }
    Ok(sizes)
}

pub fn stabilize(a: &MatrixZq) -> Result<StabilizationReport> {
    let bound = bound_for(a)?;
    let stabilized = a.pow_u64(bound)?;
    let is_fixed_point = stabilized.mul(a)? == stabilized;
    let minimal_fixed_exponent = if is_fixed_point {
        minimal_fixed_exponent(a)?
    } else {
        None
    };
    Ok(StabilizationReport {
        bound,
        stabilized,
        is_fixed_point,
        minimal_fixed_exponent,
        image_chain: image_chain(a)?,
    })
}
