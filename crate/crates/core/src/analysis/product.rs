//! Systems over `Z/q1 x ... x Z/qk`.
//!
//! A linear map over a product ring is a tuple of independent maps, one per
//! factor. The product is a fixed-point system iff every factor is, the
//! eventual period is the lcm of the factor periods, and `N_k` multiplies
//! across factors.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use super::fixed_point::{image_chain, lfps_test_with, minimal_fixed_exponent, unit_det_shortcut};
use super::moebius::divisors;
use super::period::{eventual_period, CycleStructure};
use super::{iteration_bound, DecidedBy, LfpsOutcome, PeriodSearchConfig, ShortcutVerdict};
use crate::error::{Error, Result};
use crate::matrix::MatrixZq;
use crate::par;
use crate::ring::{Modulus, Residue, RingSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductSystem {
    ring: RingSpec,
    dim: usize,
    components: Vec<MatrixZq>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductDecision {
    pub is_fixed_point: bool,
    /// `ceil(n log2 |R|)` for the whole product ring.
    pub bound: u64,
    pub decided_by: DecidedBy,
    /// One per factor.
    pub determinants: Vec<Residue>,
    /// Power test per factor, each against its own bound. Empty when the
    /// shortcut decided.
    pub power_tests: Vec<LfpsOutcome>,
}

impl ProductDecision {
    /// Exponent at which an early-exit run could stop: the largest over the
    /// factors, if every factor stopped early.
    pub fn stopped_at(&self) -> Option<u64> {
        if self.power_tests.is_empty() {
            return None;
        }
        self.power_tests
            .iter()
            .map(|t| t.stopped_at)
            .collect::<Option<Vec<_>>>()
            .and_then(|v| v.into_iter().max())
    }
}

/// Splits a matrix whose entries are tuples (one residue per factor,
/// row-major) into one matrix per factor.
pub fn decompose_product(
    ring: &RingSpec,
    n: usize,
    entries: &[Vec<i64>],
) -> Result<Vec<(Modulus, MatrixZq)>> {
    if n == 0 || entries.len() != n * n {
        return Err(Error::EntryCount {
            rows: n,
            cols: n,
            found: entries.len(),
        });
    }
    let k = ring.component_count();
    if let Some(bad) = entries.iter().find(|e| e.len() != k) {
        return Err(Error::ComponentCountMismatch {
            expected: k,
            found: bad.len(),
        });
    }
    ring.moduli()
        .iter()
        .enumerate()
        .map(|(c, &q)| {
            let data = entries.iter().map(|e| q.reduce_i64(e[c])).collect();
            Ok((q, MatrixZq::new(q, n, n, data)?))
        })
        .collect()
}

impl ProductSystem {
    pub fn new(ring: RingSpec, components: Vec<MatrixZq>) -> Result<Self> {
        if components.len() != ring.component_count() {
            return Err(Error::ComponentCountMismatch {
                expected: ring.component_count(),
                found: components.len(),
            });
        }
        let dim = components[0].require_square()?;
        for (m, &q) in components.iter().zip(ring.moduli()) {
            let n = m.require_square()?;
            if n != dim {
                return Err(Error::DimensionMismatch {
                    left_rows: dim,
                    left_cols: dim,
                    right_rows: n,
                    right_cols: n,
                });
            }
            if m.modulus() != q {
                return Err(Error::ModulusMismatch {
                    left: q.get(),
                    right: m.modulus().get(),
                });
            }
        }
        Ok(ProductSystem {
            ring,
            dim,
            components,
        })
    }

    pub fn from_entries(ring: RingSpec, n: usize, entries: &[Vec<i64>]) -> Result<Self> {
        let parts = decompose_product(&ring, n, entries)?;
        Self::new(ring, parts.into_iter().map(|(_, m)| m).collect())
    }

    pub fn single(a: MatrixZq) -> Result<Self> {
        Self::new(RingSpec::single(a.modulus()), vec![a])
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[MatrixZq] {
        &self.components
    }

    pub fn iteration_bound(&self) -> u64 {
        iteration_bound(self.dim, &self.ring)
    }

    /// `|R|^n`.
    pub fn state_count(&self) -> BigUint {
        let size = self.ring.size();
        (0..self.dim).fold(BigUint::one(), |acc, _| acc * &size)
    }

    pub fn is_identity(&self) -> bool {
        self.components.iter().all(MatrixZq::is_identity)
    }

    /// Applies the unit-determinant test per factor. A single factor with a
    /// unit determinant and `A_i != I` already rules out a fixed-point system.
    pub fn unit_det_shortcut(&self) -> Result<ShortcutVerdict> {
        let verdicts = self
            .components
            .iter()
            .map(unit_det_shortcut)
            .collect::<Result<Vec<_>>>()?;
        if verdicts.contains(&ShortcutVerdict::NotFixedPoint) {
            Ok(ShortcutVerdict::NotFixedPoint)
        } else if verdicts.contains(&ShortcutVerdict::Inconclusive) {
            Ok(ShortcutVerdict::Inconclusive)
        } else {
            Ok(ShortcutVerdict::FixedPointIdentity)
        }
    }

    pub fn determinants(&self) -> Result<Vec<Residue>> {
        self.components.iter().map(MatrixZq::determinant).collect()
    }

    /// Shortcut first, then the power test on every factor.
    pub fn decide_fixed_point(&self, cfg: &PeriodSearchConfig) -> Result<ProductDecision> {
        let determinants = self.determinants()?;
        let (is_fixed_point, decided_by, power_tests) = match self.unit_det_shortcut()? {
            ShortcutVerdict::NotFixedPoint => (false, DecidedBy::UnitDeterminant, Vec::new()),
            ShortcutVerdict::FixedPointIdentity => (true, DecidedBy::UnitDeterminant, Vec::new()),
            ShortcutVerdict::Inconclusive => {
                let tests = self
                    .components
                    .iter()
                    .map(|a| lfps_test_with(a, cfg))
                    .collect::<Result<Vec<_>>>()?;
                let all = tests.iter().all(|t| t.is_fixed_point);
                (all, DecidedBy::PowerTest, tests)
            }
        };
        Ok(ProductDecision {
            is_fixed_point,
            bound: self.iteration_bound(),
            decided_by,
            determinants,
            power_tests,
        })
    }

    /// `A^e`, one matrix per factor.
    pub fn pow_u64(&self, e: u64) -> Result<Vec<MatrixZq>> {
        self.components.iter().map(|a| a.pow_u64(e)).collect()
    }

    /// Largest of the factors' minimal fixed exponents, `None` unless every
    /// factor is a fixed-point system.
    pub fn minimal_fixed_exponent(&self) -> Result<Option<u64>> {
        let mut worst = Some(0);
        for a in &self.components {
            worst = match (worst, minimal_fixed_exponent(a)?) {
                (Some(w), Some(r)) => Some(w.max(r)),
                _ => return Ok(None),
            };
        }
        Ok(worst)
    }

    /// `|A^k (R^n)|` for `k = 0, 1, ...` until the chain stops shrinking.
    pub fn image_chain(&self) -> Result<Vec<BigUint>> {
        let chains = self
            .components
            .iter()
            .map(image_chain)
            .collect::<Result<Vec<_>>>()?;
        let len = chains.iter().map(Vec::len).max().unwrap_or(1);
        Ok((0..len)
            .map(|k| {
                chains
                    .iter()
                    .map(|c| {
                        c.get(k)
                            .unwrap_or_else(|| c.last().expect("nonempty chain"))
                    })
                    .product()
            })
            .collect())
    }

    /// lcm of the factor periods; errors when it exceeds the cap.
    pub fn eventual_period(&self, cfg: &PeriodSearchConfig) -> Result<u64> {
        let mut period = 1u64;
        for a in &self.components {
            let t = eventual_period(a, cfg)?;
            period = period
                .checked_mul(t / period.gcd(&t))
                .filter(|&p| p <= cfg.max_period)
                .ok_or(Error::PeriodExceedsCap {
                    cap: cfg.max_period,
                })?;
        }
        Ok(period)
    }

    /// Census of the product, built from `N_k = prod_i |ker(A_i^k - I)|`.
    pub fn cycle_structure(&self, cfg: &PeriodSearchConfig) -> Result<CycleStructure> {
        let period = self.eventual_period(cfg)?;
        let divs = divisors(period);
        let counts = par::map_slice(&divs, |&k| -> Result<BigUint> {
            self.components.iter().try_fold(BigUint::one(), |acc, a| {
                Ok(acc * a.pow_u64(k)?.sub_identity()?.kernel_size())
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let census = CycleStructure::from_fixed_counts(period, counts)?;

        let chain = self.image_chain()?;
        let stable = chain.last().expect("nonempty chain");
        if *stable != census.periodic_points {
            return Err(Error::InconsistentCensus(format!(
                "stable image has {stable} states, N_t = {}",
                census.periodic_points
            )));
        }
        Ok(census)
    }
}
