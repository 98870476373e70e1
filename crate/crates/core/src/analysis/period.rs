//! Eventual period and cycle census.
//!
//! `A` permutes the stable image `A^B (R^n)`, so the power sequence
//! `A^(B+j)` is purely periodic in `j`; its period `t` is the lcm of all cycle
//! lengths. For every divisor `k` of `t`, `N_k = |ker(A^k - I)|` counts the
//! states whose period divides `k`. Möbius inversion over the divisor lattice
//! gives the states of exact period `k`, and dividing by `k` gives cycles.

use std::collections::{BTreeMap, HashMap};
use std::hash::{DefaultHasher, Hash, Hasher};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::Zero;

use super::fixed_point::{bound_for, image_chain};
use super::moebius::{divisors, moebius};
use super::PeriodSearchConfig;
use crate::error::{Error, Result};
use crate::matrix::MatrixZq;
use crate::par;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleClass {
    /// Cycle length `k`, a divisor of the eventual period.
    pub length: u64,
    /// `N_k`: states with `A^k x = x`.
    pub fixed_by_power: BigUint,
    /// `P_k`: states of exact period `k`.
    pub exact_period: BigUint,
    /// `C_k = P_k / k`.
    pub cycles: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleStructure {
    pub period: u64,
    /// One entry per divisor of `period`, ascending.
    pub classes: Vec<CycleClass>,
    /// `N_t`, the number of states lying on cycles.
    pub periodic_points: BigUint,
}

impl CycleStructure {
    /// Builds the census from `N_k` for every divisor `k` of `period`
    /// (ascending, as returned by [`divisors`]).
    pub fn from_fixed_counts(period: u64, counts: Vec<BigUint>) -> Result<Self> {
        let divs = divisors(period);
        if divs.len() != counts.len() {
            return Err(Error::InconsistentCensus(format!(
                "{} divisors of {period} but {} counts",
                divs.len(),
                counts.len()
            )));
        }
        let by_divisor: HashMap<u64, &BigUint> = divs.iter().copied().zip(&counts).collect();
        let mut classes = Vec::with_capacity(divs.len());
        let mut periodic_sum = BigUint::zero();
        for (&k, n_k) in divs.iter().zip(&counts) {
            let exact: BigInt = divisors(k)
                .into_iter()
                .map(|d| BigInt::from(moebius(k / d)) * BigInt::from(by_divisor[&d].clone()))
                .sum();
            let exact = match exact.sign() {
                Sign::Minus => {
                    return Err(Error::InconsistentCensus(format!(
                        "negative exact-period count {exact} for k = {k}"
                    )))
                }
                _ => exact.magnitude().clone(),
            };
            let (cycles, rem) = exact.div_rem(&BigUint::from(k));
            if !rem.is_zero() {
                return Err(Error::InconsistentCensus(format!(
                    "{exact} states of period {k} do not split into {k}-cycles"
                )));
            }
            periodic_sum += &exact;
            classes.push(CycleClass {
                length: k,
                fixed_by_power: n_k.clone(),
                exact_period: exact,
                cycles,
            });
        }
        let periodic_points = counts.last().cloned().unwrap_or_default();
        if periodic_sum != periodic_points {
            return Err(Error::InconsistentCensus(format!(
                "exact-period counts sum to {periodic_sum}, N_t = {periodic_points}"
            )));
        }
        Ok(CycleStructure {
            period,
            classes,
            periodic_points,
        })
    }

    /// `C_k`, zero when `k` does not divide the period.
    pub fn cycles_of_length(&self, k: u64) -> BigUint {
        self.class(k).map(|c| c.cycles.clone()).unwrap_or_default()
    }

    pub fn class(&self, k: u64) -> Option<&CycleClass> {
        self.classes.iter().find(|c| c.length == k)
    }

    /// Lengths that actually occur, ascending.
    pub fn cycle_lengths(&self) -> Vec<u64> {
        self.classes
            .iter()
            .filter(|c| !c.cycles.is_zero())
            .map(|c| c.length)
            .collect()
    }

    /// Nonzero `C_k` keyed by `k`.
    pub fn census(&self) -> BTreeMap<u64, BigUint> {
        self.classes
            .iter()
            .filter(|c| !c.cycles.is_zero())
            .map(|c| (c.length, c.cycles.clone()))
            .collect()
    }

    pub fn total_cycles(&self) -> BigUint {
        self.classes.iter().map(|c| &c.cycles).sum()
    }

    /// `sum_k k C_k`; equals the number of periodic states.
    pub fn weighted_total(&self) -> BigUint {
        self.classes.iter().map(|c| &c.cycles * c.length).sum()
    }
}

fn fingerprint(m: &MatrixZq) -> u64 {
    let mut h = DefaultHasher::new();
    m.as_slice().hash(&mut h);
    h.finish()
}

/// Least `t >= 1` with `A^(B+t) = A^B`.
///
/// Baby steps hash `A^(B+j)` for `j < m = ceil(sqrt(cap))`; a return to
/// `A^B` among them is the answer directly. Otherwise giant steps
/// `A^(B+i m)` are looked up, the first confirmed match yields a period
/// `T = i m - j <= cap`, and `t` is the least divisor of `T` that passes a
/// direct test. Only hashes are stored; every hit is confirmed on the
/// matrices themselves.
pub fn eventual_period(a: &MatrixZq, cfg: &PeriodSearchConfig) -> Result<u64> {
    let bound = bound_for(a)?;
    let cap = cfg.max_period.max(1);
    let base = a.pow_u64(bound)?;
    let overflow = Error::PeriodExceedsCap { cap };

    let steps = cap.isqrt() + u64::from(cap.isqrt().pow(2) < cap);
    let mut table: HashMap<u64, Vec<u64>> = HashMap::new();
    let mut y = base.clone();
    for j in 0..steps {
        if j > 0 && y == base {
            return Ok(j);
        }
        table.entry(fingerprint(&y)).or_default().push(j);
        y = y.mul(a)?;
    }
    let giant = a.pow_u64(steps)?;
    let mut z = base.clone();
    for i in 1..=steps {
        z = z.mul(&giant)?;
        let Some(candidates) = table.get(&fingerprint(&z)) else {
            continue;
        };
        // larger j means a smaller period
        for &j in candidates.iter().rev() {
            if base.mul(&a.pow_u64(j)?)? != z {
                continue;
            }
            let period = i * steps - j;
            if period > cap {
                return Err(overflow);
            }
            for d in divisors(period) {
                if d == period || base.mul(&a.pow_u64(d)?)? == base {
                    return Ok(d);
                }
            }
        }
    }
    Err(overflow)
}

/// Census of the cycles of `x -> A x`: `N_k`, `P_k` and `C_k` for every
/// divisor `k` of the eventual period.
pub fn cycle_structure(a: &MatrixZq, cfg: &PeriodSearchConfig) -> Result<CycleStructure> {
    let period = eventual_period(a, cfg)?;
    let divs = divisors(period);
    let counts = par::map_slice(&divs, |&k| -> Result<BigUint> {
        Ok(a.pow_u64(k)?.sub_identity()?.kernel_size())
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let census = CycleStructure::from_fixed_counts(period, counts)?;

    let chain = image_chain(a)?;
    let stable = chain.last().expect("chain starts with |R^n|");
    if *stable != census.periodic_points {
        return Err(Error::InconsistentCensus(format!(
            "stable image has {stable} states, N_t = {}",
            census.periodic_points
        )));
    }
    if census.class(1).is_none_or(|c| c.fixed_by_power.is_zero()) {
        return Err(Error::InconsistentCensus("zero vector is not fixed".into()));
    }
    Ok(census)
}
