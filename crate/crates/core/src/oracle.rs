//! Brute-force phase graphs of `x -> A x` on small state spaces.
//!
//! States are coordinate vectors encoded mixed-radix, little-endian:
//! coordinate 0 is the least significant digit. Over a product ring each
//! coordinate is itself a tuple, encoded the same way with factor 0 least
//! significant. The encoding is part of the DOT export format.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::ToPrimitive;

use crate::analysis::{lfps_test_with, PeriodSearchConfig, ProductSystem, ShortcutVerdict};
use crate::error::{Error, Result};
use crate::matrix::MatrixZq;
use crate::par;

pub const DEFAULT_ORACLE_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseGraph {
    successors: Vec<usize>,
    census: BTreeMap<u64, u64>,
    max_tail: u64,
    fixed_points: Vec<usize>,
    periodic_count: usize,
}

impl PhaseGraph {
    /// Builds the graph from a total successor map on `0..len`.
    ///
    /// States with no remaining predecessors are stripped repeatedly; what
    /// survives is exactly the union of the cycles, which are then walked.
    pub fn from_successors(successors: Vec<usize>) -> Self {
        let len = successors.len();
        debug_assert!(successors.iter().all(|&s| s < len));

        let mut indegree = vec![0u32; len];
        for &s in &successors {
            indegree[s] += 1;
        }
        let mut stripped: Vec<usize> = (0..len).filter(|&x| indegree[x] == 0).collect();
        let mut head = 0;
        while head < stripped.len() {
            let next = successors[stripped[head]];
            head += 1;
            indegree[next] -= 1;
            if indegree[next] == 0 {
                stripped.push(next);
            }
        }

        // A stripped state's successor is either on a cycle or stripped later.
        let mut tail = vec![0u64; len];
        for &x in stripped.iter().rev() {
            tail[x] = tail[successors[x]] + 1;
        }
        let max_tail = tail.iter().copied().max().unwrap_or(0);

        let mut census = BTreeMap::new();
        let mut seen = vec![false; len];
        let mut periodic_count = 0;
        for start in 0..len {
            if indegree[start] == 0 || seen[start] {
                continue;
            }
            let mut length = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                length += 1;
                x = successors[x];
            }
            periodic_count += length as usize;
            *census.entry(length).or_insert(0) += 1;
        }
        let fixed_points = (0..len).filter(|&x| successors[x] == x).collect();

        PhaseGraph {
            successors,
            census,
            max_tail,
            fixed_points,
            periodic_count,
        }
    }

    pub fn state_count(&self) -> usize {
        self.successors.len()
    }

    pub fn successors(&self) -> &[usize] {
        &self.successors
    }

    /// Cycle length to number of cycles.
    pub fn census(&self) -> &BTreeMap<u64, u64> {
        &self.census
    }

    pub fn max_tail(&self) -> u64 {
        self.max_tail
    }

    pub fn fixed_points(&self) -> &[usize] {
        &self.fixed_points
    }

    pub fn periodic_count(&self) -> usize {
        self.periodic_count
    }

    pub fn is_permutation(&self) -> bool {
        self.max_tail == 0
    }

    /// Every cycle has length 1.
    pub fn is_fixed_point_system(&self) -> bool {
        self.census.keys().all(|&k| k == 1)
    }

    /// `digraph { i -> j; ... }`, one node and one edge per state.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph {\n");
        for (i, &j) in self.successors.iter().enumerate() {
            let _ = writeln!(out, "  {i} -> {j};");
        }
        out.push_str("}\n");
        out
    }
}

/// Mixed-radix codec for states of a product system.
struct StateCodec {
    moduli: Vec<u64>,
    element_count: usize,
    dim: usize,
}

impl StateCodec {
    fn new(sys: &ProductSystem) -> Self {
        let moduli: Vec<u64> = sys.ring().moduli().iter().map(|q| q.get()).collect();
        let element_count = moduli.iter().product::<u64>() as usize;
        StateCodec {
            moduli,
            element_count,
            dim: sys.dim(),
        }
    }

    /// Per-factor coordinate vectors of `state`.
    fn decode(&self, mut state: usize) -> Vec<Vec<u64>> {
        let mut parts = vec![Vec::with_capacity(self.dim); self.moduli.len()];
        for _ in 0..self.dim {
            let mut elem = state % self.element_count;
            state /= self.element_count;
            for (part, &q) in parts.iter_mut().zip(&self.moduli) {
                part.push(elem as u64 % q);
                elem /= q as usize;
            }
        }
        parts
    }

    fn encode(&self, parts: &[Vec<u64>]) -> usize {
        let mut state = 0usize;
        for i in (0..self.dim).rev() {
            let mut elem = 0usize;
            for (part, &q) in parts.iter().zip(&self.moduli).rev() {
                elem = elem * q as usize + part[i] as usize;
            }
            state = state * self.element_count + elem;
        }
        state
    }
}

fn checked_state_count(sys: &ProductSystem, cap: u64) -> Result<usize> {
    let size = sys.state_count();
    match size.to_u64() {
        Some(s) if s <= cap => {
            usize::try_from(s).map_err(|_| Error::StateSpaceTooLarge { size, cap })
        }
        _ => Err(Error::StateSpaceTooLarge { size, cap }),
    }
}

/// Full functional graph of a system over a product ring.
pub fn enumerate_product_phase_graph(sys: &ProductSystem, cap: u64) -> Result<PhaseGraph> {
    let len = checked_state_count(sys, cap)?;
    let codec = StateCodec::new(sys);
    let successors = par::map_range(len, |state| {
        let parts = codec.decode(state);
        let images: Vec<Vec<u64>> = sys
            .components()
            .iter()
            .zip(&parts)
            .map(|(a, x)| a.mul_vec(x))
            .collect();
        codec.encode(&images)
    });
    Ok(PhaseGraph::from_successors(successors))
}

pub fn enumerate_phase_graph(a: &MatrixZq, cap: u64) -> Result<PhaseGraph> {
    enumerate_product_phase_graph(&ProductSystem::single(a.clone())?, cap)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub oracle: String,
    pub analytic: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrosscheckReport {
    pub state_count: usize,
    pub checks: Vec<Check>,
}

impl CrosscheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: &str, oracle: impl ToString, analytic: impl ToString) {
        let (oracle, analytic) = (oracle.to_string(), analytic.to_string());
        self.checks.push(Check {
            name: name.to_string(),
            passed: oracle == analytic,
            oracle,
            analytic,
        });
    }
}

fn census_string<V: ToString>(census: impl IntoIterator<Item = (u64, V)>) -> String {
    let parts: Vec<String> = census
        .into_iter()
        .map(|(k, c)| format!("{k}:{}", c.to_string()))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

/// Compares the enumerated phase graph with the analytic results: the
/// power-test verdict, the unit-determinant shortcut when it is decisive,
/// `N_1`, the number of periodic states, the full cycle
/// census and the tail-length bound.
pub fn oracle_crosscheck_product(
    sys: &ProductSystem,
    cap: u64,
    cfg: &PeriodSearchConfig,
) -> Result<CrosscheckReport> {
    let graph = enumerate_product_phase_graph(sys, cap)?;
    let mut power_test = true;
    for a in sys.components() {
        power_test &= lfps_test_with(a, cfg)?.is_fixed_point;
    }
    let shortcut = sys.unit_det_shortcut()?;
    let census = sys.cycle_structure(cfg)?;
    let bound = sys.iteration_bound();

    let mut report = CrosscheckReport {
        state_count: graph.state_count(),
        checks: Vec::new(),
    };
    report.push(
        "fixed-point verdict",
        graph.is_fixed_point_system(),
        power_test,
    );
    if shortcut != ShortcutVerdict::Inconclusive {
        report.push(
            "unit-determinant shortcut",
            graph.is_fixed_point_system(),
            shortcut == ShortcutVerdict::FixedPointIdentity,
        );
    }
    report.push(
        "fixed points",
        graph.fixed_points().len(),
        census
            .class(1)
            .map(|c| c.fixed_by_power.clone())
            .unwrap_or_default(),
    );
    report.push(
        "periodic states",
        graph.periodic_count(),
        &census.periodic_points,
    );
    report.push(
        "cycle census",
        census_string(graph.census().iter().map(|(&k, &c)| (k, c))),
        census_string(census.census()),
    );
    report.push("tail within bound", graph.max_tail() <= bound, true);
    Ok(report)
}

pub fn oracle_crosscheck(
    a: &MatrixZq,
    cap: u64,
    cfg: &PeriodSearchConfig,
) -> Result<CrosscheckReport> {
    oracle_crosscheck_product(&ProductSystem::single(a.clone())?, cap, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{cycle_structure, lfps_test};
    use crate::ring::{Modulus, RingSpec};
    use crate::testing::*;
    use num_bigint::BigUint;

    #[test]
    fn nilpotent_z8_graph() {
        let g = enumerate_phase_graph(&nilpotent_z8(), DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(g.state_count(), 64);
        assert_eq!(g.census(), &BTreeMap::from([(1, 1)]));
        assert_eq!(g.fixed_points(), &[0]);
        assert_eq!(g.max_tail(), 6);
        assert!(g.is_fixed_point_system());
        assert!(!g.is_permutation());
    }

    #[test]
    fn identity_graph() {
        let i = MatrixZq::identity(Modulus::new(3).unwrap(), 2);
        let g = enumerate_phase_graph(&i, DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(g.fixed_points().len(), 9);
        assert_eq!(g.max_tail(), 0);
        assert!(g.is_permutation());
    }

    #[test]
    fn scalar_graph() {
        let g = enumerate_phase_graph(&scalar(5, 4), DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(g.successors(), &[0, 4, 3, 2, 1]);
        assert_eq!(g.census(), &BTreeMap::from([(1, 1), (2, 2)]));
        let report =
            oracle_crosscheck(&scalar(5, 4), DEFAULT_ORACLE_CAP, &Default::default()).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn dot_export() {
        let g = enumerate_phase_graph(&scalar(2, 1), DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(g.to_dot(), "digraph {\n  0 -> 0;\n  1 -> 1;\n}\n");
    }

    #[test]
    fn state_encoding_is_little_endian() {
        // A = [[0,0],[1,0]] sends (x0, x1) to (0, x0): state x0 + 3 x1 -> 3 x0
        let a = MatrixZq::from_rows(Modulus::new(3).unwrap(), &[[0, 0], [1, 0]]).unwrap();
        let g = enumerate_phase_graph(&a, DEFAULT_ORACLE_CAP).unwrap();
        for x0 in 0..3 {
            for x1 in 0..3 {
                assert_eq!(g.successors()[x0 + 3 * x1], 3 * x0);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_phase_graph(&period24_z105(), DEFAULT_ORACLE_CAP).unwrap_err();
        assert_eq!(
            err,
            Error::StateSpaceTooLarge {
                size: BigUint::from(121_550_625u64),
                cap: DEFAULT_ORACLE_CAP
            }
        );
    }

    #[test]
    fn period_24_system_by_crt_components() {
        // Enumerate mod 3, 5 and 7 separately and combine the periods of each
        // triple of cycles: a cycle triple of lengths (a, b, c) contributes
        // a*b*c / lcm(a,b,c) cycles of length lcm(a,b,c).
        let a = period24_z105();
        let mut combined: BTreeMap<u64, u64> = BTreeMap::from([(1, 1)]);
        for q in [3u64, 5, 7] {
            let md = Modulus::new(q).unwrap();
            let reduced = MatrixZq::new(md, 4, 4, a.as_slice().to_vec()).unwrap();
            let g = enumerate_phase_graph(&reduced, DEFAULT_ORACLE_CAP).unwrap();
            let mut next = BTreeMap::new();
            for (&l1, &c1) in &combined {
                for (&l2, &c2) in g.census() {
                    let l = num_integer::lcm(l1, l2);
                    *next.entry(l).or_insert(0) += c1 * c2 * l1 * l2 / l;
                }
            }
            combined = next;
        }
        let c = cycle_structure(&a, &Default::default()).unwrap();
        let analytic: BTreeMap<u64, u64> = c
            .census()
            .into_iter()
            .map(|(k, v)| (k, v.to_u64().unwrap()))
            .collect();
        assert_eq!(analytic, combined);
        assert_eq!(combined.get(&1), Some(&105));
        assert!(!lfps_test(&a).unwrap());
    }

    #[test]
    fn product_ring_oracle() {
        let ring = RingSpec::new(&[4, 3]).unwrap();
        let sys =
            ProductSystem::from_entries(ring, 2, &[vec![1, 2], vec![2, 1], vec![3, 0], vec![1, 1]])
                .unwrap();
        let g = enumerate_product_phase_graph(&sys, DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(g.state_count(), 144);
        let report =
            oracle_crosscheck_product(&sys, DEFAULT_ORACLE_CAP, &Default::default()).unwrap();
        assert!(report.passed(), "{report:?}");
    }
}
