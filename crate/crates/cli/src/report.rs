//! Reports and their text and JSON renderings.
//!
//! Both renderings carry the same numbers: the text form is produced from
//! the same struct that is serialized to JSON, so a JSON report can be read
//! back and rendered as the identical text report.

use std::fmt::{self, Write as _};

use lds_core::{Modulus, PhaseGraph, PolyZq};
use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A ring element: one residue per modulus. Serialized as a bare number
/// over a single modulus and as an array over a product ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element(pub Vec<u64>);

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        f.pad(&parts.join("|"))
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.as_slice() {
            [x] => s.serialize_u64(*x),
            parts => parts.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            One(u64),
            Many(Vec<u64>),
        }
        Ok(match Repr::deserialize(d)? {
            Repr::One(x) => Element(vec![x]),
            Repr::Many(v) => Element(v),
        })
    }
}

/// Arbitrary-precision count, serialized as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Count(pub BigUint);

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(&self.0.to_string())
    }
}

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Count {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse()
            .map(Count)
            .map_err(|_| serde::de::Error::custom(format!("invalid count {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LfpsReport {
    pub moduli: Vec<u64>,
    pub n: usize,
    pub fixed_point: bool,
    pub bound: u64,
    /// Decided by the unit-determinant test without powering.
    pub shortcut: bool,
    pub determinant: Element,
    /// Exponent at which `--early-exit` stopped.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stopped_at: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizeReport {
    pub moduli: Vec<u64>,
    pub n: usize,
    pub bound: u64,
    pub fixed_point: bool,
    pub minimal_fixed_exponent: Option<u64>,
    pub image_chain: Vec<Count>,
    /// `A^bound`, row by row.
    pub stabilized: Vec<Vec<Element>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharpolyReport {
    pub moduli: Vec<u64>,
    pub n: usize,
    /// Ascending: `coefficients[i]` multiplies `λ^i`.
    pub coefficients: Vec<Element>,
    pub determinant: Element,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleRow {
    pub k: u64,
    /// States fixed by `A^k`.
    pub n_k: Count,
    /// States of exact period `k`.
    pub p_k: Count,
    /// Cycles of length `k`.
    pub c_k: Count,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclesReport {
    pub moduli: Vec<u64>,
    pub n: usize,
    pub period: u64,
    pub classes: Vec<CycleRow>,
    pub periodic_points: Count,
    pub total_cycles: Count,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseGraphReport {
    pub moduli: Vec<u64>,
    pub n: usize,
    /// `successors[i]` is the state index of `A x` for state `i`.
    pub successors: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub oracle: String,
    pub analytic: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscheckSummary {
    pub moduli: Vec<u64>,
    pub n: usize,
    pub states: usize,
    pub passed: bool,
    pub checks: Vec<CheckRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Report {
    Lfps(LfpsReport),
    Stabilize(StabilizeReport),
    Charpoly(CharpolyReport),
    Cycles(CyclesReport),
    PhaseGraph(PhaseGraphReport),
    Crosscheck(CrosscheckSummary),
}

fn join<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn header(out: &mut String, moduli: &[u64], n: usize) {
    let _ = writeln!(out, "moduli: {}", join(moduli, ", "));
    let _ = writeln!(out, "n: {n}");
}

fn optional<T: fmt::Display>(value: &Option<T>) -> String {
    value
        .as_ref()
        .map_or_else(|| "none".to_string(), T::to_string)
}

/// Right-aligned columns.
fn table(out: &mut String, head: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = head.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let _ = writeln!(
        out,
        "{}",
        line(head.iter().map(|h| h.to_string()).collect())
    );
    for row in rows {
        let _ = writeln!(out, "{}", line(row.clone()));
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            Report::Lfps(r) => {
                header(&mut out, &r.moduli, r.n);
                let _ = writeln!(out, "fixed_point: {}", r.fixed_point);
                let _ = writeln!(out, "bound: {}", r.bound);
                let _ = writeln!(out, "shortcut: {}", r.shortcut);
                let _ = writeln!(out, "determinant: {}", r.determinant);
                if let Some(e) = r.stopped_at {
                    let _ = writeln!(out, "stopped_at: {e}");
                }
            }
            Report::Stabilize(r) => {
                header(&mut out, &r.moduli, r.n);
                let _ = writeln!(out, "bound: {}", r.bound);
                let _ = writeln!(out, "fixed_point: {}", r.fixed_point);
                let _ = writeln!(
                    out,
                    "minimal_fixed_exponent: {}",
                    optional(&r.minimal_fixed_exponent)
                );
                let _ = writeln!(out, "image_chain: {}", join(&r.image_chain, " "));
                let _ = writeln!(out, "stabilized:");
                let width = r
                    .stabilized
                    .iter()
                    .flatten()
                    .map(|e| e.to_string().len())
                    .max()
                    .unwrap_or(1);
                for row in &r.stabilized {
                    let cells: Vec<String> = row.iter().map(|e| format!("{e:>width$}")).collect();
                    let _ = writeln!(out, "  {}", cells.join(" "));
                }
            }
            Report::Charpoly(r) => {
                header(&mut out, &r.moduli, r.n);
                let _ = writeln!(out, "coefficients: {}", join(&r.coefficients, " "));
                if let [q] = r.moduli.as_slice() {
                    if let Ok(q) = Modulus::new(*q) {
                        let coeffs = r.coefficients.iter().map(|e| e.0[0]).collect();
                        let _ = writeln!(out, "polynomial: {}", PolyZq::new(q, coeffs));
                    }
                }
                let _ = writeln!(out, "determinant: {}", r.determinant);
            }
            Report::Cycles(r) => {
                header(&mut out, &r.moduli, r.n);
                let _ = writeln!(out, "period: {}", r.period);
                let rows: Vec<Vec<String>> = r
                    .classes
                    .iter()
                    .map(|c| {
                        vec![
                            c.k.to_string(),
                            c.n_k.to_string(),
                            c.p_k.to_string(),
                            c.c_k.to_string(),
                        ]
                    })
                    .collect();
                table(&mut out, &["k", "N_k", "P_k", "C_k"], &rows);
                let _ = writeln!(out, "periodic_points: {}", r.periodic_points);
                let _ = writeln!(out, "total_cycles: {}", r.total_cycles);
            }
            Report::PhaseGraph(r) => {
                out = PhaseGraph::from_successors(r.successors.clone()).to_dot();
            }
            Report::Crosscheck(r) => {
                header(&mut out, &r.moduli, r.n);
                let _ = writeln!(out, "states: {}", r.states);
                let _ = writeln!(out, "passed: {}", r.passed);
                for c in &r.checks {
                    let verdict = if c.passed { "pass" } else { "FAIL" };
                    let _ = writeln!(
                        out,
                        "{}: {verdict} (oracle {}, analytic {})",
                        c.name, c.oracle, c.analytic
                    );
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_encoding() {
        assert_eq!(serde_json::to_string(&Element(vec![7])).unwrap(), "7");
        assert_eq!(
            serde_json::to_string(&Element(vec![1, 2])).unwrap(),
            "[1,2]"
        );
        assert_eq!(Element(vec![1, 2]).to_string(), "1|2");
        let back: Element = serde_json::from_str("[3,0]").unwrap();
        assert_eq!(back, Element(vec![3, 0]));
    }

    #[test]
    fn counts_are_strings() {
        let c = Count(BigUint::from(121_550_625u64) * 1_000_000_000_000u64);
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, "\"121550625000000000000\"");
        assert_eq!(serde_json::from_str::<Count>(&json).unwrap(), c);
    }

    #[test]
    fn cycles_table_is_aligned() {
        let r = Report::Cycles(CyclesReport {
            moduli: vec![5],
            n: 1,
            period: 2,
            classes: vec![
                CycleRow {
                    k: 1,
                    n_k: Count(1u32.into()),
                    p_k: Count(1u32.into()),
                    c_k: Count(1u32.into()),
                },
                CycleRow {
                    k: 2,
                    n_k: Count(5u32.into()),
                    p_k: Count(4u32.into()),
                    c_k: Count(2u32.into()),
                },
            ],
            periodic_points: Count(5u32.into()),
            total_cycles: Count(3u32.into()),
        });
        assert_eq!(
            r.to_text(),
            "moduli: 5\nn: 1\nperiod: 2\n\
             k  N_k  P_k  C_k\n\
             1    1    1    1\n\
             2    5    4    2\n\
             periodic_points: 5\ntotal_cycles: 3\n"
        );
    }
}
