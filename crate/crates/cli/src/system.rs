//! The line-oriented system file format.
//!
//! ```text
//! # comment
//! modulus = 4, 3
//! n = 2
//! row = 1|2 3|0
//! row = 0|1 1|1
//! ```
//!
//! With several moduli every entry is written `a|b|...`, one residue per
//! modulus in the same order. Entries outside `[0, q)` are reduced and
//! reported as warnings.

use std::fmt;
use std::path::PathBuf;

use lds_core::{MatrixZq, Modulus, ProductSystem, RingSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemFile {
    pub moduli: Vec<u64>,
    pub n: usize,
    /// Row-major, `n * n` entries, each with one residue per modulus.
    pub entries: Vec<Vec<u64>>,
    pub source: Option<PathBuf>,
    pub warnings: Vec<Warning>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Warning {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: modulus {value} is out of range (need 2 <= q < 2^63)")]
    Modulus { line: usize, value: String },
    #[error("line {line}: expected {expected} entries, found {found}")]
    RowLength {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error(
        "line {line}: entry {entry:?} has {found} residues, expected one per modulus ({expected})"
    )]
    Components {
        line: usize,
        entry: String,
        expected: usize,
        found: usize,
    },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("missing `{0} = ...` line")]
    Missing(&'static str),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut moduli: Option<Vec<u64>> = None;
        let mut n: Option<usize> = None;
        let mut entries = Vec::new();
        let mut rows = 0usize;
        let mut warnings = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| {
                syntax(line, format!("expected `key = value`, found {content:?}"))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "modulus" => {
                    if moduli.is_some() {
                        return Err(syntax(line, "duplicate `modulus`"));
                    }
                    if rows > 0 {
                        return Err(syntax(line, "`modulus` must precede the rows"));
                    }
                    moduli = Some(parse_moduli(line, value)?);
                }
                "n" => {
                    if n.is_some() {
                        return Err(syntax(line, "duplicate `n`"));
                    }
                    let dim: usize = value
                        .parse()
                        .map_err(|_| syntax(line, format!("invalid dimension {value:?}")))?;
                    if dim == 0 {
                        return Err(syntax(line, "dimension must be at least 1"));
                    }
                    n = Some(dim);
                }
                "row" => {
                    let moduli = moduli
                        .as_deref()
                        .ok_or_else(|| syntax(line, "`row` before `modulus`"))?;
                    let dim = n.ok_or_else(|| syntax(line, "`row` before `n`"))?;
                    if rows == dim {
                        return Err(syntax(line, format!("more than {dim} rows")));
                    }
                    let row = parse_row(line, value, moduli, &mut warnings)?;
                    if row.len() != dim {
                        return Err(ParseError::RowLength {
                            line,
                            expected: dim,
                            found: row.len(),
                        });
                    }
                    entries.extend(row);
                    rows += 1;
                }
                other => return Err(syntax(line, format!("unknown key {other:?}"))),
            }
        }

        let moduli = moduli.ok_or(ParseError::Missing("modulus"))?;
        let n = n.ok_or(ParseError::Missing("n"))?;
        if rows != n {
            return Err(ParseError::RowCount {
                expected: n,
                found: rows,
            });
        }
        Ok(SystemFile {
            moduli,
            n,
            entries,
            source: None,
            warnings,
        })
    }

    pub fn ring(&self) -> RingSpec {
        RingSpec::new(&self.moduli).expect("moduli validated on parse")
    }

    pub fn system(&self) -> ProductSystem {
        let components = self
            .moduli
            .iter()
            .enumerate()
            .map(|(c, &q)| {
                let q = Modulus::new(q).expect("moduli validated on parse");
                let data = self.entries.iter().map(|e| e[c]).collect();
                MatrixZq::new(q, self.n, self.n, data).expect("shape validated on parse")
            })
            .collect();
        ProductSystem::new(self.ring(), components).expect("consistent by construction")
    }
}

fn parse_moduli(line: usize, value: &str) -> Result<Vec<u64>, ParseError> {
    value
        .split(',')
        .map(|part| {
            let part = part.trim();
            if part.is_empty() {
                return Err(syntax(line, "empty modulus"));
            }
            let q: i128 = part
                .parse()
                .map_err(|_| syntax(line, format!("invalid modulus {part:?}")))?;
            u64::try_from(q)
                .ok()
                .filter(|&q| Modulus::new(q).is_ok())
                .ok_or(ParseError::Modulus {
                    line,
                    value: part.to_string(),
                })
        })
        .collect()
}

fn parse_row(
    line: usize,
    value: &str,
    moduli: &[u64],
    warnings: &mut Vec<Warning>,
) -> Result<Vec<Vec<u64>>, ParseError> {
    value
        .split_whitespace()
        .map(|entry| {
            let parts: Vec<&str> = entry.split('|').collect();
            if parts.len() != moduli.len() {
                return Err(ParseError::Components {
                    line,
                    entry: entry.to_string(),
                    expected: moduli.len(),
                    found: parts.len(),
                });
            }
            parts
                .iter()
                .zip(moduli)
                .map(|(part, &q)| {
                    let x: i128 = part
                        .parse()
                        .map_err(|_| syntax(line, format!("invalid entry {part:?}")))?;
                    let r = x.rem_euclid(q as i128) as u64;
                    if x != r as i128 {
                        warnings.push(Warning {
                            line,
                            message: format!("entry {x} reduced to {r} mod {q}"),
                        });
                    }
                    Ok(r)
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_modulus() {
        let f = SystemFile::parse("# identity\nmodulus = 2\nn = 1\nrow = 1\n").unwrap();
        assert_eq!(f.moduli, vec![2]);
        assert_eq!(f.entries, vec![vec![1]]);
        assert!(f.warnings.is_empty());
        assert!(f.system().is_identity());
    }

    #[test]
    fn product_ring() {
        let f =
            SystemFile::parse("modulus = 4, 3\nn = 2\nrow = 1|2 3|0\nrow = 0|1 1|1  # trailing\n")
                .unwrap();
        assert_eq!(
            f.entries,
            vec![vec![1, 2], vec![3, 0], vec![0, 1], vec![1, 1]]
        );
        let sys = f.system();
        assert_eq!(sys.components()[0].as_slice(), &[1, 3, 0, 1]);
        assert_eq!(sys.components()[1].as_slice(), &[2, 0, 1, 1]);
    }

    #[test]
    fn out_of_range_entries_are_reduced() {
        let f = SystemFile::parse("modulus = 105\nn = 1\nrow = 106\n").unwrap();
        assert_eq!(f.entries, vec![vec![1]]);
        assert_eq!(
            f.warnings,
            vec![Warning {
                line: 3,
                message: "entry 106 reduced to 1 mod 105".into()
            }]
        );
        let f = SystemFile::parse("modulus = 7\nn = 1\nrow = -1\n").unwrap();
        assert_eq!(f.entries, vec![vec![6]]);
        assert_eq!(f.warnings.len(), 1);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(
            SystemFile::parse("modulus = 1\nn = 1\nrow = 0\n"),
            Err(ParseError::Modulus {
                line: 1,
                value: "1".into()
            })
        );
        assert_eq!(
            SystemFile::parse("modulus = 5\nn = 2\nrow = 1 2\nrow = 1\n"),
            Err(ParseError::RowLength {
                line: 4,
                expected: 2,
                found: 1
            })
        );
        assert_eq!(
            SystemFile::parse("modulus = 5\nn = 2\nrow = 1 2\n"),
            Err(ParseError::RowCount {
                expected: 2,
                found: 1
            })
        );
        assert!(matches!(
            SystemFile::parse("modulus = 5\n\nn = 1\nrow = x\n"),
            Err(ParseError::Syntax { line: 4, .. })
        ));
        assert!(matches!(
            SystemFile::parse("modulus = 4, 3\nn = 1\nrow = 1\n"),
            Err(ParseError::Components { line: 3, .. })
        ));
        assert!(matches!(
            SystemFile::parse("n = 1\nrow = 1\n"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
        assert_eq!(
            SystemFile::parse("n = 1\n"),
            Err(ParseError::Missing("modulus"))
        );
        assert!(matches!(
            SystemFile::parse("modulus = 9223372036854775808\nn = 1\nrow = 1\n"),
            Err(ParseError::Modulus { line: 1, .. })
        ));
    }
}
