use std::fmt;

use crate::error::{Error, Result};
use crate::ring::Modulus;

/// Polynomial over Z/qZ in the variable λ, coefficients in ascending order.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial has
/// an empty coefficient vector and `degree() == None`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyZq {
    modulus: Modulus,
    coeffs: Vec<u64>,
}

impl PolyZq {
    pub fn new(modulus: Modulus, coeffs: Vec<u64>) -> Self {
        let coeffs = coeffs.into_iter().map(|c| modulus.reduce(c)).collect();
        let mut p = PolyZq { modulus, coeffs };
        p.trim();
        p
    }

    pub fn from_i64(modulus: Modulus, coeffs: &[i64]) -> Self {
        Self::new(
            modulus,
            coeffs.iter().map(|&c| modulus.reduce_i64(c)).collect(),
        )
    }

    pub fn zero(modulus: Modulus) -> Self {
        PolyZq {
            modulus,
            coeffs: Vec::new(),
        }
    }

    pub fn one(modulus: Modulus) -> Self {
        Self::monomial(modulus, 0)
    }

    /// `λ^k`.
    pub fn monomial(modulus: Modulus, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        PolyZq { modulus, coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    fn check(&self, rhs: &PolyZq) -> Result<()> {
        if self.modulus != rhs.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus.get(),
                right: rhs.modulus.get(),
            });
        }
        Ok(())
    }

    pub fn add(&self, rhs: &PolyZq) -> Result<PolyZq> {
        self.check(rhs)?;
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len)
            .map(|i| self.modulus.add(self.coeff(i), rhs.coeff(i)))
            .collect();
        Ok(PolyZq::new(self.modulus, coeffs))
    }

    /// Coefficient convolution mod q.
    pub fn mul(&self, rhs: &PolyZq) -> Result<PolyZq> {
        self.check(rhs)?;
        if self.is_zero() || rhs.is_zero() {
            return Ok(PolyZq::zero(self.modulus));
        }
        let m = self.modulus;
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = m.add(out[i + j], m.mul(a, b));
            }
        }
        let mut p = PolyZq {
            modulus: m,
            coeffs: out,
        };
        p.trim();
        Ok(p)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let m = self.modulus;
        let x = m.reduce(x);
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| m.add(m.mul(acc, x), c))
    }
}

impl fmt::Display for PolyZq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "λ")?,
                (1, c) => write!(f, "{c}λ")?,
                (i, 1) => write!(f, "λ^{i}")?,
                (i, c) => write!(f, "{c}λ^{i}")?,
            }
        }
        Ok(())
    }
}
