//! Division-free characteristic polynomial (Berkowitz).
//!
//! Gaussian elimination needs inverses, which Z/qZ lacks for composite q.
//! Berkowitz only multiplies and adds: for each leading principal block it
//! forms the Toeplitz column `(1, -a_kk, -R C, -R A C, ..., -R A^(k-1) C)` and
//! folds it into the running coefficient vector.

use super::{MatrixZq, PolyZq};
use crate::error::Result;
use crate::ring::Residue;

impl MatrixZq {
    /// Monic `det(λI - A)` of degree `n`.
    pub fn charpoly(&self) -> Result<PolyZq> {
        let n = self.require_square()?;
        let m = self.modulus;
        // Coefficients of the current block's polynomial, highest degree first.
        let mut desc: Vec<u64> = vec![1];
        let mut toeplitz = Vec::with_capacity(n + 1);
        for k in 0..n {
            // Block A_k = rows/cols < k; R = row k, C = column k, both cut at k.
            toeplitz.clear();
            toeplitz.push(1);
            toeplitz.push(m.neg(self.get(k, k)));
            let mut v: Vec<u64> = (0..k).map(|i| self.get(i, k)).collect();
            for _ in 0..k {
                let rv = (0..k).fold(0, |acc, j| m.add(acc, m.mul(self.get(k, j), v[j])));
                toeplitz.push(m.neg(rv));
                v = (0..k)
                    .map(|i| (0..k).fold(0, |acc, j| m.add(acc, m.mul(self.get(i, j), v[j]))))
                    .collect();
            }
            let next: Vec<u64> = (0..k + 2)
                .map(|r| {
                    (0..=r.min(k)).fold(0, |acc, c| m.add(acc, m.mul(toeplitz[r - c], desc[c])))
                })
                .collect();
            desc = next;
        }
        desc.reverse();
        Ok(PolyZq::new(m, desc))
    }

    /// `det A = (-1)^n ch_A(0)`.
    pub fn determinant(&self) -> Result<Residue> {
        let n = self.require_square()?;
        let c0 = self.charpoly()?.coeff(0);
        let det = if n % 2 == 0 { c0 } else { self.modulus.neg(c0) };
        Ok(Residue::new(det, self.modulus))
    }
}
