//! Dense matrices over Z/qZ.

mod charpoly;
mod howell;
mod poly;

use std::fmt;
use std::ops::ControlFlow;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::par;
use crate::ring::{Modulus, Residue};

pub use howell::{HowellForm, Pivot};
pub use poly::PolyZq;

/// Products with fewer multiply-adds than this stay on the calling thread.
const PARALLEL_MUL_THRESHOLD: usize = 1 << 15;

/// Row-major `rows x cols` matrix with canonical entries in `[0, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixZq {
    modulus: Modulus,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

/// One step of left-to-right square-and-multiply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowStep {
    /// `X <- X X`
    Square,
    /// `X <- A X`
    MultiplyBase,
}

impl MatrixZq {
    /// Builds a matrix from row-major entries, reducing each mod `q`.
    pub fn new(modulus: Modulus, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::EntryCount {
                rows,
                cols,
                found: data.len(),
            });
        }
        let data = data.into_iter().map(|x| modulus.reduce(x)).collect();
        Ok(MatrixZq {
            modulus,
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from rows of signed integers, reducing canonically.
    pub fn from_rows<R: AsRef<[i64]>>(modulus: Modulus, rows: &[R]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n_cols {
                return Err(Error::DimensionMismatch {
                    left_rows: 1,
                    left_cols: n_cols,
                    right_rows: 1,
                    right_cols: r.len(),
                });
            }
            data.extend(r.iter().map(|&x| modulus.reduce_i64(x)));
        }
        Self::new(modulus, n_rows, n_cols, data)
    }

    pub fn identity(modulus: Modulus, n: usize) -> Self {
        let mut m = Self::zeros(modulus, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn zeros(modulus: Modulus, rows: usize, cols: usize) -> Self {
        MatrixZq {
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn residue(&self, i: usize, j: usize) -> Residue {
        Residue::new(self.get(i, j), self.modulus)
    }

    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        self.data[i * self.cols + j] = self.modulus.reduce(value);
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u64]> {
        self.data.chunks(self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && self
                .data
                .iter()
                .enumerate()
                .all(|(k, &x)| x == u64::from(k / self.cols == k % self.cols))
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn check_modulus(&self, other: &MatrixZq) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus.get(),
                right: other.modulus.get(),
            });
        }
        Ok(())
    }

    fn dimension_error(&self, other: &MatrixZq) -> Error {
        Error::DimensionMismatch {
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }

    pub fn transpose(&self) -> MatrixZq {
        let mut data = vec![0; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        MatrixZq {
            modulus: self.modulus,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn add(&self, rhs: &MatrixZq) -> Result<MatrixZq> {
        self.zip_with(rhs, |m, a, b| m.add(a, b))
    }

    pub fn sub(&self, rhs: &MatrixZq) -> Result<MatrixZq> {
        self.zip_with(rhs, |m, a, b| m.sub(a, b))
    }

    fn zip_with(&self, rhs: &MatrixZq, f: impl Fn(Modulus, u64, u64) -> u64) -> Result<MatrixZq> {
        self.check_modulus(rhs)?;
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(self.dimension_error(rhs));
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| f(self.modulus, a, b))
            .collect();
        Ok(MatrixZq { data, ..*self })
    }

    /// `A - I`.
    pub fn sub_identity(&self) -> Result<MatrixZq> {
        let n = self.require_square()?;
        let mut out = self.clone();
        for i in 0..n {
            let k = i * n + i;
            out.data[k] = self.modulus.sub(out.data[k], 1);
        }
        Ok(out)
    }

    pub fn scale(&self, c: u64) -> MatrixZq {
        let c = self.modulus.reduce(c);
        let data = self.data.iter().map(|&x| self.modulus.mul(x, c)).collect();
        MatrixZq { data, ..*self }
    }

    /// `A v` for a column vector of canonical residues.
    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        debug_assert_eq!(v.len(), self.cols);
        let limit = lazy_limit(self.modulus);
        self.row_iter()
            .map(|row| dot(row, v, self.modulus, limit))
            .collect()
    }

    /// Exact product, classical O(n^3) schedule. Rows of the result are
    /// computed in parallel when the `parallel` feature is on.
    pub fn mul(&self, rhs: &MatrixZq) -> Result<MatrixZq> {
        if self.rows * self.cols * rhs.cols < PARALLEL_MUL_THRESHOLD {
            return self.mul_seq(rhs);
        }
        self.mul_with(rhs, |out, chunk, f| par::for_each_chunk_mut(out, chunk, f))
    }

    /// Same product on the calling thread only.
    pub fn mul_seq(&self, rhs: &MatrixZq) -> Result<MatrixZq> {
        self.mul_with(rhs, |out, chunk, f| {
            par::for_each_chunk_mut_seq(out, chunk, f)
        })
    }

    fn mul_with<D>(&self, rhs: &MatrixZq, drive: D) -> Result<MatrixZq>
    where
        D: FnOnce(&mut [u64], usize, &(dyn Fn(usize, &mut [u64]) + Send + Sync)),
    {
        self.check_modulus(rhs)?;
        if self.cols != rhs.rows {
            return Err(self.dimension_error(rhs));
        }
        let modulus = self.modulus;
        let limit = lazy_limit(modulus);
        let rhs_t = rhs.transpose();
        let mut out = vec![0u64; self.rows * rhs.cols];
        let kernel = |i: usize, out_row: &mut [u64]| {
            let lhs_row = self.row(i);
            for (o, col) in out_row.iter_mut().zip(rhs_t.row_iter()) {
                *o = dot(lhs_row, col, modulus, limit);
            }
        };
        drive(&mut out, rhs.cols, &kernel);
        Ok(MatrixZq {
            modulus,
            rows: self.rows,
            cols: rhs.cols,
            data: out,
        })
    }

    /// `A^e` by left-to-right square-and-multiply: `X <- I`, then for each
    /// bit of `e` from the top, `X <- X X` and, on a one bit, `X <- A X`.
    pub fn pow(&self, e: &BigUint) -> Result<MatrixZq> {
        let mut last = None;
        self.pow_with(e, |_, x| {
            last = Some(x.clone());
            ControlFlow::Continue(())
        })?;
        Ok(last.unwrap_or_else(|| MatrixZq::identity(self.modulus, self.rows)))
    }

    pub fn pow_u64(&self, e: u64) -> Result<MatrixZq> {
        self.pow(&BigUint::from(e))
    }

    /// Runs the square-and-multiply loop, handing `visit` the exponent
    /// reached and the current power after each bit is consumed. `visit`
    /// may stop the loop early; the last visited power is returned either
    /// way (`I` for `e = 0`).
    pub fn pow_with<F>(&self, e: &BigUint, mut visit: F) -> Result<MatrixZq>
    where
        F: FnMut(&BigUint, &MatrixZq) -> ControlFlow<()>,
    {
        let n = self.require_square()?;
        let mut x = MatrixZq::identity(self.modulus, n);
        let mut reached = BigUint::zero();
        for i in (0..e.bits()).rev() {
            x = x.mul(&x)?;
            reached <<= 1;
            if e.bit(i) {
                x = self.mul(&x)?;
                reached += 1u32;
            }
            if visit(&reached, &x).is_break() {
                break;
            }
        }
        Ok(x)
    }

    /// Evaluates `p(A)` by Horner's rule.
    pub fn eval_poly(&self, p: &PolyZq) -> Result<MatrixZq> {
        let n = self.require_square()?;
        if p.modulus() != self.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus.get(),
                right: p.modulus().get(),
            });
        }
        let mut acc = MatrixZq::zeros(self.modulus, n, n);
        for &c in p.coeffs().iter().rev() {
            acc = acc.mul(self)?;
            for i in 0..n {
                let k = i * n + i;
                acc.data[k] = self.modulus.add(acc.data[k], c);
            }
        }
        Ok(acc)
    }
}

/// The sequence of steps [`MatrixZq::pow`] performs for exponent `e`.
pub fn square_multiply_schedule(e: &BigUint) -> Vec<PowStep> {
    let mut steps = Vec::new();
    for i in (0..e.bits()).rev() {
        steps.push(PowStep::Square);
        if e.bit(i) {
            steps.push(PowStep::MultiplyBase);
        }
    }
    steps
}

/// How many products can be summed in a `u128` before it must be reduced.
fn lazy_limit(m: Modulus) -> usize {
    let q = m.get() as u128;
    let sq = (q - 1) * (q - 1);
    let limit = (u128::MAX - q) / sq.max(1);
    usize::try_from(limit).unwrap_or(usize::MAX).max(1)
}

#[inline]
fn dot(a: &[u64], b: &[u64], m: Modulus, limit: usize) -> u64 {
    let q = m.get() as u128;
    let mut acc: u128 = 0;
    for (ca, cb) in a.chunks(limit).zip(b.chunks(limit)) {
        for (&x, &y) in ca.iter().zip(cb) {
            acc += x as u128 * y as u128;
        }
        acc %= q;
    }
    acc as u64
}

impl fmt::Display for MatrixZq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .data
            .iter()
            .map(|x| x.to_string().len())
            .max()
            .unwrap_or(1);
        for (i, row) in self.row_iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x:>width$}")?;
            }
        }
        Ok(())
    }
}

/// `q^k` as an unbounded integer.
pub(crate) fn modulus_power(m: Modulus, k: usize) -> BigUint {
    let mut acc = BigUint::one();
    let q = BigUint::from(m.get());
    for _ in 0..k {
        acc *= &q;
    }
    acc
}
