//! Howell normal form over Z/qZ.
//!
//! Elimination uses only extended gcds and unit normalisation, so q is never
//! factored. Column by column, the rows that are still zero on every earlier
//! column are merged into one pivot row with unimodular 2x2 transforms. The
//! pivot is scaled by a unit to `h = gcd(pivot, q)`, earlier rows are reduced
//! modulo `h` in that column, and the annihilator row `(q/h) * pivot_row`
//! goes back into the pool. That last step gives the Howell property: for
//! every pivot column `j`, the rows with pivot column `>= j` span exactly the
//! span elements that vanish before column `j`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{modulus_power, MatrixZq};
use crate::ring::{ext_gcd, Modulus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Pivot {
    pub row: usize,
    pub col: usize,
    /// Divisor of q; the row generates `q / value` distinct multiples.
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HowellForm {
    modulus: Modulus,
    cols: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<Pivot>,
}

impl HowellForm {
    /// Howell form of the row span of `rows`, each of length `cols`.
    pub fn from_rows<I>(modulus: Modulus, cols: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = Vec<u64>>,
    {
        let m = modulus;
        let mut pool: Vec<Vec<u64>> = rows
            .into_iter()
            .map(|r| {
                debug_assert_eq!(r.len(), cols);
                r.into_iter().map(|x| m.reduce(x)).collect::<Vec<_>>()
            })
            .filter(|r| r.iter().any(|&x| x != 0))
            .collect();
        let mut out: Vec<Vec<u64>> = Vec::new();
        let mut pivots = Vec::new();

        for col in 0..cols {
            let Some(first) = pool.iter().position(|r| r[col] != 0) else {
                continue;
            };
            let mut pivot_row = pool.remove(first);
            for other in pool.iter_mut().skip(first) {
                if other[col] != 0 {
                    eliminate(m, &mut pivot_row, other, col);
                }
            }

            let u = m.normalizing_unit(pivot_row[col]);
            if u != 1 {
                pivot_row.iter_mut().for_each(|x| *x = m.mul(*x, u));
            }
            let h = pivot_row[col];
            debug_assert_eq!(m.get() % h, 0);

            for earlier in out.iter_mut() {
                let f = earlier[col] / h;
                if f != 0 {
                    axpy(m, earlier, m.neg(f), &pivot_row);
                }
            }

            let annihilator: Vec<u64> = pivot_row.iter().map(|&x| m.mul(x, m.get() / h)).collect();
            if annihilator.iter().any(|&x| x != 0) {
                pool.push(annihilator);
            }
            pool.retain(|r| r.iter().any(|&x| x != 0));

            pivots.push(Pivot {
                row: out.len(),
                col,
                value: h,
            });
            out.push(pivot_row);
        }
        debug_assert!(pool.iter().all(|r| r.iter().all(|&x| x == 0)));

        HowellForm {
            modulus,
            cols,
            rows: out,
            pivots,
        }
    }

    pub fn of_matrix(a: &MatrixZq) -> Self {
        Self::from_rows(a.modulus(), a.cols(), a.row_iter().map(<[u64]>::to_vec))
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Nonzero rows, one per pivot, in pivot-column order.
    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[Pivot] {
        &self.pivots
    }

    /// The form as a matrix; a single zero row when the span is `{0}`.
    pub fn matrix(&self) -> MatrixZq {
        if self.rows.is_empty() {
            return MatrixZq::zeros(self.modulus, 1, self.cols);
        }
        let data = self.rows.concat();
        MatrixZq::new(self.modulus, self.rows.len(), self.cols, data)
            .expect("rows have the declared width")
    }

    /// Number of vectors in the row span, `prod q / h`.
    pub fn span_size(&self) -> BigUint {
        let q = self.modulus.get();
        self.pivots
            .iter()
            .map(|p| BigUint::from(q / p.value))
            .fold(BigUint::one(), |acc, x| acc * x)
    }

    /// Row-span membership, decided by reduction against the pivot rows.
    pub fn contains(&self, v: &[u64]) -> bool {
        let m = self.modulus;
        let mut v: Vec<u64> = v.iter().map(|&x| m.reduce(x)).collect();
        let mut next = 0;
        for col in 0..self.cols {
            if v[col] == 0 {
                continue;
            }
            while next < self.pivots.len() && self.pivots[next].col < col {
                next += 1;
            }
            let Some(p) = self.pivots.get(next).filter(|p| p.col == col) else {
                return false;
            };
            if !v[col].is_multiple_of(p.value) {
                return false;
            }
            let factor = m.neg(v[col] / p.value);
            axpy(m, &mut v, factor, &self.rows[p.row]);
        }
        true
    }
}

/// Replace rows `a`, `b` by a unimodular combination with `b[col] = 0` and
/// `a[col] = gcd(a[col], b[col])`.
fn eliminate(m: Modulus, a: &mut [u64], b: &mut [u64], col: usize) {
    let (x, y) = (a[col] as i128, b[col] as i128);
    if x == 0 {
        a.swap_with_slice(b);
        return;
    }
    // [s t; -y/g x/g] has determinant 1
    let (g, s, t) = ext_gcd(x, y);
    let q = m.get() as i128;
    let s = s.rem_euclid(q) as u64;
    let t = t.rem_euclid(q) as u64;
    let u = (-(y / g)).rem_euclid(q) as u64;
    let w = (x / g).rem_euclid(q) as u64;
    for (ai, bi) in a.iter_mut().zip(b.iter_mut()) {
        let (p, r) = (*ai, *bi);
        *ai = m.add(m.mul(s, p), m.mul(t, r));
        *bi = m.add(m.mul(u, p), m.mul(w, r));
    }
    debug_assert_eq!(b[col], 0);
}

/// `y += c * x`.
fn axpy(m: Modulus, y: &mut [u64], c: u64, x: &[u64]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = m.add(*yi, m.mul(c, xi));
    }
}

impl MatrixZq {
    pub fn howell_form(&self) -> HowellForm {
        HowellForm::of_matrix(self)
    }

    pub fn row_span_size(&self) -> BigUint {
        self.howell_form().span_size()
    }

    /// Size of the image `{A x}`, the span of the columns.
    pub fn column_span_size(&self) -> BigUint {
        self.transpose().howell_form().span_size()
    }

    /// `|{x : A x = 0}| = q^cols / |column span|`.
    pub fn kernel_size(&self) -> BigUint {
        let total = modulus_power(self.modulus, self.cols);
        let image = self.column_span_size();
        debug_assert!((&total % &image).is_zero());
        total / image
    }

    /// A generating set of `{x : A x = 0}`.
    ///
    /// Reduces the augmented block `[A^T | I]`; every row of its span has the
    /// shape `(y A^T | y)`, and the Howell rows whose first `rows` columns
    /// vanish span exactly the `y` with `A y = 0`.
    pub fn kernel_generators(&self) -> Vec<Vec<u64>> {
        let (r, c) = (self.rows, self.cols);
        let augmented = (0..c).map(|j| {
            let mut row = Vec::with_capacity(r + c);
            row.extend((0..r).map(|i| self.get(i, j)));
            row.extend((0..c).map(|k| u64::from(k == j)));
            row
        });
        let form = HowellForm::from_rows(self.modulus, r + c, augmented);
        form.pivots
            .iter()
            .filter(|p| p.col >= r)
            .map(|p| form.rows[p.row][r..].to_vec())
            .collect()
    }
}
