//! Systems shared by the unit tests.

use crate::matrix::MatrixZq;
use crate::ring::Modulus;

fn build<const N: usize>(q: u64, rows: [[i64; N]; N]) -> MatrixZq {
    MatrixZq::from_rows(Modulus::new(q).unwrap(), &rows).unwrap()
}

/// Nilpotent of index 6 over Z/8.
pub fn nilpotent_z8() -> MatrixZq {
    build(8, [[2, 6], [1, 0]])
}

/// Fixed-point system over Z/16, stabilizes at exponent 12.
pub fn fixed_point_z16() -> MatrixZq {
    build(
        16,
        [[15, 7, 7, 1], [0, 7, 11, 7], [7, 7, 7, 11], [14, 8, 15, 6]],
    )
}

pub fn fixed_point_z16_stable() -> MatrixZq {
    build(
        16,
        [[12, 1, 2, 11], [0, 4, 8, 12], [4, 3, 6, 1], [12, 1, 2, 11]],
    )
}

/// Fixed-point system over Z/45 with `A^6 = A^7`.
pub fn fixed_point_z45() -> MatrixZq {
    build(
        45,
        [
            [36, 23, 32, 9],
            [27, 32, 30, 25],
            [32, 25, 13, 28],
            [32, 8, 41, 40],
        ],
    )
}

pub fn fixed_point_z45_stable() -> MatrixZq {
    build(
        45,
        [
            [0, 9, 9, 27],
            [10, 27, 12, 26],
            [35, 18, 33, 19],
            [5, 27, 42, 31],
        ],
    )
}

/// Invertible system over Z/105 of order 24.
pub fn period24_z105() -> MatrixZq {
    build(
        105,
        [
            [70, 27, 5, 26],
            [35, 98, 104, 99],
            [81, 85, 78, 102],
            [27, 97, 13, 69],
        ],
    )
}

pub fn scalar(q: u64, a: i64) -> MatrixZq {
    build(q, [[a]])
}
