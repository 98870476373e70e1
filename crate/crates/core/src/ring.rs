//! Arithmetic in Z/qZ for word-sized moduli.
//!
//! Elements are always stored as their least nonnegative representative, so
//! equality of residues (and of matrices built from them) is plain integer
//! equality. Products go through `u128`, so no modulus below 2^63 overflows.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;

use crate::error::{Error, Result};

/// Exclusive upper bound on supported moduli.
pub const MAX_MODULUS: u64 = 1 << 63;

/// A modulus `q` with `2 <= q < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(q: u64) -> Result<Self> {
        if (2..MAX_MODULUS).contains(&q) {
            Ok(Modulus(q))
        } else {
            Err(Error::InvalidModulus(q))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn reduce(self, a: u64) -> u64 {
        a % self.0
    }

    #[inline]
    pub fn reduce_i64(self, a: i64) -> u64 {
        (a as i128).rem_euclid(self.0 as i128) as u64
    }

    #[inline]
    pub fn reduce_u128(self, a: u128) -> u64 {
        (a % self.0 as u128) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        // a, b < 2^63, so the sum cannot wrap
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.0 - b + a
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// `gcd(a, q)`; `gcd(0, q) = q`.
    #[inline]
    pub fn gcd_with(self, a: u64) -> u64 {
        a.gcd(&self.0)
    }

    pub fn is_unit(self, a: u64) -> bool {
        self.gcd_with(a) == 1
    }

    /// Inverse of `a` modulo `q`, or the witness `gcd(a, q) > 1`.
    pub fn inverse(self, a: u64) -> std::result::Result<u64, u64> {
        let a = self.reduce(a);
        let (g, s, _) = ext_gcd(a as i128, self.0 as i128);
        if g != 1 {
            return Err(g as u64);
        }
        Ok(s.rem_euclid(self.0 as i128) as u64)
    }

    /// A unit `u` with `u * a == gcd(a, q) (mod q)`.
    ///
    /// Only gcd computations are used; `q` is never factored. For `a == 0`
    /// the result is 1.
    pub fn normalizing_unit(self, a: u64) -> u64 {
        let q = self.0;
        let a = self.reduce(a);
        if a == 0 {
            return 1;
        }
        let g = a.gcd(&q);
        let q_red = q / g;
        if q_red == 1 {
            // a == 0 handled above, so g < q; unreachable in practice
            return 1;
        }
        let a_red = a / g;
        let s = Modulus(q_red)
            .inverse(a_red)
            .expect("a/g is a unit modulo q/g");
        // r is the part of q coprime to q/g. Lift s so that it is also 1 mod r.
        let mut r = q;
        loop {
            let d = r.gcd(&q_red);
            if d == 1 {
                break;
            }
            r /= d;
        }
        if r == 1 {
            return s;
        }
        let r_mod = Modulus(r);
        let inv = r_mod
            .inverse(r_mod.reduce(q_red))
            .expect("q/g is coprime to r");
        let k = r_mod.mul(r_mod.sub(1 % r, r_mod.reduce(s)), inv);
        // s + k * q_red < q_red + r * q_red <= q * q, fold through u128
        ((s as u128 + k as u128 * q_red as u128) % q as u128) as u64
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Extended Euclid: returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let quot = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
        (old_t, t) = (t, old_t - quot * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let m = Modulus(n);
    let d_shift = (n - 1).trailing_zeros();
    let d = (n - 1) >> d_shift;
    'witness: for a in SMALL {
        let mut x = m.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..d_shift {
            x = m.mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// An element of Z/qZ together with its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: Modulus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidueOp {
    Add,
    Sub,
    Mul,
    Neg,
}

// Fallible: operands must share a modulus.
#[allow(clippy::should_implement_trait)]
impl Residue {
    pub fn new(value: u64, modulus: Modulus) -> Self {
        Residue {
            value: modulus.reduce(value),
            modulus,
        }
    }

    pub fn from_i64(value: i64, modulus: Modulus) -> Self {
        Residue {
            value: modulus.reduce_i64(value),
            modulus,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    fn check(self, other: Residue) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus.get(),
                right: other.modulus.get(),
            });
        }
        Ok(())
    }

    /// Applies `op`; `Neg` ignores `rhs` apart from the modulus check.
    pub fn apply(self, op: ResidueOp, rhs: Residue) -> Result<Residue> {
        self.check(rhs)?;
        let m = self.modulus;
        let value = match op {
            ResidueOp::Add => m.add(self.value, rhs.value),
            ResidueOp::Sub => m.sub(self.value, rhs.value),
            ResidueOp::Mul => m.mul(self.value, rhs.value),
            ResidueOp::Neg => m.neg(self.value),
        };
        Ok(Residue { value, modulus: m })
    }

    pub fn add(self, rhs: Residue) -> Result<Residue> {
        self.apply(ResidueOp::Add, rhs)
    }

    pub fn sub(self, rhs: Residue) -> Result<Residue> {
        self.apply(ResidueOp::Sub, rhs)
    }

    pub fn mul(self, rhs: Residue) -> Result<Residue> {
        self.apply(ResidueOp::Mul, rhs)
    }

    pub fn neg(self) -> Residue {
        Residue {
            value: self.modulus.neg(self.value),
            modulus: self.modulus,
        }
    }

    pub fn is_unit(self) -> bool {
        self.modulus.is_unit(self.value)
    }

    /// Inverse via extended gcd; `NotAUnit` carries `gcd(a, q)` as witness.
    pub fn try_invert(self) -> Result<Residue> {
        match self.modulus.inverse(self.value) {
            Ok(value) => Ok(Residue {
                value,
                modulus: self.modulus,
            }),
            Err(gcd) => Err(Error::NotAUnit {
                value: self.value,
                modulus: self.modulus.get(),
                gcd,
            }),
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// The ring Z/q1 x ... x Z/qk. A single modulus is the ordinary Z/qZ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingSpec {
    moduli: Vec<Modulus>,
}

impl RingSpec {
    pub fn new(moduli: &[u64]) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::EmptyRing);
        }
        let moduli = moduli
            .iter()
            .map(|&q| Modulus::new(q))
            .collect::<Result<Vec<_>>>()?;
        Ok(RingSpec { moduli })
    }

    pub fn single(q: Modulus) -> Self {
        RingSpec { moduli: vec![q] }
    }

    pub fn moduli(&self) -> &[Modulus] {
        &self.moduli
    }

    pub fn component_count(&self) -> usize {
        self.moduli.len()
    }

    /// `Some(q)` when the ring is a single Z/qZ.
    pub fn as_single(&self) -> Option<Modulus> {
        match self.moduli.as_slice() {
            [q] => Some(*q),
            _ => None,
        }
    }

    /// Number of ring elements, the product of the moduli.
    pub fn size(&self) -> BigUint {
        self.moduli.iter().map(|q| BigUint::from(q.get())).product()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(q: u64) -> Modulus {
        Modulus::new(q).unwrap()
    }

    #[test]
    fn small_arithmetic() {
        let q = m(8);
        let a = Residue::new(6, q);
        let b = Residue::new(7, q);
        assert_eq!(a.add(b).unwrap().value(), 5);
        assert_eq!(a.mul(b).unwrap().value(), 2);
        assert_eq!(Residue::new(0, q).neg().value(), 0);
        assert_eq!(Residue::from_i64(-3, q).value(), 5);
    }

    #[test]
    fn modulus_mismatch_is_reported() {
        let a = Residue::new(1, m(8));
        let b = Residue::new(1, m(9));
        assert_eq!(a.add(b), Err(Error::ModulusMismatch { left: 8, right: 9 }));
    }

    #[test]
    fn invalid_moduli() {
        assert_eq!(Modulus::new(1), Err(Error::InvalidModulus(1)));
        assert_eq!(Modulus::new(0), Err(Error::InvalidModulus(0)));
        assert!(Modulus::new(MAX_MODULUS).is_err());
        assert!(Modulus::new(MAX_MODULUS - 1).is_ok());
        assert_eq!(RingSpec::new(&[]), Err(Error::EmptyRing));
        assert_eq!(RingSpec::new(&[4, 1]), Err(Error::InvalidModulus(1)));
    }

    #[test]
    fn inversion() {
        let q = m(8);
        assert_eq!(Residue::new(3, q).try_invert().unwrap().value(), 3);
        assert_eq!(
            Residue::new(2, q).try_invert(),
            Err(Error::NotAUnit {
                value: 2,
                modulus: 8,
                gcd: 2
            })
        );
        assert!(Residue::new(2, m(105)).is_unit());
        assert_eq!(Residue::new(2, m(105)).try_invert().unwrap().value(), 53);
    }

    #[test]
    fn ring_size() {
        let r = RingSpec::new(&[4, 3]).unwrap();
        assert_eq!(r.size(), BigUint::from(12u32));
        assert!(r.as_single().is_none());
        assert_eq!(RingSpec::new(&[105]).unwrap().as_single(), Some(m(105)));
    }

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            small,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime((1 << 31) - 1));
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
    }

    #[test]
    fn normalizing_unit_hits_the_gcd() {
        for q in 2..=60u64 {
            let md = m(q);
            for a in 0..q {
                let u = md.normalizing_unit(a);
                assert!(md.is_unit(u), "q={q} a={a} u={u}");
                let expected = if a == 0 { 0 } else { a.gcd(&q) };
                assert_eq!(md.mul(u, a), expected, "q={q} a={a}");
            }
        }
    }

    proptest! {
        #[test]
        fn agrees_with_wide_arithmetic(q in 2u64..MAX_MODULUS, a: u64, b: u64) {
            let md = m(q);
            let (a, b) = (a % q, b % q);
            let (qa, wa, wb) = (q as i128, a as i128, b as i128);
            prop_assert_eq!(md.add(a, b) as i128, (wa + wb).rem_euclid(qa));
            prop_assert_eq!(md.sub(a, b) as i128, (wa - wb).rem_euclid(qa));
            prop_assert_eq!(md.mul(a, b) as u128, (a as u128 * b as u128) % q as u128);
            prop_assert_eq!(md.add(a, md.neg(a)), 0);
            prop_assert_eq!(md.mul(a, 1), a);
        }

        #[test]
        fn inverse_or_witness(q in 2u64..MAX_MODULUS, a: u64) {
            let md = m(q);
            let a = a % q;
            match md.inverse(a) {
                Ok(b) => prop_assert_eq!(md.mul(a, b), 1 % q),
                Err(g) => {
                    prop_assert!(g > 1);
                    prop_assert_eq!(a % g, 0);
                    prop_assert_eq!(q % g, 0);
                }
            }
        }

        #[test]
        fn normalizing_unit_large(q in 2u64..MAX_MODULUS, a: u64) {
            let md = m(q);
            let a = a % q;
            let u = md.normalizing_unit(a);
            prop_assert!(md.is_unit(u));
            if a != 0 {
                prop_assert_eq!(md.mul(u, a), a.gcd(&q));
            }
        }
    }
}
