use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{is_prime, RingSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BoundMode {
    /// `ceil(n log2 |R|)`, valid for every finite commutative ring.
    #[default]
    General,
    /// `n`, valid when the ring is a prime field.
    PrimeField,
}

/// Least `b` with `2^b >= x`; zero for `x <= 1`.
pub fn ceil_log2(x: &BigUint) -> u64 {
    if x <= &BigUint::one() {
        return 0;
    }
    (x - 1u32).bits()
}

/// `B = ceil(n log2 |R|)`, computed exactly as the least `B` with
/// `2^B >= |R|^n`.
pub fn iteration_bound(n: usize, ring: &RingSpec) -> u64 {
    let size = ring.size();
    let mut total = BigUint::one();
    for _ in 0..n {
        total *= &size;
    }
    if total.is_zero() {
        return 0;
    }
    ceil_log2(&total)
}

pub fn iteration_bound_with(n: usize, ring: &RingSpec, mode: BoundMode) -> Result<u64> {
    match mode {
        BoundMode::General => Ok(iteration_bound(n, ring)),
        BoundMode::PrimeField => match ring.as_single() {
            Some(q) if is_prime(q.get()) => Ok(n as u64),
            Some(q) => Err(Error::NotPrime(q.get())),
            None => Err(Error::ComponentCountMismatch {
                expected: 1,
                found: ring.component_count(),
            }),
        },
    }
}
