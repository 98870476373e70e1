//! Divisors and Möbius values of small integers (periods found under a cap),
//! by trial division.

/// Divisors of `t` in ascending order.
pub fn divisors(t: u64) -> Vec<u64> {
    assert!(t >= 1, "divisors of zero are not defined here");
    let mut low = Vec::new();
    let mut high = Vec::new();
    let mut d = 1u64;
    while d * d <= t {
        if t.is_multiple_of(d) {
            low.push(d);
            if d != t / d {
                high.push(t / d);
            }
        }
        d += 1;
    }
    low.extend(high.into_iter().rev());
    low
}

pub fn moebius(mut n: u64) -> i8 {
    assert!(n >= 1);
    let mut mu = 1i8;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// `(k, μ(t / k))` for every divisor `k` of `t`, ascending in `k`.
pub fn moebius_divisors(t: u64) -> Vec<(u64, i8)> {
    divisors(t)
        .into_iter()
        .map(|k| (k, moebius(t / k)))
        .collect()
}
