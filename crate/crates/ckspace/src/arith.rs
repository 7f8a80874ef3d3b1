//! Small integer helpers shared by the set and map modules.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Least common multiple. Panics on overflow; every modulus in this crate
/// is expected to stay far below `u64::MAX`.
pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    (a / gcd(a, b))
        .checked_mul(b)
        .expect("modulus overflow in lcm")
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Smallest `x >= from` with `x ≡ residue (mod modulus)`.
pub fn first_at_least(from: u64, residue: u64, modulus: u64) -> u64 {
    let r = residue % modulus;
    let base = from - from % modulus + r;
    if base >= from {
        base
    } else {
        base + modulus
    }
}
