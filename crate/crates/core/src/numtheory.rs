//! Small integer number theory: primality, factorisation, roots of unity.

use num_integer::Integer;

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorisation by trial division, as `(prime, exponent)` pairs in
/// increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut a = 0;
            while n.is_multiple_of(p) {
                n /= p;
                a += 1;
            }
            out.push((p, a));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Splits a prime power `q = p^k`, returning `None` if `q` is not one.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let f = factorize(q);
    match f.as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).into_iter().fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Multiplicative order of `a` modulo the prime `p`.
pub fn multiplicative_order(a: u64, p: u64) -> u64 {
    let mut ord = p - 1;
    for (r, _) in factorize(p - 1) {
        while ord.is_multiple_of(r) && pow_mod(a, ord / r, p) == 1 {
            ord /= r;
        }
    }
    ord
}

/// Least primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let primes = prime_divisors(p - 1);
    (2..p)
        .find(|&g| primes.iter().all(|&r| pow_mod(g, (p - 1) / r, p) != 1))
        .expect("a prime always has a primitive root")
}

/// A primitive `e`-th root of unity modulo the prime `p`, derived from the
/// least primitive root so that the choice is reproducible.
pub fn root_of_unity(e: u64, p: u64) -> u64 {
    assert_eq!((p - 1) % e, 0, "{e} does not divide {p} - 1");
    pow_mod(primitive_root(p), (p - 1) / e, p)
}

/// Least prime `ℓ ≡ 1 (mod e)` with `ℓ > lower`.
pub fn least_prime_congruent_one(e: u64, lower: u64) -> u64 {
    let mut m = lower / e + 1;
    loop {
        let cand = m * e + 1;
        if cand > lower && is_prime(cand) {
            return cand;
        }
        m += 1;
    }
}

/// Largest prime `ℓ ≡ 1 (mod e)` with `ℓ < upper`.
pub fn largest_prime_congruent_one_below(e: u64, upper: u64) -> Option<u64> {
    let mut m = (upper - 1) / e;
    while m > 0 {
        let cand = m * e + 1;
        if cand < upper && is_prime(cand) {
            return Some(cand);
        }
        m -= 1;
    }
    None
}

pub fn lcm_all<I: IntoIterator<Item = u64>>(it: I) -> u64 {
    it.into_iter().fold(1, |acc, x| acc.lcm(&x))
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(3121));
        assert!(!is_prime(1261));
        assert!(is_prime(2_147_483_647));
    }

    #[test]
    fn factor_and_phi() {
        assert_eq!(factorize(3120), vec![(2, 4), (3, 1), (5, 1), (13, 1)]);
        assert_eq!(euler_phi(3120), 768);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(12), None);
    }

    #[test]
    fn roots_of_unity() {
        let p = least_prime_congruent_one(60, 2 * 8);
        assert_eq!(p, 61);
        let z = root_of_unity(60, p);
        assert_eq!(multiplicative_order(z, p), 60);
    }

    #[test]
    fn prime_search_below() {
        let p = largest_prime_congruent_one_below(3120, 1 << 31).unwrap();
        assert!(p < 1 << 31 && p % 3120 == 1 && is_prime(p));
    }
}
