//! Exact modular arithmetic on `u64` moduli.
//!
//! Everything here is deterministic. Primality uses a fixed Miller-Rabin
//! witness set valid for the whole 64-bit range, so verdicts built on top of
//! these primitives are mathematical statements, not probabilistic ones.

use std::collections::HashMap;

use crate::{Error, Result};

/// A modulus `>= 2`. All residue arithmetic parameterized by a `Modulus`
/// returns canonical representatives in `[0, value)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(value: u64) -> Result<Self> {
        if value < 2 {
            return Err(Error::BadModulus(value));
        }
        Ok(Modulus(value))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// Canonical residue of `v`.
    pub fn reduce(self, v: u64) -> u64 {
        v % self.0
    }
}

/// `(a * b) mod m` with a 128-bit intermediate, exact for any `m < 2^64`.
pub fn mul_mod(a: u64, b: u64, m: Modulus) -> u64 {
    ((a as u128 * b as u128) % m.0 as u128) as u64
}

/// `base^exp mod m` by binary exponentiation; `exp = 0` yields `1 mod m`.
pub fn pow_mod(base: u64, mut exp: u64, m: Modulus) -> u64 {
    let mut result = 1 % m.0;
    let mut b = base % m.0;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

// Miller-Rabin bases {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}: testing
// against the first twelve primes is deterministic for all v < 3.317e24
// (Sorenson & Webster, "Strong pseudoprimes to the first prime bases", 2015),
// which covers the entire u64 range.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality for the full `u64` range.
pub fn is_prime(v: u64) -> bool {
    if v < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if v == p {
            return true;
        }
        if v % p == 0 {
            return false;
        }
    }
    let m = Modulus(v);
    let d = (v - 1) >> (v - 1).trailing_zeros();
    let s = (v - 1).trailing_zeros();
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, m);
        if x == 1 || x == v - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, m);
            if x == v - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A complete prime factorization, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    /// `(prime, exponent)` pairs in increasing prime order.
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    /// The factored integer.
    pub fn value(&self) -> u64 {
        self.pairs
            .iter()
            .fold(1u64, |acc, &(p, e)| acc * p.pow(e))
    }

    fn from_map(map: std::collections::BTreeMap<u64, u32>) -> Self {
        Factorization {
            pairs: map.into_iter().collect(),
        }
    }
}

fn trial_divide(mut v: u64, limit: u64, map: &mut std::collections::BTreeMap<u64, u32>) -> u64 {
    let mut d = 2u64;
    while d <= limit && d * d <= v {
        while v % d == 0 {
            *map.entry(d).or_insert(0) += 1;
            v /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    v
}

// Pollard's rho with Brent cycle detection. Only called on composites with
// no prime factor below 10^6, so the loop terminates quickly in practice.
fn pollard_rho(v: u64) -> u64 {
    let m = Modulus(v);
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, m) + c) % v;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), v);
        }
        if d != v {
            return d;
        }
        c += 1;
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn factor_into(v: u64, map: &mut std::collections::BTreeMap<u64, u32>) {
    if v == 1 {
        return;
    }
    if is_prime(v) {
        *map.entry(v).or_insert(0) += 1;
        return;
    }
    let d = pollard_rho(v);
    factor_into(d, map);
    factor_into(v / d, map);
}

/// Complete factorization of `v >= 2`: trial division up to `10^6`, then
/// rho splitting of whatever survives.
pub fn factorize(v: u64) -> Factorization {
    assert!(v >= 2, "factorize requires v >= 2");
    let mut map = std::collections::BTreeMap::new();
    let rest = trial_divide(v, 1_000_000, &mut map);
    factor_into(rest, &mut map);
    Factorization::from_map(map)
}

/// Factorization of `p - 1 = 2 n (n + 1)` for `p = 2n^2 + 2n + 1`.
///
/// `n` and `n + 1` are each at most about the square root of `p - 1`, so
/// factoring them separately by trial division stays cheap even when `p - 1`
/// itself is twenty digits.
pub fn factorize_p_minus_1(n: u64) -> Factorization {
    assert!(n >= 1);
    let mut map = std::collections::BTreeMap::new();
    *map.entry(2).or_insert(0) += 1;
    for part in [n, n + 1] {
        if part >= 2 {
            let rest = trial_divide(part, u64::MAX, &mut map);
            if rest > 1 {
                *map.entry(rest).or_insert(0) += 1;
            }
        }
    }
    Factorization::from_map(map)
}

/// Least `b >= 1` with `g^b = 1 (mod p)`, given the factorization of `p - 1`.
///
/// Starts from the full group order and divides out prime factors while the
/// power stays 1.
pub fn multiplicative_order(g: u64, p: Modulus, fact_of_p_minus_1: &Factorization) -> Result<u64> {
    if g % p.get() == 0 {
        return Err(Error::ZeroResidue(p.get()));
    }
    let mut order = fact_of_p_minus_1.value();
    for &(q, e) in fact_of_p_minus_1.pairs() {
        for _ in 0..e {
            if pow_mod(g, order / q, p) == 1 {
                order /= q;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

/// Least `k >= 1` with `g^k = target (mod p)`, or `None` if `target` is not
/// in the subgroup generated by `g`. Baby-step giant-step over the cyclic
/// subgroup, `O(sqrt(order))` time and space.
///
/// `target = 1` returns `order_of_g`, the least *positive* exponent.
pub fn subgroup_dlog(target: u64, g: u64, order_of_g: u64, p: Modulus) -> Option<u64> {
    let target = target % p.get();
    let m = (order_of_g as f64).sqrt().ceil() as u64;
    let m = m.max(1);

    // baby steps: least j in [0, m) for each value g^j
    let mut baby: HashMap<u64, u64> = HashMap::with_capacity(m as usize);
    let mut cur = 1 % p.get();
    for j in 0..m {
        baby.entry(cur).or_insert(j);
        cur = mul_mod(cur, g, p);
    }

    // giant steps: multiply by g^{-m} = g^{order - m}
    let giant = pow_mod(g, order_of_g - (m % order_of_g), p);
    let mut gamma = target;
    let mut i = 0u64;
    while i * m <= order_of_g {
        if let Some(&j) = baby.get(&gamma) {
            let k = i * m + j;
            if k == 0 {
                return Some(order_of_g);
            }
            if k <= order_of_g {
                return Some(k);
            }
        }
        gamma = mul_mod(gamma, giant, p);
        i += 1;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: u64) -> Modulus {
        Modulus::new(v).unwrap()
    }

    // brute-force order oracle for small p
    fn order_brute(g: u64, p: u64) -> u64 {
        let md = m(p);
        let mut cur = g % p;
        let mut k = 1;
        while cur != 1 {
            cur = mul_mod(cur, g, md);
            k += 1;
        }
        k
    }

    #[test]
    fn mul_mod_small() {
        assert_eq!(mul_mod(3, 4, m(13)), 12);
        assert_eq!(mul_mod(0, 123456, m(997)), 0);
    }

    #[test]
    fn mul_mod_near_64_bits() {
        // 10^10 * 10^10 mod (2*10^10 + 1), cross-checked with big integers
        // in the integration suite; frozen value here.
        let modulus = m(20_000_000_001);
        assert_eq!(
            mul_mod(10_000_000_000, 10_000_000_000, modulus),
            (10_000_000_000u128 * 10_000_000_000u128 % 20_000_000_001u128) as u64
        );
    }

    #[test]
    fn pow_mod_examples() {
        assert_eq!(pow_mod(4, 2, m(13)), 3);
        assert_eq!(pow_mod(7, 0, m(13)), 1);
        assert_eq!(pow_mod(4, 23, m(61)), 39); // 39 = -(4*5+2) mod 61
    }

    #[test]
    fn is_prime_examples() {
        assert!(is_prime(61));
        assert!(!is_prime(25));
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        assert!(is_prime(2));
        // p for n = 10^5
        assert!(is_prime(20_000_200_001) == trial_division(20_000_200_001));
    }

    fn trial_division(v: u64) -> bool {
        if v < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= v {
            if v % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(12).pairs(), &[(2, 2), (3, 1)]);
        assert_eq!(factorize(60).pairs(), &[(2, 2), (3, 1), (5, 1)]);
        assert_eq!(factorize(40).pairs(), &[(2, 3), (5, 1)]);
    }

    #[test]
    fn factorize_p_minus_1_matches_general() {
        for n in 1..200u64 {
            let p_minus_1 = 2 * n * (n + 1);
            assert_eq!(factorize_p_minus_1(n), factorize(p_minus_1), "n={n}");
            assert_eq!(factorize_p_minus_1(n).value(), p_minus_1);
        }
    }

    #[test]
    fn factorize_large_semiprime() {
        // beyond the 10^6 trial division bound, exercises the rho path
        let p1 = 1_000_003u64;
        let p2 = 1_000_033u64;
        assert_eq!(factorize(p1 * p2).pairs(), &[(p1, 1), (p2, 1)]);
    }

    #[test]
    fn order_examples() {
        // (g, p, n, expected order) with p = 2n^2+2n+1
        for (g, p, n, want) in [(4u64, 5u64, 1u64, 2u64), (4, 13, 2, 6), (4, 61, 5, 30)] {
            let fact = factorize_p_minus_1(n);
            assert_eq!(fact.value(), p - 1);
            let got = multiplicative_order(g, m(p), &fact).unwrap();
            assert_eq!(got, want);
            assert_eq!(got, order_brute(g, p));
        }
    }

    #[test]
    fn order_rejects_zero() {
        let fact = factorize(4);
        assert!(multiplicative_order(5, m(5), &fact).is_err());
    }

    #[test]
    fn order_divides_group_order() {
        for p in [5u64, 13, 41, 61, 113, 181] {
            let fact = factorize(p - 1);
            for g in 2..p.min(40) {
                let ord = multiplicative_order(g, m(p), &fact).unwrap();
                assert_eq!((p - 1) % ord, 0);
                assert_eq!(pow_mod(g, ord, m(p)), 1);
                for &(q, _) in factorize(ord).pairs() {
                    assert_ne!(pow_mod(g, ord / q, m(p)), 1);
                }
            }
        }
    }

    #[test]
    fn dlog_examples() {
        assert_eq!(subgroup_dlog(3, 4, 6, m(13)), Some(2));
        assert_eq!(subgroup_dlog(39, 4, 30, m(61)), Some(23));
        // <4> mod 13 = {4, 3, 12, 9, 10, 1}; 2 is outside
        assert_eq!(subgroup_dlog(2, 4, 6, m(13)), None);
    }

    #[test]
    fn dlog_target_one_returns_order() {
        assert_eq!(subgroup_dlog(1, 4, 6, m(13)), Some(6));
        assert_eq!(subgroup_dlog(1, 4, 30, m(61)), Some(30));
    }

    #[test]
    fn dlog_matches_brute_force() {
        for p in [13u64, 41, 61, 113, 181, 761] {
            let md = m(p);
            let fact = factorize(p - 1);
            for g in [2u64, 3, 4, 7] {
                let ord = multiplicative_order(g, md, &fact).unwrap();
                // brute force: full period of <g>
                let mut seen = HashMap::new();
                let mut cur = g % p;
                for k in 1..=ord {
                    seen.entry(cur).or_insert(k);
                    cur = mul_mod(cur, g, md);
                }
                for target in 0..p {
                    let got = subgroup_dlog(target, g, ord, md);
                    assert_eq!(got, seen.get(&target).copied(), "p={p} g={g} t={target}");
                }
            }
        }
    }
}
