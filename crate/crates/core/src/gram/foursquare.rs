//! Lagrange four-square decompositions.
//!
//! Small inputs use a descending search. Larger ones pick `a, b` with
//! `n − a² − b²` a prime `p ≡ 1 (mod 4)` and split `p` by the Hermite–Serret
//! reduction.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

const SEARCH_LIMIT: u64 = 1 << 20;
const WITNESSES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// `[a, b, c, d]` with `a² + b² + c² + d² = n`.
pub fn four_squares(n: &BigUint) -> [BigUint; 4] {
    if n.is_zero() {
        return Default::default();
    }
    let mut m = n.clone();
    let mut shift = 0u32;
    while (&m % 4u32).is_zero() {
        m /= 4u32;
        shift += 1;
    }
    let [a, b, c, d] = if m < BigUint::from(SEARCH_LIMIT) { by_search(&m) } else { by_primes(&m) };
    [a << shift, b << shift, c << shift, d << shift]
}

fn by_search(m: &BigUint) -> [BigUint; 4] {
    let mut a = m.sqrt();
    loop {
        let r = m - &a * &a;
        if let Some([b, c, d]) = three_squares(&r) {
            return [a, b, c, d];
        }
        a -= 1u32;
    }
}

fn by_primes(m: &BigUint) -> [BigUint; 4] {
    let mut a = m.sqrt();
    loop {
        let r = m - &a * &a;
        let mut b = BigUint::zero();
        while &b * &b <= r {
            let p = &r - &b * &b;
            if let Some([c, d]) = prime_two_squares(&p) {
                return [a, b, c, d];
            }
            b += 1u32;
            if b > BigUint::from(64u32) {
                break;
            }
        }
        if a.is_zero() {
            return by_search(m);
        }
        a -= 1u32;
    }
}

fn is_probable_prime(p: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *p < two {
        return false;
    }
    for w in WITNESSES {
        let w = BigUint::from(w);
        if *p == w {
            return true;
        }
        if (p % &w).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let p1 = p - &one;
    let s = p1.trailing_zeros().unwrap_or(0);
    let d = &p1 >> s;
    'witness: for w in WITNESSES {
        let mut x = BigUint::from(w).modpow(&d, p);
        if x == one || x == p1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, p);
            if x == p1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `p = c² + d²` for `p ≤ 2` or a prime `p ≡ 1 (mod 4)`.
fn prime_two_squares(p: &BigUint) -> Option<[BigUint; 2]> {
    if *p <= BigUint::from(2u32) {
        return two_squares(p);
    }
    if (p % 4u32) != BigUint::one() || !is_probable_prime(p) {
        return None;
    }
    let one = BigUint::one();
    let exp: BigUint = (p - &one) >> 2u32;
    let root = (2u32..200).map(|c| BigUint::from(c).modpow(&exp, p)).find(|x| (x * x + &one) % p == BigUint::zero())?;
    let (mut r0, mut r1) = (p.clone(), root);
    let bound = p.sqrt();
    while r1 > bound {
        let next = &r0 % &r1;
        r0 = r1;
        r1 = next;
    }
    let rest = p - &r1 * &r1;
    let d = rest.sqrt();
    (&d * &d == rest).then_some([r1, d])
}

fn excluded_from_three(r: &BigUint) -> bool {
    let mut m = r.clone();
    if m.is_zero() {
        return false;
    }
    while (&m % 4u32).is_zero() {
        m /= 4u32;
    }
    (&m % 8u32) == BigUint::from(7u32)
}

fn three_squares(r: &BigUint) -> Option<[BigUint; 3]> {
    if excluded_from_three(r) {
        return None;
    }
    let mut b = r.sqrt();
    loop {
        let rest = r - &b * &b;
        if let Some([c, d]) = two_squares(&rest) {
            return Some([b, c, d]);
        }
        if b.is_zero() {
            return None;
        }
        b -= 1u32;
    }
}

fn two_squares(r: &BigUint) -> Option<[BigUint; 2]> {
    let mut c = r.sqrt();
    loop {
        let c2 = &c * &c;
        if &c2 * 2u32 < *r {
            return None;
        }
        let rest = r - &c2;
        let d = rest.sqrt();
        if &d * &d == rest {
            return Some([c, d]);
        }
        if c.is_zero() {
            return None;
        }
        c -= 1u32;
    }
}

/// Four rationals whose squares sum to `q ≥ 0`; `None` for negative `q`.
pub fn rational_four_squares(q: &BigRational) -> Option<[BigRational; 4]> {
    if q.is_negative() {
        return None;
    }
    let num = q.numer().magnitude().clone();
    let den = q.denom().magnitude().clone();
    let parts = four_squares(&(&num * &den));
    let den_i = BigInt::from_biguint(Sign::Plus, den);
    Some(parts.map(|p| BigRational::new(BigInt::from_biguint(Sign::Plus, p), den_i.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(n: u64) {
        let n = BigUint::from(n);
        let s = four_squares(&n);
        let total: BigUint = s.iter().map(|x| x * x).sum();
        assert_eq!(total, n);
    }

    #[test]
    fn small_integers() {
        for n in 0..2000 {
            check(n);
        }
    }

    #[test]
    fn large_integers() {
        for n in [u64::MAX, 7 * 4u64.pow(20), 999_999_999_989, 1 << 62, (1 << 20) + 7] {
            check(n);
        }
    }

    #[test]
    fn huge_integers() {
        let n: BigUint = "982451653000000000000000000000000000000000000000000000000000000000000000000077".parse().unwrap();
        let s = four_squares(&n);
        assert_eq!(s.iter().map(|x| x * x).sum::<BigUint>(), n);
        let p = BigUint::from(1_000_000_009u64);
        assert!(is_probable_prime(&p));
        assert!(!is_probable_prime(&(&p * &p)));
    }

    #[test]
    fn rational_split() {
        let q = BigRational::new(BigInt::from(1), BigInt::from(2));
        let parts = rational_four_squares(&q).unwrap();
        let total: BigRational = parts.iter().map(|x| x * x).sum();
        assert_eq!(total, q);
        assert!(rational_four_squares(&-q).is_none());
    }
}
