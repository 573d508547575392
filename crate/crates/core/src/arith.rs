//! Rational-integer substrate: primality, factorization and valuations.
//!
//! Factoring runs trial division by the primes below 10⁶, then Brent's
//! variant of Pollard rho on whatever cofactor is left. Primality is
//! Miller–Rabin. Below 2⁶⁴ the first twelve prime bases suffice; above it
//! the first fifteen are used, which is deterministic below 3.3·10²⁴ and
//! probabilistic past that.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::json::big_number;

const TRIAL_LIMIT: u32 = 1_000_000;
const WITNESSES: [u64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

/// Primes below 10⁶, computed once.
pub fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut composite = vec![false; n];
        let mut out = Vec::with_capacity(78_500);
        for i in 2..n {
            if !composite[i] {
                out.push(i as u32);
                let mut j = i * i;
                while j < n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
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

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES[..12] {
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

pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &WITNESSES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'witness: for &a in &WITNESSES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality for signed input; negative numbers, 0 and 1 are not prime.
pub fn is_prime_int(n: &BigInt) -> bool {
    match n.sign() {
        Sign::Plus => is_prime(n.magnitude()),
        _ => false,
    }
}

/// A nontrivial factor of the odd composite `n`.
fn rho_u64(n: u64) -> u64 {
    let sub = |a: u64, b: u64| a.max(b) - a.min(b);
    for c in 1..n {
        let f = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let (mut x, mut ys) = (y, y);
        let mut g = 1;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..128.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, sub(x, y), n);
                }
                g = q.gcd(&n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = sub(x, ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("rho always finds a factor of an odd composite")
}

fn rho_big(n: &BigUint) -> BigUint {
    let sub = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut r = 1u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..128.min(r - k) {
                    y = f(&y);
                    q = q * sub(&x, &y) % n;
                }
                g = q.gcd(n);
                k += 128;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = sub(&x, &ys).gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}

fn split_cofactor(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    let factor = match n.to_u64() {
        Some(small) => BigUint::from(rho_u64(small)),
        None => rho_big(&n),
    };
    let other = &n / &factor;
    split_cofactor(factor, out);
    split_cofactor(other, out);
}

/// Prime factorization of a positive integer, primes strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntFactorization {
    factors: Vec<(BigUint, u32)>,
}

impl IntFactorization {
    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn product(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }
}

impl Serialize for IntFactorization {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Entry<'a>(&'a BigUint, u32);
        impl Serialize for Entry<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(2))?;
                map.serialize_entry("exp", &self.1)?;
                map.serialize_entry("p", &big_number(&BigInt::from(self.0.clone())))?;
                map.end()
            }
        }
        let mut seq = serializer.serialize_seq(Some(self.factors.len()))?;
        for (p, e) in &self.factors {
            seq.serialize_element(&Entry(p, *e))?;
        }
        seq.end()
    }
}

/// Factor `n ≥ 1`; `1` has the empty factorization.
///
/// Panics on `n = 0`.
pub fn factor_rational(n: &BigUint) -> IntFactorization {
    assert!(!n.is_zero(), "cannot factor 0");
    let mut rest = n.clone();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();

    for &p in small_primes() {
        let p_big = BigUint::from(p);
        if &p_big * &p_big > rest {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&p_big);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            factors.push((p_big, e));
        }
    }

    let mut large = Vec::new();
    split_cofactor(rest, &mut large);
    large.sort();
    for p in large {
        match factors.last_mut() {
            Some((last, e)) if *last == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    IntFactorization { factors }
}

/// `factor_rational` for machine-size input.
pub fn factor_u64(n: u64) -> IntFactorization {
    factor_rational(&BigUint::from(n))
}

/// Largest `k` with `p^k | n`.
pub fn int_valuation(p: &BigInt, n: &BigInt) -> Result<u32> {
    if !is_prime_int(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(valuation_unchecked(p, n))
}

pub(crate) fn valuation_unchecked(p: &BigInt, n: &BigInt) -> u32 {
    let mut rest = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        rest = q;
        k += 1;
    }
}

/// Euler's criterion: `1` for a nonzero square mod the odd prime `p`, `-1`
/// for a non-square, `0` when `p | a`.
pub fn legendre(a: &BigInt, p: &BigUint) -> i8 {
    let p_int = BigInt::from(p.clone());
    let a = a.mod_floor(&p_int);
    if a.is_zero() {
        return 0;
    }
    let exp = (p - 1u32) >> 1;
    let r = a.magnitude().modpow(&exp, p);
    if r.is_one() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(f: &IntFactorization) -> Vec<(u64, u32)> {
        f.factors().iter().map(|(p, e)| (p.to_u64().unwrap(), *e)).collect()
    }

    #[test]
    fn factors_small_numbers() {
        assert_eq!(pairs(&factor_u64(1800)), vec![(2, 3), (3, 2), (5, 2)]);
        assert_eq!(pairs(&factor_u64(90)), vec![(2, 1), (3, 2), (5, 1)]);
        assert!(factor_u64(1).factors().is_empty());
    }

    #[test]
    fn mersenne_31_is_prime() {
        let m = (1u64 << 31) - 1;
        assert_eq!(pairs(&factor_u64(m)), vec![(m, 1)]);
        assert!(is_prime_u64(m));
    }

    #[test]
    fn pollard_rho_handles_large_semiprimes() {
        // both factors above the trial-division limit
        let (p, q) = (1_000_003u64, 1_000_033u64);
        assert_eq!(pairs(&factor_u64(p * q)), vec![(p, 1), (q, 1)]);
        assert_eq!(pairs(&factor_u64(p * p * q)), vec![(p, 2), (q, 1)]);
        let n = BigUint::from(2_147_483_647u64) * BigUint::from(2_305_843_009_213_693_951u64);
        let f = factor_rational(&n);
        assert_eq!(f.factors().len(), 2);
        assert_eq!(f.product(), n);
    }

    #[test]
    fn miller_rabin_against_sieve() {
        let primes = small_primes();
        let mut idx = 0;
        for n in 0..100_000u64 {
            let expected = idx < primes.len() && primes[idx] as u64 == n;
            if expected {
                idx += 1;
            }
            assert_eq!(is_prime_u64(n), expected, "n = {n}");
        }
        // strong pseudoprime to every prime base up to 23
        assert!(!is_prime_u64(3_825_123_056_546_413_051));
        // strong pseudoprime to every prime base up to 37
        assert!(!is_prime(&BigUint::from(318_665_857_834_031_151_167_461u128)));
        // strong pseudoprime to every prime base up to 41
        assert!(!is_prime(&BigUint::from(3_317_044_064_679_887_385_961_981u128)));
    }

    #[test]
    fn valuations() {
        let v = |p: i64, n: i64| int_valuation(&BigInt::from(p), &BigInt::from(n));
        assert_eq!(v(3, 90), Ok(2));
        assert_eq!(v(2, 45), Ok(0));
        assert_eq!(v(3, 45), Ok(2));
        assert_eq!(v(2, -96), Ok(5));
        assert_eq!(v(4, 16), Err(Error::NotPrime("4".into())));
        assert_eq!(v(3, 0), Err(Error::ZeroInput));
    }

    #[test]
    fn legendre_symbol() {
        let p = BigUint::from(7u32);
        let squares: Vec<i64> = (1..7).filter(|&a| legendre(&BigInt::from(a), &p) == 1).collect();
        assert_eq!(squares, vec![1, 2, 4]);
        assert_eq!(legendre(&BigInt::from(-7), &p), 0);
        assert_eq!(legendre(&BigInt::from(-1), &BigUint::from(3u32)), -1);
    }
}
