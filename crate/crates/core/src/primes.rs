//! How rational primes behave in each ring, the primes lying above them, and
//! unique factorization of elements.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::arith::{factor_rational, is_prime, legendre};
use crate::error::{Error, Result};
use crate::json::big_number;
use crate::ring::{BasisKind, QuadInt, RingId};

/// Behaviour of a rational prime in a ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PrimeClass {
    Inert,
    Ramified,
    Split,
}

impl fmt::Display for PrimeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PrimeClass::Inert => "inert",
            PrimeClass::Ramified => "ramified",
            PrimeClass::Split => "split",
        };
        f.write_str(s)
    }
}

pub fn classify_rational_prime(p: impl Into<BigUint>, ring: RingId) -> Result<PrimeClass> {
    let p = p.into();
    if !is_prime(&p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    Ok(classify_unchecked(&p, ring))
}

fn classify_unchecked(p: &BigUint, ring: RingId) -> PrimeClass {
    let d = ring.d();
    if p == &BigUint::from(2u32) {
        return match d {
            -1 | -2 => PrimeClass::Ramified,
            -7 => PrimeClass::Split,
            _ => PrimeClass::Inert,
        };
    }
    match legendre(&BigInt::from(d), p) {
        0 => PrimeClass::Ramified,
        1 => PrimeClass::Split,
        _ => PrimeClass::Inert,
    }
}

/// Whether `x` lies at a strictly smaller argument than `y`; both must be in
/// the closed upper half plane. Compares `Im(x)·Re(y)` against `Re(x)·Im(y)`
/// using `b` as a positive multiple of the imaginary part.
fn precedes_in_angle(x: &QuadInt, y: &QuadInt) -> bool {
    x.b() * y.twice_real() < x.twice_real() * y.b()
}

/// One solution `(a, b)` of `N(a + bω) = p`, if any, by scanning `b ≥ 0`.
fn solve_norm_equation(p: &BigUint, ring: RingId) -> Option<QuadInt> {
    let abs_d = (-ring.d()) as u64;
    let half = ring.basis_kind() == BasisKind::HalfInteger;
    // Plain: a² = p - |d|b².  HalfInteger: (2a + b)² = 4p - |d|b².
    let target = if half { p * 4u32 } else { p.clone() };

    if let Some(t) = target.to_u64() {
        let mut b = 0u64;
        while abs_d * b * b <= t {
            let rest = t - abs_d * b * b;
            let s = rest.sqrt();
            if s * s == rest {
                let (s, b) = (s as i64, b as i64);
                if !half {
                    return Some(ring.element(s, b));
                }
                if (s - b) % 2 == 0 {
                    return Some(ring.element((s - b) / 2, b));
                }
            }
            b += 1;
        }
        return None;
    }

    let target = BigInt::from(target);
    let mut b = BigInt::zero();
    loop {
        let rest = &target - &b * &b * abs_d;
        if rest.is_negative() {
            return None;
        }
        let s = rest.sqrt();
        if &s * &s == rest {
            if !half {
                return Some(ring.element(s, b));
            }
            let twice_a = &s - &b;
            if (&twice_a % 2u32).is_zero() {
                return Some(ring.element(twice_a / 2, b));
            }
        }
        b += 1;
    }
}

/// The canonical prime above `p`.
///
/// Inert primes are their own prime. For ramified and split primes the norm
/// equation is solved and, of the sector-reduced solution and its
/// sector-reduced conjugate, the one with the smaller argument is returned
/// (`2+i` rather than `1+2i`, `(1+√-7)/2` rather than `(-1+√-7)/2`).
pub fn prime_above(p: impl Into<BigUint>, ring: RingId) -> Result<QuadInt> {
    let p = p.into();
    if !is_prime(&p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    Ok(prime_above_unchecked(&p, ring))
}

fn prime_above_unchecked(p: &BigUint, ring: RingId) -> QuadInt {
    if classify_unchecked(p, ring) == PrimeClass::Inert {
        return ring.from_int(BigInt::from(p.clone()));
    }
    let solution = solve_norm_equation(p, ring)
        .expect("ramified and split primes are norms of an element");
    let first = solution.canonical_associate().expect("nonzero");
    let second = solution.conjugate().canonical_associate().expect("nonzero");
    if precedes_in_angle(&second, &first) {
        second
    } else {
        first
    }
}

/// The two primes above a split `p`: `prime_above(p)` and its sector-reduced
/// conjugate.
pub fn split_pair(p: impl Into<BigUint>, ring: RingId) -> Result<(QuadInt, QuadInt)> {
    let p = p.into();
    match classify_rational_prime(p.clone(), ring)? {
        PrimeClass::Split => {
            let pi = prime_above_unchecked(&p, ring);
            let bar = pi.conjugate().canonical_associate()?;
            Ok((pi, bar))
        }
        other => Err(Error::PreconditionFailed(format!("{p} is {other} in {ring}"))),
    }
}

/// True when `pi` is irreducible: its norm is a rational prime, or the square
/// of an inert prime `q` with `pi ~ q`.
pub fn is_prime_element(pi: &QuadInt) -> bool {
    if pi.is_zero() {
        return false;
    }
    let n = pi.norm().magnitude().clone();
    if is_prime(&n) {
        return true;
    }
    let q = n.sqrt();
    if &q * &q != n || !is_prime(&q) {
        return false;
    }
    classify_unchecked(&q, pi.ring()) == PrimeClass::Inert
        && pi
            .is_associated(&pi.ring().from_int(BigInt::from(q)))
            .unwrap_or(false)
}

/// Divide out `pi` as often as possible; returns the count and the cofactor.
fn strip(pi: &QuadInt, z: &QuadInt) -> (u32, QuadInt) {
    let mut rest = z.clone();
    let mut k = 0;
    while let Some(q) = rest.exact_divide(pi).expect("same ring, nonzero divisor") {
        rest = q;
        k += 1;
    }
    (k, rest)
}

/// Largest `k` with `pi^k | z`.
pub fn valuation(pi: &QuadInt, z: &QuadInt) -> Result<u32> {
    if pi.ring() != z.ring() {
        return Err(Error::MixedRings {
            left: pi.ring().d(),
            right: z.ring().d(),
        });
    }
    if !is_prime_element(pi) {
        return Err(Error::NotPrime(pi.to_string()));
    }
    if z.is_zero() {
        return Err(Error::ZeroElement);
    }
    Ok(strip(pi, z).0)
}

/// `unit · Π prime^exp`, primes in the fundamental sector, pairwise
/// non-associated and sorted by `(norm, a, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadFactorization {
    ring: RingId,
    unit: QuadInt,
    factors: Vec<(QuadInt, u32)>,
}

impl QuadFactorization {
    pub fn ring(&self) -> RingId {
        self.ring
    }

    pub fn unit(&self) -> &QuadInt {
        &self.unit
    }

    pub fn factors(&self) -> &[(QuadInt, u32)] {
        &self.factors
    }

    /// Assemble a factorization from parts that are already canonical. Used
    /// to build synthetic shapes for the structure checkers.
    pub fn from_parts(unit: QuadInt, mut factors: Vec<(QuadInt, u32)>) -> Result<Self> {
        let ring = unit.ring();
        if !unit.is_unit() {
            return Err(Error::PreconditionFailed(format!("{unit} is not a unit")));
        }
        for (pi, e) in &factors {
            if pi.ring() != ring {
                return Err(Error::MixedRings {
                    left: ring.d(),
                    right: pi.ring().d(),
                });
            }
            if !is_prime_element(pi) || !pi.in_fundamental_sector()? || *e == 0 {
                return Err(Error::PreconditionFailed(format!(
                    "{pi}^{e} is not a canonical prime power"
                )));
            }
        }
        factors.sort_by(|x, y| x.0.cmp_by_norm(&y.0));
        if factors.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::PreconditionFailed("repeated prime".into()));
        }
        Ok(QuadFactorization { ring, unit, factors })
    }

    /// Multiply everything back out.
    pub fn reconstruct(&self) -> QuadInt {
        self.factors
            .iter()
            .fold(self.unit.clone(), |acc, (pi, e)| &acc * &pi.pow(*e))
    }

    /// `Π N(prime)^exp`.
    pub fn norm(&self) -> BigInt {
        self.factors
            .iter()
            .fold(BigInt::one(), |acc, (pi, e)| acc * pi.norm().pow(*e))
    }

    /// Number of non-associated prime divisors.
    pub fn prime_count(&self) -> usize {
        self.factors.len()
    }
}

impl Serialize for QuadFactorization {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Entry<'a>(&'a QuadInt, u32);
        impl Serialize for Entry<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(3))?;
                map.serialize_entry("exp", &self.1)?;
                map.serialize_entry("norm", &big_number(&self.0.norm()))?;
                map.serialize_entry("prime", self.0)?;
                map.end()
            }
        }
        let entries: Vec<Entry<'_>> = self.factors.iter().map(|(p, e)| Entry(p, *e)).collect();
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("factors", &entries)?;
        map.serialize_entry("unit", &self.unit)?;
        map.end()
    }
}

/// Unique factorization of a nonzero element.
///
/// Each rational prime `p | N(z)` is handled by its class. Split primes need
/// trial division because `N(z)` only reveals the combined exponent of `π`
/// and `π̄`.
pub fn factor(z: &QuadInt) -> Result<QuadFactorization> {
    if z.is_zero() {
        return Err(Error::ZeroElement);
    }
    let ring = z.ring();
    let norm = z.norm().magnitude().clone();
    let mut rest = z.clone();
    let mut factors = Vec::new();

    for (p, e) in factor_rational(&norm).factors() {
        match classify_unchecked(p, ring) {
            PrimeClass::Inert => {
                let q = ring.from_int(BigInt::from(p.clone()));
                let (k, cofactor) = strip(&q, &rest);
                debug_assert_eq!(2 * k, *e);
                factors.push((q, k));
                rest = cofactor;
            }
            PrimeClass::Ramified => {
                let pi = prime_above_unchecked(p, ring);
                let (k, cofactor) = strip(&pi, &rest);
                debug_assert_eq!(k, *e);
                factors.push((pi, k));
                rest = cofactor;
            }
            PrimeClass::Split => {
                let pi = prime_above_unchecked(p, ring);
                let bar = pi.conjugate().canonical_associate()?;
                let (k1, cofactor) = strip(&pi, &rest);
                let (k2, cofactor) = strip(&bar, &cofactor);
                debug_assert_eq!(k1 + k2, *e);
                if k1 > 0 {
                    factors.push((pi, k1));
                }
                if k2 > 0 {
                    factors.push((bar, k2));
                }
                rest = cofactor;
            }
        }
    }
    debug_assert!(rest.is_unit());
    factors.sort_by(|x, y| x.0.cmp_by_norm(&y.0));
    Ok(QuadFactorization {
        ring,
        unit: rest,
        factors,
    })
}

/// Canonical primes of the ring whose norms are odd and at most `norm_limit`,
/// sorted by `(norm, a, b)`. Each split prime contributes both conjugates.
pub fn primes_with_odd_norm_up_to(ring: RingId, norm_limit: u64) -> Vec<QuadInt> {
    let mut out = Vec::new();
    for p in (3..=norm_limit).step_by(2).filter(|&p| crate::arith::is_prime_u64(p)) {
        let p_big = BigUint::from(p);
        match classify_unchecked(&p_big, ring) {
            PrimeClass::Inert => {
                if p.checked_mul(p).is_some_and(|sq| sq <= norm_limit) {
                    out.push(ring.from_int(p));
                }
            }
            PrimeClass::Ramified => out.push(prime_above_unchecked(&p_big, ring)),
            PrimeClass::Split => {
                let pi = prime_above_unchecked(&p_big, ring);
                let bar = pi.conjugate().canonical_associate().expect("nonzero");
                out.push(pi);
                out.push(bar);
            }
        }
    }
    out.sort_by(QuadInt::cmp_by_norm);
    out
}
