//! Divisor sums `δ_n(z) = Σ |x|ⁿ` over one divisor per associate class and
//! the abundancy index `I_n(z) = δ_n(z) / |z|ⁿ`, for even `n` only (for odd
//! `n` the terms `|x|ⁿ` are irrational).
//!
//! [`delta`] uses the multiplicative closed form over the factorization;
//! [`delta_naive`] sums over the explicit divisor list and serves as the
//! oracle for it.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::arith::factor_rational;
use crate::error::{Error, Result};
use crate::primes::{factor, QuadFactorization};
use crate::rational::ExactRational;
use crate::ring::QuadInt;

/// Upper limit on the number of divisors [`divisors`] will materialize.
pub const DIVISOR_CAP: u64 = 1 << 20;

/// Largest norm accepted by [`delta_naive`].
pub const NAIVE_NORM_LIMIT: u64 = 1_000_000;

/// Canonical divisors of an element, one per associate class, sorted by
/// `(norm, a, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorList {
    divisors: Vec<QuadInt>,
}

impl DivisorList {
    pub fn as_slice(&self) -> &[QuadInt] {
        &self.divisors
    }

    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, QuadInt> {
        self.divisors.iter()
    }

    pub fn into_vec(self) -> Vec<QuadInt> {
        self.divisors
    }
}

impl<'a> IntoIterator for &'a DivisorList {
    type Item = &'a QuadInt;
    type IntoIter = std::slice::Iter<'a, QuadInt>;

    fn into_iter(self) -> Self::IntoIter {
        self.divisors.iter()
    }
}

impl Serialize for DivisorList {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.divisors.serialize(serializer)
    }
}

/// Number of divisor classes, `Π (e + 1)`.
pub fn divisor_count(f: &QuadFactorization) -> BigUint {
    f.factors()
        .iter()
        .fold(BigUint::one(), |acc, (_, e)| acc * (*e + 1))
}

pub fn divisors(z: &QuadInt) -> Result<DivisorList> {
    let f = factor(z)?;
    divisors_of(&f)
}

pub fn divisors_of(f: &QuadFactorization) -> Result<DivisorList> {
    let count = divisor_count(f);
    if count > BigUint::from(DIVISOR_CAP) {
        return Err(Error::TooLarge(format!(
            "{count} divisors exceed the enumeration cap {DIVISOR_CAP}"
        )));
    }
    let mut out = vec![f.ring().one()];
    for (pi, e) in f.factors() {
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        for x in &out {
            let mut term = x.clone();
            next.push(term.clone());
            for _ in 0..*e {
                term = &term * pi;
                next.push(term.clone());
            }
        }
        out = next;
    }
    let mut divisors = out
        .into_iter()
        .map(|x| x.canonical_associate())
        .collect::<Result<Vec<_>>>()?;
    divisors.sort_by(QuadInt::cmp_by_norm);
    Ok(DivisorList { divisors })
}

fn check_even(n: i64) -> Result<()> {
    if n == 0 || n % 2 != 0 {
        Err(Error::OddExponent(n))
    } else {
        Ok(())
    }
}

/// `norm^k` for any integer `k`.
fn norm_power(norm: &BigInt, k: i64) -> ExactRational {
    let p = norm.pow(k.unsigned_abs() as u32);
    if k >= 0 {
        ExactRational::from_integer(p)
    } else {
        ExactRational::new(1, p)
    }
}

/// `δ_n` from a known factorization: `Π_i Σ_{j=0}^{e_i} N(π_i)^{jn/2}`.
pub fn delta_of(n: i64, f: &QuadFactorization) -> Result<ExactRational> {
    check_even(n)?;
    let half = n / 2;
    Ok(f
        .factors()
        .iter()
        .map(|(pi, e)| {
            let norm = pi.norm();
            (0..=*e as i64).map(|j| norm_power(&norm, j * half)).sum()
        })
        .product())
}

pub fn delta(n: i64, z: &QuadInt) -> Result<ExactRational> {
    check_even(n)?;
    delta_of(n, &factor(z)?)
}

/// `δ_n` by literal summation over [`divisors`].
pub fn delta_naive(n: i64, z: &QuadInt) -> Result<ExactRational> {
    check_even(n)?;
    if z.is_zero() {
        return Err(Error::ZeroElement);
    }
    let norm = z.norm();
    if norm > BigInt::from(NAIVE_NORM_LIMIT) {
        return Err(Error::TooLarge(format!(
            "norm {norm} exceeds the enumeration limit {NAIVE_NORM_LIMIT}"
        )));
    }
    Ok(sum_over_divisors(n, &divisors(z)?))
}

pub(crate) fn sum_over_divisors(n: i64, list: &DivisorList) -> ExactRational {
    list.iter().map(|x| norm_power(&x.norm(), n / 2)).sum()
}

/// The value of `I_n(z)`; always at least 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct IndexValue {
    value: ExactRational,
}

impl IndexValue {
    pub fn value(&self) -> &ExactRational {
        &self.value
    }

    pub fn into_inner(self) -> ExactRational {
        self.value
    }
}

impl fmt::Display for IndexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

impl Serialize for IndexValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.value.serialize(serializer)
    }
}

pub fn index_of(n: i64, f: &QuadFactorization) -> Result<IndexValue> {
    check_even(n)?;
    if n < 0 {
        return Err(Error::NonPositiveExponent(n));
    }
    let delta = delta_of(n, f)?;
    let scale = norm_power(&f.norm(), n / 2);
    Ok(IndexValue {
        value: &delta / &scale,
    })
}

pub fn index(n: i64, z: &QuadInt) -> Result<IndexValue> {
    check_even(n)?;
    if n < 0 {
        return Err(Error::NonPositiveExponent(n));
    }
    index_of(n, &factor(z)?)
}

/// Whether `I_n(z) = t` exactly.
pub fn is_powerfully_perfect(n: i64, t: u64, z: &QuadInt) -> Result<bool> {
    if t < 2 {
        return Err(Error::PreconditionFailed(format!("t = {t} must be at least 2")));
    }
    Ok(index(n, z)?.value == ExactRational::from_integer(t))
}

/// `σ_k(n) = Σ_{c | n, c > 0} c^k` over the positive integers.
pub fn sigma_int(k: i64, n: &BigUint) -> Result<ExactRational> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(factor_rational(n)
        .factors()
        .iter()
        .map(|(p, e)| {
            let p = BigInt::from(p.clone());
            (0..=*e as i64).map(|j| norm_power(&p, j * k)).sum()
        })
        .product())
}
