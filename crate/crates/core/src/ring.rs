//! Element arithmetic in the rings of integers `O_{Q(√d)}` for the nine
//! negative `d` with unique factorization.
//!
//! Elements are stored as integer coordinates `(a, b)` in the integral basis
//! `{1, ω}` where `ω = √d` when `d ≡ 2, 3 (mod 4)` and `ω = (1 + √d)/2` when
//! `d ≡ 1 (mod 4)`. Nothing here touches floating point: the angular sector
//! that picks one representative per associate class is expressed as sign
//! conditions on the coordinates.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::json::big_number;

/// The admissible discriminants, in increasing order.
pub const ADMISSIBLE_D: [i64; 9] = [-163, -67, -43, -19, -11, -7, -3, -2, -1];

/// Shape of the integral basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// `{1, √d}`, for `d ≡ 2, 3 (mod 4)`.
    Plain,
    /// `{1, (1 + √d)/2}`, for `d ≡ 1 (mod 4)`.
    HalfInteger,
}

/// One of the nine imaginary quadratic rings with unique factorization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingId {
    d: i64,
}

impl RingId {
    pub fn new(d: i64) -> Result<Self> {
        if ADMISSIBLE_D.contains(&d) {
            Ok(RingId { d })
        } else {
            Err(Error::InvalidDiscriminant(d))
        }
    }

    /// All nine rings, ordered by `d`.
    pub fn all() -> impl Iterator<Item = RingId> {
        ADMISSIBLE_D.iter().map(|&d| RingId { d })
    }

    #[inline]
    pub fn d(self) -> i64 {
        self.d
    }

    pub fn basis_kind(self) -> BasisKind {
        if self.d.rem_euclid(4) == 1 {
            BasisKind::HalfInteger
        } else {
            BasisKind::Plain
        }
    }

    pub fn unit_count(self) -> usize {
        match self.d {
            -1 => 4,
            -3 => 6,
            _ => 2,
        }
    }

    /// The unit group, starting with `1`.
    pub fn units(self) -> Vec<QuadInt> {
        let pairs: &[(i64, i64)] = match self.d {
            -1 => &[(1, 0), (0, 1), (-1, 0), (0, -1)],
            // ω = (1+√-3)/2 is a primitive sixth root of unity
            -3 => &[(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)],
            _ => &[(1, 0), (-1, 0)],
        };
        pairs.iter().map(|&(a, b)| self.element(a, b)).collect()
    }

    /// `(d - 1)/4`, the constant term of `ω²` for half-integer bases.
    fn omega_square_const(self) -> i64 {
        (self.d - 1) / 4
    }

    /// `(1 - d)/4`, the `b²` coefficient of the half-integer norm form.
    pub(crate) fn norm_form_c(self) -> i64 {
        (1 - self.d) / 4
    }

    pub fn element(self, a: impl Into<BigInt>, b: impl Into<BigInt>) -> QuadInt {
        QuadInt {
            ring: self,
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn from_int(self, n: impl Into<BigInt>) -> QuadInt {
        self.element(n, 0)
    }

    pub fn zero(self) -> QuadInt {
        self.element(0, 0)
    }

    pub fn one(self) -> QuadInt {
        self.element(1, 0)
    }

    /// Text describing what `w` stands for in this ring.
    pub fn omega_description(self) -> String {
        match self.basis_kind() {
            BasisKind::Plain if self.d == -1 => "w = i".to_string(),
            BasisKind::Plain => format!("w = sqrt({})", self.d),
            BasisKind::HalfInteger => format!("w = (1 + sqrt({}))/2", self.d),
        }
    }
}

/// Serialized as the bare discriminant.
impl Serialize for RingId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_i64(self.d)
    }
}

impl fmt::Display for RingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O_Q(sqrt({}))", self.d)
    }
}

/// An element `a + b·ω` of `O_{Q(√d)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadInt {
    ring: RingId,
    a: BigInt,
    b: BigInt,
}

impl QuadInt {
    #[inline]
    pub fn ring(&self) -> RingId {
        self.ring
    }

    /// Coefficient of `1`.
    #[inline]
    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// Coefficient of `ω`.
    #[inline]
    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    fn same_ring(&self, other: &QuadInt) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::MixedRings {
                left: self.ring.d,
                right: other.ring.d,
            })
        }
    }

    pub fn checked_add(&self, other: &QuadInt) -> Result<QuadInt> {
        self.same_ring(other)?;
        Ok(self.ring.element(&self.a + &other.a, &self.b + &other.b))
    }

    pub fn checked_sub(&self, other: &QuadInt) -> Result<QuadInt> {
        self.same_ring(other)?;
        Ok(self.ring.element(&self.a - &other.a, &self.b - &other.b))
    }

    pub fn checked_mul(&self, other: &QuadInt) -> Result<QuadInt> {
        self.same_ring(other)?;
        let (a1, b1, a2, b2) = (&self.a, &self.b, &other.a, &other.b);
        let bb = b1 * b2;
        let cross = a1 * b2 + a2 * b1;
        let out = match self.ring.basis_kind() {
            // √d·√d = d
            BasisKind::Plain => self.ring.element(a1 * a2 + &bb * self.ring.d, cross),
            // ω² = ω + (d-1)/4
            BasisKind::HalfInteger => self.ring.element(
                a1 * a2 + &bb * self.ring.omega_square_const(),
                cross + bb,
            ),
        };
        Ok(out)
    }

    pub fn pow(&self, mut exp: u32) -> QuadInt {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn conjugate(&self) -> QuadInt {
        match self.ring.basis_kind() {
            BasisKind::Plain => self.ring.element(self.a.clone(), -&self.b),
            // conj(ω) = 1 - ω
            BasisKind::HalfInteger => self.ring.element(&self.a + &self.b, -&self.b),
        }
    }

    /// `N(z) = z·z̄`, a nonnegative integer.
    pub fn norm(&self) -> BigInt {
        let (a, b) = (&self.a, &self.b);
        match self.ring.basis_kind() {
            BasisKind::Plain => a * a - b * b * self.ring.d,
            BasisKind::HalfInteger => a * a + a * b + b * b * self.ring.norm_form_c(),
        }
    }

    /// `2·Re(z)`, an integer in both basis shapes.
    pub(crate) fn twice_real(&self) -> BigInt {
        match self.ring.basis_kind() {
            BasisKind::Plain => &self.a * 2,
            BasisKind::HalfInteger => &self.a * 2 + &self.b,
        }
    }

    /// Exact quotient `self / divisor`, or `None` when `divisor` does not
    /// divide `self` in the ring.
    pub fn exact_divide(&self, divisor: &QuadInt) -> Result<Option<QuadInt>> {
        self.same_ring(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let den = divisor.norm();
        let num = self.checked_mul(&divisor.conjugate())?;
        let (qa, ra) = num.a.div_rem(&den);
        if !ra.is_zero() {
            return Ok(None);
        }
        let (qb, rb) = num.b.div_rem(&den);
        if !rb.is_zero() {
            return Ok(None);
        }
        Ok(Some(self.ring.element(qa, qb)))
    }

    pub fn divides(&self, other: &QuadInt) -> Result<bool> {
        Ok(other.exact_divide(self)?.is_some())
    }

    pub fn is_associated(&self, other: &QuadInt) -> Result<bool> {
        self.same_ring(other)?;
        if other.is_zero() {
            return Ok(self.is_zero());
        }
        Ok(match self.exact_divide(other)? {
            Some(q) => q.is_unit(),
            None => false,
        })
    }

    /// Membership in the half-open sector that holds exactly one element of
    /// each associate class: `[0, π/2)` for `d = -1`, `[0, π/3)` for `d = -3`
    /// and `[0, π)` otherwise.
    pub fn in_fundamental_sector(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let (a, b) = (&self.a, &self.b);
        Ok(match self.ring.d {
            -1 | -3 => a.is_positive() && !b.is_negative(),
            // Im(z) has the sign of b in both basis shapes; on the real axis Re = a.
            _ => b.is_positive() || (b.is_zero() && a.is_positive()),
        })
    }

    /// The unique unit multiple of `self` in the fundamental sector.
    pub fn canonical_associate(&self) -> Result<QuadInt> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        for u in self.ring.units() {
            let candidate = &u * self;
            if candidate.in_fundamental_sector()? {
                return Ok(candidate);
            }
        }
        unreachable!("every nonzero element has a unit multiple in the sector")
    }

    /// Parse `<int>[(+|-)<uint>*w]`. In `Z[i]` the letter `i` may stand in
    /// for `w`.
    pub fn parse(ring: RingId, input: &str) -> Result<QuadInt> {
        let fail = |reason: &str| Error::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        if input.is_empty() {
            return Err(fail("empty input"));
        }
        if input.chars().any(char::is_whitespace) {
            return Err(fail("whitespace is not allowed"));
        }
        if !input.is_ascii() {
            return Err(fail("unexpected character"));
        }
        // The sign of the first coefficient belongs to it, so search for the
        // separating sign after the first character.
        let split = input[1..].find(['+', '-']).map(|i| i + 1);
        let (a_text, rest) = match split {
            Some(i) => (&input[..i], Some(&input[i..])),
            None => (input, None),
        };
        let a = parse_int(a_text).ok_or_else(|| fail("malformed constant term"))?;
        let b = match rest {
            None => BigInt::zero(),
            Some(rest) => {
                let (sign, body) = rest.split_at(1);
                let digits = body
                    .strip_suffix("*w")
                    .or_else(|| if ring.d == -1 { body.strip_suffix("*i") } else { None })
                    .ok_or_else(|| fail("second term must end in *w"))?;
                if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
                    return Err(fail("malformed coefficient of w"));
                }
                let magnitude: BigInt = digits.parse().map_err(|_| fail("malformed coefficient of w"))?;
                if sign == "-" {
                    -magnitude
                } else {
                    magnitude
                }
            }
        };
        Ok(ring.element(a, b))
    }

    /// `3+9i` style rendering for `Z[i]`; other rings fall back to `Display`.
    pub fn pretty(&self) -> String {
        if self.ring.d != -1 {
            return self.to_string();
        }
        let (a, b) = (&self.a, &self.b);
        match (a.is_zero(), b.is_zero()) {
            (_, true) => a.to_string(),
            (true, false) => format!("{}i", coefficient(b)),
            (false, false) => {
                let sign = if b.is_negative() { '-' } else { '+' };
                format!("{}{}{}i", a, sign, coefficient(&b.abs()))
            }
        }
    }

    /// The `(norm, a, b)` order used for sorting divisors, factors and hits.
    pub fn cmp_by_norm(&self, other: &QuadInt) -> Ordering {
        self.norm()
            .cmp(&other.norm())
            .then_with(|| self.a.cmp(&other.a))
            .then_with(|| self.b.cmp(&other.b))
    }
}

fn parse_int(text: &str) -> Option<BigInt> {
    let digits = text.strip_prefix('-').unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

fn coefficient(b: &BigInt) -> String {
    if b.is_one() {
        String::new()
    } else if *b == -BigInt::one() {
        "-".to_string()
    } else {
        b.to_string()
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.b.is_negative() {
            write!(f, "{}-{}*w", self.a, -&self.b)
        } else {
            write!(f, "{}+{}*w", self.a, self.b)
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&QuadInt> for &QuadInt {
            type Output = QuadInt;

            /// Panics when the operands belong to different rings; use the
            /// `checked_*` form to get an error instead.
            fn $method(self, rhs: &QuadInt) -> QuadInt {
                self.$checked(rhs).expect("ring mismatch")
            }
        }

        impl $trait<QuadInt> for QuadInt {
            type Output = QuadInt;

            fn $method(self, rhs: QuadInt) -> QuadInt {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &QuadInt {
    type Output = QuadInt;

    fn neg(self) -> QuadInt {
        self.ring.element(-&self.a, -&self.b)
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;

    fn neg(self) -> QuadInt {
        -&self
    }
}

impl Serialize for QuadInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("a", &big_number(&self.a))?;
        map.serialize_entry("b", &big_number(&self.b))?;
        map.serialize_entry("d", &self.ring.d)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for QuadInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            d: i64,
            a: serde_json::Number,
            b: serde_json::Number,
        }
        let raw = Raw::deserialize(deserializer)?;
        let ring = RingId::new(raw.d).map_err(D::Error::custom)?;
        let a: BigInt = raw.a.to_string().parse().map_err(D::Error::custom)?;
        let b: BigInt = raw.b.to_string().parse().map_err(D::Error::custom)?;
        Ok(ring.element(a, b))
    }
}
