//! Concrete checkers for the structure of 2-powerfully perfect elements.
//!
//! In the three rings where 2 is not inert (`d = -1, -2, -7`) an even-norm
//! 2-powerfully perfect `z` factors as `ξ^γ · x` with `N(ξ) = 2` and `N(x)`
//! odd, `q = 2^{γ+1} - 1` must be an inert Mersenne prime, and writing
//! `δ₂(x) = 2^{γ+1}·m`, `N(x) = q·m`, `m = q^k·v` with `q ∤ v` forces `k` odd,
//! `v ≥ q + 2` and a lower bound on `m`. Odd-norm examples must look like
//! `π^k·x²` with `k ≡ N(π) ≡ 1 (mod 4)` and have many prime divisors.
//!
//! None of the checkers assumes these facts. Each one recomputes both sides
//! and records the comparison in a [`VerifierReport`], so a bug or a
//! counterexample shows up as a failed check instead of a panic.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{is_prime_int, valuation_unchecked};
use crate::divisors::{delta, delta_of, index, index_of};
use crate::error::{Error, Result};
use crate::primes::{
    classify_rational_prime, factor, prime_above, primes_with_odd_norm_up_to, split_pair,
    PrimeClass, QuadFactorization,
};
use crate::rational::ExactRational;
use crate::ring::{QuadInt, RingId};
use crate::search::search_perfect;

/// What a report is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremId {
    /// `q = 2^{γ+1} - 1` is an inert Mersenne prime, `δ₂(x) = 2^{γ+1}m`,
    /// `N(x) = qm`.
    EvenDecomposition,
    /// `k` odd, `v ≥ q + 2`, the lower bounds on `m`, and for `d = -7` the
    /// congruences on `γ` and `q`.
    StructureBounds,
    /// `z ~ π^k x²` with `k ≡ N(π) ≡ 1 (mod 4)` for odd norm.
    OddStructure,
    /// Minimum number of non-associated prime divisors for odd norm.
    PrimeCount,
    /// `I₂(ξz) = (3/2)·I₂(z)` for odd-norm `z`.
    Lift,
    /// Every even-norm 2-powerfully perfect element found has `k = 1`.
    KEqualsOne,
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TheoremId::EvenDecomposition => "even-decomposition",
            TheoremId::StructureBounds => "structure-bounds",
            TheoremId::OddStructure => "odd-structure",
            TheoremId::PrimeCount => "prime-count",
            TheoremId::Lift => "lift",
            TheoremId::KEqualsOne => "k-equals-one",
        };
        f.write_str(s)
    }
}

/// One comparison inside a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
    /// For inequality checks: whether the bound is attained.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equality: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifierReport {
    pub theorem: TheoremId,
    pub ring: RingId,
    pub subject: Option<QuadInt>,
    /// Norm bound, for reports produced by a scan.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
    pub checks: Vec<Check>,
    pub overall: bool,
}

impl VerifierReport {
    fn new(theorem: TheoremId, ring: RingId, subject: Option<QuadInt>) -> Self {
        VerifierReport {
            theorem,
            ring,
            subject,
            bound: None,
            checks: Vec::new(),
            overall: true,
        }
    }

    fn push(&mut self, name: impl Into<String>, expected: impl fmt::Display, actual: impl fmt::Display, pass: bool) {
        self.checks.push(Check {
            name: name.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass,
            equality: None,
        });
        self.overall &= pass;
    }

    /// Record `actual ≥ lower`, noting whether it holds with equality.
    fn push_at_least(&mut self, name: impl Into<String>, lower: &BigInt, actual: &BigInt) {
        self.checks.push(Check {
            name: name.into(),
            expected: format!(">= {lower}"),
            actual: actual.to_string(),
            pass: actual >= lower,
            equality: Some(actual == lower),
        });
        self.overall &= actual >= lower;
    }

    fn extend(&mut self, other: VerifierReport) {
        for c in other.checks {
            self.overall &= c.pass;
            self.checks.push(c);
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn require(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::PreconditionFailed(what()))
    }
}

fn require_two_not_inert(ring: RingId) -> Result<()> {
    require(matches!(ring.d(), -1 | -2 | -7), || {
        format!("2 is inert in {ring}; only d = -1, -2, -7 have a prime of norm 2")
    })
}

/// The canonical prime of norm 2 (`1+i`, `√-2`, `(1+√-7)/2`).
pub fn norm_two_prime(ring: RingId) -> Result<QuadInt> {
    require_two_not_inert(ring)?;
    prime_above(2u32, ring)
}

fn index_two(z: &QuadInt) -> Result<ExactRational> {
    Ok(index(2, z)?.into_inner())
}

fn norm_is_odd(z: &QuadInt) -> bool {
    z.norm().is_odd()
}

/// `z = ξ^γ · x` for an even-norm 2-powerfully perfect `z`, together with
/// the integers `q = 2^{γ+1} - 1`, `m = δ₂(x)/2^{γ+1}`, and `m = q^k·v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvenNormDecomposition {
    pub ring: RingId,
    pub subject: QuadInt,
    /// The norm-2 prime that divides `subject`.
    pub xi: QuadInt,
    /// For `d = -7`: true when `xi` is `ε̄` (reduced to the sector) rather
    /// than `ε = (1+√-7)/2`.
    pub xi_is_conjugate: bool,
    pub gamma: u32,
    /// `subject / xi^gamma`, not reduced to the sector.
    pub x: QuadInt,
    #[serde(serialize_with = "crate::json::serialize_big")]
    pub q: BigInt,
    #[serde(serialize_with = "crate::json::serialize_big")]
    pub m: BigInt,
    pub k: u32,
    #[serde(serialize_with = "crate::json::serialize_big")]
    pub v: BigInt,
}

pub fn decompose_even(z: &QuadInt) -> Result<EvenNormDecomposition> {
    let ring = z.ring();
    require_two_not_inert(ring)?;
    require(!z.is_zero(), || "z must be nonzero".into())?;
    require(!norm_is_odd(z), || format!("N({z}) = {} is odd", z.norm()))?;
    require(index_two(z)? == ExactRational::from_integer(2), || {
        format!("{z} is not 2-powerfully perfect")
    })?;

    let (xi, xi_is_conjugate, gamma) = if ring.d() == -7 {
        let (eps, eps_bar) = split_pair(2u32, ring)?;
        let g1 = crate::primes::valuation(&eps, z)?;
        let g2 = crate::primes::valuation(&eps_bar, z)?;
        match (g1, g2) {
            (0, 0) => unreachable!("even norm means a norm-2 prime divides z"),
            (g, 0) => (eps, false, g),
            (0, g) => (eps_bar, true, g),
            _ => return Err(Error::BothNormTwoPrimesDivide(z.to_string())),
        }
    } else {
        let xi = prime_above(2u32, ring)?;
        let g = crate::primes::valuation(&xi, z)?;
        (xi, false, g)
    };

    let x = z
        .exact_divide(&xi.pow(gamma))?
        .expect("xi^gamma divides z by construction");
    let two_pow = BigInt::one() << (gamma + 1);
    let q = &two_pow - 1;
    let delta_x = delta(2, &x)?;
    let delta_x = delta_x.numerator();
    let (m, rem) = delta_x.div_rem(&two_pow);
    require(rem.is_zero(), || {
        format!("delta_2({x}) = {delta_x} is not divisible by 2^(gamma+1) = {two_pow}")
    })?;
    let k = valuation_unchecked(&q, &m);
    let v = &m / q.pow(k);
    Ok(EvenNormDecomposition {
        ring,
        subject: z.clone(),
        xi,
        xi_is_conjugate,
        gamma,
        x,
        q,
        m,
        k,
        v,
    })
}

/// Whether `q = 2^{γ+1} - 1` is a rational prime that stays inert; for
/// `d = -7` also `q ≡ 3 (mod 7)` and `γ ≡ 1 (mod 3)`.
pub fn check_mersenne_inert(gamma: u32, ring: RingId) -> VerifierReport {
    let mut report = VerifierReport::new(TheoremId::EvenDecomposition, ring, None);
    let q: BigInt = (BigInt::one() << (gamma + 1)) - 1;
    let prime = is_prime_int(&q);
    report.push("q = 2^(gamma+1) - 1 is prime", "prime", &q, prime);
    let class = if prime {
        classify_rational_prime(q.magnitude().clone(), ring)
            .map(|c| c.to_string())
            .unwrap_or_else(|e| e.to_string())
    } else {
        "not prime".to_string()
    };
    report.push("q is inert", PrimeClass::Inert, &class, class == "inert");
    if ring.d() == -7 {
        push_seven_congruences(&mut report, gamma, &q);
    }
    report
}

fn push_seven_congruences(report: &mut VerifierReport, gamma: u32, q: &BigInt) {
    report.push("gamma = 1 (mod 3)", 1, gamma % 3, gamma % 3 == 1);
    let q_mod_7 = q.mod_floor(&BigInt::from(7));
    report.push("q = 3 (mod 7)", 3, &q_mod_7, q_mod_7 == BigInt::from(3));
}

/// The conclusion of the even-norm decomposition: the pivotal identity
/// `2^{γ+1}·N(x) = q·δ₂(x)`, `δ₂(x) = 2^{γ+1}·m`, `N(x) = q·m`, parities,
/// reconstruction, and the Mersenne/inert conditions on `q`.
pub fn check_even_decomposition(dec: &EvenNormDecomposition) -> Result<VerifierReport> {
    let mut report = VerifierReport::new(TheoremId::EvenDecomposition, dec.ring, Some(dec.subject.clone()));
    let two_pow = BigInt::one() << (dec.gamma + 1);
    let norm_x = dec.x.norm();
    let delta_x = delta(2, &dec.x)?.numerator().clone();

    let rebuilt = &dec.xi.pow(dec.gamma) * &dec.x;
    report.push("z = xi^gamma * x", &dec.subject, &rebuilt, rebuilt == dec.subject);
    report.push("N(xi) = 2", 2, dec.xi.norm(), dec.xi.norm() == BigInt::from(2));
    report.push("gamma >= 1", ">= 1", dec.gamma, dec.gamma >= 1);
    report.push("N(x) odd", "odd", &norm_x, norm_x.is_odd());
    let lhs = &two_pow * &norm_x;
    let rhs = &dec.q * &delta_x;
    report.push("2^(gamma+1) N(x) = q delta_2(x)", &lhs, &rhs, lhs == rhs);
    let dm = &two_pow * &dec.m;
    report.push("delta_2(x) = 2^(gamma+1) m", &dm, &delta_x, dm == delta_x);
    let qm = &dec.q * &dec.m;
    report.push("N(x) = q m", &qm, &norm_x, qm == norm_x);
    report.push("m odd", "odd", &dec.m, dec.m.is_odd());

    if dec.ring.d() == -7 {
        let (eps, eps_bar) = split_pair(2u32, dec.ring)?;
        let both = eps.divides(&dec.subject)? && eps_bar.divides(&dec.subject)?;
        let which = if dec.xi_is_conjugate { "conj(epsilon)" } else { "epsilon" };
        report.push("only one of epsilon, conj(epsilon) divides z", which, if both { "both" } else { which }, !both);
    }
    let mut mersenne = check_mersenne_inert(dec.gamma, dec.ring);
    // the congruences belong to the structure-bounds report
    mersenne.checks.retain(|c| !c.name.contains("(mod"));
    report.extend(mersenne);
    Ok(report)
}

/// `Σ_{j=0}^{(k-1)/2} q^{2j}`.
fn even_power_sum(q: &BigInt, k: u32) -> BigInt {
    let top = k.saturating_sub(1) / 2;
    (0..=top).map(|j| q.pow(2 * j)).sum()
}

/// `k` odd, `v ≥ q + 2`, `m ≥ q^{k+1} + (q+3)·Σ q^{2j} ≥ q² + q + 3`, and
/// `ρ_q(x) = (k+1)/2`; for `d = -7` also `γ ≡ 1 (mod 3)`, `q ≡ 3 (mod 7)`.
pub fn check_structure_bounds(dec: &EvenNormDecomposition) -> VerifierReport {
    let mut report = VerifierReport::new(TheoremId::StructureBounds, dec.ring, Some(dec.subject.clone()));
    let q = &dec.q;

    let rebuilt = q.pow(dec.k) * &dec.v;
    report.push("m = q^k v", &dec.m, &rebuilt, rebuilt == dec.m);
    let q_divides_v = !q.is_zero() && dec.v.is_multiple_of(q);
    report.push("q does not divide v", "false", q_divides_v, !q_divides_v);
    report.push("k odd", "odd", dec.k, dec.k % 2 == 1);
    report.push_at_least("v >= q + 2", &(q + 2), &dec.v);
    let bound = q.pow(dec.k + 1) + (q + 3) * even_power_sum(q, dec.k);
    report.push_at_least("m >= q^(k+1) + (q+3) sum_{j<=(k-1)/2} q^(2j)", &bound, &dec.m);
    report.push_at_least("m >= q^2 + q + 3", &(q * q + q + 3), &dec.m);

    // ρ_q(x) by repeated division by the rational integer q
    let q_elem = dec.ring.from_int(q.clone());
    let mut rest = dec.x.clone();
    let mut rho = 0u32;
    if !q.is_zero() && q.abs() > BigInt::one() {
        while let Ok(Some(next)) = rest.exact_divide(&q_elem) {
            rest = next;
            rho += 1;
        }
    }
    report.push("2 rho_q(x) = k + 1", dec.k + 1, 2 * rho, 2 * rho == dec.k + 1);

    if dec.ring.d() == -7 {
        push_seven_congruences(&mut report, dec.gamma, q);
    }
    report
}

/// Odd-norm structure on a factorization: exactly one prime carries an odd
/// exponent `k`, and `k ≡ N(π) ≡ 1 (mod 4)`.
pub fn check_odd_structure_shape(f: &QuadFactorization, subject: Option<QuadInt>) -> VerifierReport {
    let mut report = VerifierReport::new(TheoremId::OddStructure, f.ring(), subject);
    let norm = f.norm();
    report.push("N(z) odd", "odd", &norm, norm.is_odd());
    let odd: Vec<&(QuadInt, u32)> = f.factors().iter().filter(|(_, e)| e % 2 == 1).collect();
    report.push("primes with odd exponent", 1, odd.len(), odd.len() == 1);
    if let [(pi, k)] = odd.as_slice() {
        report.push(format!("k = 1 (mod 4) for {pi}"), 1, k % 4, k % 4 == 1);
        let n_mod_4 = pi.norm().mod_floor(&BigInt::from(4));
        report.push(format!("N({pi}) = 1 (mod 4)"), 1, &n_mod_4, n_mod_4.is_one());
    }
    report
}

pub fn check_odd_structure(z: &QuadInt) -> Result<VerifierReport> {
    require(!z.is_zero(), || "z must be nonzero".into())?;
    require(norm_is_odd(z), || format!("N({z}) = {} is even", z.norm()))?;
    let f = factor(z)?;
    require(index_of(2, &f)?.into_inner() == ExactRational::from_integer(2), || {
        format!("{z} is not 2-powerfully perfect")
    })?;
    Ok(check_odd_structure_shape(&f, Some(z.clone())))
}

pub fn count_nonassociated_primes(z: &QuadInt) -> Result<usize> {
    Ok(factor(z)?.prime_count())
}

/// Minimum number of non-associated prime divisors of an odd-norm
/// 2-powerfully perfect element, where one is known.
pub fn prime_count_threshold(ring: RingId) -> Option<usize> {
    match ring.d() {
        -1 | -2 => Some(5),
        -7 => Some(11),
        _ => None,
    }
}

pub fn check_prime_count_shape(f: &QuadFactorization, subject: Option<QuadInt>) -> Result<VerifierReport> {
    let threshold = prime_count_threshold(f.ring()).ok_or_else(|| {
        Error::PreconditionFailed(format!("no prime-count threshold is known for {}", f.ring()))
    })?;
    let mut report = VerifierReport::new(TheoremId::PrimeCount, f.ring(), subject);
    let count = f.prime_count();
    report.push("non-associated prime divisors", format!(">= {threshold}"), count, count >= threshold);
    Ok(report)
}

pub fn check_prime_count(z: &QuadInt) -> Result<VerifierReport> {
    require(!z.is_zero(), || "z must be nonzero".into())?;
    require(norm_is_odd(z), || format!("N({z}) = {} is even", z.norm()))?;
    let f = factor(z)?;
    require(index_of(2, &f)?.into_inner() == ExactRational::from_integer(2), || {
        format!("{z} is not 2-powerfully perfect")
    })?;
    check_prime_count_shape(&f, Some(z.clone()))
}

/// The first `count` canonical primes of odd norm, by `(norm, a, b)`.
pub fn smallest_odd_norm_primes(ring: RingId, count: usize) -> Vec<QuadInt> {
    let mut limit = 64;
    loop {
        let primes = primes_with_odd_norm_up_to(ring, limit);
        if primes.len() >= count {
            return primes.into_iter().take(count).collect();
        }
        limit *= 4;
    }
}

/// `Π N/(N - 1)`: the supremum of `I₂` over elements whose prime divisors
/// have the given norms.
pub fn abundancy_ceiling(norms: &[BigInt]) -> ExactRational {
    norms
        .iter()
        .map(|n| ExactRational::new(n.clone(), n - 1))
        .product()
}

/// `I₂(ξ) = 3/2` and `I₂(ξz) = (3/2)·I₂(z)` for odd-norm `z`.
pub fn check_lift_identity(z: &QuadInt) -> Result<VerifierReport> {
    let ring = z.ring();
    let xi = norm_two_prime(ring)?;
    require(!z.is_zero(), || "z must be nonzero".into())?;
    require(norm_is_odd(z), || format!("N({z}) = {} is even", z.norm()))?;
    let mut report = VerifierReport::new(TheoremId::Lift, ring, Some(z.clone()));
    let three_halves = ExactRational::new(3, 2);
    let i_xi = index_two(&xi)?;
    report.push("I_2(xi) = 3/2", &three_halves, &i_xi, i_xi == three_halves);
    let i_z = index_two(z)?;
    let lifted = &xi * z;
    let i_lifted = index_two(&lifted)?;
    let expected = &three_halves * &i_z;
    report.push("I_2(xi z) = (3/2) I_2(z)", &expected, &i_lifted, i_lifted == expected);
    Ok(report)
}

/// `ξz` for an odd-norm `z` with `I₂(z) = 2`; the result has `I₂ = 3`.
pub fn lift_to_3perfect(z: &QuadInt) -> Result<QuadInt> {
    let ring = z.ring();
    let xi = norm_two_prime(ring)?;
    require(!z.is_zero(), || "z must be nonzero".into())?;
    require(norm_is_odd(z), || format!("N({z}) = {} is even", z.norm()))?;
    require(index_two(z)? == ExactRational::from_integer(2), || {
        format!("{z} is not 2-powerfully perfect")
    })?;
    let lifted = &xi * z;
    let value = index_two(&lifted)?;
    if value != ExactRational::from_integer(3) {
        return Err(Error::OracleMismatch(format!("I_2({lifted}) = {value}, expected 3")));
    }
    Ok(lifted)
}

/// Search up to `bound` and check `k = 1` for every even-norm hit. With no
/// even-norm hits the report passes vacuously.
pub fn conjecture_scan(ring: RingId, bound: u64) -> Result<VerifierReport> {
    require_two_not_inert(ring)?;
    let search = search_perfect(ring, 2, 2, bound)?;
    let mut report = VerifierReport::new(TheoremId::KEqualsOne, ring, None);
    report.bound = Some(bound);
    for z in search.hits.iter().filter(|z| !norm_is_odd(z)) {
        let dec = decompose_even(z)?;
        report.push(format!("k = 1 for {z}"), 1, dec.k, dec.k == 1);
    }
    Ok(report)
}

/// δ₂ of a prime power `π^α`, used by the parity argument for odd norms.
pub fn delta_two_prime_power(pi: &QuadInt, alpha: u32) -> Result<BigInt> {
    let f = QuadFactorization::from_parts(pi.ring().one(), vec![(pi.clone(), alpha)])?;
    Ok(delta_of(2, &f)?.numerator().clone())
}
