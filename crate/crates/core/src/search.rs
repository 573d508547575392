//! Exhaustive search for `n`-powerfully `t`-perfect elements up to a norm
//! bound.
//!
//! The norm range `[1, bound]` is cut into shells of fixed width. Each shell
//! enumerates its lattice points independently, so shells can be processed
//! in parallel; the results are concatenated in shell order, which makes the
//! output independent of scheduling.

use std::time::Instant;

use num_integer::Roots;
use rayon::prelude::*;
use serde::Serialize;

use crate::divisors::{delta_of, divisor_count, divisors_of, index_of, sum_over_divisors, DIVISOR_CAP};
use crate::error::{Error, Result};
use crate::primes::factor;
use crate::rational::ExactRational;
use crate::ring::{BasisKind, QuadInt, RingId};
use crate::theorems::{check_odd_structure, check_prime_count, prime_count_threshold, VerifierReport};

/// Width of one norm shell.
pub const SHELL_WIDTH: u64 = 1 << 12;

/// Canonical elements with `lo ≤ N(z) ≤ hi`, sorted by `(norm, a, b)`.
pub fn canonical_in_shell(ring: RingId, lo: u64, hi: u64) -> Vec<QuadInt> {
    let lo = lo.max(1);
    if lo > hi {
        return Vec::new();
    }
    let abs_d = ring.d().unsigned_abs();
    let half = ring.basis_kind() == BasisKind::HalfInteger;
    // Plain: N = a² + |d|b².  HalfInteger: 4N = (2a + b)² + |d|b².
    let scale = if half { 4 } else { 1 };
    let (lo_s, hi_s) = (lo * scale, hi * scale);
    let sector_is_quadrant = matches!(ring.d(), -1 | -3);

    let mut points: Vec<(u64, i64, i64)> = Vec::new();
    let mut b: u64 = 0;
    while abs_d * b * b <= hi_s {
        let used = abs_d * b * b;
        let s_max = (hi_s - used).sqrt();
        let s_min = ceil_sqrt(lo_s.saturating_sub(used));
        let bi = b as i64;
        for s in s_min..=s_max {
            let s = s as i64;
            let roots: &[i64] = if s == 0 { &[0] } else { &[s, -s] };
            for &root in roots {
                let a = if half {
                    if (root - bi) % 2 != 0 {
                        continue;
                    }
                    (root - bi) / 2
                } else {
                    root
                };
                let in_sector = if sector_is_quadrant { a > 0 } else { bi > 0 || a > 0 };
                if in_sector {
                    let norm = ((root * root) as u64 + used) / scale;
                    points.push((norm, a, bi));
                }
            }
        }
        b += 1;
    }
    points.sort_unstable();
    points
        .into_iter()
        .map(|(_, a, b)| ring.element(a, b))
        .collect()
}

fn ceil_sqrt(x: u64) -> u64 {
    let r = x.sqrt();
    if r * r < x {
        r + 1
    } else {
        r
    }
}

fn shells(bound: u64) -> impl Iterator<Item = (u64, u64)> + Clone {
    (0..bound.div_ceil(SHELL_WIDTH)).map(move |i| {
        let lo = i * SHELL_WIDTH + 1;
        (lo, (lo + SHELL_WIDTH - 1).min(bound))
    })
}

/// Lazily yields every canonical element with `1 ≤ N(z) ≤ bound`, once each,
/// in `(norm, a, b)` order.
pub struct CanonicalElements {
    ring: RingId,
    pending: Box<dyn Iterator<Item = (u64, u64)> + Send>,
    current: std::vec::IntoIter<QuadInt>,
}

impl Iterator for CanonicalElements {
    type Item = QuadInt;

    fn next(&mut self) -> Option<QuadInt> {
        loop {
            if let Some(z) = self.current.next() {
                return Some(z);
            }
            let (lo, hi) = self.pending.next()?;
            self.current = canonical_in_shell(self.ring, lo, hi).into_iter();
        }
    }
}

pub fn enumerate_canonical(ring: RingId, bound: u64) -> CanonicalElements {
    CanonicalElements {
        ring,
        pending: Box::new(shells(bound)),
        current: Vec::new().into_iter(),
    }
}

/// Outcome of a bounded search.
#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub ring: RingId,
    pub n: i64,
    pub t: u64,
    pub norm_bound: u64,
    pub odd_norm_only: bool,
    pub hits: Vec<QuadInt>,
    pub elements_scanned: u64,
    /// Structure checks run on odd-norm hits.
    pub verifications: Vec<VerifierReport>,
    pub wall_time_ms: u64,
}

/// Whether `z` is a hit, with the closed-form answer re-derived by divisor
/// enumeration before it is accepted.
fn test_element(z: &QuadInt, n: i64, t: u64) -> Result<bool> {
    let f = factor(z)?;
    let target = ExactRational::from_integer(t);
    if index_of(n, &f)?.into_inner() != target {
        return Ok(false);
    }
    let closed = delta_of(n, &f)?;
    if divisor_count(&f) <= DIVISOR_CAP.into() {
        let listed = sum_over_divisors(n, &divisors_of(&f)?);
        if listed != closed {
            return Err(Error::OracleMismatch(z.to_string()));
        }
    }
    let scale = ExactRational::from_integer(z.norm().pow((n / 2) as u32));
    if &closed / &scale != target {
        return Err(Error::OracleMismatch(z.to_string()));
    }
    Ok(true)
}

fn scan(ring: RingId, n: i64, t: u64, bound: u64, odd_only: bool) -> Result<(Vec<QuadInt>, u64)> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::OddExponent(n));
    }
    if n < 0 {
        return Err(Error::NonPositiveExponent(n));
    }
    if t < 2 {
        return Err(Error::PreconditionFailed(format!("t = {t} must be at least 2")));
    }
    let per_shell: Vec<(Vec<QuadInt>, u64)> = shells(bound)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut hits = Vec::new();
            let mut scanned = 0u64;
            for z in canonical_in_shell(ring, lo, hi) {
                if odd_only && !z.norm().bit(0) {
                    continue;
                }
                scanned += 1;
                if test_element(&z, n, t)? {
                    hits.push(z);
                }
            }
            Ok((hits, scanned))
        })
        .collect::<Result<_>>()?;
    let scanned = per_shell.iter().map(|(_, s)| s).sum();
    let hits = per_shell.into_iter().flat_map(|(h, _)| h).collect();
    Ok((hits, scanned))
}

/// Every canonical `z` with `N(z) ≤ bound` and `I_n(z) = t`.
pub fn search_perfect(ring: RingId, n: i64, t: u64, bound: u64) -> Result<SearchReport> {
    let start = Instant::now();
    let (hits, elements_scanned) = scan(ring, n, t, bound, false)?;
    Ok(SearchReport {
        ring,
        n,
        t,
        norm_bound: bound,
        odd_norm_only: false,
        hits,
        elements_scanned,
        verifications: Vec::new(),
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

/// Odd-norm elements with `I_2(z) = 2`. Every hit is run through the
/// odd-norm structure check and, where a threshold is known for the ring,
/// the prime-divisor count check.
pub fn search_odd_norm(ring: RingId, bound: u64) -> Result<SearchReport> {
    let start = Instant::now();
    let (hits, elements_scanned) = scan(ring, 2, 2, bound, true)?;
    let mut verifications = Vec::new();
    for z in &hits {
        verifications.push(check_odd_structure(z)?);
        if prime_count_threshold(ring).is_some() {
            verifications.push(check_prime_count(z)?);
        }
    }
    Ok(SearchReport {
        ring,
        n: 2,
        t: 2,
        norm_bound: bound,
        odd_norm_only: true,
        hits,
        elements_scanned,
        verifications,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}
