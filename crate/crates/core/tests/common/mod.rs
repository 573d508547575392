#![allow(dead_code)]

use proptest::prelude::*;
use qp_core::ring::ADMISSIBLE_D;
use qp_core::{QuadInt, RingId};

pub fn ring(d: i64) -> RingId {
    RingId::new(d).unwrap()
}

pub fn any_ring() -> impl Strategy<Value = RingId> {
    proptest::sample::select(ADMISSIBLE_D.to_vec()).prop_map(ring)
}

/// Any element of any ring with coordinates in `[-max, max]`.
pub fn element(max: i64) -> impl Strategy<Value = QuadInt> {
    (any_ring(), -max..=max, -max..=max).prop_map(|(r, a, b)| r.element(a, b))
}

pub fn nonzero(max: i64) -> impl Strategy<Value = QuadInt> {
    element(max).prop_filter("nonzero", |z| !z.is_zero())
}

/// Two elements of the same ring.
pub fn pair(max: i64) -> impl Strategy<Value = (QuadInt, QuadInt)> {
    (any_ring(), -max..=max, -max..=max, -max..=max, -max..=max)
        .prop_map(|(r, a, b, c, e)| (r.element(a, b), r.element(c, e)))
}
