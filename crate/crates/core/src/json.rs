//! Helpers for the JSON renderings. Integer coordinates, norms and exponents
//! are emitted as JSON numbers of unbounded size; divisor-function values are
//! emitted as decimal strings.

use num_bigint::BigInt;
use serde_json::{Number, Value};

pub(crate) fn big_number(n: &BigInt) -> Number {
    n.to_string()
        .parse()
        .expect("decimal integers are valid JSON numbers")
}

/// Render with sorted keys and no insignificant whitespace.
pub fn to_canonical_string<T: serde::Serialize>(value: &T) -> String {
    // Value's object map is a BTreeMap, so routing through it sorts keys.
    let value: Value = serde_json::to_value(value).expect("serializable");
    serde_json::to_string(&value).expect("serializable")
}

pub fn to_canonical_pretty<T: serde::Serialize>(value: &T) -> String {
    let value: Value = serde_json::to_value(value).expect("serializable");
    serde_json::to_string_pretty(&value).expect("serializable")
}

pub(crate) fn serialize_big<S: serde::Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&big_number(n), s)
}
