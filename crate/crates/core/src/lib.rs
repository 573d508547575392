//! Exact divisor sums `δ_n` and abundancy indices `I_n` over the imaginary
//! quadratic rings `O_{Q(√d)}` with unique factorization, a search for
//! `n`-powerfully `t`-perfect elements, and concrete checkers for the
//! structure results on 2-powerfully perfect numbers.
//!
//! Everything is exact: elements are integer coordinates in the basis
//! `{1, ω}` and index values are big rationals.
//!
//! ```
//! use qp_core::{index, RingId};
//!
//! let gaussian = RingId::new(-1).unwrap();
//! let z = gaussian.element(9, 3);
//! assert_eq!(index(2, &z).unwrap().value().to_string(), "2");
//! ```

pub mod arith;
pub mod divisors;
pub mod error;
pub mod json;
pub mod primes;
pub mod rational;
pub mod ring;
pub mod search;
pub mod theorems;

pub use arith::{factor_rational, int_valuation, IntFactorization};
pub use divisors::{
    delta, delta_naive, divisors, index, is_powerfully_perfect, sigma_int, DivisorList, IndexValue,
};
pub use error::{Error, Result};
pub use primes::{
    classify_rational_prime, factor, prime_above, valuation, PrimeClass, QuadFactorization,
};
pub use rational::ExactRational;
pub use ring::{BasisKind, QuadInt, RingId};
pub use search::{enumerate_canonical, search_odd_norm, search_perfect, SearchReport};
