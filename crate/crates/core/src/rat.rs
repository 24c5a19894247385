//! Exact rational arithmetic helpers shared by the analytics modules.

use num_bigint::BigInt;

/// Exact rational number used throughout the analytics API.
pub type Rat = num_rational::BigRational;

pub(crate) fn rat_u(x: u64) -> Rat {
    Rat::from_integer(BigInt::from(x))
}

/// `num / den` as an exact rational. Panics if `den == 0`.
pub(crate) fn rat_frac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}
