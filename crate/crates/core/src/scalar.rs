//! Scalar abstraction for loss values, cost tables and probabilities.
//!
//! Everything combinatorial (degrees, demands, out-degrees) is integral; the
//! quantities that are averaged or weighted are generic over [`Scalar`] so the
//! same code runs on exact rationals and on IEEE floats.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, NumAssign, ToPrimitive, Zero};

/// Exact rational with machine-word numerator and denominator.
pub type Rational = Ratio<i64>;

/// A value type usable for losses, FDS costs and distribution weights.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + NumAssign + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_rational(r: Rational) -> Self;

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// Whether comparisons on this type are exact.
    fn is_exact() -> bool;
}

impl Scalar for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }

    fn is_exact() -> bool {
        true
    }
}

impl Scalar for BigRational {
    fn from_rational(r: Rational) -> Self {
        BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
    }

    fn is_exact() -> bool {
        true
    }
}

impl Scalar for f64 {
    fn from_rational(r: Rational) -> Self {
        *r.numer() as f64 / *r.denom() as f64
    }

    fn is_exact() -> bool {
        false
    }
}

impl Scalar for f32 {
    fn from_rational(r: Rational) -> Self {
        (*r.numer() as f64 / *r.denom() as f64) as f32
    }

    fn is_exact() -> bool {
        false
    }
}

/// Larger of two partially ordered values; `a` wins ties and incomparables.
pub fn max_of<T: PartialOrd>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

/// Smaller of two partially ordered values; `a` wins ties and incomparables.
pub fn min_of<T: PartialOrd>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

/// Arithmetic mean of a slice, zero for an empty slice.
pub fn mean<T: Scalar>(values: &[T]) -> T {
    if values.is_empty() {
        return T::zero();
    }
    let mut total = T::zero();
    for v in values {
        total += v.clone();
    }
    total / T::from_count(values.len())
}

/// `k / n` as an exact rational.
pub fn ratio(k: usize, n: usize) -> Rational {
    if n == 0 {
        return Rational::zero();
    }
    Rational::new(k as i64, n as i64)
}
