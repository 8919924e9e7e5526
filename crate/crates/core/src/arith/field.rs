//! Algebraic traits shared by the exact scalar, polynomial and rational
//! function types, plus the [`Scalar`] base field.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ArithError;

/// Arbitrary-precision rational number. `BigRational` keeps numerator and
/// denominator coprime with a positive denominator.
pub type Scalar = BigRational;

/// Commutative ring with exact arithmetic.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Add<Output = Self>
        + Sub<Output = Self>
        + Mul<Output = Self>
        + Neg<Output = Self>
{
}

/// Exact field. Elimination and inversion are written once against this
/// trait and instantiated for [`Scalar`] and [`super::RatFunc`].
pub trait Field: Ring {
    /// Multiplicative inverse, `None` for zero.
    fn try_inv(&self) -> Option<Self>;

    /// Embeds a rational constant.
    fn from_scalar(s: &Scalar) -> Self;

    /// Returns the value as a rational constant if it is one.
    fn as_scalar(&self) -> Option<Scalar>;

    fn from_int(v: i64) -> Self {
        Self::from_scalar(&int(v))
    }
}

impl Field for Scalar {
    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }

    fn as_scalar(&self) -> Option<Scalar> {
        Some(self.clone())
    }
}

/// Integer as a [`Scalar`].
pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

/// `num / den` as a [`Scalar`]. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p"` or `"p/q"` with integer `p`, `q`. Decimal notation and
/// zero denominators are rejected.
pub fn parse_scalar(text: &str) -> Result<Scalar, ArithError> {
    let s = text.trim();
    let bad = || ArithError::Parse(text.to_string());
    if s.contains('.') || s.contains('e') || s.contains('E') {
        return Err(ArithError::Parse(format!(
            "{text}: decimals are not accepted, write an exact ratio such as \"1/2\""
        )));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(ArithError::Parse(format!("{text}: zero denominator")));
    }
    Ok(Scalar::new(num, den))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_scalar(s: &Scalar) -> String {
    s.to_string()
}
