use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::exact_poly::{format_rational, rational_to_f64, Rational};

/// Relative tolerance for verdicts on floating-point moments.
pub const FLOAT_REL_TOL: f64 = 1e-9;

/// Scalar field for moment computations: exact rationals or `f64`.
pub trait MomentScalar:
    Clone
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn from_rational(r: &Rational) -> Self;
    fn zero() -> Self;
    fn one() -> Self;
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;
    /// Exact `"num/den"` rendering; `None` for floats.
    fn exact_string(&self) -> Option<String>;

    /// `x ≥ 0`, up to `FLOAT_REL_TOL · |scale|` in float mode.
    fn nonneg_within(x: &Self, scale: &Self) -> bool;

    /// `x = 0`, up to `FLOAT_REL_TOL · |scale|` in float mode.
    fn zero_within(x: &Self, scale: &Self) -> bool {
        Self::nonneg_within(x, scale) && Self::nonneg_within(&-x.clone(), scale)
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(n.into()))
    }

    fn value(&self) -> ScalarValue {
        ScalarValue {
            exact: self.exact_string(),
            float: self.to_f64(),
        }
    }
}

impl MomentScalar for Rational {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn exact_string(&self) -> Option<String> {
        Some(format_rational(self))
    }
    fn nonneg_within(x: &Self, _scale: &Self) -> bool {
        !x.is_negative()
    }
}

impl MomentScalar for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn exact_string(&self) -> Option<String> {
        None
    }
    fn nonneg_within(x: &Self, scale: &Self) -> bool {
        *x >= -FLOAT_REL_TOL * f64::abs(*scale)
    }
}

/// JSON rendering of a scalar: exact string (when available) plus float.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalarValue {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub float: f64,
}

pub(crate) fn max_abs<S: MomentScalar>(a: &S, b: &S) -> S {
    let (a, b) = (a.abs(), b.abs());
    if a >= b {
        a
    } else {
        b
    }
}
