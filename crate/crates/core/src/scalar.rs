//! Numeric traits the rest of the crate is generic over.
//!
//! [`Scalar`] is the minimal field-like interface used by the purely algebraic
//! parts (conditional matrices, outcome tables, correlation sums). It is
//! implemented for `f32`, `f64` and exact rationals, so the same code can be
//! checked in exact arithmetic. [`Real`] adds the transcendental functions
//! needed for geometry, quadrature and sampling and is only implemented for
//! the IEEE float types.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::Neg;

use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed, ToPrimitive};

/// Field element with a notion of "equal within tolerance".
pub trait Scalar:
    Num + Copy + PartialOrd + Debug + Neg<Output = Self> + ToPrimitive + Send + Sync + 'static
{
    /// Absolute tolerance for identities that hold exactly over the reals.
    ///
    /// `1e-12` for `f64`, `1e-5` for `f32`, zero for exact rationals.
    fn tolerance() -> Self;

    /// `num / den` in this type.
    fn ratio(num: i32, den: i32) -> Self;

    fn magnitude(self) -> Self;

    fn approx_eq(self, other: Self) -> bool {
        (self - other).magnitude() <= Self::tolerance()
    }

    fn half() -> Self {
        Self::ratio(1, 2)
    }
}

/// Floating-point scalar: `f32` or `f64`.
pub trait Real: Scalar + Float + FloatConst + FromPrimitive + Display + Sum {
    /// Converts an `f64` literal. Never fails for the implementing types.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn four_pi() -> Self {
        Self::lit(4.0) * Self::PI()
    }
}

macro_rules! impl_float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            #[inline]
            fn tolerance() -> Self {
                $tol
            }
            #[inline]
            fn ratio(num: i32, den: i32) -> Self {
                num as $t / den as $t
            }
            #[inline]
            fn magnitude(self) -> Self {
                Float::abs(self)
            }
        }

        impl Real for $t {}
    };
}

impl_float_scalar!(f64, 1e-12);
impl_float_scalar!(f32, 1e-5);

macro_rules! impl_ratio_scalar {
    ($i:ty) => {
        impl Scalar for Ratio<$i> {
            fn tolerance() -> Self {
                Ratio::from_integer(0)
            }
            fn ratio(num: i32, den: i32) -> Self {
                Ratio::new(num.into(), den.into())
            }
            fn magnitude(self) -> Self {
                Signed::abs(&self)
            }
        }
    };
}

impl_ratio_scalar!(i64);
