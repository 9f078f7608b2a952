//! Scalar abstraction shared by every module.
//!
//! Coefficient algebra (tables, flow sequences, order conditions, composition
//! by given fractions) only needs ring operations and an ordering, so it is
//! generic over [`Scalar`], which includes exact rationals. Anything that
//! needs `exp`, `sin` or `sqrt` asks for [`RealScalar`].

use std::fmt::Debug;
use std::ops::Neg;

use num_complex::Complex;
use num_rational::Rational64;
use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

use crate::serial::ScalarRepr;

pub trait Scalar: Num + Clone + Neg<Output = Self> + PartialOrd + Debug + Send + Sync + 'static {
    /// Exact `num / den` where the type allows it.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_f64_lossy(&self) -> f64;

    /// Largest residual magnitude still counted as "satisfied".
    fn order_tolerance() -> f64;

    fn to_repr(&self) -> ScalarRepr;

    fn from_repr(repr: &ScalarRepr) -> Option<Self>;

    fn magnitude(z: &Complex<Self>) -> f64 {
        z.re.to_f64_lossy().hypot(z.im.to_f64_lossy())
    }

    fn negligible(z: &Complex<Self>) -> bool {
        Self::magnitude(z) <= Self::order_tolerance()
    }
}

/// Floating point scalars: `f32` and `f64`.
pub trait RealScalar: Scalar + Float + FloatConst + FromPrimitive + ToPrimitive {
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }
}

impl Scalar for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
    fn order_tolerance() -> f64 {
        1e-12
    }
    fn to_repr(&self) -> ScalarRepr {
        ScalarRepr::Number(*self)
    }
    fn from_repr(repr: &ScalarRepr) -> Option<Self> {
        repr.to_f64()
    }
}

impl Scalar for f32 {
    fn from_ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }
    fn to_f64_lossy(&self) -> f64 {
        f64::from(*self)
    }
    fn order_tolerance() -> f64 {
        1e-5
    }
    fn to_repr(&self) -> ScalarRepr {
        ScalarRepr::Number(f64::from(*self))
    }
    fn from_repr(repr: &ScalarRepr) -> Option<Self> {
        repr.to_f64().map(|x| x as f32)
    }
}

impl RealScalar for f64 {}
impl RealScalar for f32 {}

impl Scalar for Rational64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational64::new(num, den)
    }
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
    fn order_tolerance() -> f64 {
        0.0
    }
    fn to_repr(&self) -> ScalarRepr {
        if *self.denom() == 1 {
            ScalarRepr::Text(self.numer().to_string())
        } else {
            ScalarRepr::Text(format!("{}/{}", self.numer(), self.denom()))
        }
    }
    fn from_repr(repr: &ScalarRepr) -> Option<Self> {
        match repr {
            ScalarRepr::Text(s) => s.trim().parse::<Rational64>().ok(),
            ScalarRepr::Number(x) => {
                if x.fract() == 0.0 && x.abs() < 9.0e15 {
                    Some(Rational64::from_integer(*x as i64))
                } else {
                    Rational64::approximate_float(*x)
                }
            }
        }
    }
    fn negligible(z: &Complex<Self>) -> bool {
        num_traits::Zero::is_zero(z)
    }
}

pub(crate) fn c<T: Scalar>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

pub(crate) fn real<T: Scalar>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}
