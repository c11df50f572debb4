use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar used for distances, filtration values and real cochains: f32 or f64.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from f64, used for literals and generated data.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable in every Scalar")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("Scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Representative of `x` modulo 1 in `[-1/2, 1/2)`.
pub fn wrap<T: Scalar>(x: T) -> T {
    let half = T::of(0.5);
    let r = x - (x + half).floor();
    if r >= half {
        r - T::one()
    } else {
        r
    }
}

/// Representative of `x` modulo 1 in `[0, 1)`.
pub fn frac<T: Scalar>(x: T) -> T {
    let r = x - x.floor();
    // x slightly below an integer can round up to exactly 1.
    if r >= T::one() {
        T::zero()
    } else {
        r
    }
}
