//! Scalar abstraction for the generic math layers.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar usable by the special-function, quadrature and
/// kernel layers. Implemented for `f32` and `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`; panics only on values outside the type's
    /// range, which never occurs for the constants used here.
    fn from_f64c(v: f64) -> Self {
        Self::from_f64(v).expect("constant representable in scalar type")
    }

    /// Euler's constant.
    fn euler_gamma() -> Self {
        Self::from_f64c(0.577_215_664_901_532_9)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
