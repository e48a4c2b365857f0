use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar used for sums and bound expressions: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    fn of_u64(n: u64) -> Self {
        Self::from_u64(n).expect("u64 is representable in every float type")
    }

    fn of_f64(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable in every float type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("float converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
