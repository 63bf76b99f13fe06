//! Real scalar types the graph math is generic over.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumCast, ToPrimitive};

/// Floating point attribute value: implemented for `f32` and `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumCast + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` constant.
    #[inline]
    fn lit(v: f64) -> Self {
        <Self as NumCast>::from(v).expect("f64 constant representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }

    /// Conversion from a count.
    #[inline]
    fn from_count(n: usize) -> Self {
        <Self as NumCast>::from(n).expect("count representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Neumaier compensated summation; result is independent of rayon scheduling
/// as long as the input order is fixed.
pub fn compensated_sum<T: Scalar, I: IntoIterator<Item = T>>(values: I) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp = comp + ((sum - t) + v);
        } else {
            comp = comp + ((v - t) + sum);
        }
        sum = t;
    }
    sum + comp
}
