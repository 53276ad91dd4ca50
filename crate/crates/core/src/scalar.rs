//! Scalar abstraction: every numeric routine in this crate is generic over a
//! floating type satisfying [`Scalar`]. `f64` and `f32` both qualify.

use num_traits::float::{Float, FloatConst};
use num_traits::{FromPrimitive, ToPrimitive};
use std::fmt;

/// Floating scalar the crate's numerics are written against.
///
/// The bound set is the intersection actually used: `Float` for arithmetic
/// and classification, `FloatConst` for pi/ln2, `FromPrimitive` so exact
/// small constants can enter generic code, `ToPrimitive` so error reports
/// can quote values.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + fmt::Debug
        + fmt::Display
        + Send
        + Sync
        + 'static
{
}

/// Complex number over a [`Scalar`].
pub type Cx<T> = num_complex::Complex<T>;

/// Converts an `f64` constant into the working scalar.
///
/// Panics only if the target type cannot represent any `f64` at all, which
/// no `Float` impl in practice triggers.
#[inline]
pub fn sc<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant must convert into the scalar type")
}

/// Converts a small unsigned integer into the working scalar.
#[inline]
pub fn sc_u<T: Scalar>(n: u32) -> T {
    T::from_u32(n).expect("u32 constant must convert into the scalar type")
}

/// Converts the working scalar back to `f64` (for error reports).
#[inline]
pub fn fd<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversion_is_exact_for_representable_values() {
        assert_eq!(sc::<f64>(0.5), 0.5);
        assert_eq!(sc::<f32>(0.25), 0.25f32);
        assert_eq!(sc_u::<f64>(7), 7.0);
    }

    #[test]
    fn complex_alias_matches_num_complex() {
        let z: Cx<f64> = Cx::new(1.0, -2.0);
        assert_eq!(z.conj(), Cx::new(1.0, 2.0));
    }
}
