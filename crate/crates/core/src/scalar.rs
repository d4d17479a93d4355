//! Floating-point scalar abstraction shared by every numeric routine.
//!
//! Exact quantities (scales, indices, measures, Fejér weights) are big
//! integers or big rationals; only the final values are rounded into `T`.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar type used for complex amplitudes: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 converts to every supported scalar")
    }

    fn from_usize_lossy(x: usize) -> Self {
        Self::from_usize(x).expect("usize converts to every supported scalar")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `exp(2πi · num/den)`, exact at the quarter turns.
pub fn unit_root<T: Scalar>(num: u64, den: u64) -> Complex<T> {
    debug_assert!(den > 0);
    let r = num % den;
    if r == 0 {
        return Complex::new(T::one(), T::zero());
    }
    // quarter turns are represented exactly
    let (r4, d) = (u128::from(r) * 4, u128::from(den));
    if r4 == d {
        return Complex::new(T::zero(), T::one());
    }
    if r4 == 2 * d {
        return Complex::new(-T::one(), T::zero());
    }
    if r4 == 3 * d {
        return Complex::new(T::zero(), -T::one());
    }
    // map to (-1/2, 1/2] turns before scaling by 2π
    let signed = if 2 * r > den { -((den - r) as f64) } else { r as f64 };
    let angle = T::from_f64_lossy(signed / den as f64) * T::TAU();
    Complex::new(angle.cos(), angle.sin())
}

/// Rounds the exact rational `num / den` once into `T`.
pub fn ratio_to_scalar<T: Scalar>(num: &BigUint, den: &BigUint) -> T {
    let q = BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()));
    T::from_f64_lossy(q.to_f64().unwrap_or(f64::NAN))
}

/// Rounds an exact non-negative rational into `T`.
pub fn rational_to_scalar<T: Scalar>(q: &BigRational) -> T {
    T::from_f64_lossy(q.to_f64().unwrap_or(f64::NAN))
}

pub fn biguint_to_scalar<T: Scalar>(n: &BigUint) -> T {
    T::from_f64_lossy(n.to_f64().unwrap_or(f64::INFINITY))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_turns_are_exact() {
        assert_eq!(unit_root::<f64>(0, 7), Complex::new(1.0, 0.0));
        assert_eq!(unit_root::<f64>(1, 2), Complex::new(-1.0, 0.0));
        assert_eq!(unit_root::<f64>(1, 4), Complex::new(0.0, 1.0));
        assert_eq!(unit_root::<f64>(9, 12), Complex::new(0.0, -1.0));
        assert_eq!(unit_root::<f32>(3, 2), Complex::new(-1.0, 0.0));
    }

    #[test]
    fn third_roots() {
        let w = unit_root::<f64>(1, 3);
        let expected = Complex::new(-0.5, 3f64.sqrt() / 2.0);
        assert!((w - expected).norm() < 1e-15);
        let w2 = unit_root::<f64>(2, 3);
        assert!((w2 - expected.conj()).norm() < 1e-15);
    }

    #[test]
    fn huge_ratio_rounds_once() {
        let den = BigUint::from(3u32).pow(100);
        let num = &den - 1u32;
        let w: f64 = ratio_to_scalar(&num, &den);
        assert_eq!(w, 1.0);
        let w: f64 = ratio_to_scalar(&BigUint::from(1u32), &BigUint::from(3u32));
        assert_eq!(w, 1.0 / 3.0);
    }
}
