//! Scalar abstraction and exponent-carrying complex arithmetic.
//!
//! Everything numerical in this crate is generic over [`Real`], which is
//! implemented for `f32` and `f64`. Iterating entire functions leaves the
//! double range almost immediately, so values that may overflow are carried
//! as [`ScaledComplex`]: a complex mantissa together with a binary exponent.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar used throughout the crate.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts an integer into this scalar type.
    #[inline]
    fn of(n: usize) -> Self {
        Self::from_usize(n).expect("integer representable")
    }

    /// Lossy conversion back to `f64`, for reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `2^k` as a scalar. Saturates to zero or infinity outside the range of `T`.
#[inline]
pub fn pow2<T: Real>(k: i64) -> T {
    let k = k.clamp(-100_000, 100_000) as i32;
    T::lit(2.0).powi(k)
}

/// `z * 2^k`, applied in two halves so subnormal or huge operands stay finite.
#[inline]
fn ldexp<T: Real>(z: Complex<T>, k: i64) -> Complex<T> {
    let half = k / 2;
    z * pow2::<T>(half) * pow2::<T>(k - half)
}

/// Complex number with a complex mantissa and a binary exponent:
/// the represented value is `mant * 2^exp`.
///
/// A normalized value has `max(|re|, |im|)` in `[1, 2)` or is exactly zero
/// (in which case `exp == 0`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledComplex<T> {
    pub mant: Complex<T>,
    pub exp: i64,
}

impl<T: Real> Default for ScaledComplex<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Real> ScaledComplex<T> {
    pub fn zero() -> Self {
        Self { mant: Complex::new(T::zero(), T::zero()), exp: 0 }
    }

    pub fn one() -> Self {
        Self { mant: Complex::new(T::one(), T::zero()), exp: 0 }
    }

    /// Builds a normalized value from an ordinary (finite) complex number.
    pub fn new(z: Complex<T>) -> Self {
        Self { mant: z, exp: 0 }.normalized()
    }

    /// `e^w`, without ever forming the possibly overflowing real exponential.
    pub fn exp_of(w: Complex<T>) -> Self {
        let log2_mag = w.re * T::LOG2_E();
        let k = log2_mag.floor();
        let frac = log2_mag - k;
        let radius = T::lit(2.0).powf(frac);
        let mant = Complex::new(radius * w.im.cos(), radius * w.im.sin());
        let exp = k.to_i64().unwrap_or(if k > T::zero() { i64::MAX / 4 } else { i64::MIN / 4 });
        Self { mant, exp }.normalized()
    }

    pub fn is_zero(&self) -> bool {
        self.mant.re == T::zero() && self.mant.im == T::zero()
    }

    pub fn is_finite(&self) -> bool {
        self.mant.re.is_finite() && self.mant.im.is_finite()
    }

    fn normalized(self) -> Self {
        if !self.is_finite() {
            return self;
        }
        let m = self.mant.re.abs().max(self.mant.im.abs());
        if m == T::zero() {
            return Self::zero();
        }
        let k = m.log2().floor().to_i64().unwrap_or(0);
        let mut out = Self { mant: ldexp(self.mant, -k), exp: self.exp.saturating_add(k) };
        // log2 rounding can leave the mantissa just outside [1, 2)
        let m2 = out.mant.re.abs().max(out.mant.im.abs());
        if m2 >= T::lit(2.0) {
            out.mant = out.mant * T::lit(0.5);
            out.exp += 1;
        } else if m2 < T::one() {
            out.mant = out.mant * T::lit(2.0);
            out.exp -= 1;
        }
        out
    }

    /// Base-2 logarithm of the modulus; `-inf` for zero.
    pub fn log2_abs(&self) -> T {
        if self.is_zero() {
            return T::neg_infinity();
        }
        self.mant.norm().log2() + T::from_i64(self.exp).unwrap_or(T::infinity())
    }

    /// Natural logarithm of the modulus; `-inf` for zero.
    pub fn ln_abs(&self) -> T {
        self.log2_abs() * T::LN_2()
    }

    /// Modulus as an ordinary scalar (may saturate to `inf` or `0`).
    pub fn abs(&self) -> T {
        ldexp(self.mant, self.exp).norm()
    }

    /// Converts to an ordinary complex number if it is representable.
    pub fn to_complex(&self) -> Option<Complex<T>> {
        if !self.is_finite() {
            return None;
        }
        if self.is_zero() {
            return Some(self.mant);
        }
        let z = ldexp(self.mant, self.exp);
        if z.re.is_finite() && z.im.is_finite() {
            Some(z)
        } else {
            None
        }
    }

    /// Converts to an ordinary complex number, saturating to infinity.
    pub fn to_complex_saturating(&self) -> Complex<T> {
        self.to_complex().unwrap_or_else(|| {
            let inf = T::infinity();
            let sr = if self.mant.re < T::zero() {
                -inf
            } else if self.mant.re > T::zero() {
                inf
            } else {
                T::zero()
            };
            let si = if self.mant.im < T::zero() {
                -inf
            } else if self.mant.im > T::zero() {
                inf
            } else {
                T::zero()
            };
            Complex::new(sr, si)
        })
    }

    pub fn scale_real(self, s: T) -> Self {
        Self { mant: self.mant * s, exp: self.exp }.normalized()
    }

    pub fn mul_complex(self, z: Complex<T>) -> Self {
        Self { mant: self.mant * z, exp: self.exp }.normalized()
    }

    pub fn conj(self) -> Self {
        Self { mant: self.mant.conj(), exp: self.exp }
    }
}

impl<T: Real> Mul for ScaledComplex<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        Self { mant: self.mant * rhs.mant, exp: self.exp.saturating_add(rhs.exp) }.normalized()
    }
}

impl<T: Real> Div for ScaledComplex<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { mant: self.mant / rhs.mant, exp: self.exp.saturating_sub(rhs.exp) }.normalized()
    }
}

impl<T: Real> Add for ScaledComplex<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.exp >= rhs.exp { (self, rhs) } else { (rhs, self) };
        let shift = small.exp - big.exp;
        // beyond the mantissa width the smaller operand cannot change the sum
        if shift < -128 {
            return big;
        }
        Self { mant: big.mant + small.mant * pow2::<T>(shift), exp: big.exp }.normalized()
    }
}

impl<T: Real> Neg for ScaledComplex<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { mant: -self.mant, exp: self.exp }
    }
}

impl<T: Real> Sub for ScaledComplex<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Real> From<Complex<T>> for ScaledComplex<T> {
    fn from(z: Complex<T>) -> Self {
        Self::new(z)
    }
}
