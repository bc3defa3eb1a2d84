//! Truncated power series.

use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::{Real, ScaledComplex};

/// Local expansion `sum_k coefficients[k] (z - center)^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorSeries<T> {
    pub center: Complex<T>,
    pub coefficients: Vec<Complex<T>>,
    /// Radius within which the truncation is trusted; may be infinite.
    pub trust_radius: T,
}

impl<T: Real> TaylorSeries<T> {
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Complex<T> {
        self.coefficients.get(k).copied().unwrap_or_else(Complex::zero)
    }

    /// Sums the series at `z` (absolute coordinate).
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        horner(&self.coefficients, z - self.center).0
    }

    /// Value at `z` together with `sum |c_k| |z - center|^k`, which bounds
    /// the cancellation in the sum.
    pub fn eval_with_abs(&self, z: Complex<T>) -> (Complex<T>, T) {
        horner(&self.coefficients, z - self.center)
    }
}

/// Horner evaluation returning the value and the sum of term moduli.
pub fn horner<T: Real>(coeffs: &[Complex<T>], w: Complex<T>) -> (Complex<T>, T) {
    let r = w.norm();
    let mut value = Complex::zero();
    let mut abs = T::zero();
    for &c in coeffs.iter().rev() {
        value = value * w + c;
        abs = abs * r + c.norm();
    }
    (value, abs)
}

/// Product of two series truncated to degree `order`.
pub fn mul_trunc<T: Real>(a: &[Complex<T>], b: &[Complex<T>], order: usize) -> Vec<Complex<T>> {
    let mut out = vec![Complex::zero(); order + 1];
    for (i, &ai) in a.iter().enumerate().take(order + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// `exp(u(s))` truncated to degree `order`, for a series with `u(0) = 0`.
///
/// Uses `n g_n = sum_{k=1}^{n} k u_k g_{n-k}`, which follows from `g' = u' g`.
/// The constant term of `u` is ignored.
pub fn exp_series<T: Real>(u: &[Complex<T>], order: usize) -> Vec<Complex<T>> {
    let mut g = vec![Complex::zero(); order + 1];
    g[0] = Complex::new(T::one(), T::zero());
    for n in 1..=order {
        let mut acc = Complex::zero();
        for k in 1..=n.min(u.len().saturating_sub(1)) {
            acc += u[k] * g[n - k] * T::of(k);
        }
        g[n] = acc / T::of(n);
    }
    g
}

/// Termwise antiderivative with zero constant term.
pub fn integrate<T: Real>(g: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut out = Vec::with_capacity(g.len() + 1);
    out.push(Complex::zero());
    for (k, &c) in g.iter().enumerate() {
        out.push(c / T::of(k + 1));
    }
    out
}

/// Product of two exponent-carrying series truncated to degree `order`.
pub fn mul_trunc_scaled<T: Real>(
    a: &[ScaledComplex<T>],
    b: &[ScaledComplex<T>],
    order: usize,
) -> Vec<ScaledComplex<T>> {
    let mut out = vec![ScaledComplex::zero(); order + 1];
    for (i, &ai) in a.iter().enumerate().take(order + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] = out[i + j] + ai * bj;
        }
    }
    out
}

/// Coefficients of `outer(inner(w))` up to degree `order`, for `inner(0) = 0`,
/// evaluated by Horner's scheme in exponent-carrying arithmetic.
pub fn compose_scaled<T: Real>(
    outer: &[ScaledComplex<T>],
    inner: &[ScaledComplex<T>],
    order: usize,
) -> Vec<ScaledComplex<T>> {
    let mut acc = vec![ScaledComplex::zero(); order + 1];
    let top = outer.len().min(order + 1);
    for k in (0..top).rev() {
        acc = mul_trunc_scaled(&acc, inner, order);
        acc[0] = acc[0] + outer[k];
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn exp_of_linear_is_exponential_series() {
        let g = exp_series(&[c(0.0, 0.0), c(1.0, 0.0)], 6);
        let mut fact = 1.0;
        for (n, gn) in g.iter().enumerate() {
            if n > 0 {
                fact *= n as f64;
            }
            assert!((gn - c(1.0 / fact, 0.0)).norm() < 1e-16);
        }
    }

    #[test]
    fn exp_of_quadratic() {
        // exp(t^2) = 1 + t^2 + t^4/2 + t^6/6
        let g = exp_series(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 6);
        let expected = [1.0, 0.0, 1.0, 0.0, 0.5, 0.0, 1.0 / 6.0];
        for (a, b) in g.iter().zip(expected) {
            assert!((a - c(b, 0.0)).norm() < 1e-16);
        }
    }

    #[test]
    fn composition_of_polynomials() {
        // outer = 1 + 2x + x^2, inner = w + w^2: outer(inner) = 1 + 2w + 3w^2 + 2w^3 + w^4
        let s = |v: &[f64]| v.iter().map(|&x| ScaledComplex::new(c(x, 0.0))).collect::<Vec<_>>();
        let out = compose_scaled(&s(&[1.0, 2.0, 1.0]), &s(&[0.0, 1.0, 1.0]), 4);
        let expected = [1.0, 2.0, 3.0, 2.0, 1.0];
        for (a, b) in out.iter().zip(expected) {
            assert!((a.to_complex().unwrap() - c(b, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn horner_abs_sum() {
        let (v, a) = horner(&[c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)], c(1.0, 0.0));
        assert_eq!(v, c(0.0, 0.0));
        assert_eq!(a, 4.0);
    }
}
