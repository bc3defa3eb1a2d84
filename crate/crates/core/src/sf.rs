//! Structurally finite entire functions `f(z) = lambda * int_0^z P(t) e^{Q(t)} dt + b`.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::quadrature::{self, QuadratureConfig};
use crate::scalar::{Real, ScaledComplex};
use crate::series::{exp_series, horner, integrate, mul_trunc, TaylorSeries};

/// Order of the Taylor expansion cached at the origin.
pub const ORIGIN_SERIES_ORDER: usize = 48;

/// Truncation tolerance that fixes a series' trust radius.
pub const TRUST_REL_TOL: f64 = 1e-14;

/// `Re Q` above which `e^Q` is handled in exponent-carrying form.
pub const EXP_SCALE_THRESHOLD: f64 = 300.0;

/// Largest `sum |c_k| |w|^k / |value|` accepted when summing the cached series;
/// beyond it cancellation would cost more than three digits and the
/// quadrature path is used instead.
const CANCELLATION_LIMIT: f64 = 1e3;

/// Integral along a path, carried with a binary exponent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathIntegral<T> {
    pub value: ScaledComplex<T>,
    /// Error estimate (real, non-negative), scaled like `value`.
    pub error: ScaledComplex<T>,
    pub panels: usize,
}

impl<T: Real> PathIntegral<T> {
    pub fn value(&self) -> Result<Complex<T>> {
        self.value.to_complex().ok_or(Error::Overflow { log2_magnitude: self.value.log2_abs().as_f64() })
    }

    pub fn error(&self) -> T {
        self.error.abs()
    }
}

/// A member of `SF_{p,q}`: `lambda * int_0^z P(t) e^{Q(t)} dt + translation`,
/// with `Q(0) = 0`.
///
/// Immutable after construction; the Taylor series at the origin is built
/// eagerly so evaluation never mutates shared state.
#[derive(Clone, Debug)]
pub struct SfFunction<T> {
    lambda: Complex<T>,
    p: Polynomial<T>,
    q: Polynomial<T>,
    translation: Complex<T>,
    normalized: bool,
    conjugation_factor: Complex<T>,
    origin: TaylorSeries<T>,
    quadrature: QuadratureConfig,
}

impl<T: Real> SfFunction<T> {
    /// Normal form with `P(0) = 1`, `Q(0) = 0` and no translation, so that
    /// `f(0) = 0` and `f'(0) = lambda`.
    ///
    /// `P` is divided by `P(0)` and the constant of `Q` is dropped; the removed
    /// scale `P(0) e^{Q(0)}` is kept as [`conjugation_factor`](Self::conjugation_factor).
    pub fn make_normalized(lambda: Complex<T>, p: Polynomial<T>, q: Polynomial<T>) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let p0 = p.coeff(0);
        if p0.is_zero() {
            return Err(Error::Precondition("P(0) must be nonzero to normalize".into()));
        }
        let q0 = q.coeff(0);
        let factor = p0 * q0.exp();
        if !factor.re.is_finite() || !factor.im.is_finite() || factor.is_zero() {
            return Err(Error::Precondition("P(0) e^{Q(0)} is not a usable scale".into()));
        }
        let p = p.scale(p0.inv());
        let q = zero_constant(&q);
        Self::build(lambda, p, q, Complex::zero(), true, factor)
    }

    /// Builds a function from raw coefficient lists (constant term first),
    /// rejecting a zero coefficient at the declared degree.
    pub fn from_coefficients(lambda: Complex<T>, p: Vec<Complex<T>>, q: Vec<Complex<T>>) -> Result<Self> {
        Self::make_normalized(lambda, Polynomial::new(p)?, Polynomial::new(q)?)
    }

    /// General (possibly non-normalized) member. `e^{Q(0)}` is folded into `P`.
    pub fn from_parts(lambda: Complex<T>, p: Polynomial<T>, q: Polynomial<T>, translation: Complex<T>) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let q0 = q.coeff(0);
        let p = if q0.is_zero() { p } else { p.scale(q0.exp()) };
        let q = zero_constant(&q);
        let normalized = translation.is_zero() && p.coeff(0) == Complex::new(T::one(), T::zero());
        Self::build(lambda, p, q, translation, normalized, Complex::new(T::one(), T::zero()))
    }

    fn build(
        lambda: Complex<T>,
        p: Polynomial<T>,
        q: Polynomial<T>,
        translation: Complex<T>,
        normalized: bool,
        conjugation_factor: Complex<T>,
    ) -> Result<Self> {
        let placeholder =
            TaylorSeries { center: Complex::zero(), coefficients: vec![translation], trust_radius: T::zero() };
        let mut f = Self {
            lambda,
            p,
            q,
            translation,
            normalized,
            conjugation_factor,
            origin: placeholder,
            quadrature: QuadratureConfig::default(),
        };
        let order = if f.is_polynomial() { (f.p.degree() + 1).max(1) } else { ORIGIN_SERIES_ORDER };
        f.origin = f.taylor_at(Complex::zero(), order)?;
        Ok(f)
    }

    pub fn lambda(&self) -> Complex<T> {
        self.lambda
    }

    pub fn p(&self) -> &Polynomial<T> {
        &self.p
    }

    pub fn q(&self) -> &Polynomial<T> {
        &self.q
    }

    pub fn translation(&self) -> Complex<T> {
        self.translation
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// The factor `P(0) e^{Q(0)}` removed by normalization.
    pub fn conjugation_factor(&self) -> Complex<T> {
        self.conjugation_factor
    }

    /// `(deg P, deg Q)`.
    pub fn type_pq(&self) -> (usize, usize) {
        (self.p.degree(), if self.q.is_zero() { 0 } else { self.q.degree() })
    }

    /// No exponential factor: `f` is a polynomial of degree `deg P + 1`.
    pub fn is_polynomial(&self) -> bool {
        self.q.is_zero()
    }

    pub fn origin_series(&self) -> &TaylorSeries<T> {
        &self.origin
    }

    /// Replaces the quadrature settings used by [`evaluate`](Self::evaluate).
    pub fn with_quadrature(mut self, config: QuadratureConfig) -> Self {
        self.quadrature = config;
        self
    }

    /// `f'(z) = lambda P(z) e^{Q(z)}` in exponent-carrying form.
    pub fn derivative_scaled(&self, z: Complex<T>) -> ScaledComplex<T> {
        let qz = self.q.eval(z);
        let pz = self.lambda * self.p.eval(z);
        if qz.re.abs() > T::lit(EXP_SCALE_THRESHOLD) {
            ScaledComplex::exp_of(qz).mul_complex(pz)
        } else {
            ScaledComplex::new(pz * qz.exp())
        }
    }

    /// `f'(z)`; saturates to infinity when it leaves the double range.
    pub fn derivative(&self, z: Complex<T>) -> Complex<T> {
        let qz = self.q.eval(z);
        if qz.re.abs() > T::lit(EXP_SCALE_THRESHOLD) {
            return self.derivative_scaled(z).to_complex_saturating();
        }
        self.lambda * self.p.eval(z) * qz.exp()
    }

    /// `ln |f'(z)|`, computed without forming `f'(z)`.
    pub fn ln_abs_derivative(&self, z: Complex<T>) -> T {
        self.lambda.norm().ln() + self.p.eval(z).norm().ln() + self.q.eval(z).re
    }

    /// `lambda * int_a^b P(t) e^{Q(t)} dt` along the straight segment.
    pub fn integrate_segment(&self, a: Complex<T>, b: Complex<T>) -> Result<PathIntegral<T>> {
        let delta = b - a;
        if delta.is_zero() {
            return Ok(PathIntegral { value: ScaledComplex::zero(), error: ScaledComplex::zero(), panels: 0 });
        }
        let shift = self.segment_shift(a, delta, 64);
        match self.integrate_shifted(a, delta, shift) {
            Ok(r) => Ok(r),
            Err(Error::Quadrature { estimate_re, estimate_im, .. })
                if !(estimate_re.is_finite() && estimate_im.is_finite()) =>
            {
                // the coarse sampling missed the peak of Re Q
                let shift = self.segment_shift(a, delta, 4096);
                self.integrate_shifted(a, delta, shift)
            }
            Err(e) => Err(e),
        }
    }

    fn segment_shift(&self, a: Complex<T>, delta: Complex<T>, samples: usize) -> T {
        let peak = (0..=samples)
            .map(|k| self.q.eval(a + delta * (T::of(k) / T::of(samples))).re)
            .fold(T::neg_infinity(), T::max);
        if peak > T::lit(EXP_SCALE_THRESHOLD) {
            peak
        } else {
            T::zero()
        }
    }

    fn integrate_shifted(&self, a: Complex<T>, delta: Complex<T>, shift: T) -> Result<PathIntegral<T>> {
        let scale = self.lambda * delta;
        let integrand = |s: T| {
            let t = a + delta * s;
            let qt = self.q.eval(t);
            scale * self.p.eval(t) * Complex::new(qt.re - shift, qt.im).exp()
        };
        let config =
            QuadratureConfig { abs_floor: self.quadrature.abs_floor * (-shift).exp().as_f64(), ..self.quadrature };
        let est = quadrature::integrate(integrand, T::zero(), T::one(), &config)?;
        let factor = ScaledComplex::exp_of(Complex::new(shift, T::zero()));
        Ok(PathIntegral {
            value: ScaledComplex::new(est.value) * factor,
            error: ScaledComplex::new(Complex::new(est.error, T::zero())) * factor,
            panels: est.panels,
        })
    }

    /// Sum of segment integrals along the polygonal path through `points`.
    pub fn integrate_path(&self, points: &[Complex<T>]) -> Result<PathIntegral<T>> {
        let mut total = PathIntegral { value: ScaledComplex::zero(), error: ScaledComplex::zero(), panels: 0 };
        for w in points.windows(2) {
            let seg = self.integrate_segment(w[0], w[1])?;
            total.value = total.value + seg.value;
            total.error = total.error + seg.error;
            total.panels += seg.panels;
        }
        Ok(total)
    }

    /// `f(z)` in exponent-carrying form.
    pub fn evaluate_scaled(&self, z: Complex<T>) -> Result<ScaledComplex<T>> {
        if self.is_polynomial() {
            return Ok(ScaledComplex::new(self.origin.eval(z)));
        }
        if z.norm() <= self.origin.trust_radius {
            let (value, abs) = horner(&self.origin.coefficients, z);
            if abs <= T::lit(CANCELLATION_LIMIT) * value.norm() || abs.is_zero() {
                return Ok(ScaledComplex::new(value));
            }
        }
        let integral = self.integrate_segment(Complex::zero(), z)?;
        Ok(integral.value + ScaledComplex::new(self.translation))
    }

    /// `f(z)`; fails with [`Error::Overflow`] when the value leaves the double range.
    pub fn evaluate(&self, z: Complex<T>) -> Result<Complex<T>> {
        let v = self.evaluate_scaled(z)?;
        v.to_complex().ok_or(Error::Overflow { log2_magnitude: v.log2_abs().as_f64() })
    }

    /// Taylor series of `f` about `center` to the given order.
    ///
    /// Built by shifting `P` and `Q` to the center, expanding `e^{Q}` with the
    /// exponential recurrence, multiplying by `P` and integrating termwise.
    pub fn taylor_at(&self, center: Complex<T>, order: usize) -> Result<TaylorSeries<T>> {
        if order == 0 {
            return Err(Error::Precondition("series order must be at least 1".into()));
        }
        let pc = self.p.shifted(center);
        let qc = self.q.shifted(center);
        let q0 = qc.coeff(0);
        let e = exp_series(qc.coeffs(), order - 1);
        let g = mul_trunc(pc.coeffs(), &e, order - 1);
        let raw = integrate(&g);
        let factor = ScaledComplex::exp_of(q0).mul_complex(self.lambda);
        let mut coefficients = Vec::with_capacity(order + 1);
        coefficients.push(Complex::zero());
        for &c in raw.iter().skip(1) {
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::SeriesOverflow { order });
            }
            let v = (ScaledComplex::new(c) * factor).to_complex().ok_or(Error::SeriesOverflow { order })?;
            coefficients.push(v);
        }
        coefficients[0] = if center.is_zero() { self.translation } else { self.evaluate(center)? };
        let trust_radius = if self.is_polynomial() && order > self.p.degree() {
            T::infinity()
        } else {
            trust_radius(&coefficients, self.type_pq().1.max(2), T::lit(TRUST_REL_TOL))
        };
        Ok(TaylorSeries { center, coefficients, trust_radius })
    }
}

fn zero_constant<T: Real>(q: &Polynomial<T>) -> Polynomial<T> {
    let mut c = q.coeffs().to_vec();
    c[0] = Complex::zero();
    Polynomial::trimmed(c)
}

/// Largest radius at which the last `tail` coefficients contribute less than
/// `rel_tol` of the largest term. Found by bisection in `log r`.
pub fn trust_radius<T: Real>(coeffs: &[Complex<T>], tail: usize, rel_tol: T) -> T {
    let n = coeffs.len() - 1;
    let logs: Vec<T> = coeffs.iter().map(|c| c.norm().ln()).collect();
    let first_tail = n.saturating_sub(tail - 1).max(1);
    if logs[first_tail..].iter().all(|l| *l == T::neg_infinity()) {
        return T::infinity();
    }
    let log_tol = rel_tol.ln();
    let holds = |log_r: T| {
        let term = |k: usize| logs[k] + T::of(k) * log_r;
        let tail_max = (first_tail..=n).map(term).fold(T::neg_infinity(), T::max);
        let head_max = (0..first_tail).map(term).fold(T::neg_infinity(), T::max);
        // tail terms summed: at most `tail` of them
        tail_max + T::of(n + 1 - first_tail).ln() <= log_tol + head_max
    };
    let (mut lo, mut hi) = (T::lit(1e-8).ln(), T::lit(1e4).ln());
    if holds(hi) {
        return hi.exp();
    }
    if !holds(lo) {
        return lo.exp();
    }
    for _ in 0..80 {
        let mid = (lo + hi) * T::lit(0.5);
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo.exp()
}
