//! Linearization of an indifferent fixed point by the Schröder series.
//!
//! With `f(w) = lambda w + a_2 w^2 + ...` the linearizer `phi(w) = w + phi_2 w^2 + ...`
//! solves `phi(lambda w) = f(phi(w))`. Matching `w^n` gives
//! `phi_n (lambda^n - lambda) = [w^n] sum_{k>=2} a_k phi(w)^k`, where the right side
//! only involves `phi_1 .. phi_{n-1}`. The small divisors `lambda^n - lambda`
//! make the coefficients grow, so they are carried with a separate exponent.

use num_complex::Complex;
use num_traits::Zero;

use crate::brjuno::nearby_rational;
use crate::error::{Error, Result};
use crate::scalar::{Real, ScaledComplex};
use crate::series::{compose_scaled, TaylorSeries};
use crate::sf::SfFunction;

/// Residual `|f(z0) - z0|` accepted for a fixed point.
pub const FIXED_POINT_TOL: f64 = 1e-10;
/// Divisors `|lambda^{n-1} - 1|` below this are flagged.
pub const NEAR_RESONANCE: f64 = 1e-13;
pub const DEFAULT_WINDOW: usize = 50;
pub const DEFAULT_FRACTION: f64 = 0.95;

#[derive(Clone, Debug, PartialEq)]
pub struct LinearizationSeries<T> {
    pub lambda: Complex<T>,
    /// Fixed point the series is centered on.
    pub center: Complex<T>,
    /// `phi_1 = 1, phi_2, ..., phi_N`.
    pub coefficients: Vec<ScaledComplex<T>>,
    /// `ln |lambda^{n-1} - 1|` for `n = 2..=N`.
    pub divisor_log: Vec<T>,
    /// Root-test radius with the default window, when the order allows it.
    pub radius_estimate: Option<T>,
    /// Indices `n` with `|lambda^{n-1} - 1| < 1e-13`.
    pub near_resonance_flags: Vec<usize>,
}

impl<T: Real> LinearizationSeries<T> {
    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    /// `phi_n` for `n >= 1`.
    pub fn coefficient(&self, n: usize) -> ScaledComplex<T> {
        if n == 0 {
            return ScaledComplex::zero();
        }
        self.coefficients.get(n - 1).copied().unwrap_or_else(ScaledComplex::zero)
    }

    /// `phi(w)` summed to the full order (local coordinate, no center added).
    pub fn eval(&self, w: Complex<T>) -> ScaledComplex<T> {
        self.eval_to(w, self.order())
    }

    pub fn eval_to(&self, w: Complex<T>, order: usize) -> ScaledComplex<T> {
        let mut acc = ScaledComplex::zero();
        for c in self.coefficients[..order.min(self.order())].iter().rev() {
            acc = (acc + *c).mul_complex(w);
        }
        acc
    }
}

/// Series of `w -> f(fixed_point + w) - fixed_point` with zero constant term.
pub fn recenter<T: Real>(f: &SfFunction<T>, fixed_point: Complex<T>, order: usize) -> Result<TaylorSeries<T>> {
    let residual = (f.evaluate(fixed_point)? - fixed_point).norm();
    if !(residual < T::lit(FIXED_POINT_TOL)) {
        return Err(Error::FixedPointResidual { residual: residual.as_f64() });
    }
    let mut series = f.taylor_at(fixed_point, order)?;
    series.coefficients[0] = Complex::zero();
    series.coefficients[1] = f.derivative(fixed_point);
    Ok(series)
}

/// `lambda^m - 1 = 2 i sin(pi m theta) e^{i pi m theta}` for `lambda = e^{2 pi i theta}`.
fn unit_power_minus_one<T: Real>(theta: T, m: usize) -> Complex<T> {
    let turns = (T::of(m) * theta).fract();
    let half = T::PI() * turns;
    Complex::new(T::zero(), T::lit(2.0) * half.sin()) * Complex::from_polar(T::one(), half)
}

/// Solves the Schröder equation to order `n_max` for a local series with
/// zero constant term and unit-modulus linear coefficient.
pub fn schroeder<T: Real>(local: &TaylorSeries<T>, n_max: usize) -> Result<LinearizationSeries<T>> {
    if n_max == 0 {
        return Err(Error::Precondition("order must be at least 1".into()));
    }
    let lambda = local.coeff(1);
    if (lambda.norm() - T::one()).abs() > T::lit(1e-12) {
        return Err(Error::Precondition(format!("|lambda| = {} is not 1", lambda.norm())));
    }
    if local.coeff(0).norm() > T::lit(1e-12) {
        return Err(Error::Precondition("local series must fix the origin".into()));
    }
    let theta = {
        let t = lambda.arg() / T::TAU();
        if t < T::zero() {
            t + T::one()
        } else {
            t
        }
    };
    if n_max >= 2 {
        if let Some((_, q)) = nearby_rational(theta.as_f64(), (n_max - 1) as u64, 1e-15) {
            return Err(Error::Resonance { n: q as usize + 1 });
        }
    }

    let a: Vec<ScaledComplex<T>> = (0..=n_max).map(|k| ScaledComplex::new(local.coeff(k))).collect();
    // pow[k][m] = [w^m] phi(w)^k for 1 <= k <= m <= n_max
    let mut pow: Vec<Vec<ScaledComplex<T>>> = vec![vec![ScaledComplex::zero(); n_max + 1]; n_max + 1];
    let mut phi = vec![ScaledComplex::zero(); n_max + 1];
    phi[1] = ScaledComplex::one();
    pow[1][1] = ScaledComplex::one();
    let mut divisor_log = Vec::with_capacity(n_max.saturating_sub(1));
    let mut near_resonance_flags = Vec::new();
    for n in 2..=n_max {
        // phi_n does not enter pow[k][n] for k >= 2 since phi has no constant term
        for k in 2..=n {
            let mut acc = ScaledComplex::zero();
            for j in 1..=(n - k + 1) {
                let lower = pow[k - 1][n - j];
                if !lower.is_zero() && !phi[j].is_zero() {
                    acc = acc + phi[j] * lower;
                }
            }
            pow[k][n] = acc;
        }
        let mut rhs = ScaledComplex::zero();
        for k in 2..=n {
            if !a[k].is_zero() && !pow[k][n].is_zero() {
                rhs = rhs + a[k] * pow[k][n];
            }
        }
        let small = unit_power_minus_one(theta, n - 1);
        divisor_log.push(small.norm().ln());
        if small.norm() < T::lit(NEAR_RESONANCE) {
            near_resonance_flags.push(n);
        }
        if small.is_zero() {
            return Err(Error::Resonance { n });
        }
        let divisor = ScaledComplex::new(small).mul_complex(lambda);
        phi[n] = if rhs.is_zero() { ScaledComplex::zero() } else { rhs / divisor };
        pow[1][n] = phi[n];
    }
    let mut lin = LinearizationSeries {
        lambda,
        center: local.center,
        coefficients: phi[1..].to_vec(),
        divisor_log,
        radius_estimate: None,
        near_resonance_flags,
    };
    if n_max >= 2 * DEFAULT_WINDOW {
        lin.radius_estimate = radius_estimate(&lin, DEFAULT_WINDOW)?;
    }
    Ok(lin)
}

/// `max_{n <= N} |[w^n] (phi(lambda w) - f(phi(w)))|`, with `f(phi(w))` formed by
/// series composition independently of the recursion.
pub fn verify_conjugacy<T: Real>(local: &TaylorSeries<T>, lin: &LinearizationSeries<T>, n: usize) -> Result<T> {
    if n > lin.order() {
        return Err(Error::Precondition(format!("N = {n} exceeds the series order {}", lin.order())));
    }
    let lambda = ScaledComplex::new(lin.lambda);
    let phi: Vec<ScaledComplex<T>> = (0..=n).map(|k| lin.coefficient(k)).collect();
    let outer: Vec<ScaledComplex<T>> = (0..=n).map(|k| ScaledComplex::new(local.coeff(k))).collect();
    let composed = compose_scaled(&outer, &phi, n);
    let mut lambda_pow = ScaledComplex::one();
    let mut worst = T::zero();
    for k in 0..=n {
        let lhs = phi[k] * lambda_pow;
        worst = worst.max((lhs - composed[k]).abs());
        lambda_pow = lambda_pow * lambda;
    }
    Ok(worst)
}

/// `max_{|w| = rho} |phi(lambda w) - f(phi(w))|` over `samples` points, with `phi`
/// truncated at order `n` and `f` summed from the local series.
pub fn conjugacy_defect<T: Real>(
    local: &TaylorSeries<T>,
    lin: &LinearizationSeries<T>,
    n: usize,
    rho: T,
    samples: usize,
) -> T {
    (0..samples)
        .map(|k| {
            let w = Complex::from_polar(rho, T::TAU() * T::of(k) / T::of(samples));
            let lhs = lin.eval_to(lin.lambda * w, n).to_complex_saturating();
            let inner = lin.eval_to(w, n).to_complex_saturating();
            let rhs = crate::series::horner(&local.coefficients, inner).0;
            (lhs - rhs).norm()
        })
        .fold(T::zero(), T::max)
}

/// Root-test estimate of the convergence radius of `phi`.
///
/// For each of the last `window` indices `m` the sliding maximum of
/// `ln|phi_n| / n` over `n in (m - window, m]` is taken; the radius is
/// `exp(-median)`. `None` when every coefficient involved is below `1e-300`.
pub fn radius_estimate<T: Real>(lin: &LinearizationSeries<T>, window: usize) -> Result<Option<T>> {
    let n = lin.order();
    if window == 0 || n < 2 * window {
        return Err(Error::Precondition(format!("order {n} is below twice the window {window}")));
    }
    let floor = T::lit(1e-300).ln();
    let rates: Vec<T> = (1..=n)
        .map(|k| {
            let l = lin.coefficient(k).ln_abs();
            if l < floor {
                T::neg_infinity()
            } else {
                l / T::of(k)
            }
        })
        .collect();
    let mut maxima: Vec<T> = ((n - window + 1)..=n)
        .map(|m| rates[(m - window)..m].iter().copied().fold(T::neg_infinity(), T::max))
        .collect();
    if maxima.iter().all(|v| *v == T::neg_infinity()) {
        return Ok(None);
    }
    maxima.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let mid = maxima.len() / 2;
    let median = if maxima.len() % 2 == 1 { maxima[mid] } else { (maxima[mid - 1] + maxima[mid]) * T::lit(0.5) };
    if median == T::neg_infinity() {
        return Ok(None);
    }
    Ok(Some((-median).exp()))
}

/// `phi(r e^{2 pi i k / count})` shifted back to the fixed point, for
/// `r = fraction * radius_estimate`.
pub fn boundary_samples<T: Real>(lin: &LinearizationSeries<T>, fraction: T, count: usize) -> Result<Vec<Complex<T>>> {
    if !(fraction > T::zero() && fraction < T::one()) {
        return Err(Error::Precondition("fraction must lie in (0, 1)".into()));
    }
    let radius = lin
        .radius_estimate
        .ok_or_else(|| Error::Precondition("no radius estimate; use a higher order or boundary_samples_at".into()))?;
    boundary_samples_at(lin, fraction * radius, count)
}

/// Images under `phi` of `count` equally spaced points on `|w| = r`.
///
/// Fails when the terms `|phi_n| r^n` over the last tenth of the series are
/// not yet below `1e-6` of the largest term.
pub fn boundary_samples_at<T: Real>(lin: &LinearizationSeries<T>, r: T, count: usize) -> Result<Vec<Complex<T>>> {
    if count == 0 || !(r > T::zero()) {
        return Err(Error::Precondition("count must be >= 1 and r > 0".into()));
    }
    let n = lin.order();
    let log_r = r.ln();
    let terms: Vec<T> = (1..=n).map(|k| lin.coefficient(k).ln_abs() + T::of(k) * log_r).collect();
    let peak = terms.iter().copied().fold(T::neg_infinity(), T::max);
    let tail_start = n - (n / 10).max(1);
    let tail = terms[tail_start..].iter().copied().fold(T::neg_infinity(), T::max);
    if n > 1 && tail >= peak + T::lit(1e-6).ln() {
        return Err(Error::SeriesDivergent { radius: r.as_f64() });
    }
    (0..count)
        .map(|k| {
            let w = Complex::from_polar(r, T::TAU() * T::of(k) / T::of(count));
            let v = lin.eval(w);
            v.to_complex().map(|z| z + lin.center).ok_or(Error::Overflow { log2_magnitude: v.log2_abs().as_f64() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brjuno::unit_from_turns;
    use crate::poly::Polynomial;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn golden() -> Complex<f64> {
        unit_from_turns((5f64.sqrt() - 1.0) / 2.0)
    }

    fn local(coeffs: Vec<Complex<f64>>) -> TaylorSeries<f64> {
        TaylorSeries { center: c(0.0, 0.0), coefficients: coeffs, trust_radius: f64::INFINITY }
    }

    fn quadratic(l: Complex<f64>) -> SfFunction<f64> {
        SfFunction::make_normalized(l, Polynomial::new(vec![c(1.0, 0.0), l.inv()]).unwrap(), Polynomial::zero())
            .unwrap()
    }

    #[test]
    fn second_coefficient_by_hand() {
        let l = golden();
        let a = c(0.3, -1.2);
        let lin = schroeder(&local(vec![c(0.0, 0.0), l, a]), 2).unwrap();
        let expected = a / (l * l - l);
        assert!((lin.coefficient(2).to_complex().unwrap() - expected).norm() < 1e-14 * expected.norm());
        assert_eq!(lin.coefficient(1), ScaledComplex::one());
        assert_eq!(lin.divisor_log.len(), 1);
    }

    #[test]
    fn rotation_is_its_own_linearizer() {
        let l = golden();
        let s = local(vec![c(0.0, 0.0), l]);
        let lin = schroeder(&s, 120).unwrap();
        assert!(lin.coefficients[1..].iter().all(|c| c.is_zero()));
        assert_eq!(lin.radius_estimate, None);
        assert_eq!(verify_conjugacy(&s, &lin, 120).unwrap(), 0.0);
        let pts = boundary_samples_at(&lin, 0.7, 8).unwrap();
        for (k, p) in pts.iter().enumerate() {
            assert!((p - Complex::from_polar(0.7, std::f64::consts::TAU * k as f64 / 8.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn resonance_is_an_error() {
        let s = local(vec![c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(schroeder(&s, 10).unwrap_err(), Error::Resonance { n: 3 });
    }

    #[test]
    fn recenter_at_second_fixed_point() {
        let l = golden();
        let f = quadratic(l);
        let p = (c(1.0, 0.0) - l) * 2.0;
        let s = recenter(&f, p, 4).unwrap();
        assert!((s.coeff(1) - (c(2.0, 0.0) - l)).norm() < 1e-14);
        assert_eq!(s.coeff(0), c(0.0, 0.0));
        assert_eq!(recenter(&f, p, 1).unwrap().coefficients.len(), 2);
        assert!(matches!(recenter(&f, c(1.0, 0.0), 3), Err(Error::FixedPointResidual { .. })));
    }

    #[test]
    fn recenter_at_origin_matches_taylor() {
        let f = quadratic(golden());
        assert_eq!(
            recenter(&f, c(0.0, 0.0), 6).unwrap().coefficients,
            f.taylor_at(c(0.0, 0.0), 6).unwrap().coefficients
        );
    }

    #[test]
    fn golden_quadratic_conjugacy() {
        let f = quadratic(golden());
        let s = recenter(&f, c(0.0, 0.0), 40).unwrap();
        let lin = schroeder(&s, 40).unwrap();
        let r = verify_conjugacy(&s, &lin, 40).unwrap();
        assert!(r < 1e-9, "{r}");
        let lin2 = schroeder(&s, 2).unwrap();
        assert!(verify_conjugacy(&s, &lin2, 2).unwrap() < 1e-15);
    }

    #[test]
    fn boundary_samples_are_invariant() {
        let l = golden();
        let f = quadratic(l);
        let s = recenter(&f, c(0.0, 0.0), 400).unwrap();
        let lin = schroeder(&s, 400).unwrap();
        let radius = lin.radius_estimate.unwrap();
        let count = 256;
        let pts = boundary_samples(&lin, 0.95, count).unwrap();
        for (k, &p) in pts.iter().enumerate() {
            let w = Complex::from_polar(0.95 * radius, std::f64::consts::TAU * k as f64 / count as f64);
            let image = lin.eval(l * w).to_complex().unwrap();
            assert!((f.evaluate(p).unwrap() - image).norm() < 1e-6, "k={k}");
        }
    }

    #[test]
    fn divergent_sum_is_reported() {
        let f = quadratic(golden());
        let s = recenter(&f, c(0.0, 0.0), 200).unwrap();
        let lin = schroeder(&s, 200).unwrap();
        let r = lin.radius_estimate.unwrap();
        assert!(matches!(boundary_samples_at(&lin, 1.5 * r, 4), Err(Error::SeriesDivergent { .. })));
    }
}
