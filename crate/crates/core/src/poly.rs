//! Dense complex polynomials and simultaneous root finding.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Polynomial with complex coefficients, constant term first.
///
/// The leading coefficient is nonzero unless the polynomial is zero, which is
/// stored as the single coefficient `[0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> Polynomial<T> {
    /// Builds a polynomial whose degree is `coeffs.len() - 1`.
    ///
    /// A zero leading coefficient is rejected unless every coefficient is zero.
    pub fn new(coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Ok(Self::zero());
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            return Ok(Self::zero());
        }
        let last = coeffs.len() - 1;
        if coeffs[last].is_zero() {
            return Err(Error::LeadingZero { degree: last });
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Precondition("non-finite polynomial coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    /// Builds a polynomial, dropping trailing zero coefficients.
    pub fn trimmed(mut coeffs: Vec<Complex<T>>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex::zero());
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex::new(T::lit(c), T::zero())).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![Complex::zero()] }
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Degree; the zero polynomial reports degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn leading(&self) -> Complex<T> {
        self.coeffs[self.coeffs.len() - 1]
    }

    pub fn coeff(&self, k: usize) -> Complex<T> {
        self.coeffs.get(k).copied().unwrap_or_else(Complex::zero)
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs.iter().rev().fold(Complex::zero(), |acc, &c| acc * z + c)
    }

    /// Value and first derivative at `z`.
    pub fn eval_with_derivative(&self, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        let mut p = Complex::zero();
        let mut dp = Complex::zero();
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Self::zero();
        }
        Self::trimmed(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * T::of(k)).collect())
    }

    /// Coefficients of `s -> self(center + s)`.
    pub fn shifted(&self, center: Complex<T>) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        // repeated synthetic division
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let next = c[j + 1];
                c[j] += center * next;
            }
        }
        Self::trimmed(c)
    }

    /// Coefficients of `s -> self(b s)`.
    pub fn scaled_argument(&self, b: Complex<T>) -> Self {
        let mut pow = Complex::new(T::one(), T::zero());
        let mut out = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            out.push(c * pow);
            pow *= b;
        }
        Self::trimmed(out)
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::trimmed(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::trimmed((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    /// Largest coefficient modulus.
    pub fn coefficient_scale(&self) -> T {
        self.coeffs.iter().map(|c| c.norm()).fold(T::zero(), T::max)
    }

    /// Sum of coefficient moduli of the terms of degree `< k`.
    pub fn abs_sum_below(&self, k: usize) -> T {
        self.coeffs.iter().take(k).map(|c| c.norm()).fold(T::zero(), |a, b| a + b)
    }
}

/// Settings for [`roots`].
#[derive(Clone, Copy, Debug)]
pub struct RootConfig {
    pub max_iterations: usize,
    pub polish_steps: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self { max_iterations: 500, polish_steps: 3 }
    }
}

/// All roots of `poly` (with repetition) by Aberth–Ehrlich iteration,
/// followed by a few Newton steps on each root.
pub fn roots<T: Real>(poly: &Polynomial<T>, config: &RootConfig) -> Result<Vec<Complex<T>>> {
    let n = poly.degree();
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = poly.leading();
    let monic: Vec<Complex<T>> = poly.coeffs().iter().map(|&c| c / lead).collect();
    let monic = Polynomial { coeffs: monic };
    if n == 1 {
        return Ok(vec![-monic.coeffs[0]]);
    }

    // Cauchy-type bound for the initial circle
    let radius = monic.coeffs[..n]
        .iter()
        .enumerate()
        .map(|(k, c)| c.norm().powf(T::one() / T::of(n - k)))
        .fold(T::zero(), T::max)
        .max(T::lit(1e-3));
    let offset = T::lit(0.4);
    let mut z: Vec<Complex<T>> = (0..n)
        .map(|k| {
            let angle = T::TAU() * T::of(k) / T::of(n) + offset;
            Complex::from_polar(radius, angle)
        })
        .collect();

    let eps = T::epsilon();
    let mut converged = vec![false; n];
    let mut iterations = 0;
    while iterations < config.max_iterations && converged.iter().any(|c| !c) {
        iterations += 1;
        for i in 0..n {
            if converged[i] {
                continue;
            }
            let (p, dp) = monic.eval_with_derivative(z[i]);
            // residual at rounding level: the value is indistinguishable from zero
            let noise = monic.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * z[i].norm() + c.norm());
            if p.norm() <= T::lit(8.0) * eps * noise {
                converged[i] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex<T> = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.is_zero() {
                        Complex::zero()
                    } else {
                        d.inv()
                    }
                })
                .fold(Complex::zero(), |a, b| a + b);
            let denom = Complex::new(T::one(), T::zero()) - ratio * repulsion;
            let step = if denom.is_zero() || !ratio.re.is_finite() { ratio } else { ratio / denom };
            if !step.re.is_finite() || !step.im.is_finite() {
                // perturb off a critical point of the polynomial
                z[i] += Complex::new(radius * T::lit(1e-3), radius * T::lit(7e-4));
                continue;
            }
            z[i] -= step;
            if step.norm() <= T::lit(4.0) * eps * (T::one() + z[i].norm()) {
                converged[i] = true;
            }
        }
    }
    if converged.iter().any(|c| !c) {
        return Err(Error::RootFinder { iterations });
    }
    for zi in z.iter_mut() {
        for _ in 0..config.polish_steps {
            let (p, dp) = monic.eval_with_derivative(*zi);
            if dp.is_zero() || p.is_zero() {
                break;
            }
            let step = p / dp;
            let candidate = *zi - step;
            if monic.eval(candidate).norm() < p.norm() {
                *zi = candidate;
            } else {
                break;
            }
        }
    }
    Ok(z)
}

/// Groups roots closer than `tol` into `(center, multiplicity)` pairs.
///
/// Clusters are formed greedily in input order; each center is the mean of
/// its members.
pub fn cluster_roots<T: Real>(roots: &[Complex<T>], tol: T) -> Vec<(Complex<T>, usize)> {
    let mut clusters: Vec<(Complex<T>, Vec<Complex<T>>)> = Vec::new();
    for &r in roots {
        match clusters.iter_mut().find(|(c, _)| (*c - r).norm() < tol) {
            Some((center, members)) => {
                members.push(r);
                let sum = members.iter().fold(Complex::zero(), |a, &b| a + b);
                *center = sum / T::of(members.len());
            }
            None => clusters.push((r, vec![r])),
        }
    }
    clusters.into_iter().map(|(c, m)| (c, m.len())).collect()
}

/// Multiple roots of `poly` as `(center, multiplicity)`.
///
/// A root of multiplicity `m` is only resolved to about `eps^{1/m}` in
/// floating point, so nearby approximations are first grouped at a loose
/// radius. A group of `m` roots is accepted when `poly` looks like
/// `b_m (z - c)^m` around its mean `c` up to a perturbation of radius `rho`
/// (relative to the root scale): `|b_j| <= C(m, j) rho^{m-j} |b_m|` plus
/// rounding. Rejected groups are reported as simple roots.
pub fn root_multiplicities<T: Real>(poly: &Polynomial<T>, roots: &[Complex<T>], rho: T) -> Vec<(Complex<T>, usize)> {
    let scale = roots.iter().map(|z| z.norm()).fold(T::one(), T::max);
    let candidates = cluster_roots(roots, T::lit(1e-4) * scale);
    let mut out = Vec::with_capacity(candidates.len());
    let mut used = vec![false; roots.len()];
    for (center, m) in candidates {
        if m == 1 {
            out.push((center, 1));
            continue;
        }
        // an m-fold root of poly is a simple root of its (m-1)-th derivative
        let mut d = poly.clone();
        for _ in 1..m {
            d = d.derivative();
        }
        let mut center = center;
        for _ in 0..8 {
            let (v, dv) = d.eval_with_derivative(center);
            if dv.is_zero() {
                break;
            }
            let step = v / dv;
            center -= step;
            if step.norm() <= T::epsilon() * center.norm().max(T::one()) {
                break;
            }
        }
        let local = poly.shifted(center);
        let b_m = local.coeff(m).norm();
        let r = rho * scale;
        let noise = poly.coeffs().iter().rev().fold(T::zero(), |acc, c| acc * center.norm() + c.norm());
        let mut binom = T::one();
        let mut accepted = true;
        for j in 0..m {
            // binom = C(m, j)
            if j > 0 {
                binom = binom * T::of(m - j + 1) / T::of(j);
            }
            let bound = binom * r.powi((m - j) as i32) * b_m + T::lit(64.0) * T::epsilon() * noise;
            if local.coeff(j).norm() > bound {
                accepted = false;
                break;
            }
        }
        if accepted {
            out.push((center, m));
        } else {
            // split back into the individual approximations near this center
            for (i, &z) in roots.iter().enumerate() {
                if !used[i] && (z - center).norm() < T::lit(1e-4) * scale {
                    used[i] = true;
                    out.push((z, 1));
                }
            }
        }
    }
    out
}
