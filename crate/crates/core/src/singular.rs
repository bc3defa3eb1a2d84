//! Critical points, critical values and asymptotic values.
//!
//! A function in `SF_{p,q}` has `p` critical points (the zeros of `P`,
//! with multiplicity) and `q` logarithmic tracts, one around each direction
//! in which `Re(a_q t^q)` decays fastest. The asymptotic value of a tract is
//! the limit of `f` along its central ray.

use num_complex::Complex;

use crate::error::Result;
use crate::poly::{root_multiplicities, roots, RootConfig};
use crate::scalar::Real;
use crate::sf::SfFunction;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalPoint<T> {
    pub location: Complex<T>,
    pub multiplicity: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticValue<T> {
    pub value: Complex<T>,
    /// Direction `theta` of the tract's central ray; `Re(a_q e^{i q theta}) < 0`.
    pub tract_direction: T,
    /// Radius at which the ray integral was cut off.
    pub cutoff_radius: T,
    /// Quadrature error plus the analytic bound on the omitted tail.
    pub error: T,
    /// False when the tail bound could not be pushed below the tolerance.
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularData<T> {
    pub critical_points: Vec<CriticalPoint<T>>,
    pub critical_values: Vec<Complex<T>>,
    pub asymptotic_values: Vec<AsymptoticValue<T>>,
    /// `(sum of critical multiplicities, number of tracts)`.
    pub counts: (usize, usize),
}

impl<T: Real> SingularData<T> {
    /// Critical values followed by asymptotic values.
    pub fn singular_values(&self) -> Vec<Complex<T>> {
        self.critical_values.iter().copied().chain(self.asymptotic_values.iter().map(|a| a.value)).collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SingularConfig {
    /// Cluster radius (relative to the root scale) for multiple critical points.
    pub cluster_tol: f64,
    /// Target for the analytic tail bound of each ray integral.
    pub tail_tol: f64,
    pub max_radius: f64,
    pub roots: RootConfig,
}

impl Default for SingularConfig {
    fn default() -> Self {
        Self { cluster_tol: 1e-8, tail_tol: 1e-14, max_radius: 1e4, roots: RootConfig::default() }
    }
}

/// Directions `theta_j = (pi - arg a_q + 2 pi j) / q`, `j = 0..q`, along which
/// `Re(a_q t^q)` decreases fastest.
pub fn tract_directions<T: Real>(leading: Complex<T>, q: usize) -> Vec<T> {
    let base = T::PI() - leading.arg();
    (0..q)
        .map(|j| {
            let theta = (base + T::TAU() * T::of(j)) / T::of(q);
            // report in (-pi, pi]
            theta.sin().atan2(theta.cos())
        })
        .collect()
}

/// Natural log of an upper bound for `|lambda| int_R^inf |P(r e^{i theta})| e^{Re Q(r e^{i theta})} dr`,
/// or `None` when the leading term of `Q` does not yet dominate at `radius`.
fn log_tail_bound<T: Real>(f: &SfFunction<T>, radius: T) -> Option<T> {
    let (p, q) = f.type_pq();
    let a_q = f.q().leading().norm();
    let lower =
        f.q().coeffs()[..q].iter().enumerate().fold(T::zero(), |acc, (k, c)| acc + c.norm() * radius.powi(k as i32));
    let dominant = a_q * radius.powi(q as i32);
    if radius < T::one() || T::lit(2.0) * lower > dominant {
        return None;
    }
    // Re Q <= -A r^q for r >= R, then r^q >= R^q + q R^{q-1} (r - R) and
    // r^p <= R^p e^{p (r - R) / R}
    let a = a_q * T::lit(0.5);
    let kappa = a * T::of(q) * radius.powi(q as i32 - 1);
    let slack = kappa - T::of(p) / radius;
    if slack <= T::zero() {
        return None;
    }
    let c_abs = f.p().coeffs().iter().fold(T::zero(), |acc, c| acc + c.norm());
    Some(f.lambda().norm().ln() + c_abs.ln() + T::of(p) * radius.ln() - a * radius.powi(q as i32) - slack.ln())
}

/// Critical points (with multiplicity), critical values and asymptotic values of `f`.
pub fn singular_data<T: Real>(f: &SfFunction<T>, config: &SingularConfig) -> Result<SingularData<T>> {
    let (p_deg, q_deg) = f.type_pq();

    let raw = roots(f.p(), &config.roots)?;
    let clusters = root_multiplicities(f.p(), &raw, T::lit(config.cluster_tol));
    let mut critical_points = Vec::with_capacity(clusters.len());
    let mut critical_values = Vec::with_capacity(clusters.len());
    for (location, multiplicity) in clusters {
        critical_values.push(f.evaluate(location)?);
        critical_points.push(CriticalPoint { location, multiplicity });
    }

    let mut asymptotic_values = Vec::with_capacity(q_deg);
    if q_deg > 0 {
        let log_tol = T::lit(config.tail_tol).ln();
        let max_radius = T::lit(config.max_radius);
        // smallest radius (by doubling) at which the tail bound meets the tolerance
        let mut radius = T::one();
        let mut bound = log_tail_bound(f, radius);
        while bound.is_none_or(|b| b > log_tol) && radius < max_radius {
            radius = (radius * T::lit(2.0)).min(max_radius);
            bound = log_tail_bound(f, radius);
        }
        let converged = bound.is_some_and(|b| b <= log_tol);
        let tail = bound.map(|b| b.exp()).unwrap_or(T::infinity());
        for theta in tract_directions(f.q().leading(), q_deg) {
            let end = Complex::from_polar(radius, theta);
            let integral = f.integrate_segment(Complex::new(T::zero(), T::zero()), end)?;
            let value = integral.value()? + f.translation();
            asymptotic_values.push(AsymptoticValue {
                value,
                tract_direction: theta,
                cutoff_radius: radius,
                error: integral.error() + tail,
                converged,
            });
        }
    }

    let counts = (critical_points.iter().map(|c| c.multiplicity).sum(), asymptotic_values.len());
    debug_assert_eq!(counts, (p_deg, q_deg));
    Ok(SingularData { critical_points, critical_values, asymptotic_values, counts })
}
