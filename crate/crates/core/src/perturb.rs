//! Perturbation families through a normalized function and their rescalings.
//!
//! For `f = lambda int_0^z P e^Q` with `p >= 1` the critical family is
//! `f[b] = f + (1/b) int_0^z t e^{Q(t)} dt`; for `p = 0` the singularity family is
//! `f[b] = lambda int_0^z e^{Q(t) + t/b} dt`. The rescaling `F_b(z) = f[b](b z) / b`
//! stays entire in `b`, and at `b = 0` it is `lambda z + z^2/2` (critical) or
//! `lambda (e^z - 1)` (singularity).

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

use crate::dynamics::Rect;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Real;
use crate::series::TaylorSeries;
use crate::sf::SfFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Critical,
    Singularity,
}

impl FamilyKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyKind::Critical => "critical",
            FamilyKind::Singularity => "singularity",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PerturbationFamily<T> {
    base: SfFunction<T>,
    kind: FamilyKind,
}

impl<T: Real> PerturbationFamily<T> {
    pub fn new(base: SfFunction<T>, kind: FamilyKind) -> Result<Self> {
        if !base.is_normalized() {
            return Err(Error::Precondition("family base must be normalized".into()));
        }
        let (p, q) = base.type_pq();
        match kind {
            FamilyKind::Critical if p == 0 => {
                Err(Error::Precondition("critical family needs a base with deg P >= 1".into()))
            }
            FamilyKind::Singularity if p != 0 || q == 0 => {
                Err(Error::Precondition("singularity family needs deg P = 0 and deg Q >= 1".into()))
            }
            _ => Ok(Self { base, kind }),
        }
    }

    pub fn base(&self) -> &SfFunction<T> {
        &self.base
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }
}

/// `F_b` as a series at 0 together with its closed form.
#[derive(Clone, Debug)]
pub struct RescaledMember<T> {
    pub b: Complex<T>,
    pub series: TaylorSeries<T>,
    pub closed_form: SfFunction<T>,
}

/// `t / c` as a polynomial.
fn linear<T: Real>(c: Complex<T>) -> Polynomial<T> {
    Polynomial::trimmed(vec![Complex::zero(), c])
}

/// `f[b]` for `b != 0`.
pub fn family_member<T: Real>(fam: &PerturbationFamily<T>, b: Complex<T>) -> Result<SfFunction<T>> {
    if b.is_zero() {
        return Err(Error::Precondition("b = 0 has no family member; use rescaled_member".into()));
    }
    let f = &fam.base;
    let one = Complex::new(T::one(), T::zero());
    match fam.kind {
        // (1/b) int t e^Q = lambda int (t / (lambda b)) e^Q
        FamilyKind::Critical => {
            let p = f.p().add(&linear(one / (f.lambda() * b)));
            SfFunction::from_parts(f.lambda(), p, f.q().clone(), Complex::zero())
        }
        FamilyKind::Singularity => {
            let q = f.q().add(&linear(one / b));
            SfFunction::from_parts(f.lambda(), f.p().clone(), q, Complex::zero())
        }
    }
}

/// Closed form of `F_b`, valid for every `b` including 0.
///
/// Critical: `lambda int_0^z (P(b s) + s / lambda) e^{Q(b s)} ds`.
/// Singularity: `lambda int_0^z e^{Q(b s) + s} ds`.
pub fn rescaled_closed_form<T: Real>(fam: &PerturbationFamily<T>, b: Complex<T>) -> Result<SfFunction<T>> {
    let f = &fam.base;
    let one = Complex::new(T::one(), T::zero());
    let pb = f.p().scaled_argument(b);
    let qb = f.q().scaled_argument(b);
    match fam.kind {
        FamilyKind::Critical => {
            SfFunction::from_parts(f.lambda(), pb.add(&linear(one / f.lambda())), qb, Complex::zero())
        }
        FamilyKind::Singularity => SfFunction::from_parts(f.lambda(), pb, qb.add(&linear(one)), Complex::zero()),
    }
}

/// `F_b` with its series at 0 to the given order, built by substituting `b s`
/// into the base polynomials and integrating termwise.
pub fn rescaled_member<T: Real>(fam: &PerturbationFamily<T>, b: Complex<T>, order: usize) -> Result<RescaledMember<T>> {
    if order < 2 {
        return Err(Error::Precondition("order must be at least 2".into()));
    }
    let closed_form = rescaled_closed_form(fam, b)?;
    let series = closed_form.taylor_at(Complex::zero(), order)?;
    Ok(RescaledMember { b, series, closed_form })
}

/// Low-order coefficients of `F_b - F_0` larger than this signal an inconsistency.
pub const REMAINDER_LOW_ORDER_TOL: f64 = 1e-14;

/// Series of `F_b - F_0`; the constant and linear coefficients vanish.
pub fn remainder_h<T: Real>(fam: &PerturbationFamily<T>, b: Complex<T>, order: usize) -> Result<TaylorSeries<T>> {
    let fb = rescaled_member(fam, b, order)?.series;
    let f0 = rescaled_member(fam, Complex::zero(), order)?.series;
    let mut coefficients: Vec<Complex<T>> = fb.coefficients.iter().zip(&f0.coefficients).map(|(x, y)| x - y).collect();
    for (k, c) in coefficients.iter_mut().enumerate().take(2) {
        if c.norm() > T::lit(REMAINDER_LOW_ORDER_TOL) {
            return Err(Error::Internal(format!("remainder coefficient {k} is {c}, expected 0")));
        }
        *c = Complex::zero();
    }
    Ok(TaylorSeries { center: Complex::zero(), coefficients, trust_radius: fb.trust_radius.min(f0.trust_radius) })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HartogsCell<T> {
    pub z: Complex<T>,
    /// `z / (F_b^n(z) - z)`; NaN for overflow cells.
    pub value: Complex<T>,
    /// `|F_b^n(z) - z| < 1e-9 (1 + |z|)`: a periodic point of period dividing `n`.
    pub pole: bool,
    pub overflow: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HartogsGrid<T> {
    pub b: Complex<T>,
    pub period: usize,
    pub width: usize,
    pub height: usize,
    /// Row-major, first row at `y0`.
    pub cells: Vec<HartogsCell<T>>,
}

/// Pole threshold for `|F_b^n(z) - z|`, relative to `1 + |z|`.
pub const POLE_TOL: f64 = 1e-9;

fn grid_axis<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    if n == 1 {
        return vec![(a + b) * T::lit(0.5)];
    }
    (0..n).map(|k| a + (b - a) * T::of(k) / T::of(n - 1)).collect()
}

/// `H(b, z) = z / (F_b^n(z) - z)` on a `width x height` lattice spanning `window`
/// (both ends included).
///
/// At `z = 0` the value is the limit `1 / ((F_b^n)'(0) - 1) = 1 / (lambda^n - 1)`.
pub fn hartogs_grid<T: Real>(
    fam: &PerturbationFamily<T>,
    b: Complex<T>,
    period: usize,
    window: Rect<T>,
    width: usize,
    height: usize,
) -> Result<HartogsGrid<T>> {
    if period == 0 || width == 0 || height == 0 {
        return Err(Error::Precondition("period and resolution must be positive".into()));
    }
    let f = rescaled_closed_form(fam, b)?;
    let xs = grid_axis(window.x0, window.x1, width);
    let ys = grid_axis(window.y0, window.y1, height);
    let cells: Vec<HartogsCell<T>> = ys
        .par_iter()
        .flat_map_iter(|&y| xs.iter().map(move |&x| Complex::new(x, y)).collect::<Vec<_>>())
        .map(|z| hartogs_cell(&f, z, period))
        .collect();
    Ok(HartogsGrid { b, period, width, height, cells })
}

fn hartogs_cell<T: Real>(f: &SfFunction<T>, z: Complex<T>, period: usize) -> HartogsCell<T> {
    let one = Complex::new(T::one(), T::zero());
    if z.is_zero() {
        let slope = (0..period).fold(one, |acc, _| acc * f.derivative(Complex::zero()));
        let den = slope - one;
        return HartogsCell { z, value: one / den, pole: den.norm() < T::lit(POLE_TOL), overflow: false };
    }
    let mut w = z;
    for _ in 0..period {
        match f.evaluate(w) {
            Ok(next) if next.re.is_finite() && next.im.is_finite() => w = next,
            _ => {
                let nan = Complex::new(T::nan(), T::nan());
                return HartogsCell { z, value: nan, pole: false, overflow: true };
            }
        }
    }
    let den = w - z;
    let pole = den.norm() < T::lit(POLE_TOL) * (T::one() + z.norm());
    HartogsCell { z, value: z / den, pole, overflow: false }
}
