//! Orbits, periodic points and cycle classification, plus numerical probes
//! for the correspondence between singular orbits and an invariant curve.

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

use crate::brjuno::nearby_rational;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sf::SfFunction;
use crate::singular::{singular_data, SingularConfig};

pub const DEFAULT_ESCAPE_RADIUS: f64 = 1e3;

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect<T> {
    pub x0: T,
    pub x1: T,
    pub y0: T,
    pub y1: T,
}

impl<T: Real> Rect<T> {
    pub fn new(x0: T, x1: T, y0: T, y1: T) -> Result<Self> {
        if !(x0 < x1 && y0 < y1) {
            return Err(Error::Precondition("rectangle needs x0 < x1 and y0 < y1".into()));
        }
        Ok(Self { x0, x1, y0, y1 })
    }

    /// The square `[-h, h]^2`.
    pub fn square(h: T) -> Self {
        Self { x0: -h, x1: h, y0: -h, y1: h }
    }

    pub fn contains(&self, z: Complex<T>) -> bool {
        z.re >= self.x0 && z.re <= self.x1 && z.im >= self.y0 && z.im <= self.y1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitStatus {
    Escaped,
    BoundedBudgetExhausted,
    ConvergedToCycle { period: usize },
    Overflow,
}

impl OrbitStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            OrbitStatus::Escaped => "escaped",
            OrbitStatus::BoundedBudgetExhausted => "bounded-budget-exhausted",
            OrbitStatus::ConvergedToCycle { .. } => "converged-to-cycle",
            OrbitStatus::Overflow => "overflow",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitRecord<T> {
    /// `z0, f(z0), ...`; never empty. On overflow the last entry is the last finite sample.
    pub samples: Vec<Complex<T>>,
    pub escaped: bool,
    pub escape_index: Option<usize>,
    pub final_status: OrbitStatus,
}

#[derive(Clone, Copy, Debug)]
pub struct OrbitConfig {
    /// A sample this close to a recent one is a candidate cycle.
    pub cycle_tol: f64,
    /// How many recent samples are searched for a revisit.
    pub cycle_memory: usize,
    /// Relative agreement required between two consecutive multiplier estimates.
    pub multiplier_tol: f64,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        Self { cycle_tol: 1e-12, cycle_memory: 64, multiplier_tol: 1e-6 }
    }
}

/// Orbit of `z0` under `f` for at most `n_max` steps.
pub fn iterate<T: Real>(f: &SfFunction<T>, z0: Complex<T>, n_max: usize, escape_radius: T) -> Result<OrbitRecord<T>> {
    iterate_with(f, z0, n_max, escape_radius, &OrbitConfig::default())
}

pub fn iterate_with<T: Real>(
    f: &SfFunction<T>,
    z0: Complex<T>,
    n_max: usize,
    escape_radius: T,
    config: &OrbitConfig,
) -> Result<OrbitRecord<T>> {
    if n_max == 0 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    if !(escape_radius > T::zero()) {
        return Err(Error::Precondition("escape radius must be positive".into()));
    }
    let tol = T::lit(config.cycle_tol);
    let mut samples = Vec::with_capacity(n_max.min(1 << 20) + 1);
    samples.push(z0);
    let done = |samples: Vec<Complex<T>>, status| {
        let escaped = status == OrbitStatus::Escaped;
        let escape_index = escaped.then(|| samples.len() - 1);
        Ok(OrbitRecord { samples, escaped, escape_index, final_status: status })
    };
    for _ in 0..n_max {
        let z = *samples.last().expect("non-empty");
        if z.norm() > escape_radius {
            return done(samples, OrbitStatus::Escaped);
        }
        let next = match f.evaluate(z) {
            Ok(w) => w,
            Err(Error::Overflow { .. }) => return done(samples, OrbitStatus::Overflow),
            Err(e) => return Err(e),
        };
        samples.push(next);
        if let Some(period) = detect_cycle(f, &samples, tol, config) {
            return done(samples, OrbitStatus::ConvergedToCycle { period });
        }
    }
    let status = if samples.last().expect("non-empty").norm() > escape_radius {
        OrbitStatus::Escaped
    } else {
        OrbitStatus::BoundedBudgetExhausted
    };
    done(samples, status)
}

/// Period of the cycle the orbit has settled on, if any.
///
/// The newest sample must come within `tol` of one `d` steps back, and the
/// multipliers over the last two windows of length `d` must agree.
fn detect_cycle<T: Real>(f: &SfFunction<T>, samples: &[Complex<T>], tol: T, config: &OrbitConfig) -> Option<usize> {
    let k = samples.len() - 1;
    let z = samples[k];
    let memory = config.cycle_memory.min(k);
    for d in 1..=memory {
        if (samples[k - d] - z).norm() >= tol {
            continue;
        }
        if k < 2 * d {
            return None;
        }
        let m1 = multiplier(f, &samples[k - d..k]);
        let m0 = multiplier(f, &samples[k - 2 * d..k - d]);
        let scale = m1.norm().max(m0.norm()).max(T::lit(1e-300));
        if (m1 - m0).norm() <= T::lit(config.multiplier_tol) * scale.max(T::one()) {
            return Some(d);
        }
        return None;
    }
    None
}

/// Product of `f'` over the given points.
pub fn multiplier<T: Real>(f: &SfFunction<T>, points: &[Complex<T>]) -> Complex<T> {
    points.iter().fold(Complex::new(T::one(), T::zero()), |acc, &z| acc * f.derivative(z))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleClass {
    Attracting,
    Superattracting,
    Repelling,
    RationallyIndifferent,
    IrrationallyIndifferent,
}

impl CycleClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            CycleClass::Attracting => "attracting",
            CycleClass::Superattracting => "superattracting",
            CycleClass::Repelling => "repelling",
            CycleClass::RationallyIndifferent => "rationally-indifferent",
            CycleClass::IrrationallyIndifferent => "irrationally-indifferent",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CycleRecord<T> {
    pub points: Vec<Complex<T>>,
    pub period: usize,
    pub multiplier: Complex<T>,
    pub classification: CycleClass,
    /// `arg(multiplier) / 2 pi` in `[0, 1)` for indifferent cycles.
    pub rotation_number: Option<T>,
    /// `max_i |f(points[i]) - points[i+1]|`.
    pub residual: T,
}

pub const DEFAULT_INDIFFERENCE_TOL: f64 = 1e-9;

impl<T: Real> CycleRecord<T> {
    /// Record for the cycle through `z` of the given period, classified with the default tolerance.
    pub fn from_point(f: &SfFunction<T>, z: Complex<T>, period: usize) -> Result<Self> {
        let mut points = Vec::with_capacity(period);
        let mut w = z;
        let mut residual = T::zero();
        for i in 0..period {
            points.push(w);
            w = f.evaluate(w)?;
            let target = if i + 1 == period { z } else { w };
            residual = residual.max((w - target).norm());
        }
        let record = Self {
            multiplier: multiplier(f, &points),
            points,
            period,
            classification: CycleClass::Repelling,
            rotation_number: None,
            residual,
        };
        Ok(classify_cycle(record, T::lit(DEFAULT_INDIFFERENCE_TOL)))
    }
}

/// Classifies a cycle by its multiplier `m`.
pub fn classify_cycle<T: Real>(mut record: CycleRecord<T>, tol: T) -> CycleRecord<T> {
    let m = record.multiplier;
    let r = m.norm();
    record.rotation_number = None;
    record.classification = if r < tol {
        CycleClass::Superattracting
    } else if r < T::one() - tol {
        CycleClass::Attracting
    } else if r > T::one() + tol {
        CycleClass::Repelling
    } else {
        let turns = m.arg() / T::TAU();
        let turns = if turns < T::zero() { turns + T::one() } else { turns };
        // arg can round to exactly pi, giving 1.0 after the shift
        let turns = if turns >= T::one() { turns - T::one() } else { turns };
        record.rotation_number = Some(turns);
        if nearby_rational(turns.as_f64(), 64, tol.as_f64()).is_some() {
            CycleClass::RationallyIndifferent
        } else {
            CycleClass::IrrationallyIndifferent
        }
    };
    record
}

const NEWTON_MAX_STEPS: usize = 200;
const NEWTON_MAX_HALVINGS: usize = 40;

/// `(f^n(z) - z, (f^n)'(z) - 1)`.
fn return_map<T: Real>(f: &SfFunction<T>, z: Complex<T>, n: usize) -> Result<(Complex<T>, Complex<T>)> {
    let mut w = z;
    let mut d = Complex::new(T::one(), T::zero());
    for _ in 0..n {
        d *= f.derivative(w);
        w = f.evaluate(w)?;
    }
    Ok((w - z, d - Complex::new(T::one(), T::zero())))
}

/// Damped Newton iteration on `f^n(z) - z`; returns the final point and residual.
fn newton_periodic<T: Real>(f: &SfFunction<T>, seed: Complex<T>, n: usize) -> Option<(Complex<T>, T)> {
    let mut z = seed;
    let (mut g, mut dg) = return_map(f, z, n).ok()?;
    for _ in 0..NEWTON_MAX_STEPS {
        let res = g.norm();
        if res.is_zero() || dg.is_zero() || !dg.re.is_finite() || !dg.im.is_finite() {
            break;
        }
        let mut step = g / dg;
        let mut accepted = None;
        for _ in 0..NEWTON_MAX_HALVINGS {
            let candidate = z - step;
            if let Ok((g2, dg2)) = return_map(f, candidate, n) {
                if g2.norm() <= res {
                    accepted = Some((candidate, g2, dg2));
                    break;
                }
            }
            step = step * T::lit(0.5);
        }
        let Some((candidate, g2, dg2)) = accepted else { break };
        let moved = (candidate - z).norm();
        z = candidate;
        g = g2;
        dg = dg2;
        if moved <= T::lit(4.0) * T::epsilon() * (T::one() + z.norm()) {
            break;
        }
    }
    let res = g.norm();
    res.is_finite().then_some((z, res))
}

fn linspace<T: Real>(a: T, b: T, n: usize) -> impl Iterator<Item = T> {
    (0..n).map(move |k| a + (b - a) * T::of(k) / T::of(n - 1))
}

/// Periodic points of period dividing `period` found by Newton's method from
/// a `grid x grid` lattice of seeds in `search_box`.
///
/// Roots within `tol` of an already found cycle are dropped; each root is
/// labelled with its exact period. Every returned record has residual below `tol`.
pub fn find_periodic_points<T: Real>(
    f: &SfFunction<T>,
    period: usize,
    search_box: Rect<T>,
    grid: usize,
    tol: T,
) -> Result<Vec<CycleRecord<T>>> {
    if period == 0 || grid < 2 {
        return Err(Error::Precondition("period must be >= 1 and grid >= 2".into()));
    }
    let seeds: Vec<Complex<T>> = linspace(search_box.y0, search_box.y1, grid)
        .flat_map(|y| linspace(search_box.x0, search_box.x1, grid).map(move |x| Complex::new(x, y)))
        .collect();
    let roots: Vec<Option<(Complex<T>, T)>> = seeds.par_iter().map(|&s| newton_periodic(f, s, period)).collect();

    let mut records: Vec<CycleRecord<T>> = Vec::new();
    for (z, res) in roots.into_iter().flatten() {
        if res >= tol || !search_box.contains(z) {
            continue;
        }
        if records.iter().any(|r| r.points.iter().any(|&p| (p - z).norm() < tol)) {
            continue;
        }
        let exact = (1..=period)
            .filter(|d| period % d == 0)
            .find(|&d| return_map(f, z, d).is_ok_and(|(g, _)| g.norm() < tol))
            .unwrap_or(period);
        let Ok(mut record) = CycleRecord::from_point(f, z, exact) else { continue };
        if record.residual >= tol {
            continue;
        }
        canonical_rotation(&mut record.points);
        records.push(record);
    }
    records.sort_by(|a, b| {
        a.period
            .cmp(&b.period)
            .then(a.points[0].re.partial_cmp(&b.points[0].re).unwrap_or(std::cmp::Ordering::Equal))
            .then(a.points[0].im.partial_cmp(&b.points[0].im).unwrap_or(std::cmp::Ordering::Equal))
    });
    Ok(records)
}

/// Rotates the cycle so that its lexicographically smallest point comes first.
fn canonical_rotation<T: Real>(points: &mut [Complex<T>]) {
    let lex = |a: &Complex<T>, b: &Complex<T>| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    };
    if let Some((i, _)) = points.iter().enumerate().min_by(|a, b| lex(a.1, b.1)) {
        points.rotate_left(i);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularKind {
    CriticalPoint,
    CriticalValue,
    AsymptoticValue,
}

impl SingularKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SingularKind::CriticalPoint => "critical-point",
            SingularKind::CriticalValue => "critical-value",
            SingularKind::AsymptoticValue => "asymptotic-value",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorrespondenceStatus {
    CorrespondsLikely,
    NoEvidence,
    Escaped,
    Inconclusive,
}

impl CorrespondenceStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CorrespondenceStatus::CorrespondsLikely => "corresponds-likely",
            CorrespondenceStatus::NoEvidence => "no-evidence",
            CorrespondenceStatus::Escaped => "escaped",
            CorrespondenceStatus::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Correspondence<T> {
    pub kind: SingularKind,
    pub start: Complex<T>,
    /// Smallest distance between a sample of the curve and the orbit tail.
    pub min_distance: T,
    /// Fraction of curve samples with an orbit-tail point within `eps`.
    pub accumulation_score: T,
    pub status: CorrespondenceStatus,
    pub orbit_status: OrbitStatus,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrespondenceReport<T> {
    pub eps: T,
    pub gamma_len: usize,
    pub records: Vec<Correspondence<T>>,
}

/// Fraction of the orbit discarded before comparing with the curve.
pub const BURN_IN_FRACTION: f64 = 0.1;
/// Accumulation score above which a singular orbit is taken to accumulate on the curve.
pub const CORRESPONDENCE_THRESHOLD: f64 = 0.9;

/// Compares the orbit tail of `start` with the curve samples `gamma`.
pub fn correspondence<T: Real>(
    f: &SfFunction<T>,
    kind: SingularKind,
    start: Complex<T>,
    gamma: &[Complex<T>],
    n_iters: usize,
    eps: T,
) -> Result<Correspondence<T>> {
    if gamma.is_empty() {
        return Err(Error::Precondition("gamma must contain at least one sample".into()));
    }
    let orbit = iterate(f, start, n_iters.max(1), T::lit(DEFAULT_ESCAPE_RADIUS))?;
    let samples = &orbit.samples;
    let burn = ((samples.len() as f64) * BURN_IN_FRACTION) as usize;
    let tail = &samples[burn.min(samples.len() - 1)..];
    let nearest: Vec<T> =
        gamma.par_iter().map(|&g| tail.iter().map(|&z| (z - g).norm()).fold(T::infinity(), T::min)).collect();
    let min_distance = nearest.iter().copied().fold(T::infinity(), T::min);
    let hits = nearest.iter().filter(|&&d| d < eps).count();
    let accumulation_score = T::of(hits) / T::of(gamma.len());
    let status = match orbit.final_status {
        OrbitStatus::Escaped | OrbitStatus::Overflow => CorrespondenceStatus::Escaped,
        _ if accumulation_score > T::lit(CORRESPONDENCE_THRESHOLD) => CorrespondenceStatus::CorrespondsLikely,
        _ if hits == 0 => CorrespondenceStatus::NoEvidence,
        _ => CorrespondenceStatus::Inconclusive,
    };
    Ok(Correspondence {
        kind,
        start,
        min_distance,
        accumulation_score,
        status,
        orbit_status: orbit.final_status,
        iterations: samples.len() - 1,
    })
}

/// Tests whether the orbits of the critical points and asymptotic values of
/// `f` accumulate on every sample of the curve `gamma`.
pub fn mane_probe<T: Real>(
    f: &SfFunction<T>,
    gamma: &[Complex<T>],
    n_iters: usize,
    eps: T,
) -> Result<CorrespondenceReport<T>> {
    if gamma.is_empty() {
        return Err(Error::Precondition("gamma must contain at least one sample".into()));
    }
    let data = singular_data(f, &SingularConfig::default())?;
    let starts: Vec<(SingularKind, Complex<T>)> = data
        .critical_points
        .iter()
        .map(|c| (SingularKind::CriticalPoint, c.location))
        .chain(data.asymptotic_values.iter().map(|a| (SingularKind::AsymptoticValue, a.value)))
        .collect();
    let records = starts
        .par_iter()
        .map(|&(kind, s)| correspondence(f, kind, s, gamma, n_iters, eps))
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrespondenceReport { eps, gamma_len: gamma.len(), records })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionMetric<T> {
    /// `min_z |(f^n)'(z)|`; infinite only if every sample overflowed.
    pub value: T,
    pub log_value: T,
    /// `ln |(f^n)'(z)|` per sample.
    pub per_point: Vec<T>,
    /// Samples whose orbit overflowed; they count as `+inf`.
    pub overflowed: Vec<bool>,
}

/// `min_{z in set} |(f^n)'(z)|`, accumulated as a sum of logarithms.
pub fn expansion_metric<T: Real>(f: &SfFunction<T>, lambda_set: &[Complex<T>], n: usize) -> Result<ExpansionMetric<T>> {
    if n == 0 || lambda_set.is_empty() {
        return Err(Error::Precondition("n must be >= 1 and the set non-empty".into()));
    }
    let (per_point, overflowed): (Vec<T>, Vec<bool>) = lambda_set
        .iter()
        .map(|&z0| {
            let mut z = z0;
            let mut acc = T::zero();
            for j in 0..n {
                acc += f.ln_abs_derivative(z);
                if j + 1 == n {
                    break;
                }
                match f.evaluate(z) {
                    Ok(w) => z = w,
                    Err(_) => return (T::infinity(), true),
                }
            }
            (acc, false)
        })
        .unzip();
    let log_value = per_point.iter().copied().fold(T::infinity(), T::min);
    Ok(ExpansionMetric { value: log_value.exp(), log_value, per_point, overflowed })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularFate {
    ConvergesToAttractingCycle,
    NumericallyPreperiodic,
    RecurrentNearGamma,
    Escaping,
    Inconclusive,
}

impl SingularFate {
    pub fn as_str(&self) -> &'static str {
        match self {
            SingularFate::ConvergesToAttractingCycle => "converges-to-attracting-cycle",
            SingularFate::NumericallyPreperiodic => "numerically-preperiodic",
            SingularFate::RecurrentNearGamma => "recurrent-near-gamma",
            SingularFate::Escaping => "escaping",
            SingularFate::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularClassification<T> {
    pub kind: SingularKind,
    pub value: Complex<T>,
    pub fate: SingularFate,
    /// Period of the cycle reached, for the two cycle fates.
    pub period: Option<usize>,
    pub accumulation_score: Option<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubhyperbolicityReport<T> {
    pub budget: usize,
    pub entries: Vec<SingularClassification<T>>,
    /// Number of singular values whose orbits accumulate on the curve.
    pub recurrent_count: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct SubhyperbolicityConfig {
    /// Orbit self-distance treated as an exact return (a heuristic surrogate for preperiodicity).
    pub revisit_tol: f64,
    pub revisit_memory: usize,
    pub eps: f64,
    pub escape_radius: f64,
}

impl Default for SubhyperbolicityConfig {
    fn default() -> Self {
        Self { revisit_tol: 1e-9, revisit_memory: 64, eps: 1e-2, escape_radius: DEFAULT_ESCAPE_RADIUS }
    }
}

pub fn subhyperbolicity_report<T: Real>(
    f: &SfFunction<T>,
    budget: usize,
    gamma: Option<&[Complex<T>]>,
) -> Result<SubhyperbolicityReport<T>> {
    subhyperbolicity_report_with(f, budget, gamma, &SubhyperbolicityConfig::default())
}

/// Classifies the fate of every singular value of `f` within `budget` iterations.
pub fn subhyperbolicity_report_with<T: Real>(
    f: &SfFunction<T>,
    budget: usize,
    gamma: Option<&[Complex<T>]>,
    config: &SubhyperbolicityConfig,
) -> Result<SubhyperbolicityReport<T>> {
    if budget == 0 {
        return Err(Error::Precondition("budget must be at least 1".into()));
    }
    if gamma.is_some_and(|g| g.is_empty()) {
        return Err(Error::Precondition("gamma must contain at least one sample".into()));
    }
    let data = singular_data(f, &SingularConfig::default())?;
    let values: Vec<(SingularKind, Complex<T>)> = data
        .critical_values
        .iter()
        .map(|&v| (SingularKind::CriticalValue, v))
        .chain(data.asymptotic_values.iter().map(|a| (SingularKind::AsymptoticValue, a.value)))
        .collect();
    let entries = values
        .par_iter()
        .map(|&(kind, s)| classify_singular_value(f, kind, s, budget, gamma, config))
        .collect::<Result<Vec<_>>>()?;
    let recurrent_count = entries.iter().filter(|e| e.fate == SingularFate::RecurrentNearGamma).count();
    Ok(SubhyperbolicityReport { budget, entries, recurrent_count })
}

fn classify_singular_value<T: Real>(
    f: &SfFunction<T>,
    kind: SingularKind,
    s: Complex<T>,
    budget: usize,
    gamma: Option<&[Complex<T>]>,
    config: &SubhyperbolicityConfig,
) -> Result<SingularClassification<T>> {
    let entry =
        |fate, period, accumulation_score| SingularClassification { kind, value: s, fate, period, accumulation_score };
    let radius = T::lit(config.escape_radius);
    let tol = T::lit(config.revisit_tol);
    let mut samples = vec![s];
    for _ in 0..budget {
        let z = *samples.last().expect("non-empty");
        if z.norm() > radius {
            return Ok(entry(SingularFate::Escaping, None, None));
        }
        let w = match f.evaluate(z) {
            Ok(w) => w,
            Err(Error::Overflow { .. }) => return Ok(entry(SingularFate::Escaping, None, None)),
            Err(e) => return Err(e),
        };
        samples.push(w);
        let k = samples.len() - 1;
        if let Some(d) = (1..=config.revisit_memory.min(k)).find(|&d| (samples[k - d] - w).norm() < tol) {
            let m = multiplier(f, &samples[k - d..k]);
            let fate = if m.norm() < T::one() {
                SingularFate::ConvergesToAttractingCycle
            } else {
                SingularFate::NumericallyPreperiodic
            };
            return Ok(entry(fate, Some(d), None));
        }
    }
    if samples.last().expect("non-empty").norm() > radius {
        return Ok(entry(SingularFate::Escaping, None, None));
    }
    if let Some(gamma) = gamma {
        let c = correspondence(f, kind, s, gamma, budget, T::lit(config.eps))?;
        let fate = if c.status == CorrespondenceStatus::CorrespondsLikely {
            SingularFate::RecurrentNearGamma
        } else {
            SingularFate::Inconclusive
        };
        return Ok(entry(fate, None, Some(c.accumulation_score)));
    }
    Ok(entry(SingularFate::Inconclusive, None, None))
}
