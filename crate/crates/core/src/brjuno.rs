//! Continued fractions in exact integer arithmetic and Brjuno sums.
//!
//! Convergents `p_n / q_n` follow the usual recurrence with
//! `p_{-1} = 1, q_{-1} = 0, p_0 = a_0, q_0 = 1`. The Brjuno sum of `alpha` is
//! `sum_{n >= 0} log(q_{n+1}) / q_n`.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest exact quotient `g^{q_n}` stored by the Liouville preset, in decimal digits.
pub const LIOUVILLE_DIGIT_CAP: f64 = 1.0e6;

/// Where an expansion came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfSource {
    ExactRational,
    DecimalApprox,
    Preset,
}

/// Named test vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// `(sqrt 5 - 1) / 2 = [0; 1, 1, 1, ...]`
    Golden,
    /// `sqrt 2 - 1 = [0; 2, 2, 2, ...]`
    Silver,
    /// `a_1 = 1`, then `a_{n+1} = growth^{q_n}`; the Brjuno sum diverges.
    LiouvilleDemo { growth: u32 },
}

/// Quotients of a Liouville-type preset that were too large to store.
///
/// Only the rule `a_{n+1} = growth^{q_n}` is kept; Brjuno terms at these
/// indices are replaced by their lower bound `log(growth)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundTail {
    pub growth: u32,
    /// Number of requested quotients that were not materialized.
    pub missing: usize,
}

/// Continued fraction `[a_0; a_1, a_2, ...]` with its convergents.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuedFraction {
    integer_part: BigInt,
    partial_quotients: Vec<BigUint>,
    /// `(p_n, q_n)` for `n = 0..=partial_quotients.len()`.
    convergents: Vec<(BigInt, BigUint)>,
    source: CfSource,
    terminated: bool,
    truncated_by_precision: bool,
    bound_tail: Option<BoundTail>,
}

impl ContinuedFraction {
    fn start(integer_part: BigInt, source: CfSource) -> Self {
        let convergents = vec![(integer_part.clone(), BigUint::one())];
        Self {
            integer_part,
            partial_quotients: Vec::new(),
            convergents,
            source,
            terminated: false,
            truncated_by_precision: false,
            bound_tail: None,
        }
    }

    fn push(&mut self, a: BigUint) {
        debug_assert!(!a.is_zero());
        let n = self.convergents.len();
        let (p1, q1) = &self.convergents[n - 1];
        let (p2, q2) = if n >= 2 { self.convergents[n - 2].clone() } else { (BigInt::one(), BigUint::zero()) };
        let a_int = BigInt::from_biguint(Sign::Plus, a.clone());
        let p = &a_int * p1 + p2;
        let q = &a * q1 + q2;
        self.convergents.push((p, q));
        self.partial_quotients.push(a);
    }

    /// Builds an expansion from explicit quotients `a_1, a_2, ...`.
    pub fn from_quotients(integer_part: BigInt, quotients: &[BigUint]) -> Result<Self> {
        let mut cf = Self::start(integer_part, CfSource::Preset);
        for a in quotients {
            if a.is_zero() {
                return Err(Error::Precondition("partial quotients must be positive".into()));
            }
            cf.push(a.clone());
        }
        Ok(cf)
    }

    pub fn integer_part(&self) -> &BigInt {
        &self.integer_part
    }

    pub fn partial_quotients(&self) -> &[BigUint] {
        &self.partial_quotients
    }

    /// `(p_n, q_n)` for `n = 0..=len`.
    pub fn convergents(&self) -> &[(BigInt, BigUint)] {
        &self.convergents
    }

    pub fn source(&self) -> CfSource {
        self.source
    }

    /// The expansion of a rational ended before the requested depth.
    pub fn terminated(&self) -> bool {
        self.terminated
    }

    /// A decimal expansion stopped because further quotients are not
    /// determined by the stated number of digits.
    pub fn truncated_by_precision(&self) -> bool {
        self.truncated_by_precision
    }

    pub fn bound_tail(&self) -> Option<&BoundTail> {
        self.bound_tail.as_ref()
    }

    /// Number of stored partial quotients (excluding `a_0`).
    pub fn len(&self) -> usize {
        self.partial_quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partial_quotients.is_empty()
    }

    /// The last stored convergent as an exact rational.
    pub fn value(&self) -> BigRational {
        let (p, q) = self.convergents.last().expect("at least p_0/q_0");
        BigRational::new(p.clone(), BigInt::from_biguint(Sign::Plus, q.clone()))
    }

    /// `n`-th convergent as an exact rational.
    pub fn convergent(&self, n: usize) -> Option<BigRational> {
        self.convergents.get(n).map(|(p, q)| BigRational::new(p.clone(), BigInt::from_biguint(Sign::Plus, q.clone())))
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.integer_part)?;
        for (i, a) in self.partial_quotients.iter().enumerate() {
            write!(f, "{}{}", if i == 0 { "; " } else { ", " }, a)?;
        }
        if let Some(tail) = &self.bound_tail {
            write!(f, ", <{} quotients {}^q_n>", tail.missing, tail.growth)?;
        }
        write!(f, "]")
    }
}

/// Input accepted by [`expand`].
#[derive(Clone, Debug, PartialEq)]
pub enum AlphaInput {
    Rational(BigRational),
    /// A decimal literal; `digits` counts the digits after the point and fixes
    /// the precision floor at `10^-digits`.
    Decimal {
        value: BigRational,
        digits: u32,
    },
}

impl AlphaInput {
    /// Parses `p/q`, an integer, or a decimal literal such as `0.4142`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
            let q: BigInt = q.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
            if q.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            return Ok(Self::Rational(BigRational::new(p, q)));
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_s, frac_s) = body.split_once('.').unwrap_or((body, ""));
        let valid = |t: &str| t.chars().all(|c| c.is_ascii_digit());
        if (int_s.is_empty() && frac_s.is_empty()) || !valid(int_s) || !valid(frac_s) {
            return Err(Error::Parse(format!("not a rational or decimal literal: {s:?}")));
        }
        let digits = frac_s.len() as u32;
        let mut numer: BigInt = format!("{}{}", if int_s.is_empty() { "0" } else { int_s }, frac_s)
            .parse()
            .map_err(|_| Error::Parse(s.to_string()))?;
        if neg {
            numer = -numer;
        }
        let denom = num_traits::pow(BigInt::from(10u32), digits as usize);
        let value = BigRational::new(numer, denom);
        if digits == 0 {
            Ok(Self::Rational(value))
        } else {
            Ok(Self::Decimal { value, digits })
        }
    }
}

fn floor_rational(x: &BigRational) -> BigInt {
    x.numer().div_floor(x.denom())
}

fn to_biguint(x: BigInt) -> BigUint {
    x.to_biguint().expect("non-negative quotient")
}

/// Expands `alpha` into at most `depth` partial quotients.
///
/// Rationals run the Euclidean algorithm and set `terminated` if they finish
/// early. Decimals are expanded as the interval `value +- 10^-digits`; the
/// expansion halts, flagged `truncated_by_precision`, at the first quotient
/// the interval does not determine.
pub fn expand(alpha: &AlphaInput, depth: usize) -> Result<ContinuedFraction> {
    if depth == 0 {
        return Err(Error::Precondition("depth must be at least 1".into()));
    }
    match alpha {
        AlphaInput::Rational(x) => {
            let a0 = floor_rational(x);
            let mut cf = ContinuedFraction::start(a0.clone(), CfSource::ExactRational);
            let mut rest = x - BigRational::from_integer(a0);
            while cf.len() < depth {
                if rest.is_zero() {
                    cf.terminated = true;
                    break;
                }
                let inv = rest.recip();
                let a = floor_rational(&inv);
                rest = inv - BigRational::from_integer(a.clone());
                cf.push(to_biguint(a));
            }
            if rest.is_zero() {
                cf.terminated = true;
            }
            Ok(cf)
        }
        AlphaInput::Decimal { value, digits } => {
            let eps = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10u32), *digits as usize));
            let mut lo = value - &eps;
            let mut hi = value + &eps;
            let a0 = floor_rational(&lo);
            let mut cf = ContinuedFraction::start(a0.clone(), CfSource::DecimalApprox);
            if floor_rational(&hi) != a0 {
                cf.truncated_by_precision = true;
                return Ok(cf);
            }
            let a0r = BigRational::from_integer(a0);
            lo -= &a0r;
            hi -= &a0r;
            while cf.len() < depth {
                if lo.is_zero() || hi.is_zero() {
                    cf.truncated_by_precision = true;
                    break;
                }
                // 1/x reverses the order of the interval endpoints
                let (new_lo, new_hi) = (hi.recip(), lo.recip());
                let a = floor_rational(&new_lo);
                if floor_rational(&new_hi) != a || !a.is_positive() {
                    cf.truncated_by_precision = true;
                    break;
                }
                let ar = BigRational::from_integer(a.clone());
                lo = new_lo - &ar;
                hi = new_hi - &ar;
                cf.push(to_biguint(a));
            }
            Ok(cf)
        }
    }
}

/// Generates a named test vector with `depth` partial quotients.
pub fn preset(which: Preset, depth: usize) -> Result<ContinuedFraction> {
    if depth == 0 {
        return Err(Error::Precondition("depth must be at least 1".into()));
    }
    let mut cf = ContinuedFraction::start(BigInt::zero(), CfSource::Preset);
    match which {
        Preset::Golden => (0..depth).for_each(|_| cf.push(BigUint::one())),
        Preset::Silver => (0..depth).for_each(|_| cf.push(BigUint::from(2u32))),
        Preset::LiouvilleDemo { growth } => {
            if growth < 2 {
                return Err(Error::Precondition("liouville growth must be at least 2".into()));
            }
            cf.push(BigUint::one());
            let digits_per_unit = (growth as f64).log10();
            while cf.len() < depth {
                let q_n = &cf.convergents.last().expect("convergent").1;
                let q_f = q_n.to_f64().unwrap_or(f64::INFINITY);
                if q_f * digits_per_unit > LIOUVILLE_DIGIT_CAP {
                    cf.bound_tail = Some(BoundTail { growth, missing: depth - cf.len() });
                    break;
                }
                let exponent = q_n.to_u32().expect("capped exponent fits in u32");
                cf.push(BigUint::from(growth).pow(exponent));
            }
        }
    }
    Ok(cf)
}

/// Natural logarithm of a big unsigned integer, in double precision.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    top.to_f64().expect("64-bit value").ln() + shift as f64 * std::f64::consts::LN_2
}

/// Qualitative reading of a finite stretch of the Brjuno series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BrjunoVerdict {
    ConvergentLikely,
    DivergentLikely,
    Inconclusive,
    Rational,
}

impl BrjunoVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::ConvergentLikely => "convergent-likely",
            Self::DivergentLikely => "divergent-likely",
            Self::Inconclusive => "inconclusive",
            Self::Rational => "rational",
        }
    }
}

/// Thresholds for [`brjuno_partial_sums`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BrjunoConfig {
    /// Both the last increment and the geometric tail bound must fall below this.
    pub tail_tol: f64,
    /// Number of trailing terms inspected for the divergence test.
    pub divergence_window: usize,
    /// Terms bounded below by this over the whole window count as divergence.
    pub divergence_floor: f64,
    /// Number of trailing term ratios used to estimate the geometric decay rate.
    pub ratio_window: usize,
}

impl Default for BrjunoConfig {
    fn default() -> Self {
        Self { tail_tol: 1e-9, divergence_window: 10, divergence_floor: 1e-2, ratio_window: 5 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BrjunoReport {
    /// `partial_sums[k] = sum_{n <= k} log(q_{n+1}) / q_n`.
    pub partial_sums: Vec<f64>,
    pub terms: Vec<f64>,
    pub verdict: BrjunoVerdict,
    pub depth: usize,
    /// First index whose term is the lower bound `log g` rather than an exact value.
    pub bound_terms_from: Option<usize>,
    /// Geometric bound on the omitted remainder, when the decay test applies.
    pub tail_bound: Option<f64>,
    pub truncated_by_precision: bool,
}

/// Partial sums of the Brjuno series over `depth` terms, with a verdict.
pub fn brjuno_partial_sums(cf: &ContinuedFraction, depth: usize, config: &BrjunoConfig) -> Result<BrjunoReport> {
    if cf.terminated {
        return Ok(BrjunoReport {
            partial_sums: Vec::new(),
            terms: Vec::new(),
            verdict: BrjunoVerdict::Rational,
            depth: 0,
            bound_terms_from: None,
            tail_bound: None,
            truncated_by_precision: false,
        });
    }
    if depth == 0 {
        return Err(Error::Precondition("depth must be at least 1".into()));
    }
    let exact = cf.len();
    let available = match &cf.bound_tail {
        Some(tail) => exact + tail.missing,
        None => exact,
    };
    let depth = depth.min(available);
    let log_q: Vec<f64> = cf.convergents.iter().map(|(_, q)| ln_biguint(q)).collect();
    let mut terms = Vec::with_capacity(depth);
    let mut bound_terms_from = None;
    for n in 0..depth {
        let term = if n < exact {
            log_q[n + 1] / cf.convergents[n].1.to_f64().unwrap_or(f64::INFINITY)
        } else {
            let tail = cf.bound_tail.as_ref().expect("bound tail present beyond exact quotients");
            bound_terms_from.get_or_insert(n);
            // log q_{n+1} >= log a_{n+1} = q_n log g
            (tail.growth as f64).ln()
        };
        terms.push(term);
    }
    let mut partial_sums = Vec::with_capacity(depth);
    let mut acc = 0.0;
    for t in &terms {
        acc += t;
        partial_sums.push(acc);
    }

    let mut verdict = BrjunoVerdict::Inconclusive;
    let mut tail_bound = None;
    let w = config.divergence_window;
    if depth >= w && w > 0 && terms[depth - w..].iter().all(|&t| t >= config.divergence_floor) {
        verdict = BrjunoVerdict::DivergentLikely;
    } else if depth >= config.ratio_window + 1 {
        let tail = &terms[depth - config.ratio_window - 1..];
        let ratio =
            tail.windows(2).map(|p| if p[0] > 0.0 { p[1] / p[0] } else { f64::INFINITY }).fold(0.0f64, f64::max);
        let last = terms[depth - 1];
        if ratio < 1.0 {
            let bound = last * ratio / (1.0 - ratio);
            tail_bound = Some(bound);
            if last < config.tail_tol && bound < config.tail_tol {
                verdict = BrjunoVerdict::ConvergentLikely;
            }
        }
    }
    Ok(BrjunoReport {
        partial_sums,
        terms,
        verdict,
        depth,
        bound_terms_from,
        tail_bound,
        truncated_by_precision: cf.truncated_by_precision,
    })
}

/// Reduces `x` modulo 1 into `[0, 1)`.
fn frac_part(x: &BigRational) -> BigRational {
    x - BigRational::from_integer(floor_rational(x))
}

/// `e^{2 pi i theta}` with exact values at multiples of a quarter turn.
pub fn unit_from_turns<T: Real>(theta: f64) -> Complex<T> {
    let t = 4.0 * (theta - theta.floor());
    let k = t.round();
    let r = t - k;
    let angle = r * std::f64::consts::FRAC_PI_2;
    let (s, c) = (T::lit(angle.sin()), T::lit(angle.cos()));
    match (k as i64).rem_euclid(4) {
        0 => Complex::new(c, s),
        1 => Complex::new(-s, c),
        2 => Complex::new(-c, -s),
        _ => Complex::new(s, -c),
    }
}

/// `lambda = e^{2 pi i alpha}` from the last stored convergent.
///
/// `precision` is the number of significant decimal digits required of
/// `alpha`; it must be at least 15.
pub fn rotation_to_lambda<T: Real>(cf: &ContinuedFraction, precision: u32) -> Result<Complex<T>> {
    if precision < 15 {
        return Err(Error::Precondition("precision must be at least 15 digits".into()));
    }
    let theta = frac_part(&cf.value()).to_f64().unwrap_or(0.0);
    Ok(unit_from_turns(theta))
}

/// The fractional part of `alpha` as a double.
pub fn rotation_number(cf: &ContinuedFraction) -> f64 {
    frac_part(&cf.value()).to_f64().unwrap_or(0.0)
}

/// Finds `p/q` with `q <= max_den` and `|theta - p/q| < tol` using the
/// floating-point continued fraction of `theta`, if one exists.
///
/// For `tol < 1/(2 max_den^2)` every such fraction is a convergent, so
/// scanning convergents is exhaustive.
pub fn nearby_rational(theta: f64, max_den: u64, tol: f64) -> Option<(i64, u64)> {
    let a0 = theta.floor();
    let (mut p_prev, mut q_prev) = (1i64, 0u64);
    let (mut p, mut q) = (a0 as i64, 1u64);
    let mut x = theta - a0;
    loop {
        if (theta - p as f64 / q as f64).abs() < tol {
            return Some((p, q));
        }
        if x.abs() < f64::EPSILON {
            return None;
        }
        let inv = 1.0 / x;
        let a = inv.floor();
        x = inv - a;
        if !a.is_finite() || a > 1e15 {
            return None;
        }
        let a_i = a as u64;
        let q_next = a_i.checked_mul(q)?.checked_add(q_prev)?;
        if q_next > max_den {
            return None;
        }
        let p_next = (a_i as i64).checked_mul(p)?.checked_add(p_prev)?;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
    }
}

/// Parsed form of an alpha specification: a preset name, `p/q`, or a decimal.
#[derive(Clone, Debug, PartialEq)]
pub enum AlphaSpec {
    Preset(Preset),
    Input(AlphaInput),
    /// Explicit quotients, e.g. `cf:0;1,1,1,1000000,1`.
    Quotients {
        integer_part: BigInt,
        quotients: Vec<BigUint>,
    },
}

impl AlphaSpec {
    /// Accepts `golden`, `silver`, `liouville_demo(G)` / `liouville:G`,
    /// `cf:a0;a1,a2,...`, `p/q` and decimal literals.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "golden" => return Ok(Self::Preset(Preset::Golden)),
            "silver" => return Ok(Self::Preset(Preset::Silver)),
            _ => {}
        }
        let growth = t
            .strip_prefix("liouville_demo(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix("liouville:"));
        if let Some(g) = growth {
            let growth: u32 = g.trim().parse().map_err(|_| Error::Parse(format!("bad liouville growth {g:?}")))?;
            return Ok(Self::Preset(Preset::LiouvilleDemo { growth }));
        }
        if let Some(body) = t.strip_prefix("cf:") {
            let (a0, rest) = body.split_once(';').unwrap_or((body, ""));
            let integer_part: BigInt = a0.trim().parse().map_err(|_| Error::Parse(format!("bad a0 {a0:?}")))?;
            let quotients = rest
                .split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| x.trim().parse::<BigUint>().map_err(|_| Error::Parse(format!("bad quotient {x:?}"))))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Self::Quotients { integer_part, quotients });
        }
        Ok(Self::Input(AlphaInput::parse(t)?))
    }

    pub fn expand(&self, depth: usize) -> Result<ContinuedFraction> {
        match self {
            Self::Preset(p) => preset(*p, depth),
            Self::Input(a) => expand(a, depth),
            Self::Quotients { integer_part, quotients } => {
                ContinuedFraction::from_quotients(integer_part.clone(), &quotients[..quotients.len().min(depth)])
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> AlphaInput {
        AlphaInput::Rational(BigRational::new(p.into(), q.into()))
    }

    fn quotients(cf: &ContinuedFraction) -> Vec<u64> {
        cf.partial_quotients().iter().map(|a| a.to_u64().unwrap()).collect()
    }

    fn denominators(cf: &ContinuedFraction) -> Vec<u64> {
        cf.convergents().iter().map(|(_, q)| q.to_u64().unwrap()).collect()
    }

    #[test]
    fn fibonacci_ratio_terminates() {
        let cf = expand(&rat(13, 8), 10).unwrap();
        assert!(cf.terminated());
        assert_eq!(cf.integer_part(), &BigInt::from(1));
        // canonical Euclidean form; [1; 1, 1, 1, 1, 1] is the same number
        assert_eq!(quotients(&cf), vec![1, 1, 1, 2]);
        assert_eq!(cf.value(), BigRational::new(13.into(), 8.into()));
    }

    #[test]
    fn one_third() {
        let cf = expand(&rat(1, 3), 5).unwrap();
        assert!(cf.terminated());
        assert_eq!(quotients(&cf), vec![3]);
        let r = brjuno_partial_sums(&cf, 5, &BrjunoConfig::default()).unwrap();
        assert_eq!(r.verdict, BrjunoVerdict::Rational);
        assert!(r.partial_sums.is_empty());
    }

    #[test]
    fn silver_from_decimal() {
        let a = AlphaInput::parse("0.4142135623730950488").unwrap();
        let cf = expand(&a, 8).unwrap();
        assert_eq!(quotients(&cf), vec![2; 8]);
        assert!(!cf.truncated_by_precision());
        assert_eq!(cf.source(), CfSource::DecimalApprox);
    }

    #[test]
    fn decimal_stops_at_precision_floor() {
        let a = AlphaInput::parse("0.4142135623730950488").unwrap();
        let cf = expand(&a, 200).unwrap();
        assert!(cf.truncated_by_precision());
        assert!(cf.len() > 8 && cf.len() < 40, "len {}", cf.len());
        assert!(quotients(&cf).iter().all(|&a| a == 2));
    }

    #[test]
    fn presets() {
        let g = preset(Preset::Golden, 5).unwrap();
        assert_eq!(quotients(&g), vec![1; 5]);
        assert_eq!(&denominators(&g)[1..], &[1, 2, 3, 5, 8]);
        let s = preset(Preset::Silver, 3).unwrap();
        assert_eq!(&denominators(&s)[1..], &[2, 5, 12]);
        let l = preset(Preset::LiouvilleDemo { growth: 2 }, 3).unwrap();
        assert_eq!(denominators(&l)[1], 1);
        assert_eq!(quotients(&l)[1], 2);
        assert_eq!(quotients(&l), vec![1, 2, 8]);
    }

    #[test]
    fn liouville_caps_and_diverges() {
        let l = preset(Preset::LiouvilleDemo { growth: 2 }, 12).unwrap();
        assert_eq!(l.len(), 4);
        assert_eq!(l.bound_tail().unwrap().missing, 8);
        let r = brjuno_partial_sums(&l, 12, &BrjunoConfig::default()).unwrap();
        assert_eq!(r.verdict, BrjunoVerdict::DivergentLikely);
        assert_eq!(r.partial_sums.len(), 12);
        assert_eq!(r.bound_terms_from, Some(4));
        assert!(r.terms[4..].iter().all(|&t| t >= 2f64.ln() - 1e-15));
    }

    #[test]
    fn golden_terms_decay_geometrically() {
        let cf = preset(Preset::Golden, 60).unwrap();
        let r = brjuno_partial_sums(&cf, 60, &BrjunoConfig::default()).unwrap();
        assert_eq!(r.verdict, BrjunoVerdict::ConvergentLikely);
        let gap = r.partial_sums[59] - r.partial_sums[58];
        assert!(gap < 1e-9 && gap > 0.0);
        // at depth 40 the last increment is log(q_40)/q_39 ~ 1.85e-7
        let r40 = brjuno_partial_sums(&cf, 40, &BrjunoConfig::default()).unwrap();
        let gap40 = r40.partial_sums[39] - r40.partial_sums[38];
        assert!((gap40 - 1.849330350284975e-7).abs() < 1e-15);
        assert_eq!(r40.verdict, BrjunoVerdict::Inconclusive);
    }

    #[test]
    fn lambda_at_simple_rotations() {
        let half = expand(&rat(1, 2), 4).unwrap();
        let l: Complex<f64> = rotation_to_lambda(&half, 16).unwrap();
        assert_eq!(l, Complex::new(-1.0, 0.0));
        let quarter = expand(&rat(1, 4), 4).unwrap();
        let l: Complex<f64> = rotation_to_lambda(&quarter, 16).unwrap();
        assert_eq!(l, Complex::new(0.0, 1.0));
        assert!(rotation_to_lambda::<f64>(&quarter, 10).is_err());
    }

    #[test]
    fn golden_lambda() {
        let cf = preset(Preset::Golden, 30).unwrap();
        let l: Complex<f64> = rotation_to_lambda(&cf, 16).unwrap();
        assert!((l.norm() - 1.0).abs() < 1e-15);
        let turns = l.arg().rem_euclid(std::f64::consts::TAU) / std::f64::consts::TAU;
        assert!((turns - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn nearby_rational_detects_small_denominators() {
        assert_eq!(nearby_rational(0.25, 64, 1e-12), Some((1, 4)));
        assert_eq!(nearby_rational(1.0 / 3.0 + 1e-14, 64, 1e-12), Some((1, 3)));
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        assert_eq!(nearby_rational(golden, 64, 1e-9), None);
        assert_eq!(nearby_rational(0.0, 64, 1e-12), Some((0, 1)));
    }

    #[test]
    fn alpha_spec_parsing() {
        assert_eq!(AlphaSpec::parse("golden").unwrap(), AlphaSpec::Preset(Preset::Golden));
        assert_eq!(
            AlphaSpec::parse("liouville_demo(3)").unwrap(),
            AlphaSpec::Preset(Preset::LiouvilleDemo { growth: 3 })
        );
        assert!(matches!(AlphaSpec::parse("2/7").unwrap(), AlphaSpec::Input(AlphaInput::Rational(_))));
        assert!(matches!(AlphaSpec::parse("0.25").unwrap(), AlphaSpec::Input(AlphaInput::Decimal { digits: 2, .. })));
        let cf = AlphaSpec::parse("cf:0;1,1,1,1000000,1").unwrap().expand(10).unwrap();
        assert_eq!(quotients(&cf), vec![1, 1, 1, 1_000_000, 1]);
        assert!(AlphaSpec::parse("1/0").is_err());
        assert!(AlphaSpec::parse("abc").is_err());
    }
}
