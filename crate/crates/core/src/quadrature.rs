//! Globally adaptive Gauss–Kronrod quadrature for complex-valued integrands
//! on a real interval.
//!
//! Each panel uses the 15-point Kronrod rule with the embedded 7-point Gauss
//! rule as error estimate. The panel with the largest estimate is bisected
//! until the total estimate meets the tolerance or the panel budget runs out.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Real;

// abscissae of the 15-point Kronrod rule; odd indices are the 7-point Gauss nodes
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Clone, Copy, Debug)]
pub struct QuadratureConfig {
    /// Stop when the error estimate is below `rel_tol * (abs_floor + |value|)`.
    pub rel_tol: f64,
    pub abs_floor: f64,
    pub max_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-12, abs_floor: 1.0, max_panels: 1 << 14 }
    }
}

/// Integral estimate with its error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate<T> {
    pub value: Complex<T>,
    pub error: T,
    pub panels: usize,
}

#[derive(Clone, Copy, Debug)]
struct Panel<T> {
    a: T,
    b: T,
    value: Complex<T>,
    error: T,
}

impl<T: Real> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl<T: Real> Eq for Panel<T> {}

impl<T: Real> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        // NaN errors sort first so they get split (and eventually reported)
        match (self.error.is_nan(), other.error.is_nan()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            _ => self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal),
        }
    }
}

fn kronrod_panel<T: Real, F: Fn(T) -> Complex<T>>(f: &F, a: T, b: T) -> Panel<T> {
    let half = (b - a) * T::lit(0.5);
    let center = (a + b) * T::lit(0.5);
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for k in 0..7 {
        let dx = half * T::lit(XGK[k]);
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * T::lit(WGK[k]);
        if k % 2 == 1 {
            gauss += pair * T::lit(WG[k / 2]);
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    Panel { a, b, value, error }
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<T: Real, F: Fn(T) -> Complex<T>>(f: F, a: T, b: T, config: &QuadratureConfig) -> Result<Estimate<T>> {
    let rel_tol = T::lit(config.rel_tol);
    let floor = T::lit(config.abs_floor);
    let first = kronrod_panel(&f, a, b);
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut panels = 1;
    loop {
        if error.is_finite() && error <= rel_tol * (floor + value.norm()) {
            // re-sum to shed accumulated rounding from the running updates
            let value = heap.iter().fold(Complex::zero(), |acc, p| acc + p.value);
            let error = heap.iter().fold(T::zero(), |acc, p| acc + p.error);
            return Ok(Estimate { value, error, panels });
        }
        if panels >= config.max_panels {
            return Err(Error::Quadrature {
                panels,
                estimate_re: value.re.as_f64(),
                estimate_im: value.im.as_f64(),
                error: error.as_f64(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = (worst.a + worst.b) * T::lit(0.5);
        let left = kronrod_panel(&f, worst.a, mid);
        let right = kronrod_panel(&f, mid, worst.b);
        value = value - worst.value + left.value + right.value;
        if worst.error.is_finite() && left.error.is_finite() && right.error.is_finite() {
            error = error - worst.error + left.error + right.error;
        } else {
            error = heap.iter().fold(left.error + right.error, |acc, p| acc + p.error);
        }
        heap.push(left);
        heap.push(right);
        panels += 1;
    }
}
