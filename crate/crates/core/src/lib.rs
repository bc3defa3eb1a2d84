//! Numerical toolkit for structurally finite entire functions
//! `f(z) = lambda int_0^z P(t) e^{Q(t)} dt + b`: continued fractions and the
//! Brjuno sum, evaluation and singular values, orbits and cycles,
//! Schröder linearization and perturbation families.
//!
//! Numerical code is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`.

pub mod brjuno;
pub mod dynamics;
pub mod error;
pub mod linearize;
pub mod perturb;
pub mod poly;
pub mod quadrature;
pub mod scalar;
pub mod series;
pub mod sf;
pub mod singular;

pub use error::{Error, Result};
pub use scalar::{Real, ScaledComplex};

pub type Complex64 = num_complex::Complex<f64>;
pub type Polynomial64 = poly::Polynomial<f64>;
pub type SfFunction64 = sf::SfFunction<f64>;
pub type TaylorSeries64 = series::TaylorSeries<f64>;
pub type SingularData64 = singular::SingularData<f64>;
pub type OrbitRecord64 = dynamics::OrbitRecord<f64>;
pub type CycleRecord64 = dynamics::CycleRecord<f64>;
pub type CorrespondenceReport64 = dynamics::CorrespondenceReport<f64>;
pub type LinearizationSeries64 = linearize::LinearizationSeries<f64>;
pub type PerturbationFamily64 = perturb::PerturbationFamily<f64>;
pub type RescaledMember64 = perturb::RescaledMember<f64>;
pub type Rect64 = dynamics::Rect<f64>;
