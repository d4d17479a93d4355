//! Harmonic analysis on bounded Vilenkin groups.
//!
//! * [`group`]: mixed-radix arithmetic, points, cylinders, characters.
//! * [`spectral`]: fast transform, Dirichlet/Fejér kernels, partial sums and
//!   Fejér means on sparse spectra with big-integer indices.
//! * [`construction`]: builds, for a finite set of points, an explicit
//!   function whose Fejér means fail to converge there, and certifies the
//!   oscillation numerically.
//!
//! Numeric code is generic over [`Scalar`] (`f32`/`f64`); the `*F64`
//! aliases below fix the usual double-precision choice.

pub mod construction;
pub mod error;
pub mod group;
pub mod io;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use group::{GroupPoint, RadixSequence, ScaleSequence, SpectralIndex, VilenkinInterval};
pub use scalar::Scalar;

pub type Complex64 = num_complex::Complex<f64>;

pub type SampledFunctionF64 = spectral::SampledFunction<f64>;
pub type SampledFunctionF32 = spectral::SampledFunction<f32>;
pub type SparseSpectrumF64 = spectral::SparseSpectrum<f64>;
pub type SparseSpectrumF32 = spectral::SparseSpectrum<f32>;
pub type FlatPolynomialF64 = construction::FlatPolynomial<f64>;
pub type ConstructionF64 = construction::Construction<f64>;
pub type DivergenceReportF64 = construction::DivergenceReport<f64>;
