//! Fourier analysis on the truncated group: the fast transform, kernels,
//! partial sums and Fejér means over sparse spectra, norms.

mod kernels;
mod sampled;
mod sparse;
mod transform;

pub use kernels::{dirichlet, fejer_kernel, paley_dirichlet, KERNEL_SUM_LIMIT};
pub use sampled::{lp_norm, SampledFunction};
pub(crate) use sampled::{read_complex_csv, write_complex_csv};
pub use sparse::{
    fejer_mean, fejer_mean_oracle, maximal_truncated, partial_sum, MeanKind, SparseSpectrum, SpectrumEntry,
    ORACLE_LIMIT, PRUNE_THRESHOLD,
};
pub use transform::{forward, inverse};

use std::io::{Read, Write};

use num_complex::Complex;

use crate::error::Result;
use crate::scalar::Scalar;

/// Writes a coefficient vector as `index,re,im` rows.
pub fn write_coefficients_csv<W: Write, T: Scalar>(out: W, coeffs: &[Complex<T>]) -> Result<()> {
    write_complex_csv(out, "index", coeffs)
}

/// Reads `index,re,im` rows.
pub fn read_coefficients_csv<R: Read, T: Scalar>(input: R) -> Result<Vec<Complex<T>>> {
    read_complex_csv(input, "index")
}
