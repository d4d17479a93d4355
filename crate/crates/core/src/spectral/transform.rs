//! Fast Vilenkin–Chrestenson transform.
//!
//! On level-`N` samples the characters factor over the digit axes, so the
//! transform is one length-`m_k` DFT along each axis `k < N` (stride `M_k`).
//! Total cost is `O(M_N · Σ_{k<N} m_k)`.

use num_complex::Complex;

use super::SampledFunction;
use crate::error::{Error, Result};
use crate::group::RadixSequence;
use crate::scalar::{unit_root, Scalar};

/// Coefficients `f̂(k) = (1/M_N) Σ_x f(x) conj(ψ_k(x))` for all `k < M_N`.
pub fn forward<T: Scalar>(f: &SampledFunction<T>) -> Vec<Complex<T>> {
    let mut data = f.values().to_vec();
    run_stages(f.radix(), f.level(), &mut data, true);
    let scale = T::one() / T::from_usize_lossy(data.len());
    data.iter_mut().for_each(|v| *v = *v * scale);
    data
}

/// Synthesis `f(x) = Σ_{k<M_N} c_k ψ_k(x)`; adjoint of [`forward`] up to `M_N`.
pub fn inverse<T: Scalar>(radix: &RadixSequence, level: usize, coeffs: &[Complex<T>]) -> Result<SampledFunction<T>> {
    let expected = radix.cell_count(level)?;
    if coeffs.len() != expected {
        return Err(Error::LengthMismatch { expected, actual: coeffs.len() });
    }
    let mut data = coeffs.to_vec();
    run_stages(radix, level, &mut data, false);
    SampledFunction::new(radix, level, data)
}

fn run_stages<T: Scalar>(radix: &RadixSequence, level: usize, data: &mut [Complex<T>], conjugate: bool) {
    let mut stride = 1usize;
    let mut scratch: Vec<Complex<T>> = Vec::new();
    let mut twiddles: Vec<Complex<T>> = Vec::new();
    for k in 0..level {
        let m = radix.radix(k) as usize;
        twiddles.clear();
        twiddles.extend((0..m as u64).map(|r| {
            let w = unit_root::<T>(r, m as u64);
            if conjugate {
                w.conj()
            } else {
                w
            }
        }));
        scratch.resize(m, Complex::default());
        let block = stride * m;
        for base in (0..data.len()).step_by(block) {
            for offset in base..base + stride {
                if m == 2 {
                    let (a, b) = (data[offset], data[offset + stride]);
                    data[offset] = a + b;
                    data[offset + stride] = a - b;
                    continue;
                }
                for (t, s) in scratch.iter_mut().enumerate() {
                    *s = data[offset + t * stride];
                }
                for out in 0..m {
                    let mut acc = Complex::default();
                    for (t, &s) in scratch.iter().enumerate() {
                        acc = acc + s * twiddles[(out * t) % m];
                    }
                    data[offset + out * stride] = acc;
                }
            }
        }
        stride = block;
    }
}
