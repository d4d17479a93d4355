use num_complex::Complex;

use crate::error::{Error, Result};
use crate::group::{character_u64, GroupPoint, RadixSequence, SpectralIndex};
use crate::scalar::{biguint_to_scalar, Scalar};

/// Largest `n` accepted by the literal kernel sums.
pub const KERNEL_SUM_LIMIT: u64 = 1_000_000;

fn guarded(n: &SpectralIndex, what: &'static str) -> Result<u64> {
    match n.to_u64() {
        Some(0) => Err(Error::InvalidArgument(format!("{what} is defined for n >= 1"))),
        Some(v) if v <= KERNEL_SUM_LIMIT => Ok(v),
        _ => Err(Error::SummationGuard { what, value: n.to_string(), limit: KERNEL_SUM_LIMIT }),
    }
}

/// `D_n(x) = Σ_{k<n} ψ_k(x)`, summed literally.
pub fn dirichlet<T: Scalar>(radix: &RadixSequence, n: &SpectralIndex, x: &GroupPoint) -> Result<Complex<T>> {
    let n = guarded(n, "dirichlet n")?;
    Ok((0..n).map(|k| character_u64::<T>(radix, k, x)).sum())
}

/// `D_{M_n}(x)` in closed form: `M_n` on `I_n`, zero elsewhere.
pub fn paley_dirichlet<T: Scalar>(radix: &RadixSequence, n: usize, x: &GroupPoint) -> Complex<T> {
    if (0..n).all(|k| x.digit(k) == 0) {
        Complex::new(biguint_to_scalar(&radix.scale(n)), T::zero())
    } else {
        Complex::new(T::zero(), T::zero())
    }
}

/// `K_n(x) = Σ_{k<n} (1 - k/n) ψ_k(x)`, summed literally.
pub fn fejer_kernel<T: Scalar>(radix: &RadixSequence, n: &SpectralIndex, x: &GroupPoint) -> Result<Complex<T>> {
    let n = guarded(n, "fejer n")?;
    let nf = n as f64;
    Ok((0..n).map(|k| character_u64::<T>(radix, k, x) * T::from_f64_lossy((n - k) as f64 / nf)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(r: &RadixSequence, v: u64) -> SpectralIndex {
        SpectralIndex::from_u64(r, v)
    }

    #[test]
    fn dirichlet_examples() {
        let w = RadixSequence::walsh();
        let x = GroupPoint::new(&w, vec![1, 0]).unwrap();
        assert_eq!(dirichlet::<f64>(&w, &idx(&w, 1), &x).unwrap(), Complex::new(1.0, 0.0));
        assert_eq!(dirichlet::<f64>(&w, &idx(&w, 3), &x).unwrap(), Complex::new(1.0, 0.0));
        assert_eq!(dirichlet::<f64>(&w, &idx(&w, 8), &GroupPoint::zero()).unwrap(), Complex::new(8.0, 0.0));
        assert_eq!(dirichlet::<f64>(&w, &idx(&w, 8), &x).unwrap(), Complex::new(0.0, 0.0));
    }

    #[test]
    fn guards() {
        let w = RadixSequence::walsh();
        let x = GroupPoint::zero();
        assert!(matches!(dirichlet::<f64>(&w, &idx(&w, 0), &x), Err(Error::InvalidArgument(_))));
        assert!(matches!(dirichlet::<f64>(&w, &idx(&w, KERNEL_SUM_LIMIT + 1), &x), Err(Error::SummationGuard { .. })));
        assert!(fejer_kernel::<f64>(&w, &idx(&w, 1 << 40), &x).is_err());
    }

    #[test]
    fn paley_examples() {
        let r = RadixSequence::periodic(vec![2, 3]).unwrap();
        let zero = GroupPoint::zero();
        assert_eq!(paley_dirichlet::<f64>(&r, 3, &zero), Complex::new(12.0, 0.0));
        let x = GroupPoint::new(&r, vec![1]).unwrap();
        assert_eq!(paley_dirichlet::<f64>(&r, 2, &x), Complex::new(0.0, 0.0));
        assert_eq!(paley_dirichlet::<f64>(&r, 0, &x), Complex::new(1.0, 0.0));
    }

    #[test]
    fn fejer_examples() {
        let r = RadixSequence::periodic(vec![2, 3]).unwrap();
        let x = GroupPoint::new(&r, vec![1, 2, 1]).unwrap();
        assert_eq!(fejer_kernel::<f64>(&r, &idx(&r, 1), &x).unwrap(), Complex::new(1.0, 0.0));
        for n in 1..40u64 {
            let k0 = fejer_kernel::<f64>(&r, &idx(&r, n), &GroupPoint::zero()).unwrap();
            assert!((k0.re - (n as f64 + 1.0) / 2.0).abs() < 1e-12);
        }
        let k2 = fejer_kernel::<f64>(&r, &idx(&r, 2), &x).unwrap();
        let psi1: Complex<f64> = character_u64(&r, 1, &x);
        assert!((k2 - (Complex::new(1.0, 0.0) + psi1 * 0.5)).norm() < 1e-15);
    }
}
