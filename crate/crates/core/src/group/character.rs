use num_complex::Complex;

use super::{GroupPoint, RadixSequence, SpectralIndex};
use crate::scalar::{unit_root, Scalar};

/// Generalized Rademacher function `r_k(x) = exp(2πi x_k / m_k)`.
pub fn rademacher<T: Scalar>(radix: &RadixSequence, k: usize, x: &GroupPoint) -> Complex<T> {
    unit_root(u64::from(x.digit(k)), u64::from(radix.radix(k)))
}

/// Vilenkin character `ψ_n(x) = Π r_k(x)^{n_k}`.
///
/// Cost is linear in the number of nonzero digits of `n`.
pub fn character<T: Scalar>(radix: &RadixSequence, n: &SpectralIndex, x: &GroupPoint) -> Complex<T> {
    character_from_digits(radix, n.digits().iter().copied(), x)
}

/// Character for an index given as a machine integer.
pub fn character_u64<T: Scalar>(radix: &RadixSequence, mut n: u64, x: &GroupPoint) -> Complex<T> {
    let mut k = 0;
    let digits = std::iter::from_fn(move || {
        while n != 0 {
            let m = u64::from(radix.radix(k));
            let d = (n % m) as u32;
            n /= m;
            k += 1;
            if d != 0 {
                return Some((k - 1, d));
            }
        }
        None
    });
    character_from_digits(radix, digits, x)
}

fn character_from_digits<T, I>(radix: &RadixSequence, digits: I, x: &GroupPoint) -> Complex<T>
where
    T: Scalar,
    I: Iterator<Item = (usize, u32)>,
{
    match radix.phase_modulus() {
        // accumulate the total phase exactly over the common denominator
        Some(modulus) => {
            let l = u128::from(modulus);
            let mut phase = 0u128;
            for (p, d) in digits {
                let xp = x.digit(p);
                if xp == 0 {
                    continue;
                }
                let m = u128::from(radix.radix(p));
                let r = (u128::from(d) * u128::from(xp)) % m;
                phase = (phase + r * (l / m)) % l;
            }
            unit_root(phase as u64, modulus)
        }
        None => {
            let mut acc = Complex::new(T::one(), T::zero());
            for (p, d) in digits {
                let m = u64::from(radix.radix(p));
                acc = acc * unit_root::<T>(u64::from(d) * u64::from(x.digit(p)) % m, m);
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rademacher_examples() {
        let w = RadixSequence::walsh();
        assert_eq!(rademacher::<f64>(&w, 0, &GroupPoint::zero()), Complex::new(1.0, 0.0));
        let x = GroupPoint::new(&w, vec![1]).unwrap();
        assert_eq!(rademacher::<f64>(&w, 0, &x), Complex::new(-1.0, 0.0));
        let r3 = RadixSequence::constant(3).unwrap();
        let y = GroupPoint::new(&r3, vec![0, 1]).unwrap();
        let expect = Complex::from_polar(1.0, std::f64::consts::TAU / 3.0);
        assert!((rademacher::<f64>(&r3, 1, &y) - expect).norm() < 1e-15);
        // beyond the stored level the digit is 0
        assert_eq!(rademacher::<f64>(&r3, 7, &y), Complex::new(1.0, 0.0));
    }

    #[test]
    fn character_examples() {
        let w = RadixSequence::walsh();
        let x = GroupPoint::new(&w, vec![1, 0]).unwrap();
        assert_eq!(character::<f64>(&w, &SpectralIndex::zero(), &x), Complex::new(1.0, 0.0));
        let one = SpectralIndex::from_u64(&w, 1);
        assert_eq!(character::<f64>(&w, &one, &x), Complex::new(-1.0, 0.0));
    }

    #[test]
    fn fallback_product_matches_phase_path() {
        // radices whose lcm overflows the phase modulus
        let primes = vec![1_000_003, 1_000_033, 1_000_037, 1_000_039, 1_000_081, 2, 3];
        let big = RadixSequence::periodic(primes.clone()).unwrap();
        assert!(big.phase_modulus().is_none());
        let x = GroupPoint::new(&big, vec![5, 7, 0, 11, 2, 1, 2]).unwrap();
        let n = SpectralIndex::from_dense_digits(&big, &[3, 1, 9, 4, 8, 1, 1]).unwrap();
        let got: Complex<f64> = character(&big, &n, &x);
        let mut expect = Complex::new(1.0, 0.0);
        for k in 0..7 {
            let r: Complex<f64> = rademacher(&big, k, &x);
            expect *= r.powu(n.digit(k));
        }
        assert!((got - expect).norm() < 1e-9);
        let u: Complex<f64> =
            character_u64(&RadixSequence::walsh(), 3, &GroupPoint::new(&RadixSequence::walsh(), vec![1, 1]).unwrap());
        assert_eq!(u, Complex::new(1.0, 0.0));
    }
}
