#![allow(dead_code)]

use num_complex::Complex;
use rand::Rng;
use vilenkin::group::character_u64;
use vilenkin::{GroupPoint, RadixSequence, SparseSpectrumF64, SpectralIndex};

pub type C64 = Complex<f64>;

pub fn walsh() -> RadixSequence {
    RadixSequence::walsh()
}

/// m = (2, 3, 2, 3, …)
pub fn m23() -> RadixSequence {
    RadixSequence::periodic(vec![2, 3]).unwrap()
}

/// Quadratic-cost DFT straight from the definition of the coefficients.
pub fn naive_forward(radix: &RadixSequence, level: usize, values: &[C64]) -> Vec<C64> {
    let n = values.len();
    let points: Vec<GroupPoint> = (0..n as u64).map(|t| GroupPoint::from_cell(radix, level, t)).collect();
    (0..n as u64)
        .map(|k| {
            let s: C64 = points.iter().zip(values).map(|(x, v)| v * character_u64::<f64>(radix, k, x).conj()).sum();
            s / n as f64
        })
        .collect()
}

pub fn random_values<R: Rng>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

pub fn random_spectrum<R: Rng>(
    rng: &mut R,
    radix: &RadixSequence,
    max_support: usize,
    key_bound: u64,
) -> SparseSpectrumF64 {
    let mut s = SparseSpectrumF64::new();
    let size = rng.gen_range(1..=max_support);
    for _ in 0..size {
        let k = rng.gen_range(0..key_bound);
        s.accumulate(
            SpectralIndex::from_u64(radix, k),
            Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        );
    }
    s
}

pub fn random_point<R: Rng>(rng: &mut R, radix: &RadixSequence, level: usize) -> GroupPoint {
    GroupPoint::new(radix, (0..level).map(|k| rng.gen_range(0..radix.radix(k))).collect()).unwrap()
}

pub fn max_err(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
