use num_bigint::BigUint;
use num_complex::Complex;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::group::{
    character_u64, merge_intervals, oplus, union_measure, GroupPoint, RadixSequence, SpectralIndex, VilenkinInterval,
};
use crate::scalar::{ratio_to_scalar, Scalar};
use crate::spectral::{inverse, SampledFunction, SparseSpectrum, PRUNE_THRESHOLD};

/// Largest cylinder scale `M_n` whose indicator spectrum is expanded.
pub const INDICATOR_EXPANSION_LIMIT: u64 = 1 << 22;

/// `P = χ_A ψ_s`: unit modulus on `A`, zero off `A`, spectrum inside
/// `[M_lower, M_upper)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatPolynomial<T> {
    stage: usize,
    support: Vec<VilenkinInterval>,
    lower: usize,
    upper: usize,
    shift: SpectralIndex,
    spectrum: SparseSpectrum<T>,
}

impl<T: Scalar> FlatPolynomial<T> {
    pub fn stage(&self) -> usize {
        self.stage
    }

    /// Disjoint cylinders whose union is `A`.
    pub fn support(&self) -> &[VilenkinInterval] {
        &self.support
    }

    /// Exponent `N` of the lower window end `M_N`.
    pub fn lower(&self) -> usize {
        self.lower
    }

    /// Exponent `i` of the upper window end `M_i`.
    pub fn upper(&self) -> usize {
        self.upper
    }

    /// Modulating index `s`.
    pub fn shift(&self) -> &SpectralIndex {
        &self.shift
    }

    pub fn spectrum(&self) -> &SparseSpectrum<T> {
        &self.spectrum
    }

    pub fn window(&self, radix: &RadixSequence) -> (BigUint, BigUint) {
        (radix.scale(self.lower), radix.scale(self.upper))
    }

    /// `μ(A)`, exactly.
    pub fn support_measure(&self, radix: &RadixSequence) -> BigRational {
        union_measure(radix, &self.support)
    }

    pub fn in_support(&self, x: &GroupPoint) -> bool {
        self.support.iter().any(|iv| iv.contains(x))
    }

    pub fn evaluate(&self, radix: &RadixSequence, x: &GroupPoint) -> Complex<T> {
        self.spectrum.evaluate(radix, x)
    }

    /// Dense samples at `level ≥ upper`, through the inverse transform.
    pub fn sample(&self, radix: &RadixSequence, level: usize) -> Result<SampledFunction<T>> {
        let coeffs = self.spectrum.to_dense(radix, level)?;
        inverse(radix, level, &coeffs)
    }
}

/// Builds the flat polynomial of a finite union of cylinders `A` with
/// spectrum starting at `M_N`.
///
/// The indicator of `I_n(y)` has coefficients `conj(ψ_k(y))/M_n` for
/// `k < M_n`; the union's spectrum is then shifted by `s = M_D`,
/// `D = max(N, deepest cylinder)`, where `⊕` coincides with `+`.
pub fn flat_polynomial<T: Scalar>(
    radix: &RadixSequence,
    stage: usize,
    support: &[VilenkinInterval],
    lower: usize,
) -> Result<FlatPolynomial<T>> {
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let support = merge_intervals(support);
    let deepest = support.iter().map(|iv| iv.depth()).max().expect("non-empty support");
    let top = lower.max(deepest);

    let mut indicator = SparseSpectrum::<T>::new();
    for iv in &support {
        let cells = radix
            .scale_u64(iv.depth())
            .filter(|&m| m <= INDICATOR_EXPANSION_LIMIT)
            .ok_or_else(|| Error::Infeasible(format!("cylinder depth {} too deep to expand", iv.depth())))?;
        let weight: T = ratio_to_scalar(&BigUint::from(1u32), &BigUint::from(cells));
        for k in 0..cells {
            let c = character_u64::<T>(radix, k, iv.anchor()).conj() * weight;
            indicator.accumulate(SpectralIndex::from_u64(radix, k), c);
        }
    }
    let indicator = indicator.pruned(T::from_f64_lossy(PRUNE_THRESHOLD));

    let shift = SpectralIndex::from_value(radix, radix.scale(top));
    let mut entries = Vec::with_capacity(indicator.len());
    for (k, c) in indicator.iter() {
        let key = oplus(radix, k, &shift);
        if key.value() != &(k.value() + shift.value()) {
            return Err(Error::WindowCollision(format!("{k} ⊕ {shift} carries")));
        }
        entries.push((key, *c));
    }
    let spectrum = SparseSpectrum::from_entries(entries)?;

    let poly = FlatPolynomial { stage, support, lower, upper: top + 1, shift, spectrum };
    let (lo, hi) = poly.window(radix);
    let inside = poly.spectrum.support().all(|k| k.value() >= &lo && k.value() < &hi);
    if !inside {
        return Err(Error::WindowCollision(format!("stage {stage} spectrum leaves [M_{lower}, M_{})", top + 1)));
    }
    Ok(poly)
}
