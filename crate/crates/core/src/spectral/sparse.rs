use std::collections::btree_map::{self, BTreeMap};
use std::ops::Bound;

use num_bigint::BigUint;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{character, GroupPoint, RadixSequence, SpectralIndex};
use crate::scalar::{ratio_to_scalar, Scalar};

/// Amplitudes below this modulus are dropped when a dense coefficient vector
/// is converted to a sparse spectrum.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Finite Vilenkin polynomial `Σ c_k ψ_k` keyed by index; every stored
/// amplitude is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSpectrum<T> {
    entries: BTreeMap<SpectralIndex, Complex<T>>,
}

impl<T: Scalar> Default for SparseSpectrum<T> {
    fn default() -> Self {
        SparseSpectrum { entries: BTreeMap::new() }
    }
}

/// JSON row of a serialized spectrum.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumEntry {
    pub index: String,
    pub re: f64,
    pub im: f64,
}

impl<T: Scalar> SparseSpectrum<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rejects repeated keys; zero amplitudes are skipped.
    pub fn from_entries<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (SpectralIndex, Complex<T>)>,
    {
        let mut s = Self::new();
        for (k, c) in entries {
            if s.entries.contains_key(&k) {
                return Err(Error::InvalidArgument(format!("repeated spectral index {k}")));
            }
            if !c.is_zero_amplitude() {
                s.entries.insert(k, c);
            }
        }
        Ok(s)
    }

    /// Adds `c` to the amplitude at `k`, removing the entry if it cancels.
    pub fn accumulate(&mut self, k: SpectralIndex, c: Complex<T>) {
        match self.entries.entry(k) {
            btree_map::Entry::Vacant(v) => {
                if !c.is_zero_amplitude() {
                    v.insert(c);
                }
            }
            btree_map::Entry::Occupied(mut o) => {
                let sum = *o.get() + c;
                if sum.is_zero_amplitude() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Drops amplitudes with modulus below `threshold`.
    pub fn pruned(mut self, threshold: T) -> Self {
        self.entries.retain(|_, c| c.norm() >= threshold);
        self
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, k: &BigUint) -> Option<Complex<T>> {
        self.entries.get(k).copied()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&SpectralIndex, &Complex<T>)> + '_ {
        self.entries.iter()
    }

    /// `sp(P)`: the key set.
    pub fn support(&self) -> impl DoubleEndedIterator<Item = &SpectralIndex> + '_ {
        self.entries.keys()
    }

    /// Entries with key `< n`.
    pub fn below<'a>(&'a self, n: &'a BigUint) -> impl Iterator<Item = (&'a SpectralIndex, &'a Complex<T>)> + 'a {
        self.entries.range::<BigUint, _>((Bound::Unbounded, Bound::Excluded(n)))
    }

    pub fn min_key(&self) -> Option<&SpectralIndex> {
        self.entries.keys().next()
    }

    pub fn max_key(&self) -> Option<&SpectralIndex> {
        self.entries.keys().next_back()
    }

    /// `Σ |c_k|`.
    pub fn l1_norm(&self) -> T {
        self.entries.values().map(|c| c.norm()).sum()
    }

    /// `P(x)`.
    pub fn evaluate(&self, radix: &RadixSequence, x: &GroupPoint) -> Complex<T> {
        self.entries.iter().map(|(k, c)| *c * character::<T>(radix, k, x)).sum()
    }

    /// Dense coefficient vector of length `M_N`; every key must be below `M_N`.
    pub fn to_dense(&self, radix: &RadixSequence, level: usize) -> Result<Vec<Complex<T>>> {
        let len = radix.cell_count(level)?;
        let mut out = vec![Complex::default(); len];
        for (k, c) in &self.entries {
            match k.to_u64().filter(|&v| (v as usize) < len) {
                Some(v) => out[v as usize] = *c,
                None => return Err(Error::InvalidArgument(format!("key {k} exceeds M_{level}"))),
            }
        }
        Ok(out)
    }

    /// Sparse view of dense coefficients, pruning below [`PRUNE_THRESHOLD`].
    pub fn from_dense(radix: &RadixSequence, coeffs: &[Complex<T>]) -> Self {
        let threshold = T::from_f64_lossy(PRUNE_THRESHOLD);
        let entries = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() >= threshold)
            .map(|(k, c)| (SpectralIndex::from_u64(radix, k as u64), *c))
            .collect();
        SparseSpectrum { entries }
    }

    pub fn to_json_entries(&self) -> Vec<SpectrumEntry> {
        self.entries
            .iter()
            .map(|(k, c)| SpectrumEntry {
                index: k.to_string(),
                re: c.re.to_f64().unwrap_or(f64::NAN),
                im: c.im.to_f64().unwrap_or(f64::NAN),
            })
            .collect()
    }

    pub fn from_json_entries(radix: &RadixSequence, entries: &[SpectrumEntry]) -> Result<Self> {
        let parsed = entries
            .iter()
            .map(|e| {
                let k = SpectralIndex::parse(radix, &e.index)?;
                Ok((k, Complex::new(T::from_f64_lossy(e.re), T::from_f64_lossy(e.im))))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(parsed)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_json_entries())?)
    }

    pub fn from_json(radix: &RadixSequence, text: &str) -> Result<Self> {
        let entries: Vec<SpectrumEntry> = serde_json::from_str(text)?;
        Self::from_json_entries(radix, &entries)
    }
}

trait ZeroAmplitude {
    fn is_zero_amplitude(&self) -> bool;
}

impl<T: Scalar> ZeroAmplitude for Complex<T> {
    fn is_zero_amplitude(&self) -> bool {
        self.re == T::zero() && self.im == T::zero()
    }
}

/// Which summation a maximal diagnostic takes the supremum of.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeanKind {
    PartialSum,
    Fejer,
}

/// `S_n f(x) = Σ_{k<n} f̂(k) ψ_k(x)`; cost is the number of keys below `n`.
pub fn partial_sum<T: Scalar>(
    radix: &RadixSequence,
    f: &SparseSpectrum<T>,
    n: &SpectralIndex,
    x: &GroupPoint,
) -> Complex<T> {
    f.below(n.value()).map(|(k, c)| *c * character::<T>(radix, k, x)).sum()
}

/// `σ_n f(x) = Σ_{k<n} (1 - k/n) f̂(k) ψ_k(x)`.
///
/// Each weight `(n - k)/n` is an exact big rational rounded once.
pub fn fejer_mean<T: Scalar>(
    radix: &RadixSequence,
    f: &SparseSpectrum<T>,
    n: &SpectralIndex,
    x: &GroupPoint,
) -> Result<Complex<T>> {
    if n.is_zero() {
        return Err(Error::InvalidArgument("fejer mean needs n >= 1".into()));
    }
    let n = n.value();
    Ok(f.below(n)
        .map(|(k, c)| {
            let w: T = ratio_to_scalar(&(n - k.value()), n);
            *c * character::<T>(radix, k, x) * w
        })
        .sum())
}

/// Largest `n` accepted by [`fejer_mean_oracle`].
pub const ORACLE_LIMIT: u64 = 10_000;

/// `σ_n f(x)` as the literal average `(1/n) Σ_{k=1}^{n} S_k f(x)`.
pub fn fejer_mean_oracle<T: Scalar>(
    radix: &RadixSequence,
    f: &SparseSpectrum<T>,
    n: u64,
    x: &GroupPoint,
) -> Result<Complex<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("fejer mean needs n >= 1".into()));
    }
    if n > ORACLE_LIMIT {
        return Err(Error::SummationGuard { what: "oracle n", value: n.to_string(), limit: ORACLE_LIMIT });
    }
    let mut total = Complex::default();
    for k in 1..=n {
        total = total + partial_sum(radix, f, &SpectralIndex::from_u64(radix, k), x);
    }
    Ok(total / T::from_f64_lossy(n as f64))
}

/// `max_{n ∈ indices} |σ_n f(x)|` (or `|S_n f(x)|`), a truncated maximal operator.
pub fn maximal_truncated<T: Scalar>(
    radix: &RadixSequence,
    f: &SparseSpectrum<T>,
    x: &GroupPoint,
    indices: &[SpectralIndex],
    kind: MeanKind,
) -> Result<T> {
    if indices.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    let mut best = T::zero();
    for n in indices {
        let v = match kind {
            MeanKind::PartialSum => partial_sum(radix, f, n, x),
            MeanKind::Fejer => fejer_mean(radix, f, n, x)?,
        };
        best = best.max(v.norm());
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::character_u64;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn spectrum(r: &RadixSequence, items: &[(u64, Complex<f64>)]) -> SparseSpectrum<f64> {
        SparseSpectrum::from_entries(items.iter().map(|&(k, a)| (SpectralIndex::from_u64(r, k), a))).unwrap()
    }

    #[test]
    fn partial_sum_examples() {
        let r = RadixSequence::periodic(vec![2, 3]).unwrap();
        let f = spectrum(&r, &[(0, c(1.0, 0.0)), (3, c(0.0, 2.0)), (11, c(-1.0, 1.0))]);
        let x = GroupPoint::new(&r, vec![1, 1, 1]).unwrap();
        assert_eq!(partial_sum(&r, &f, &SpectralIndex::zero(), &x), c(0.0, 0.0));
        let all = partial_sum(&r, &f, &SpectralIndex::from_u64(&r, 1000), &x);
        assert!((all - f.evaluate(&r, &x)).norm() < 1e-15);
        let s4 = partial_sum(&r, &f, &SpectralIndex::from_u64(&r, 4), &x);
        let expect = c(1.0, 0.0) + c(0.0, 2.0) * character_u64::<f64>(&r, 3, &x);
        assert!((s4 - expect).norm() < 1e-15);
    }

    #[test]
    fn fejer_examples() {
        let r = RadixSequence::walsh();
        let x = GroupPoint::new(&r, vec![1]).unwrap();
        let f = spectrum(&r, &[(0, c(0.5, -2.0))]);
        for n in [1u64, 2, 17, 1 << 40] {
            assert_eq!(fejer_mean(&r, &f, &SpectralIndex::from_u64(&r, n), &x).unwrap(), c(0.5, -2.0));
        }
        let g = spectrum(&r, &[(0, c(1.0, 0.0)), (1, c(1.0, 0.0))]);
        let two = SpectralIndex::from_u64(&r, 2);
        assert_eq!(fejer_mean(&r, &g, &two, &x).unwrap(), c(0.5, 0.0));
        assert_eq!(fejer_mean_oracle(&r, &g, 2, &x).unwrap(), c(0.5, 0.0));
        assert_eq!(fejer_mean_oracle(&r, &f, 1, &x).unwrap(), c(0.5, -2.0));
        assert!(fejer_mean(&r, &g, &SpectralIndex::zero(), &x).is_err());
        assert!(fejer_mean_oracle(&r, &g, ORACLE_LIMIT + 1, &x).is_err());
    }

    #[test]
    fn maximal_examples() {
        let r = RadixSequence::walsh();
        let f = spectrum(&r, &[(0, c(1.0, 0.0)), (5, c(3.0, 0.0))]);
        let x = GroupPoint::zero();
        let idx = |v| SpectralIndex::from_u64(&r, v);
        assert!(matches!(maximal_truncated(&r, &f, &x, &[], MeanKind::Fejer), Err(Error::EmptyIndexSet)));
        let single = maximal_truncated(&r, &f, &x, &[idx(8)], MeanKind::Fejer).unwrap();
        assert_eq!(single, fejer_mean(&r, &f, &idx(8), &x).unwrap().norm());
        let wider = maximal_truncated(&r, &f, &x, &[idx(8), idx(100)], MeanKind::Fejer).unwrap();
        assert!(wider >= single);
        let s = maximal_truncated(&r, &f, &x, &[idx(1), idx(6)], MeanKind::PartialSum).unwrap();
        assert_eq!(s, 4.0);
    }

    #[test]
    fn accumulate_cancels() {
        let r = RadixSequence::walsh();
        let mut f = SparseSpectrum::<f64>::new();
        f.accumulate(SpectralIndex::from_u64(&r, 3), c(0.25, 0.0));
        f.accumulate(SpectralIndex::from_u64(&r, 3), c(-0.25, 0.0));
        assert!(f.is_empty());
        assert!(SparseSpectrum::from_entries([
            (SpectralIndex::from_u64(&r, 1), c(1.0, 0.0)),
            (SpectralIndex::from_u64(&r, 1), c(1.0, 0.0)),
        ])
        .is_err());
    }

    #[test]
    fn dense_conversion() {
        let r = RadixSequence::walsh();
        let coeffs = vec![c(1.0, 0.0), c(1e-16, 0.0), c(0.0, 0.5), c(0.0, 0.0)];
        let f = SparseSpectrum::from_dense(&r, &coeffs);
        assert_eq!(f.len(), 2);
        let back = f.to_dense(&r, 2).unwrap();
        assert_eq!(back[2], c(0.0, 0.5));
        assert!(f.to_dense(&r, 1).is_err());
    }

    #[test]
    fn json_format() {
        let r = RadixSequence::walsh();
        let big = SpectralIndex::from_value(&r, BigUint::from(2u32).pow(130) + 7u32);
        let f = SparseSpectrum::from_entries([(big.clone(), c(0.25, -0.5))]).unwrap();
        let text = f.to_json().unwrap();
        assert!(text.contains(&format!("\"index\": \"{big}\"")));
        let g = SparseSpectrum::<f64>::from_json(&r, &text).unwrap();
        assert_eq!(f, g);
        assert!(SparseSpectrum::<f64>::from_json(&r, r#"[{"index":"-1","re":1,"im":0}]"#).is_err());
    }
}
