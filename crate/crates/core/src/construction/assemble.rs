use num_bigint::BigUint;
use num_complex::Complex;

use super::{ExponentPlan, FlatPolynomial};
use crate::error::{Error, Result};
use crate::group::{oplus, RadixSequence, SpectralIndex};
use crate::scalar::Scalar;
use crate::spectral::SparseSpectrum;

/// Modulated window of stage `l`:
/// `[M_{β_{l+1}} + M_{α_l}, M_{β_{l+1}} + M_{α_{l+1}})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageWindow {
    pub stage: usize,
    pub shift: BigUint,
    pub lo: BigUint,
    pub hi: BigUint,
}

impl StageWindow {
    pub fn contains(&self, k: &BigUint) -> bool {
        k >= &self.lo && k < &self.hi
    }
}

pub fn stage_window(radix: &RadixSequence, plan: &ExponentPlan, stage: usize) -> Result<StageWindow> {
    if stage + 1 >= plan.betas.len() {
        return Err(Error::StageOutOfRange { stage, max: plan.betas.len().saturating_sub(2) });
    }
    let shift = radix.scale(plan.betas[stage + 1]);
    let lo = &shift + radix.scale(plan.alphas[stage]);
    let hi = &shift + radix.scale(plan.alphas[stage + 1]);
    Ok(StageWindow { stage, shift, lo, hi })
}

/// `f = Σ_{l ≥ 1} ψ_{M_{β_{l+1}}} P_l`.
///
/// Stage 0 only fixes `α_1` and does not enter `f`. Windows are checked for
/// pairwise disjointness and each shift `M_{β_{l+1}} ⊕ k` is checked to be
/// the plain sum.
pub fn assemble<T: Scalar>(
    radix: &RadixSequence,
    plan: &ExponentPlan,
    polys: &[FlatPolynomial<T>],
) -> Result<SparseSpectrum<T>> {
    let mut windows: Vec<StageWindow> = Vec::new();
    let mut entries = Vec::new();
    for p in polys.iter().filter(|p| p.stage() >= 1) {
        let l = p.stage();
        let win = stage_window(radix, plan, l)?;
        if p.lower() != plan.alphas[l] || p.upper() != plan.alphas[l + 1] {
            return Err(Error::WindowCollision(format!(
                "stage {l} polynomial window [M_{}, M_{}) disagrees with alphas",
                p.lower(),
                p.upper()
            )));
        }
        if let Some(other) = windows.iter().find(|w| w.lo < win.hi && win.lo < w.hi) {
            return Err(Error::WindowCollision(format!("stages {} and {l} overlap", other.stage)));
        }
        let shift = SpectralIndex::from_value(radix, win.shift.clone());
        for (k, c) in p.spectrum().iter() {
            let key = oplus(radix, k, &shift);
            if key.value() != &(k.value() + &win.shift) {
                return Err(Error::WindowCollision(format!("{k} ⊕ M_beta carries at stage {l}")));
            }
            entries.push((key, *c));
        }
        windows.push(win);
    }
    SparseSpectrum::from_entries(entries)
}

/// `f̂(k)` from the closed form: `c^l_{k - M_{β_{l+1}}}` when `k` lies in the
/// modulated window of stage `l ≥ 1`, otherwise zero.
pub fn coefficient_case_split<T: Scalar>(
    radix: &RadixSequence,
    k: &BigUint,
    plan: &ExponentPlan,
    polys: &[FlatPolynomial<T>],
) -> Complex<T> {
    for p in polys.iter().filter(|p| p.stage() >= 1) {
        let Ok(win) = stage_window(radix, plan, p.stage()) else { continue };
        if win.contains(k) {
            return p.spectrum().get(&(k - &win.shift)).unwrap_or_default();
        }
    }
    Complex::default()
}
