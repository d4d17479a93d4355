use num_bigint::BigUint;
use num_complex::Complex;
use num_rational::BigRational;
use rayon::prelude::*;

use super::{
    assemble, build_cover, flat_polynomial, select_exponents, stage_window, CoverSchedule, ExponentPlan,
    FlatPolynomial, NullSetSpec,
};
use crate::error::{Error, Result};
use crate::group::{character, GroupPoint, RadixSequence, SpectralIndex};
use crate::scalar::{ratio_to_scalar, rational_to_scalar, Scalar};
use crate::spectral::{fejer_mean, partial_sum, SparseSpectrum};

/// Tolerance for `|I| = 1` and for the decomposition residual.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-9;

/// One stage/point evaluation of `σ_{n_hi} f(x) - σ_{n_lo} f(x) = I - II + III`.
#[derive(Clone, Debug)]
pub struct DivergenceReport<T> {
    pub stage: usize,
    pub point: usize,
    /// `M_{α_j} + M_{β_{j+1}}`
    pub n_lo: BigUint,
    /// `(M_{α_{j+1}} + M_{β_{j+1}})³`
    pub n_hi: BigUint,
    pub term_i: Complex<T>,
    pub term_ii: Complex<T>,
    pub term_iii: Complex<T>,
    pub bound_ii: T,
    pub bound_iii: T,
    pub sigma_lo: Complex<T>,
    pub sigma_hi: Complex<T>,
    /// `|σ_{n_hi} f(x) - σ_{n_lo} f(x)|`
    pub gap: T,
    /// `|(σ_{n_hi} - σ_{n_lo}) f(x) - (I - II + III)|`
    pub residual: T,
    /// `S_{hi} f(x) - S_{lo} f(x)` across the stage's modulated window.
    pub partial_jump: Complex<T>,
    /// Whether `x ∈ A_j`.
    pub in_support: bool,
}

impl<T: Scalar> DivergenceReport<T> {
    /// `1 - bound_II - bound_III`.
    pub fn lower_bound(&self) -> T {
        T::one() - self.bound_ii - self.bound_iii
    }

    /// `bound_II + bound_III`.
    pub fn epsilon(&self) -> T {
        self.bound_ii + self.bound_iii
    }

    /// Checks the certificate; the message names the first failed inequality.
    pub fn check(&self) -> std::result::Result<(), String> {
        let tol = T::from_f64_lossy(CERTIFICATE_TOLERANCE);
        // the bounds may be met with equality, so allow rounding in the last place
        let slack = T::one() + T::from_f64_lossy(1e-12);
        if !self.in_support {
            return Err("point is not in A_j".into());
        }
        if (self.term_i.norm() - T::one()).abs() > tol {
            return Err(format!("|I| = {} is not 1", self.term_i.norm()));
        }
        if self.term_ii.norm() > self.bound_ii * slack {
            return Err(format!("|II| = {:e} exceeds {:e}", self.term_ii.norm(), self.bound_ii));
        }
        if self.term_iii.norm() > self.bound_iii * slack {
            return Err(format!("|III| = {:e} exceeds {:e}", self.term_iii.norm(), self.bound_iii));
        }
        if self.residual > tol {
            return Err(format!("decomposition residual {:e}", self.residual));
        }
        if self.gap < self.lower_bound() - tol {
            return Err(format!("gap {} below 1 - bounds = {}", self.gap, self.lower_bound()));
        }
        Ok(())
    }
}

/// Per-stage flat-polynomial measurements on the dense evaluation grid.
#[derive(Clone, Debug)]
pub struct FlatCertificate<T> {
    pub stage: usize,
    /// `μ(A_j)`
    pub measure: BigRational,
    /// `μ(A_j) ≤ 1/M_j`, exactly
    pub measure_within_scale: bool,
    /// `max ||P_j(x)| - 1|` over cells of `A_j`
    pub max_unit_deviation: T,
    /// `max |P_j(x)|` over cells outside `A_j`
    pub max_off_support: T,
    /// `(p, ‖P_j‖_p^p)`
    pub norms: Vec<(f64, T)>,
}

/// Every artifact of the construction for one null-set specification.
#[derive(Clone, Debug)]
pub struct Construction<T> {
    spec: NullSetSpec,
    points: Vec<GroupPoint>,
    cover: CoverSchedule,
    polys: Vec<FlatPolynomial<T>>,
    plan: ExponentPlan,
    spectrum: SparseSpectrum<T>,
}

impl<T: Scalar> Construction<T> {
    /// cover → blocks → flat polynomials → exponents → assembled `f`.
    pub fn build(spec: &NullSetSpec) -> Result<Self> {
        let cover = build_cover(spec).map_err(Error::in_step("cover"))?;
        let (polys, alphas) = polynomials(spec.radix(), &cover, None).map_err(Error::in_step("flat polynomials"))?;
        let plan = select_exponents(spec.radix(), &alphas, None).map_err(Error::in_step("exponents"))?;
        Self::finish(spec, cover, polys, plan)
    }

    /// Rebuilds from a stored cover and plan, re-verifying everything.
    pub fn from_plan(spec: &NullSetSpec, cover: CoverSchedule, plan: ExponentPlan) -> Result<Self> {
        let radix = spec.radix();
        if cover.stage_count() != spec.stages() + 1 {
            return Err(Error::Pipeline {
                step: "cover",
                source: Box::new(Error::Format(format!("{} blocks for J = {}", cover.stage_count(), spec.stages()))),
            });
        }
        cover.verify(radix, &spec.materialize(spec.max_depth())?).map_err(Error::in_step("cover"))?;
        plan.verify(radix).map_err(Error::in_step("exponents"))?;
        let (polys, alphas) =
            polynomials(radix, &cover, Some(&plan.alphas)).map_err(Error::in_step("flat polynomials"))?;
        if alphas != plan.alphas {
            return Err(Error::Pipeline {
                step: "flat polynomials",
                source: Box::new(Error::Format(format!("windows give alphas {alphas:?}, plan has {:?}", plan.alphas))),
            });
        }
        Self::finish(spec, cover, polys, plan)
    }

    fn finish(
        spec: &NullSetSpec,
        cover: CoverSchedule,
        polys: Vec<FlatPolynomial<T>>,
        plan: ExponentPlan,
    ) -> Result<Self> {
        let spectrum = assemble(spec.radix(), &plan, &polys).map_err(Error::in_step("assemble"))?;
        let depth = cover.intervals().iter().map(|iv| iv.depth()).max().unwrap_or(0);
        let level =
            [depth, *plan.alphas.last().unwrap_or(&0), *plan.betas.last().unwrap_or(&0)].into_iter().max().unwrap_or(0)
                + 1;
        let points = spec.materialize(level)?;
        Ok(Construction { spec: spec.clone(), points, cover, polys, plan, spectrum })
    }

    pub fn spec(&self) -> &NullSetSpec {
        &self.spec
    }

    pub fn radix(&self) -> &RadixSequence {
        self.spec.radix()
    }

    /// Points of `E`, materialized deep enough for every character of `f`.
    pub fn points(&self) -> &[GroupPoint] {
        &self.points
    }

    pub fn cover(&self) -> &CoverSchedule {
        &self.cover
    }

    /// `P_0, …, P_J`.
    pub fn polynomials(&self) -> &[FlatPolynomial<T>] {
        &self.polys
    }

    pub fn plan(&self) -> &ExponentPlan {
        &self.plan
    }

    /// The assembled `f`.
    pub fn spectrum(&self) -> &SparseSpectrum<T> {
        &self.spectrum
    }

    /// Level of the dense grid on which every `P_j` is resolved: the deepest α.
    pub fn evaluation_level(&self) -> usize {
        *self.plan.alphas.last().expect("non-empty plan")
    }

    /// `σ_{n_hi} f(x) - σ_{n_lo} f(x)` and its `I - II + III` split for stage `j ∈ 1..=J`.
    pub fn divergence_gap(&self, stage: usize, point: usize) -> Result<DivergenceReport<T>> {
        divergence_gap(self.radix(), &self.spectrum, &self.plan, &self.polys, stage, point, &self.points[point])
    }

    /// Reports for every stage `1..=J` (outer) and point (inner).
    pub fn reports(&self) -> Result<Vec<DivergenceReport<T>>> {
        let pairs: Vec<(usize, usize)> =
            (1..=self.spec.stages()).flat_map(|j| (0..self.points.len()).map(move |i| (j, i))).collect();
        pairs.par_iter().map(|&(j, i)| self.divergence_gap(j, i)).collect()
    }

    /// Dense-grid measurements of every `P_j` for the given exponents `p`.
    pub fn flat_certificates(&self, exponents: &[f64]) -> Result<Vec<FlatCertificate<T>>> {
        let radix = self.radix();
        let level = self.evaluation_level();
        self.polys
            .iter()
            .map(|p| {
                let sampled = p.sample(radix, level)?;
                let mut max_unit_deviation = T::zero();
                let mut max_off_support = T::zero();
                for (t, v) in sampled.values().iter().enumerate() {
                    let x = GroupPoint::from_cell(radix, level, t as u64);
                    if p.in_support(&x) {
                        max_unit_deviation = max_unit_deviation.max((v.norm() - T::one()).abs());
                    } else {
                        max_off_support = max_off_support.max(v.norm());
                    }
                }
                let norms = exponents
                    .iter()
                    .map(|&e| Ok((e, sampled.lp_norm(e)?.powf(T::from_f64_lossy(e)))))
                    .collect::<Result<Vec<_>>>()?;
                let measure = p.support_measure(radix);
                let scale_bound = BigRational::new(1.into(), radix.scale(p.stage()).into());
                Ok(FlatCertificate {
                    stage: p.stage(),
                    measure_within_scale: measure <= scale_bound,
                    measure,
                    max_unit_deviation,
                    max_off_support,
                    norms,
                })
            })
            .collect()
    }
}

/// Builds `P_j` for every block, chaining `α_{j+1}` from `P_j`'s window
/// unless `alphas` fixes the lower exponents.
fn polynomials<T: Scalar>(
    radix: &RadixSequence,
    cover: &CoverSchedule,
    alphas: Option<&[usize]>,
) -> Result<(Vec<FlatPolynomial<T>>, Vec<usize>)> {
    let mut out = Vec::with_capacity(cover.stage_count());
    let mut chain = vec![0usize];
    for j in 0..cover.stage_count() {
        let lower = alphas.and_then(|a| a.get(j).copied()).unwrap_or(chain[j]);
        let p = flat_polynomial(radix, j, cover.stage(j), lower)?;
        chain.push(p.upper());
        out.push(p);
    }
    Ok((out, chain))
}

/// Computes one [`DivergenceReport`] for stage `1 ≤ j ≤ J` at `x`.
///
/// `I`, `II`, `III` are summed from the assembled spectrum; the gap comes
/// independently from two [`fejer_mean`] evaluations. Weights `k/n` are exact
/// rationals rounded once.
pub fn divergence_gap<T: Scalar>(
    radix: &RadixSequence,
    f: &SparseSpectrum<T>,
    plan: &ExponentPlan,
    polys: &[FlatPolynomial<T>],
    stage: usize,
    point: usize,
    x: &GroupPoint,
) -> Result<DivergenceReport<T>> {
    let max_stage = polys.iter().map(|p| p.stage()).max().unwrap_or(0);
    if stage == 0 || stage > max_stage {
        return Err(Error::StageOutOfRange { stage, max: max_stage });
    }
    let poly = polys.iter().find(|p| p.stage() == stage).ok_or(Error::StageOutOfRange { stage, max: max_stage })?;
    let win = stage_window(radix, plan, stage)?;
    let n_lo = win.lo.clone();
    let n_hi = (radix.scale(plan.alphas[stage + 1]) + &win.shift).pow(3);

    let shift = SpectralIndex::from_value(radix, win.shift.clone());
    let term_i = character::<T>(radix, &shift, x) * poly.evaluate(radix, x);

    let mut term_ii = Complex::default();
    let mut mass_ii = T::zero();
    let mut max_ii = BigUint::default();
    for (k, c) in f.iter().filter(|(k, _)| win.contains(k.value())) {
        let w: T = ratio_to_scalar(k.value(), &n_hi);
        term_ii = term_ii + *c * character::<T>(radix, k, x) * w;
        mass_ii = mass_ii + c.norm();
        max_ii = max_ii.max(k.value().clone());
    }

    // k/n_lo - k/n_hi = k (n_hi - n_lo) / (n_lo n_hi)
    let spread = &n_hi - &n_lo;
    let denom = &n_lo * &n_hi;
    let mut term_iii = Complex::default();
    let mut mass_iii = T::zero();
    let mut max_iii = BigUint::default();
    for l in 1..stage {
        let lw = stage_window(radix, plan, l)?;
        for (k, c) in f.iter().filter(|(k, _)| lw.contains(k.value())) {
            let w: T = ratio_to_scalar(&(k.value() * &spread), &denom);
            term_iii = term_iii + *c * character::<T>(radix, k, x) * w;
            mass_iii = mass_iii + c.norm();
            max_iii = max_iii.max(k.value().clone());
        }
    }

    let bound_ii = mass_ii * ratio_to_scalar::<T>(&max_ii, &n_hi);
    let bound_iii = if mass_iii == T::zero() {
        T::zero()
    } else {
        mass_iii * rational_to_scalar::<T>(&BigRational::new((&max_iii * &spread).into(), denom.clone().into()))
    };

    let sigma_lo = fejer_mean(radix, f, &SpectralIndex::from_value(radix, n_lo.clone()), x)?;
    let sigma_hi = fejer_mean(radix, f, &SpectralIndex::from_value(radix, n_hi.clone()), x)?;
    let diff = sigma_hi - sigma_lo;
    let residual = (diff - (term_i - term_ii + term_iii)).norm();

    let partial_jump = partial_sum(radix, f, &SpectralIndex::from_value(radix, win.hi.clone()), x)
        - partial_sum(radix, f, &SpectralIndex::from_value(radix, win.lo.clone()), x);

    Ok(DivergenceReport {
        stage,
        point,
        n_lo,
        n_hi,
        term_i,
        term_ii,
        term_iii,
        bound_ii,
        bound_iii,
        sigma_lo,
        sigma_hi,
        gap: diff.norm(),
        residual,
        partial_jump,
        in_support: poly.in_support(x),
    })
}

/// Runs the full pipeline and checks the gap certificate at every stage
/// `1..=J` and every point.
pub fn verify_divergence<T: Scalar>(spec: &NullSetSpec) -> Result<Vec<DivergenceReport<T>>> {
    let construction = Construction::<T>::build(spec)?;
    let reports = construction.reports().map_err(Error::in_step("divergence"))?;
    for r in &reports {
        r.check().map_err(|detail| Error::CertificateFailed { stage: r.stage, point: r.point, detail })?;
    }
    Ok(reports)
}
