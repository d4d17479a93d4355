//! File formats: experiment specs, `plan.json`, `spectrum.json`,
//! `report.csv` and trace tables.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::construction::{Construction, CoverSchedule, DivergenceReport, ExponentPlan, NullSetSpec, PointRule};
use crate::error::{Error, Result};
use crate::group::{RadixSequence, VilenkinInterval};
use crate::scalar::Scalar;

/// `{"radix": {...}, "points": [...], "stages": J, "p": float}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub radix: RadixSequence,
    pub points: Vec<PointRule>,
    pub stages: usize,
    pub p: f64,
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ExperimentSpec = serde_json::from_str(text)?;
        if !(1.0..f64::INFINITY).contains(&spec.p) {
            return Err(Error::InvalidExponent(spec.p));
        }
        Ok(spec)
    }

    pub fn null_set(&self) -> Result<NullSetSpec> {
        NullSetSpec::new(self.radix.clone(), self.points.clone(), self.stages)
    }
}

/// Contents of `plan.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    pub radix: RadixSequence,
    pub stages: usize,
    pub alphas: Vec<usize>,
    pub betas: Vec<usize>,
    /// `M_{β_j}` as decimal strings.
    pub beta_scales: Vec<String>,
    pub blocks: Vec<usize>,
    pub intervals: Vec<VilenkinInterval>,
}

impl PlanFile {
    pub fn from_construction<T: Scalar>(c: &Construction<T>) -> Self {
        let radix = c.radix().clone();
        PlanFile {
            stages: c.spec().stages(),
            alphas: c.plan().alphas.clone(),
            betas: c.plan().betas.clone(),
            beta_scales: c.plan().betas.iter().map(|&b| radix.scale(b).to_string()).collect(),
            blocks: c.cover().blocks().to_vec(),
            intervals: c.cover().intervals().to_vec(),
            radix,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Stored cover and exponents; consistency with `spec` is checked by
    /// [`Construction::from_plan`].
    pub fn parts(&self, spec: &NullSetSpec) -> Result<(CoverSchedule, ExponentPlan)> {
        if &self.radix != spec.radix() || self.stages != spec.stages() {
            return Err(Error::Format("plan radix or stage count differs from the spec".into()));
        }
        let scales: Vec<String> = self.betas.iter().map(|&b| self.radix.scale(b).to_string()).collect();
        if scales != self.beta_scales {
            return Err(Error::Format("beta_scales do not match betas".into()));
        }
        for iv in &self.intervals {
            iv.validate(&self.radix)?;
        }
        let cover = CoverSchedule::new(self.intervals.clone(), self.blocks.clone())?;
        Ok((cover, ExponentPlan { alphas: self.alphas.clone(), betas: self.betas.clone() }))
    }
}

pub const REPORT_HEADER: [&str; 10] =
    ["stage", "point", "n_lo", "n_hi", "abs_I", "abs_II", "abs_III", "bound_II", "bound_III", "gap"];

pub fn write_report_csv<W: Write, T: Scalar>(out: W, reports: &[DivergenceReport<T>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_HEADER)?;
    for r in reports {
        w.write_record([
            r.stage.to_string(),
            r.point.to_string(),
            r.n_lo.to_string(),
            r.n_hi.to_string(),
            r.term_i.norm().to_string(),
            format!("{:e}", r.term_ii.norm()),
            format!("{:e}", r.term_iii.norm()),
            format!("{:e}", r.bound_ii),
            format!("{:e}", r.bound_iii),
            r.gap.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub const TRACE_HEADER: [&str; 6] = ["stage", "n", "re", "im", "abs_sigma", "epsilon"];

/// Two rows per stage, `n_lo` then `n_hi`, with `σ_n f(x)`.
pub fn write_trace_csv<W: Write, T: Scalar>(out: W, reports: &[DivergenceReport<T>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER)?;
    for r in reports {
        for (n, s) in [(&r.n_lo, r.sigma_lo), (&r.n_hi, r.sigma_hi)] {
            w.write_record([
                r.stage.to_string(),
                n.to_string(),
                s.re.to_string(),
                s.im.to_string(),
                s.norm().to_string(),
                format!("{:e}", r.epsilon()),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
