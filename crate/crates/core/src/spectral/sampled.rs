use std::io::{Read, Write};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::group::{GroupPoint, RadixSequence};
use crate::scalar::Scalar;

/// Function on `G_m` that is constant on level-`N` cells, stored as `M_N`
/// samples in mixed-radix cell order (cell `t` has the digits of `t`).
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction<T> {
    radix: RadixSequence,
    level: usize,
    values: Vec<Complex<T>>,
}

impl<T: Scalar> SampledFunction<T> {
    pub fn new(radix: &RadixSequence, level: usize, values: Vec<Complex<T>>) -> Result<Self> {
        let expected = radix.cell_count(level)?;
        if values.len() != expected {
            return Err(Error::LengthMismatch { expected, actual: values.len() });
        }
        Ok(SampledFunction { radix: radix.clone(), level, values })
    }

    pub fn from_fn<F>(radix: &RadixSequence, level: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&GroupPoint) -> Complex<T>,
    {
        let n = radix.cell_count(level)?;
        let values = (0..n as u64).map(|t| f(&GroupPoint::from_cell(radix, level, t))).collect();
        Ok(SampledFunction { radix: radix.clone(), level, values })
    }

    pub fn zeros(radix: &RadixSequence, level: usize) -> Result<Self> {
        Self::from_fn(radix, level, |_| Complex::new(T::zero(), T::zero()))
    }

    pub fn radix(&self) -> &RadixSequence {
        &self.radix
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex<T>> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value on the cell containing `x`.
    pub fn at(&self, x: &GroupPoint) -> Complex<T> {
        self.values[x.cell_index(&self.radix, self.level) as usize]
    }

    /// `∫ f dμ`: every level-`N` cell has measure `1/M_N`.
    pub fn integral(&self) -> Complex<T> {
        let sum: Complex<T> = self.values.iter().copied().sum();
        sum / T::from_usize_lossy(self.values.len())
    }

    /// `‖f‖_p = (∫ |f|^p dμ)^{1/p}` for `p ≥ 1`.
    pub fn lp_norm(&self, p: f64) -> Result<T> {
        if !(1.0..f64::INFINITY).contains(&p) {
            return Err(Error::InvalidExponent(p));
        }
        let pt = T::from_f64_lossy(p);
        let total: T = self.values.iter().map(|v| v.norm().powf(pt)).sum();
        Ok((total / T::from_usize_lossy(self.values.len())).powf(T::one() / pt))
    }

    /// Writes `cell_index,re,im` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_complex_csv(out, "cell_index", &self.values)
    }

    /// Reads `cell_index,re,im` rows; the row count fixes the level.
    pub fn read_csv<R: Read>(radix: &RadixSequence, input: R) -> Result<Self> {
        let values = read_complex_csv(input, "cell_index")?;
        let level = radix.level_of(values.len() as u64).ok_or_else(|| {
            Error::Format(format!("{} samples is not a scale M_N of this radix sequence", values.len()))
        })?;
        Self::new(radix, level, values)
    }
}

/// Lp norm of a sampled function (free-function form).
pub fn lp_norm<T: Scalar>(f: &SampledFunction<T>, p: f64) -> Result<T> {
    f.lp_norm(p)
}

pub(crate) fn write_complex_csv<W: Write, T: Scalar>(out: W, key: &str, values: &[Complex<T>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([key, "re", "im"])?;
    for (i, v) in values.iter().enumerate() {
        w.write_record([i.to_string(), v.re.to_string(), v.im.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn read_complex_csv<R: Read, T: Scalar>(input: R, key: &str) -> Result<Vec<Complex<T>>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != [key, "re", "im"] {
        return Err(Error::Format(format!("expected header `{key},re,im`")));
    }
    let mut rows: Vec<(usize, Complex<T>)> = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or("").trim().to_string();
        let idx: usize = field(0).parse().map_err(|_| Error::Format(format!("bad {key} `{}`", field(0))))?;
        let re: f64 = field(1).parse().map_err(|_| Error::Format(format!("bad re `{}`", field(1))))?;
        let im: f64 = field(2).parse().map_err(|_| Error::Format(format!("bad im `{}`", field(2))))?;
        rows.push((idx, Complex::new(T::from_f64_lossy(re), T::from_f64_lossy(im))));
    }
    let mut values = vec![None; rows.len()];
    for (idx, v) in rows {
        match values.get_mut(idx) {
            Some(slot @ None) => *slot = Some(v),
            Some(Some(_)) => return Err(Error::Format(format!("{key} {idx} repeated"))),
            None => return Err(Error::Format(format!("{key} {idx} out of range"))),
        }
    }
    Ok(values.into_iter().map(|v| v.expect("every slot filled")).collect())
}
