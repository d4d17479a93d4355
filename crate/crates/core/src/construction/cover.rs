use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::NullSetSpec;
use crate::error::{Error, Result};
use crate::group::{GroupPoint, RadixSequence, VilenkinInterval};

/// Cover `I_0, I_1, …` of the point set with block boundaries
/// `0 = n_0 < n_1 < … < n_S`; block `j` is `A_j = ⋃_{n_j ≤ k < n_{j+1}} I_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSchedule {
    intervals: Vec<VilenkinInterval>,
    blocks: Vec<usize>,
}

fn inv_scale(radix: &RadixSequence, j: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(radix.scale(j)))
}

/// `tails[n] = Σ_{k ≥ n} μ(I_k)`, exactly.
fn tail_sums(radix: &RadixSequence, intervals: &[VilenkinInterval]) -> Vec<BigRational> {
    let mut tails = vec![BigRational::zero(); intervals.len() + 1];
    for k in (0..intervals.len()).rev() {
        tails[k] = &tails[k + 1] + intervals[k].measure(radix);
    }
    tails
}

impl CoverSchedule {
    pub fn new(intervals: Vec<VilenkinInterval>, blocks: Vec<usize>) -> Result<Self> {
        let ok = blocks.first() == Some(&0)
            && blocks.len() >= 2
            && blocks.windows(2).all(|w| w[0] < w[1])
            && blocks.last() == Some(&intervals.len());
        if !ok {
            return Err(Error::Format(format!("blocks {blocks:?} must rise strictly from 0 to {}", intervals.len())));
        }
        Ok(CoverSchedule { intervals, blocks })
    }

    pub fn intervals(&self) -> &[VilenkinInterval] {
        &self.intervals
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// Number of blocks `A_0, …, A_{S-1}`.
    pub fn stage_count(&self) -> usize {
        self.blocks.len() - 1
    }

    /// Intervals making up `A_j`.
    pub fn stage(&self, j: usize) -> &[VilenkinInterval] {
        &self.intervals[self.blocks[j]..self.blocks[j + 1]]
    }

    /// `Σ_k μ(I_k)`, counted with multiplicity.
    pub fn total_measure(&self, radix: &RadixSequence) -> BigRational {
        self.tail_measure(radix, 0)
    }

    /// `Σ_{k ≥ from} μ(I_k)`.
    pub fn tail_measure(&self, radix: &RadixSequence, from: usize) -> BigRational {
        self.intervals[from..].iter().fold(BigRational::zero(), |acc, iv| acc + iv.measure(radix))
    }

    /// Re-checks every invariant: total measure below 1, each block covers
    /// every point, and the tail after `n_j` has measure below `1/M_j`.
    pub fn verify(&self, radix: &RadixSequence, points: &[GroupPoint]) -> Result<()> {
        for iv in &self.intervals {
            iv.validate(radix)?;
        }
        if self.total_measure(radix) >= BigRational::one() {
            return Err(Error::Infeasible("cover has total measure >= 1".into()));
        }
        for j in 0..self.stage_count() {
            for (i, x) in points.iter().enumerate() {
                if !self.stage(j).iter().any(|iv| iv.contains(x)) {
                    return Err(Error::Infeasible(format!("block {j} does not cover point {i}")));
                }
            }
        }
        for (j, &n) in self.blocks.iter().enumerate() {
            if self.tail_measure(radix, n) >= inv_scale(radix, j) {
                return Err(Error::Infeasible(format!("tail after n_{j} = {n} is not below 1/M_{j}")));
            }
        }
        Ok(())
    }
}

/// Greedy block boundaries: `n_j` is the least index past `n_{j-1}` such
/// that `[n_{j-1}, n_j)` covers every point and `Σ_{k ≥ n_j} μ(I_k) < 1/M_j`.
///
/// Returns `n_0, …, n_stages`. With no points only the tail condition applies.
pub fn select_blocks(
    radix: &RadixSequence,
    intervals: &[VilenkinInterval],
    points: &[GroupPoint],
    stages: usize,
) -> Result<Vec<usize>> {
    if intervals.is_empty() {
        return Err(Error::Infeasible("no intervals to split into blocks".into()));
    }
    let tails = tail_sums(radix, intervals);
    if tails[0] >= BigRational::one() {
        return Err(Error::Infeasible("interval measures do not sum below 1".into()));
    }
    let mut blocks = vec![0usize];
    for j in 1..=stages {
        let start = *blocks.last().expect("n_0 present");
        let bound = inv_scale(radix, j);
        let found = (start + 1..=intervals.len()).find(|&n| {
            let block = &intervals[start..n];
            tails[n] < bound && points.iter().all(|x| block.iter().any(|iv| iv.contains(x)))
        });
        match found {
            Some(n) => blocks.push(n),
            None => return Err(Error::Infeasible(format!("no admissible boundary n_{j} after {start}"))),
        }
    }
    Ok(blocks)
}

/// Covers the points with one cylinder per point and block, for blocks
/// `A_0, …, A_J`.
///
/// Block `j` uses the smallest depth `d_j` for which every tail condition
/// accumulated so far stays strict; depths are searched up to the spec's
/// `max_depth`.
pub fn build_cover(spec: &NullSetSpec) -> Result<CoverSchedule> {
    let radix = spec.radix();
    let points = spec.materialize(spec.max_depth())?;
    let blocks_wanted = spec.stages() + 1;
    // running[i] = Σ of block measures from block i to the current one
    let mut running: Vec<BigRational> = Vec::new();
    let mut intervals: Vec<VilenkinInterval> = Vec::new();
    for j in 0..blocks_wanted {
        let mut chosen = None;
        for depth in 1..=spec.max_depth() {
            let mut cylinders: Vec<VilenkinInterval> = Vec::new();
            for x in &points {
                let iv = VilenkinInterval::new(x, depth);
                if !cylinders.contains(&iv) {
                    cylinders.push(iv);
                }
            }
            let mass = BigRational::new(BigInt::from(cylinders.len()), BigInt::from(radix.scale(depth)));
            let admissible = (0..=j).all(|i| {
                let acc = running.get(i).cloned().unwrap_or_else(BigRational::zero);
                acc + &mass < inv_scale(radix, i)
            });
            if admissible {
                chosen = Some((cylinders, mass));
                break;
            }
        }
        let (cylinders, mass) = chosen
            .ok_or_else(|| Error::Infeasible(format!("block {j} needs cylinders deeper than {}", spec.max_depth())))?;
        for acc in running.iter_mut() {
            *acc += &mass;
        }
        running.push(mass);
        intervals.extend(cylinders);
    }
    let blocks = select_blocks(radix, &intervals, &points, blocks_wanted)?;
    let cover = CoverSchedule::new(intervals, blocks)?;
    cover.verify(radix, &points)?;
    Ok(cover)
}
