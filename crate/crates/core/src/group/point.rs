use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::RadixSequence;
use crate::error::{Error, Result};

/// Truncated element `x = (x_0, …, x_{N-1}, 0, 0, …)` of `G_m`.
///
/// Digits past the stored level are zero, which picks the canonical
/// representative of the level-`N` cylinder.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupPoint {
    digits: Vec<u32>,
}

impl PartialEq for GroupPoint {
    fn eq(&self, other: &Self) -> bool {
        let n = self.digits.len().max(other.digits.len());
        (0..n).all(|k| self.digit(k) == other.digit(k))
    }
}

impl Eq for GroupPoint {}

impl GroupPoint {
    pub fn new(radix: &RadixSequence, digits: Vec<u32>) -> Result<Self> {
        let p = GroupPoint { digits };
        p.validate(radix)?;
        Ok(p)
    }

    pub fn zero() -> Self {
        GroupPoint::default()
    }

    /// Point of the level-`level` cell with mixed-radix index `cell`.
    pub fn from_cell(radix: &RadixSequence, level: usize, mut cell: u64) -> Self {
        let mut digits = Vec::with_capacity(level);
        for k in 0..level {
            let m = u64::from(radix.radix(k));
            digits.push((cell % m) as u32);
            cell /= m;
        }
        GroupPoint { digits }
    }

    /// Checks every stored digit against its radix.
    pub fn validate(&self, radix: &RadixSequence) -> Result<()> {
        for (position, &digit) in self.digits.iter().enumerate() {
            let m = radix.radix(position);
            if digit >= m {
                return Err(Error::DigitOutOfRange { position, digit, radix: m });
            }
        }
        Ok(())
    }

    pub fn level(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    #[inline]
    pub fn digit(&self, k: usize) -> u32 {
        self.digits.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    /// Copy with exactly `level` digits (truncated or zero-padded).
    pub fn truncated(&self, level: usize) -> Self {
        GroupPoint { digits: (0..level).map(|k| self.digit(k)).collect() }
    }

    /// Mixed-radix index of the level-`level` cell containing this point.
    pub fn cell_index(&self, radix: &RadixSequence, level: usize) -> u64 {
        let mut idx = 0u64;
        let mut scale = 1u64;
        for k in 0..level {
            idx += u64::from(self.digit(k)) * scale;
            scale *= u64::from(radix.radix(k));
        }
        idx
    }
}

/// Coordinatewise `x + y` modulo `m_k`.
pub fn group_add(radix: &RadixSequence, x: &GroupPoint, y: &GroupPoint) -> GroupPoint {
    let n = x.level().max(y.level());
    let digits = (0..n)
        .map(|k| {
            let m = u64::from(radix.radix(k));
            ((u64::from(x.digit(k)) + u64::from(y.digit(k))) % m) as u32
        })
        .collect();
    GroupPoint { digits }
}

/// Coordinatewise `-x` modulo `m_k`.
pub fn group_negate(radix: &RadixSequence, x: &GroupPoint) -> GroupPoint {
    let digits = x.digits.iter().enumerate().map(|(k, &d)| if d == 0 { 0 } else { radix.radix(k) - d }).collect();
    GroupPoint { digits }
}

/// Cylinder `I_n(y)`: points agreeing with `y` in the first `n` digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VilenkinInterval {
    anchor: GroupPoint,
    depth: usize,
}

impl VilenkinInterval {
    pub fn new(anchor: &GroupPoint, depth: usize) -> Self {
        VilenkinInterval { anchor: anchor.truncated(depth), depth }
    }

    /// The whole group, `I_0`.
    pub fn whole() -> Self {
        VilenkinInterval { anchor: GroupPoint::zero(), depth: 0 }
    }

    pub fn validate(&self, radix: &RadixSequence) -> Result<()> {
        if self.anchor.level() > self.depth {
            return Err(Error::Format(format!(
                "interval anchor has {} digits but depth {}",
                self.anchor.level(),
                self.depth
            )));
        }
        self.anchor.validate(radix)
    }

    pub fn anchor(&self) -> &GroupPoint {
        &self.anchor
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn contains(&self, x: &GroupPoint) -> bool {
        (0..self.depth).all(|k| self.anchor.digit(k) == x.digit(k))
    }

    /// `other ⊆ self`.
    pub fn contains_interval(&self, other: &VilenkinInterval) -> bool {
        other.depth >= self.depth && self.contains(&other.anchor)
    }

    /// Cylinders are nested or disjoint.
    pub fn is_disjoint(&self, other: &VilenkinInterval) -> bool {
        !self.contains_interval(other) && !other.contains_interval(self)
    }

    /// `μ(I_n(y)) = 1/M_n`.
    pub fn measure(&self, radix: &RadixSequence) -> BigRational {
        BigRational::new(BigInt::from(1), BigInt::from(radix.scale(self.depth)))
    }

    /// Offset `a` such that level-`N` cell `t` (for `N ≥ depth`) lies in the
    /// interval iff `t ≡ a (mod M_depth)`.
    pub fn cell_residue(&self, radix: &RadixSequence) -> BigUint {
        let mut acc = BigUint::default();
        let mut scale = BigUint::from(1u32);
        for k in 0..self.depth {
            acc += &scale * self.anchor.digit(k);
            scale *= radix.radix(k);
        }
        acc
    }
}

/// Drops every cylinder contained in another one; the survivors are pairwise
/// disjoint and have the same union.
pub fn merge_intervals(intervals: &[VilenkinInterval]) -> Vec<VilenkinInterval> {
    let mut sorted: Vec<&VilenkinInterval> = intervals.iter().collect();
    sorted.sort_by_key(|i| i.depth);
    let mut kept: Vec<VilenkinInterval> = Vec::new();
    for iv in sorted {
        if !kept.iter().any(|k| k.contains_interval(iv)) {
            kept.push(iv.clone());
        }
    }
    kept
}

/// Exact measure of a union of cylinders.
pub fn union_measure(radix: &RadixSequence, intervals: &[VilenkinInterval]) -> BigRational {
    merge_intervals(intervals).iter().fold(BigRational::default(), |acc, iv| acc + iv.measure(radix))
}
