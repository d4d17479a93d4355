use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupPoint, RadixSequence};

/// Digit rule of one point: a finite digit list (zeros afterwards) or a
/// prefix followed by a repeating period.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointRule {
    Digits(Vec<u32>),
    Periodic(PeriodicDigits),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicDigits {
    #[serde(default)]
    pub prefix: Vec<u32>,
    pub period: Vec<u32>,
}

impl PointRule {
    pub fn digits(digits: &[u32]) -> Self {
        PointRule::Digits(digits.to_vec())
    }

    pub fn periodic(prefix: &[u32], period: &[u32]) -> Self {
        PointRule::Periodic(PeriodicDigits { prefix: prefix.to_vec(), period: period.to_vec() })
    }

    pub fn digit(&self, k: usize) -> u32 {
        match self {
            PointRule::Digits(d) => d.get(k).copied().unwrap_or(0),
            PointRule::Periodic(p) => match p.prefix.get(k) {
                Some(&d) => d,
                None if p.period.is_empty() => 0,
                None => p.period[(k - p.prefix.len()) % p.period.len()],
            },
        }
    }

    fn prefix_len(&self) -> usize {
        match self {
            PointRule::Digits(d) => d.len(),
            PointRule::Periodic(p) => p.prefix.len(),
        }
    }

    fn period_len(&self) -> usize {
        match self {
            PointRule::Digits(_) => 1,
            PointRule::Periodic(p) => p.period.len().max(1),
        }
    }

    /// Number of leading positions that determine the sequence together with
    /// the radix period.
    fn horizon(&self, radix: &RadixSequence) -> usize {
        self.prefix_len().max(radix.prefix().len()) + self.period_len().lcm(&radix.period().len())
    }

    pub fn validate(&self, radix: &RadixSequence) -> Result<()> {
        for position in 0..self.horizon(radix) {
            let (digit, m) = (self.digit(position), radix.radix(position));
            if digit >= m {
                return Err(Error::DigitOutOfRange { position, digit, radix: m });
            }
        }
        Ok(())
    }

    /// The point truncated to `level` digits.
    pub fn materialize(&self, radix: &RadixSequence, level: usize) -> Result<GroupPoint> {
        GroupPoint::new(radix, (0..level).map(|k| self.digit(k)).collect())
    }

    /// Equality of the full infinite digit sequences.
    pub fn same_sequence(&self, other: &PointRule) -> bool {
        let n = self.prefix_len().max(other.prefix_len()) + self.period_len().lcm(&other.period_len());
        (0..n).all(|k| self.digit(k) == other.digit(k))
    }
}

/// Finite stand-in for a null set `E`: distinct points with digit rules and
/// the number `J` of construction stages that are certified.
#[derive(Clone, Debug, PartialEq)]
pub struct NullSetSpec {
    radix: RadixSequence,
    points: Vec<PointRule>,
    stages: usize,
    max_depth: usize,
}

/// Deepest cylinder the cover search will try.
pub const DEFAULT_MAX_DEPTH: usize = 512;

impl NullSetSpec {
    pub fn new(radix: RadixSequence, points: Vec<PointRule>, stages: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyNullSet);
        }
        if stages == 0 {
            return Err(Error::InvalidArgument("stage count J must be >= 1".into()));
        }
        for (i, p) in points.iter().enumerate() {
            p.validate(&radix)?;
            if points[..i].iter().any(|q| q.same_sequence(p)) {
                return Err(Error::InvalidArgument(format!("point {i} repeats an earlier point")));
            }
        }
        Ok(NullSetSpec { radix, points, stages, max_depth: DEFAULT_MAX_DEPTH })
    }

    pub fn with_max_depth(mut self, max_depth: usize) -> Self {
        self.max_depth = max_depth;
        self
    }

    pub fn radix(&self) -> &RadixSequence {
        &self.radix
    }

    pub fn points(&self) -> &[PointRule] {
        &self.points
    }

    /// `J`.
    pub fn stages(&self) -> usize {
        self.stages
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn materialize(&self, level: usize) -> Result<Vec<GroupPoint>> {
        self.points.iter().map(|p| p.materialize(&self.radix, level)).collect()
    }

    /// Index of the point equal to `x` padded with zeros, or else of the
    /// only point whose first `x.level()` digits agree with `x`.
    pub fn position_of(&self, x: &GroupPoint) -> Option<usize> {
        let probe = PointRule::digits(x.digits());
        if let Some(i) = self.points.iter().position(|p| p.same_sequence(&probe)) {
            return Some(i);
        }
        let mut hits = self
            .points
            .iter()
            .enumerate()
            .filter(|(_, p)| x.digits().iter().enumerate().all(|(k, &d)| p.digit(k) == d));
        match (hits.next(), hits.next()) {
            (Some((i, _)), None) => Some(i),
            _ => None,
        }
    }
}
