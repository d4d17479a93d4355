use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Generator `m = (m_0, m_1, …)` of a bounded Vilenkin group.
///
/// Stored as a finite prefix followed by a period that repeats forever, so
/// every position `k` has a radix without unbounded storage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RadixRepr", into = "RadixRepr")]
pub struct RadixSequence {
    prefix: Vec<u32>,
    period: Vec<u32>,
    bound: u32,
    // lcm of every radix, when it fits; characters use it as a common phase denominator
    phase_modulus: Option<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RadixRepr {
    #[serde(default)]
    prefix: Vec<u32>,
    period: Vec<u32>,
}

impl TryFrom<RadixRepr> for RadixSequence {
    type Error = Error;

    fn try_from(r: RadixRepr) -> Result<Self> {
        RadixSequence::new(r.prefix, r.period)
    }
}

impl From<RadixSequence> for RadixRepr {
    fn from(r: RadixSequence) -> Self {
        RadixRepr { prefix: r.prefix, period: r.period }
    }
}

impl RadixSequence {
    pub fn new(prefix: Vec<u32>, period: Vec<u32>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidRadix("period must be non-empty".into()));
        }
        if let Some(&bad) = prefix.iter().chain(&period).find(|&&m| m < 2) {
            return Err(Error::InvalidRadix(format!("radix {bad} is below 2")));
        }
        let bound = prefix.iter().chain(&period).copied().max().unwrap_or(2);
        let mut lcm: Option<u64> = Some(1);
        for &m in prefix.iter().chain(&period) {
            lcm = lcm.and_then(|l| {
                let m = u64::from(m);
                (l / l.gcd(&m)).checked_mul(m).filter(|&next| next <= 1 << 62)
            });
        }
        Ok(RadixSequence { prefix, period, bound, phase_modulus: lcm })
    }

    /// `m ≡ 2`, the Walsh–Paley configuration.
    pub fn walsh() -> Self {
        Self::constant(2).expect("2 is a valid radix")
    }

    pub fn constant(m: u32) -> Result<Self> {
        Self::new(Vec::new(), vec![m])
    }

    pub fn periodic(period: Vec<u32>) -> Result<Self> {
        Self::new(Vec::new(), period)
    }

    pub fn prefix(&self) -> &[u32] {
        &self.prefix
    }

    pub fn period(&self) -> &[u32] {
        &self.period
    }

    /// Supremum of all radices.
    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn is_walsh(&self) -> bool {
        self.bound == 2
    }

    pub(crate) fn phase_modulus(&self) -> Option<u64> {
        self.phase_modulus
    }

    /// `m_k`.
    #[inline]
    pub fn radix(&self, k: usize) -> u32 {
        match self.prefix.get(k) {
            Some(&m) => m,
            None => self.period[(k - self.prefix.len()) % self.period.len()],
        }
    }

    /// `M_k = m_0 · … · m_{k-1}`, exactly.
    pub fn scale(&self, k: usize) -> BigUint {
        (0..k).fold(BigUint::one(), |acc, i| acc * self.radix(i))
    }

    /// `M_k` as a machine integer, if it fits.
    pub fn scale_u64(&self, k: usize) -> Option<u64> {
        (0..k).try_fold(1u64, |acc, i| acc.checked_mul(u64::from(self.radix(i))))
    }

    /// Number of cells at level `k`, guarded for dense work.
    pub fn cell_count(&self, k: usize) -> Result<usize> {
        self.scale_u64(k)
            .and_then(|m| usize::try_from(m).ok())
            .ok_or_else(|| Error::InvalidArgument(format!("M_{k} does not fit in memory")))
    }

    /// Smallest `k` with `M_k = n`, if `n` is a scale.
    pub fn level_of(&self, n: u64) -> Option<usize> {
        let mut acc = 1u64;
        let mut k = 0;
        while acc < n {
            acc = acc.checked_mul(u64::from(self.radix(k)))?;
            k += 1;
        }
        (acc == n).then_some(k)
    }

    pub fn scales(&self, depth: usize) -> ScaleSequence {
        ScaleSequence::new(self, depth)
    }
}

/// Precomputed scales `M_0, …, M_depth`.
#[derive(Clone, Debug)]
pub struct ScaleSequence {
    values: Vec<BigUint>,
}

impl ScaleSequence {
    pub fn new(radix: &RadixSequence, depth: usize) -> Self {
        let mut values = Vec::with_capacity(depth + 1);
        values.push(BigUint::one());
        for k in 0..depth {
            let next = &values[k] * radix.radix(k);
            values.push(next);
        }
        ScaleSequence { values }
    }

    pub fn depth(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, k: usize) -> &BigUint {
        &self.values[k]
    }

    pub fn as_slice(&self) -> &[BigUint] {
        &self.values
    }
}
