use std::borrow::Borrow;
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::RadixSequence;
use crate::error::{Error, Result};

/// Frequency index `n = Σ n_j M_j` with its sparse digit view.
///
/// The digit list (positions ascending, zero digits omitted) is what
/// character evaluation reads, so indices far beyond machine words cost only
/// their number of nonzero digits. Comparison and hashing use the value.
#[derive(Clone, Debug)]
pub struct SpectralIndex {
    value: BigUint,
    digits: Vec<(usize, u32)>,
}

impl PartialEq for SpectralIndex {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Eq for SpectralIndex {}

impl PartialOrd for SpectralIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SpectralIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value)
    }
}

impl Hash for SpectralIndex {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state)
    }
}

impl Borrow<BigUint> for SpectralIndex {
    fn borrow(&self) -> &BigUint {
        &self.value
    }
}

impl fmt::Display for SpectralIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.value, f)
    }
}

impl SpectralIndex {
    pub fn zero() -> Self {
        SpectralIndex { value: BigUint::zero(), digits: Vec::new() }
    }

    /// Mixed-radix expansion of `value`.
    pub fn from_value(radix: &RadixSequence, value: BigUint) -> Self {
        let mut digits = Vec::new();
        if let Some(mut v) = value.to_u64() {
            let mut k = 0;
            while v != 0 {
                let m = u64::from(radix.radix(k));
                let d = (v % m) as u32;
                if d != 0 {
                    digits.push((k, d));
                }
                v /= m;
                k += 1;
            }
        } else {
            let mut v = value.clone();
            let mut k = 0;
            while !v.is_zero() {
                let (q, r) = v.div_rem(&BigUint::from(radix.radix(k)));
                let d = r.to_u32().expect("remainder below radix");
                if d != 0 {
                    digits.push((k, d));
                }
                v = q;
                k += 1;
            }
        }
        SpectralIndex { value, digits }
    }

    pub fn from_u64(radix: &RadixSequence, value: u64) -> Self {
        Self::from_value(radix, BigUint::from(value))
    }

    /// Rejects negative integers.
    pub fn from_bigint(radix: &RadixSequence, value: &BigInt) -> Result<Self> {
        match value.sign() {
            Sign::Minus => Err(Error::NegativeIndex(value.to_string())),
            _ => Ok(Self::from_value(radix, value.magnitude().clone())),
        }
    }

    /// Parses a decimal string.
    pub fn parse(radix: &RadixSequence, s: &str) -> Result<Self> {
        let v = BigInt::from_str(s.trim()).map_err(|_| Error::ParseIndex(s.to_string()))?;
        Self::from_bigint(radix, &v)
    }

    /// Builds the index from `(position, digit)` pairs; zero digits are ignored.
    pub fn from_digits<I>(radix: &RadixSequence, digits: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, u32)>,
    {
        let mut list: Vec<(usize, u32)> = Vec::new();
        for (position, digit) in digits {
            let m = radix.radix(position);
            if digit >= m {
                return Err(Error::DigitOutOfRange { position, digit, radix: m });
            }
            if digit != 0 {
                list.push((position, digit));
            }
        }
        list.sort_unstable_by_key(|&(p, _)| p);
        if list.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument("repeated digit position".into()));
        }
        Ok(Self::from_sorted_digits(radix, list))
    }

    /// Dense digit vector `(n_0, n_1, …)`.
    pub fn from_dense_digits(radix: &RadixSequence, digits: &[u32]) -> Result<Self> {
        Self::from_digits(radix, digits.iter().copied().enumerate())
    }

    fn from_sorted_digits(radix: &RadixSequence, digits: Vec<(usize, u32)>) -> Self {
        let mut value = BigUint::zero();
        let mut scale = BigUint::from(1u32);
        let mut at = 0;
        for &(p, d) in &digits {
            while at < p {
                scale *= radix.radix(at);
                at += 1;
            }
            value += &scale * d;
        }
        SpectralIndex { value, digits }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    /// Nonzero digits, positions ascending.
    pub fn digits(&self) -> &[(usize, u32)] {
        &self.digits
    }

    pub fn digit(&self, position: usize) -> u32 {
        self.digits.binary_search_by_key(&position, |&(p, _)| p).map(|i| self.digits[i].1).unwrap_or(0)
    }

    /// Digits `n_0 … n_{len-1}` including zeros.
    pub fn dense_digits(&self, len: usize) -> Vec<u32> {
        let mut out = vec![0; len];
        for &(p, d) in &self.digits {
            if p < len {
                out[p] = d;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    /// Highest nonzero digit position plus one.
    pub fn digit_len(&self) -> usize {
        self.digits.last().map_or(0, |&(p, _)| p + 1)
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.value.to_u64()
    }
}

/// `n ⊕ k`: digitwise addition modulo `m_j`.
pub fn oplus(radix: &RadixSequence, n: &SpectralIndex, k: &SpectralIndex) -> SpectralIndex {
    let (a, b) = (n.digits(), k.digits());
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    while i < a.len() || j < b.len() {
        let pa = a.get(i).map_or(usize::MAX, |x| x.0);
        let pb = b.get(j).map_or(usize::MAX, |x| x.0);
        if pa < pb {
            out.push(a[i]);
            i += 1;
        } else if pb < pa {
            out.push(b[j]);
            j += 1;
        } else {
            let m = radix.radix(pa);
            let d = (a[i].1 + b[j].1) % m;
            if d != 0 {
                out.push((pa, d));
            }
            i += 1;
            j += 1;
        }
    }
    SpectralIndex::from_sorted_digits(radix, out)
}

/// Digitwise additive inverse: `n ⊕ digit_complement(n) = 0`.
pub fn digit_complement(radix: &RadixSequence, n: &SpectralIndex) -> SpectralIndex {
    let digits = n.digits().iter().map(|&(p, d)| (p, radix.radix(p) - d)).collect();
    SpectralIndex::from_sorted_digits(radix, digits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m23() -> RadixSequence {
        RadixSequence::periodic(vec![2, 3]).unwrap()
    }

    fn idx(r: &RadixSequence, v: u64) -> SpectralIndex {
        SpectralIndex::from_u64(r, v)
    }

    #[test]
    fn to_digits_examples() {
        let r = m23();
        assert!(idx(&r, 0).digits().is_empty());
        assert_eq!(idx(&r, 5).dense_digits(3), vec![1, 2, 0]);
        assert_eq!(idx(&RadixSequence::walsh(), 6).dense_digits(4), vec![0, 1, 1, 0]);
    }

    #[test]
    fn negative_rejected() {
        let r = m23();
        assert!(matches!(SpectralIndex::from_bigint(&r, &BigInt::from(-3)), Err(Error::NegativeIndex(_))));
        assert!(SpectralIndex::parse(&r, "-5").is_err());
        assert!(SpectralIndex::parse(&r, "x1").is_err());
        assert_eq!(SpectralIndex::parse(&r, "17").unwrap(), idx(&r, 17));
    }

    #[test]
    fn from_digits_checks_range() {
        let r = m23();
        assert!(SpectralIndex::from_digits(&r, [(1, 3)]).is_err());
        let n = SpectralIndex::from_digits(&r, [(1, 2), (0, 1)]).unwrap();
        assert_eq!(n.to_u64(), Some(5));
    }

    #[test]
    fn oplus_examples() {
        let r = m23();
        let n = idx(&r, 4);
        assert_eq!(oplus(&r, &n, &SpectralIndex::zero()), n);
        assert_eq!(oplus(&r, &idx(&r, 1), &idx(&r, 3)), idx(&r, 2));
        let w = RadixSequence::walsh();
        assert_eq!(oplus(&w, &idx(&w, 1), &idx(&w, 1)), idx(&w, 0));
    }

    #[test]
    fn complement_examples() {
        let r = m23();
        assert_eq!(digit_complement(&r, &idx(&r, 0)), idx(&r, 0));
        assert_eq!(digit_complement(&r, &idx(&r, 2)), idx(&r, 4));
        let w = RadixSequence::walsh();
        for v in 0..64 {
            assert_eq!(digit_complement(&w, &idx(&w, v)), idx(&w, v));
        }
        for v in 0..200 {
            let n = idx(&r, v);
            assert!(oplus(&r, &n, &digit_complement(&r, &n)).is_zero());
        }
    }

    #[test]
    fn big_values_expand() {
        let r = m23();
        let v = BigUint::from(10u32).pow(40) + 12345u32;
        let n = SpectralIndex::from_value(&r, v.clone());
        let back = SpectralIndex::from_digits(&r, n.digits().iter().copied()).unwrap();
        assert_eq!(back.value(), &v);
    }
}
