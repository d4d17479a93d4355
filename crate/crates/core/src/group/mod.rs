//! Mixed-radix arithmetic on `G_m`: radices and scales, group points,
//! cylinders, spectral indices and characters.

mod character;
mod index;
mod point;
mod radix;

pub use character::{character, character_u64, rademacher};
pub use index::{digit_complement, oplus, SpectralIndex};
pub use point::{group_add, group_negate, merge_intervals, union_measure, GroupPoint, VilenkinInterval};
pub use radix::{RadixSequence, ScaleSequence};

use num_bigint::BigUint;

/// `M_k`.
pub fn scale(radix: &RadixSequence, k: usize) -> BigUint {
    radix.scale(k)
}

/// Mixed-radix digit view of `n`.
pub fn to_digits(radix: &RadixSequence, n: &num_bigint::BigInt) -> crate::Result<SpectralIndex> {
    SpectralIndex::from_bigint(radix, n)
}

/// Inverse of [`to_digits`].
pub fn from_digits(radix: &RadixSequence, digits: &[u32]) -> crate::Result<SpectralIndex> {
    SpectralIndex::from_dense_digits(radix, digits)
}
