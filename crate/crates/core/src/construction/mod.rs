//! The divergence construction: cover a finite point set by cylinders,
//! build flat polynomials on the blocks, choose modulation exponents,
//! assemble `f = Σ_{j≥1} ψ_{M_{β_{j+1}}} P_j`, and certify that its Fejér
//! means oscillate by nearly 1 at every point along the index pairs
//! `(M_{α_j} + M_{β_{j+1}}, (M_{α_{j+1}} + M_{β_{j+1}})³)`.

mod assemble;
mod cover;
mod divergence;
mod exponents;
mod flat;
mod nullset;

pub use assemble::{assemble, coefficient_case_split, stage_window, StageWindow};
pub use cover::{build_cover, select_blocks, CoverSchedule};
pub use divergence::{
    divergence_gap, verify_divergence, Construction, DivergenceReport, FlatCertificate, CERTIFICATE_TOLERANCE,
};
pub use exponents::{chain_comparisons, next_beta, select_exponents, ExponentPlan};
pub use flat::{flat_polynomial, FlatPolynomial, INDICATOR_EXPANSION_LIMIT};
pub use nullset::{NullSetSpec, PeriodicDigits, PointRule, DEFAULT_MAX_DEPTH};
