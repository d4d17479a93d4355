use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::RadixSequence;

/// Exponents `α_0 = 0 < α_1 < …` (polynomial windows) and `β_0 < β_1 < …`
/// (modulation scales).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentPlan {
    pub alphas: Vec<usize>,
    pub betas: Vec<usize>,
}

/// Upper bound on the β search past its starting point.
const BETA_SEARCH_SPAN: usize = 1 << 16;

/// The five comparisons tied to consecutive indices `j, j+1`:
///
/// 0. `α_j < β_j`
/// 1. `M_{β_j}³ < (M_{α_j} + M_{β_j})³`
/// 2. `(M_{α_j} + M_{β_j})³ < M_{α_j} + M_{β_{j+1}}`
/// 3. `M_{α_j} + M_{β_{j+1}} < M_{α_{j+1}} + M_{β_{j+1}}`
/// 4. `M_{α_{j+1}} + M_{β_{j+1}} < 2 M_{β_{j+1}}`
pub fn chain_comparisons(
    radix: &RadixSequence,
    alpha: usize,
    alpha_next: usize,
    beta: usize,
    beta_next: usize,
) -> [bool; 5] {
    let ma = radix.scale(alpha);
    let man = radix.scale(alpha_next);
    let mb = radix.scale(beta);
    let mbn = radix.scale(beta_next);
    let low = (&ma + &mb).pow(3);
    [
        alpha < beta,
        mb.pow(3) < low,
        low < &ma + &mbn,
        &ma + &mbn < &man + &mbn,
        &man + &mbn < BigUint::from(2u32) * &mbn,
    ]
}

const COMPARISON_NAMES: [&str; 5] = [
    "alpha_j < beta_j",
    "M_beta_j^3 < (M_alpha_j + M_beta_j)^3",
    "(M_alpha_j + M_beta_j)^3 < M_alpha_j + M_beta_{j+1}",
    "M_alpha_j + M_beta_{j+1} < M_alpha_{j+1} + M_beta_{j+1}",
    "M_alpha_{j+1} + M_beta_{j+1} < 2 M_beta_{j+1}",
];

/// Least `β_{j+1} > β_j` completing the chain for `j`.
pub fn next_beta(radix: &RadixSequence, alpha: usize, alpha_next: usize, beta: usize) -> Result<usize> {
    if alpha >= beta {
        return Err(Error::ChainViolation {
            stage: 0,
            detail: format!("need alpha_j < beta_j, got {alpha} >= {beta}"),
        });
    }
    let ma = radix.scale(alpha);
    let target = (&ma + radix.scale(beta)).pow(3);
    let mut b = beta + 1;
    let mut mb = radix.scale(b);
    while b <= beta + BETA_SEARCH_SPAN {
        if b > alpha_next
            && &ma + &mb > target
            && chain_comparisons(radix, alpha, alpha_next, beta, b).iter().all(|&ok| ok)
        {
            return Ok(b);
        }
        mb *= radix.radix(b);
        b += 1;
    }
    Err(Error::Infeasible(format!("no beta within {BETA_SEARCH_SPAN} of {beta}")))
}

/// Greedy-minimal `β` sequence for the given `α`s, starting from
/// `β_0 = beta0` (default `α_0 + 1`). The returned plan is re-verified.
pub fn select_exponents(radix: &RadixSequence, alphas: &[usize], beta0: Option<usize>) -> Result<ExponentPlan> {
    if alphas.len() < 2 {
        return Err(Error::InvalidArgument("need at least alpha_0 and alpha_1".into()));
    }
    let mut betas = vec![beta0.unwrap_or(alphas[0] + 1)];
    for j in 0..alphas.len() - 1 {
        let b = next_beta(radix, alphas[j], alphas[j + 1], betas[j]).map_err(|e| match e {
            Error::ChainViolation { detail, .. } => Error::ChainViolation { stage: j, detail },
            other => other,
        })?;
        betas.push(b);
    }
    let plan = ExponentPlan { alphas: alphas.to_vec(), betas };
    plan.verify(radix)?;
    Ok(plan)
}

impl ExponentPlan {
    /// Number of chain links `j = 0, …, len-2`.
    pub fn links(&self) -> usize {
        self.alphas.len().saturating_sub(1)
    }

    /// Exact re-check of the whole chain and of the monotonicity of both sequences.
    pub fn verify(&self, radix: &RadixSequence) -> Result<()> {
        if self.alphas.len() != self.betas.len() || self.alphas.len() < 2 {
            return Err(Error::ChainViolation {
                stage: 0,
                detail: format!("{} alphas vs {} betas", self.alphas.len(), self.betas.len()),
            });
        }
        if self.alphas[0] != 0 {
            return Err(Error::ChainViolation { stage: 0, detail: "alpha_0 must be 0".into() });
        }
        for j in 0..self.links() {
            if self.alphas[j] >= self.alphas[j + 1] || self.betas[j] >= self.betas[j + 1] {
                return Err(Error::ChainViolation { stage: j, detail: "exponents must increase".into() });
            }
            let checks = chain_comparisons(radix, self.alphas[j], self.alphas[j + 1], self.betas[j], self.betas[j + 1]);
            if let Some(i) = checks.iter().position(|&ok| !ok) {
                return Err(Error::ChainViolation { stage: j, detail: format!("{} fails", COMPARISON_NAMES[i]) });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // direct comparison of explicit powers of two
    fn walsh_chain_holds(a: u32, an: u32, b: u32, bn: u32) -> bool {
        let p = |e: u32| BigUint::from(2u32).pow(e);
        a < b
            && p(b).pow(3) < (p(a) + p(b)).pow(3)
            && (p(a) + p(b)).pow(3) < p(a) + p(bn)
            && p(a) + p(bn) < p(an) + p(bn)
            && p(an) + p(bn) < BigUint::from(2u32) * p(bn)
    }

    #[test]
    fn next_beta_matches_upward_search() {
        let w = RadixSequence::walsh();
        let got = next_beta(&w, 2, 10, 3).unwrap();
        let oracle = (4u32..200).find(|&b| walsh_chain_holds(2, 10, 3, b)).unwrap();
        assert_eq!(got, oracle as usize);
        assert_eq!(got, 11);
    }

    #[test]
    fn plan_for_small_alphas() {
        let w = RadixSequence::walsh();
        let plan = select_exponents(&w, &[0, 2, 3, 4], None).unwrap();
        assert_eq!(plan.betas, vec![1, 5, 16, 49]);
        for j in 0..3 {
            let (a, an, b, bn) = (plan.alphas[j], plan.alphas[j + 1], plan.betas[j], plan.betas[j + 1]);
            assert!(walsh_chain_holds(a as u32, an as u32, b as u32, bn as u32));
            // minimality
            assert!(!(b + 1..bn).any(|c| walsh_chain_holds(a as u32, an as u32, b as u32, c as u32)));
        }
    }

    #[test]
    fn equal_alpha_beta_rejected() {
        let w = RadixSequence::walsh();
        assert!(matches!(select_exponents(&w, &[0, 2], Some(0)), Err(Error::ChainViolation { .. })));
    }

    #[test]
    fn tampering_detected() {
        let w = RadixSequence::walsh();
        let mut plan = select_exponents(&w, &[0, 2, 3], None).unwrap();
        plan.verify(&w).unwrap();
        plan.betas[2] -= 1;
        assert!(matches!(plan.verify(&w), Err(Error::ChainViolation { stage: 1, .. })));
    }

    #[test]
    fn mixed_radix_chain() {
        let r = RadixSequence::periodic(vec![2, 3]).unwrap();
        let plan = select_exponents(&r, &[0, 2, 3, 4], None).unwrap();
        assert_eq!(&plan.betas[..3], &[1, 4, 13]);
    }
}
