//! The dimension gate k > 2r + 2 and the chain of dynamical-degree
//! equalities behind it.
//!
//! When every center has dimension at most r and k > 2r + 2, every
//! automorphism of the blow-up has zero entropy. The chain report replays
//! the argument on a candidate action: for an automorphism λ_1^j = λ_j for
//! j ≤ k-r-1, and duality then forces λ_1^((k-r-1)^2) = λ_1^((r+1)^2).

use std::fmt;

use num_rational::BigRational;

use crate::action::PullbackAction;
use crate::error::{Error, Result};
use crate::spectral::{dynamical_degrees, equal, DegreeSequence, Entropy, Product, Truth};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GateVerdict {
    AllAutomorphismsZeroEntropy { k: usize, r: usize },
    Inconclusive { k: usize, r: usize, reason: String },
}

impl GateVerdict {
    pub fn is_forced(&self) -> bool {
        matches!(self, GateVerdict::AllAutomorphismsZeroEntropy { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateVerdict::AllAutomorphismsZeroEntropy { .. } => "AllAutomorphismsZeroEntropy",
            GateVerdict::Inconclusive { .. } => "Inconclusive",
        }
    }

    pub fn k(&self) -> usize {
        match self {
            GateVerdict::AllAutomorphismsZeroEntropy { k, .. } | GateVerdict::Inconclusive { k, .. } => *k,
        }
    }

    pub fn r(&self) -> usize {
        match self {
            GateVerdict::AllAutomorphismsZeroEntropy { r, .. } | GateVerdict::Inconclusive { r, .. } => *r,
        }
    }
}

impl fmt::Display for GateVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Needs only k and the center dimensions, so it applies to arbitrary
/// smooth centers, not just the linear ones the ring model covers.
pub fn decide(k: usize, center_dims: &[usize]) -> Result<GateVerdict> {
    if k < 2 {
        return Err(Error::InvalidConfig(format!("dimension must be at least 2, got {k}")));
    }
    if let Some(&bad) = center_dims.iter().find(|&&r| r + 2 > k) {
        return Err(Error::InvalidConfig(format!(
            "center of dimension {bad} does not have codimension at least 2 in P^{k}"
        )));
    }
    let r = center_dims.iter().copied().max().unwrap_or(0);
    Ok(if k > 2 * r + 2 {
        GateVerdict::AllAutomorphismsZeroEntropy { k, r }
    } else {
        let reason = if k == 2 {
            format!(
                "k = {k} is not greater than 2r + 2 = {}; blow-ups of P^2 in ten or more points carry automorphisms of positive entropy",
                2 * r + 2
            )
        } else {
            format!(
                "k = {k} is not greater than 2r + 2 = {}; the dimension bound does not apply and positive entropy is not excluded",
                2 * r + 2
            )
        };
        GateVerdict::Inconclusive { k, r, reason }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainCheck {
    pub statement: String,
    pub truth: Truth,
}

/// The action has positive entropy on a variety where every automorphism
/// has zero entropy, so it is not the pullback of an automorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonRealizability {
    pub k: usize,
    pub r: usize,
    pub entropy_lower_bound: BigRational,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct ChainReport {
    pub gate: GateVerdict,
    pub forward: DegreeSequence,
    pub backward: DegreeSequence,
    /// λ_1^j = λ_j for f, 1 ≤ j ≤ k-r-1.
    pub forward_powers: Vec<ChainCheck>,
    /// The same for f^-1.
    pub backward_powers: Vec<ChainCheck>,
    /// Consecutive links of the five-term chain.
    pub chain: Vec<ChainCheck>,
    /// λ_1^((k-r-1)^2) = λ_1^((r+1)^2).
    pub conclusion: ChainCheck,
    pub certificate: Option<NonRealizability>,
}

impl ChainReport {
    pub fn entropy(&self) -> &Entropy {
        &self.forward.entropy
    }

    pub fn all_checks(&self) -> impl Iterator<Item = &ChainCheck> {
        self.forward_powers
            .iter()
            .chain(&self.backward_powers)
            .chain(&self.chain)
            .chain(std::iter::once(&self.conclusion))
    }
}

/// Certificate rule: only a forced gate together with certified positive
/// entropy yields one.
pub fn certify(gate: &GateVerdict, entropy: &Entropy) -> Option<NonRealizability> {
    match gate {
        GateVerdict::AllAutomorphismsZeroEntropy { k, r } if entropy.is_positive() => Some(NonRealizability {
            k: *k,
            r: *r,
            entropy_lower_bound: entropy.lo.clone(),
            message: format!(
                "entropy > 0 but every automorphism of a blow-up of P^{k} along centers of dimension <= {r} has zero entropy"
            ),
        }),
        _ => None,
    }
}

fn power_checks(seq: &DegreeSequence, s: usize, name: &str) -> Vec<ChainCheck> {
    (1..=s)
        .map(|j| ChainCheck {
            statement: format!("λ_1({name})^{j} = λ_{j}({name})"),
            truth: equal(&Product::pow(seq.get(1), j as u32), &Product::of(seq.get(j))),
        })
        .collect()
}

pub fn proof_chain_report(action: &PullbackAction, tol: &BigRational) -> Result<ChainReport> {
    let ring = action.ring();
    let k = ring.k();
    let gate = decide(k, ring.config().centers())?;
    let r = gate.r();
    let forward = dynamical_degrees(action, tol)?;
    let backward = dynamical_degrees(&action.inverse()?, tol)?;
    let s = k - r - 1;
    let forward_powers = power_checks(&forward, s, "f");
    let backward_powers = power_checks(&backward, s, "f^-1");

    let (su, ru) = (s as u32, (r + 1) as u32);
    let terms: Vec<(String, Product)> = vec![
        (format!("λ_{s}(f)^{s}"), Product::pow(forward.get(s), su)),
        (format!("λ_{}(f^-1)^{s}", r + 1), Product::pow(backward.get(r + 1), su)),
        (format!("λ_1(f^-1)^{}", s * (r + 1)), Product::pow(backward.get(1), su * ru)),
        (format!("λ_{s}(f^-1)^{}", r + 1), Product::pow(backward.get(s), ru)),
        (format!("λ_{}(f)^{}", r + 1, r + 1), Product::pow(forward.get(r + 1), ru)),
    ];
    let chain = terms
        .windows(2)
        .map(|w| ChainCheck { statement: format!("{} = {}", w[0].0, w[1].0), truth: equal(&w[0].1, &w[1].1) })
        .collect();
    let conclusion = ChainCheck {
        statement: format!("λ_1(f)^{} = λ_1(f)^{}", s * s, (r + 1) * (r + 1)),
        truth: equal(&Product::pow(forward.get(1), su * su), &Product::pow(forward.get(1), ru * ru)),
    };
    let certificate = certify(&gate, &forward.entropy);
    Ok(ChainReport { gate, forward, backward, forward_powers, backward_powers, chain, conclusion, certificate })
}

/// Every (k, r) with 2 ≤ k ≤ max_k and 0 ≤ r ≤ k-2, with the verdict.
pub fn gate_table(max_k: usize) -> Vec<(usize, usize, bool)> {
    let mut out = vec![];
    for k in 2..=max_k {
        for r in 0..=k - 2 {
            let forced = decide(k, &[r]).map(|v| v.is_forced()).unwrap_or(false);
            out.push((k, r, forced));
        }
    }
    out
}
