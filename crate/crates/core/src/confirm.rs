//! Degree of factual support (Kemeny–Oppenheim) for claim/evidence pairs.
//!
//! For a claim `h` and evidence `e` the measure is
//!
//! ```text
//! F(h, e) = (P(e|h) - P(e|¬h)) / (P(e|h) + P(e|¬h))
//! ```
//!
//! which lies in `[-1, 1]`, is zero for irrelevant evidence, reaches 1 when the
//! evidence is impossible under the negated claim, and changes sign when the
//! claim and its negation swap roles. Scores are reported per evidence item;
//! nothing is aggregated up the case graph.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::case::{CaseGraph, NodeId};

/// Default evidential threshold for [`Grade::Deductive`].
pub const DEFAULT_THRESHOLD: f64 = 0.9;

const SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfirmError {
    #[error("probability {name}={value} is outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("joint distribution sums to {0}, expected 1")]
    NotNormalised(f64),
    #[error("cannot condition on the {0}: it has zero probability")]
    ZeroMass(&'static str),
    #[error("measure undefined: both likelihoods are zero")]
    Undefined,
    #[error("threshold {0} is outside (0, 1]")]
    Threshold(f64),
    #[error("score {0} is outside [-1, 1]")]
    ScoreRange(f64),
    #[error("unknown claim `{0}`")]
    UnknownClaim(NodeId),
}

fn check_probability(name: &'static str, value: f64) -> Result<f64, ConfirmError> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(ConfirmError::OutOfRange { name, value })
    }
}

/// Probabilities of the four (claim, evidence) outcomes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDistribution {
    pub p_h_e: f64,
    pub p_h_ne: f64,
    pub p_nh_e: f64,
    pub p_nh_ne: f64,
}

impl JointDistribution {
    pub fn new(p_h_e: f64, p_h_ne: f64, p_nh_e: f64, p_nh_ne: f64) -> Result<Self, ConfirmError> {
        let d = JointDistribution {
            p_h_e: check_probability("p_h_e", p_h_e)?,
            p_h_ne: check_probability("p_h_ne", p_h_ne)?,
            p_nh_e: check_probability("p_nh_e", p_nh_e)?,
            p_nh_ne: check_probability("p_nh_ne", p_nh_ne)?,
        };
        let sum = p_h_e + p_h_ne + p_nh_e + p_nh_ne;
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(ConfirmError::NotNormalised(sum));
        }
        Ok(d)
    }
}

/// `P(e|h)` and `P(e|¬h)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Likelihoods {
    pub p_e_h: f64,
    pub p_e_nh: f64,
}

impl Likelihoods {
    pub fn new(p_e_h: f64, p_e_nh: f64) -> Result<Self, ConfirmError> {
        Ok(Likelihoods {
            p_e_h: check_probability("p_e_h", p_e_h)?,
            p_e_nh: check_probability("p_e_nh", p_e_nh)?,
        })
    }

    /// The same evidence scored against the counter-claim.
    pub fn negated(self) -> Self {
        Likelihoods {
            p_e_h: self.p_e_nh,
            p_e_nh: self.p_e_h,
        }
    }
}

/// Conditions a joint table on the claim and on its negation.
pub fn likelihoods_from_joint(d: &JointDistribution) -> Result<Likelihoods, ConfirmError> {
    let mass_h = d.p_h_e + d.p_h_ne;
    let mass_nh = d.p_nh_e + d.p_nh_ne;
    if mass_h <= 0.0 {
        return Err(ConfirmError::ZeroMass("claim"));
    }
    if mass_nh <= 0.0 {
        return Err(ConfirmError::ZeroMass("negated claim"));
    }
    Ok(Likelihoods {
        p_e_h: d.p_h_e / mass_h,
        p_e_nh: d.p_nh_e / mass_nh,
    })
}

/// Kemeny–Oppenheim degree of factual support.
pub fn ko_measure(l: &Likelihoods) -> Result<f64, ConfirmError> {
    let denominator = l.p_e_h + l.p_e_nh;
    if denominator <= 0.0 {
        return Err(ConfirmError::Undefined);
    }
    Ok(((l.p_e_h - l.p_e_nh) / denominator).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Grade {
    /// At or above the evidential threshold: the claim may be reasoned about deductively.
    Deductive,
    Supporting,
    Neutral,
    Disconfirming,
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Grade::Deductive => "deductive",
            Grade::Supporting => "supporting",
            Grade::Neutral => "neutral",
            Grade::Disconfirming => "disconfirming",
        })
    }
}

pub fn classify(value: f64, threshold: f64) -> Result<Grade, ConfirmError> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(ConfirmError::Threshold(threshold));
    }
    if !(-1.0..=1.0).contains(&value) {
        return Err(ConfirmError::ScoreRange(value));
    }
    Ok(if value >= threshold {
        Grade::Deductive
    } else if value > 0.0 {
        Grade::Supporting
    } else if value == 0.0 {
        Grade::Neutral
    } else {
        Grade::Disconfirming
    })
}

/// A `prob` statement: likelihoods of one evidence item for one claim.
#[derive(Debug, Clone, PartialEq)]
pub struct Prob {
    pub evidence: NodeId,
    pub given: NodeId,
    pub likelihoods: Likelihoods,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfirmationResult {
    pub evidence: NodeId,
    pub claim: NodeId,
    pub value: f64,
    pub grade: Grade,
}

/// A probability record that cannot be scored against the requested claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DanglingProb {
    pub evidence: NodeId,
    pub claim: NodeId,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CaseConfirmation {
    pub results: Vec<ConfirmationResult>,
    pub dangling: Vec<DanglingProb>,
}

/// Scores every `prob` record given `claim` whose evidence sits (transitively)
/// under that claim. Records naming evidence elsewhere are reported as
/// dangling; records for other claims are ignored.
pub fn case_confirmation(
    graph: &CaseGraph,
    probs: &[Prob],
    claim: &NodeId,
    threshold: f64,
) -> Result<CaseConfirmation, ConfirmError> {
    if graph.claim(claim).is_none() {
        return Err(ConfirmError::UnknownClaim(claim.clone()));
    }
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(ConfirmError::Threshold(threshold));
    }
    let under = graph.evidence_under(claim);
    let mut out = CaseConfirmation::default();
    for prob in probs.iter().filter(|p| &p.given == claim) {
        let dangling = |message: String| DanglingProb {
            evidence: prob.evidence.clone(),
            claim: claim.clone(),
            message,
        };
        if !under.contains(&prob.evidence) {
            let message = if graph.evidence_item(&prob.evidence).is_some() {
                format!("evidence `{}` is not attached under `{claim}`", prob.evidence)
            } else {
                format!("evidence `{}` does not exist", prob.evidence)
            };
            out.dangling.push(dangling(message));
            continue;
        }
        match ko_measure(&prob.likelihoods) {
            Ok(value) => out.results.push(ConfirmationResult {
                evidence: prob.evidence.clone(),
                claim: claim.clone(),
                value,
                grade: classify(value, threshold)?,
            }),
            Err(e) => out.dangling.push(dangling(e.to_string())),
        }
    }
    Ok(out)
}
