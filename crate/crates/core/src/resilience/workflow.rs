//! The seven-step analysis loop.

use std::fmt;

use serde::Serialize;

use crate::status::Status;

use super::records::Revise;
use super::verify::VerificationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum WorkflowState {
    S1UnderstandOutcomes,
    S2DeriveRequirements,
    S3Verify,
    S4Evaluate,
    S5DevelopAndOperate,
    S6ReviseRequirements,
    S7ReviseSpecs,
}

use WorkflowState::*;

impl WorkflowState {
    pub const ALL: [WorkflowState; 7] = [
        S1UnderstandOutcomes,
        S2DeriveRequirements,
        S3Verify,
        S4Evaluate,
        S5DevelopAndOperate,
        S6ReviseRequirements,
        S7ReviseSpecs,
    ];

    /// Every permitted step.
    pub const EDGES: [(WorkflowState, WorkflowState); 8] = [
        (S1UnderstandOutcomes, S2DeriveRequirements),
        (S2DeriveRequirements, S3Verify),
        (S3Verify, S4Evaluate),
        (S4Evaluate, S5DevelopAndOperate),
        (S4Evaluate, S6ReviseRequirements),
        (S4Evaluate, S7ReviseSpecs),
        (S6ReviseRequirements, S3Verify),
        (S7ReviseSpecs, S3Verify),
    ];

    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn is_terminal(self) -> bool {
        self == S5DevelopAndOperate
    }
}

impl fmt::Display for WorkflowState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            S1UnderstandOutcomes => "understand outcomes",
            S2DeriveRequirements => "derive requirements",
            S3Verify => "verify",
            S4Evaluate => "evaluate",
            S5DevelopAndOperate => "develop and operate",
            S6ReviseRequirements => "revise requirements",
            S7ReviseSpecs => "revise specifications",
        };
        write!(f, "S{} {name}", self.number())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WorkflowError {
    #[error("{0} is terminal")]
    Terminal(WorkflowState),
}

/// Whether evaluation may proceed to development: every requirement is
/// green, or carries a justification and no revision request. Requirements
/// with children and no record of their own are judged through those
/// children.
pub fn outcomes_accepted(report: &VerificationReport) -> bool {
    report.rows.iter().all(|row| match &row.record {
        Some(rec) => {
            rec.revise.is_none() && (rec.status == Status::Satisfied || !rec.justification.trim().is_empty())
        }
        None => !report.children_of(&row.requirement.id).is_empty(),
    })
}

pub fn advance(state: WorkflowState, report: &VerificationReport) -> Result<WorkflowState, WorkflowError> {
    Ok(match state {
        S1UnderstandOutcomes => S2DeriveRequirements,
        S2DeriveRequirements => S3Verify,
        S3Verify => S4Evaluate,
        S4Evaluate if outcomes_accepted(report) => S5DevelopAndOperate,
        S4Evaluate => {
            let revise_requirements = report
                .rows
                .iter()
                .filter_map(|r| r.record.as_ref())
                .any(|r| r.revise == Some(Revise::Requirements));
            if revise_requirements {
                S6ReviseRequirements
            } else {
                S7ReviseSpecs
            }
        }
        S5DevelopAndOperate => return Err(WorkflowError::Terminal(state)),
        S6ReviseRequirements | S7ReviseSpecs => S3Verify,
    })
}
