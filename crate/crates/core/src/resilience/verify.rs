//! Pairing derived requirements with verification records.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::case::NodeId;
use crate::status::Status;

use super::catalogue::OutcomeRequirement;
use super::records::VerificationRecord;
use super::specs::ServiceSpec;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationRow {
    pub requirement: OutcomeRequirement,
    /// The record's colour, or white when nothing was recorded.
    pub status: Status,
    pub record: Option<VerificationRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyWarning {
    pub requirement: NodeId,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    /// One row per requirement, in requirement order.
    pub rows: Vec<VerificationRow>,
    pub warnings: Vec<VerifyWarning>,
}

impl VerificationReport {
    pub fn row(&self, id: &str) -> Option<&VerificationRow> {
        self.rows.iter().find(|r| r.requirement.id.as_str() == id)
    }

    pub fn count(&self, status: Status) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }

    /// Requirements that name `id` as their parent, in row order.
    pub fn children_of(&self, id: &NodeId) -> Vec<&VerificationRow> {
        self.rows
            .iter()
            .filter(|r| r.requirement.parent.as_ref() == Some(id))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("record for unknown requirement `{0}`")]
    UnknownRequirement(NodeId),
    #[error("requirement `{0}` has more than one record")]
    DuplicateRecord(NodeId),
    #[error("record for `{requirement}` cites unknown spec `{spec}`")]
    UnknownSpec { requirement: NodeId, spec: String },
}

/// Builds the report. Spec references are only resolved when `specs` is
/// given. A green record citing no spec is reported as unsupported.
pub fn verify(
    requirements: &[OutcomeRequirement],
    records: &[VerificationRecord],
    specs: Option<&[ServiceSpec]>,
) -> Result<VerificationReport, VerifyError> {
    let known: BTreeSet<&NodeId> = requirements.iter().map(|r| &r.id).collect();
    let spec_ids: Option<BTreeSet<&str>> = specs.map(|s| s.iter().map(|s| s.id.as_str()).collect());
    let mut by_id: BTreeMap<&NodeId, &VerificationRecord> = BTreeMap::new();
    for rec in records {
        if !known.contains(&rec.requirement) {
            return Err(VerifyError::UnknownRequirement(rec.requirement.clone()));
        }
        if by_id.insert(&rec.requirement, rec).is_some() {
            return Err(VerifyError::DuplicateRecord(rec.requirement.clone()));
        }
        if let Some(ids) = &spec_ids {
            if let Some(bad) = rec.specs.iter().find(|s| !ids.contains(s.as_str())) {
                return Err(VerifyError::UnknownSpec {
                    requirement: rec.requirement.clone(),
                    spec: bad.clone(),
                });
            }
        }
    }

    let mut report = VerificationReport::default();
    for req in requirements {
        let record = by_id.get(&req.id).map(|r| (*r).clone());
        if let Some(r) = &record {
            if r.status == Status::Satisfied && r.specs.is_empty() {
                report.warnings.push(VerifyWarning {
                    requirement: req.id.clone(),
                    message: "unsupported satisfaction: green record cites no service specification".into(),
                });
            }
        }
        report.rows.push(VerificationRow {
            requirement: req.clone(),
            status: record.as_ref().map_or(Status::Unevaluated, |r| r.status),
            record,
        });
    }
    Ok(report)
}
