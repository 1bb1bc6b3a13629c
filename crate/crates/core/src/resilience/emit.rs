//! Turning a verification report into a case graph.

use std::collections::BTreeMap;

use crate::case::{Argument, BlockType, CaseGraph, Claim, Evidence, NodeId};

use super::verify::{VerificationReport, VerificationRow};

/// Identifier of the top claim.
pub const ROOT_ID: &str = "G0";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmittedCase {
    pub graph: CaseGraph,
    /// Requirements without a known parent, attached directly under the root.
    pub unmapped: Vec<NodeId>,
}

fn id(raw: String) -> NodeId {
    NodeId::new(raw).expect("derived from a valid id")
}

fn evidence_text(row: &VerificationRow) -> String {
    let rec = row.record.as_ref().expect("caller checked");
    let mut text = if rec.justification.trim().is_empty() {
        format!("Verification of {}", row.requirement.id)
    } else {
        rec.justification.clone()
    };
    if !rec.specs.is_empty() {
        text.push_str(&format!(" (specs: {})", rec.specs.join(", ")));
    }
    text
}

/// One claim per requirement under `G0`, following each requirement's
/// parent. A claim with two or more children gets a decomposition argument,
/// with one child a concretion. Every record becomes an `E-<id>` evidence
/// item carrying the record's colour, attached through an evidence argument,
/// or folded into a calculation when the claim also has children.
pub fn emit_case(report: &VerificationReport) -> EmittedCase {
    let root = id(ROOT_ID.to_string());
    let mut graph = CaseGraph::new("Failure response resilience case");
    let mut unmapped = Vec::new();
    let mut children: BTreeMap<NodeId, Vec<&VerificationRow>> = BTreeMap::new();

    let root_text = report
        .row(ROOT_ID)
        .map_or_else(|| "The failure response process view is achieved.".to_string(), |r| {
            r.requirement.derived_text.clone()
        });
    graph
        .add_claim(Claim {
            id: root.clone(),
            text: root_text,
            declared_status: None,
            expands: None,
        })
        .expect("fresh graph");

    for row in &report.rows {
        let rid = &row.requirement.id;
        if rid == &root {
            continue;
        }
        let parent = match &row.requirement.parent {
            Some(p) if report.row(p.as_str()).is_some() || p == &root => p.clone(),
            _ => {
                unmapped.push(rid.clone());
                root.clone()
            }
        };
        children.entry(parent).or_default().push(row);
        graph
            .add_claim(Claim {
                id: rid.clone(),
                text: row.requirement.derived_text.clone(),
                declared_status: None,
                expands: None,
            })
            .expect("requirement ids are unique");
    }

    let claim_ids: Vec<NodeId> = graph.claims().map(|c| c.id.clone()).collect();
    for cid in claim_ids {
        let kids: Vec<NodeId> = children
            .get(&cid)
            .map(|rows| rows.iter().map(|r| r.requirement.id.clone()).collect())
            .unwrap_or_default();
        let row = report.row(cid.as_str()).filter(|r| r.record.is_some());
        let mut supports = kids.clone();
        if let Some(row) = row {
            let eid = id(format!("E-{cid}"));
            graph
                .add_evidence(Evidence {
                    id: eid.clone(),
                    text: evidence_text(row),
                    declared_status: Some(row.status),
                })
                .expect("evidence ids mirror unique claim ids");
            supports.push(eid);
        }
        let block = match (kids.len(), row.is_some()) {
            (0, false) => continue,
            (0, true) => BlockType::EvidenceIncorporation,
            (_, true) => BlockType::Calculation,
            (1, false) => BlockType::Concretion,
            (_, false) => BlockType::Decomposition,
        };
        graph
            .add_argument(Argument {
                id: id(format!("A-{cid}")),
                block,
                top: cid.clone(),
                supports,
                side: None,
            })
            .expect("argument ids mirror unique claim ids");
    }
    EmittedCase { graph, unmapped }
}
