//! Assurance cases as claims, arguments and evidence: parsing, structural
//! checks, status roll-up, confirmation scoring, lifecycle nets and the
//! resilience analysis workflow.

pub mod blocks;
pub mod case;
pub mod confirm;
pub mod dot;
pub mod dpn;
pub mod dsl;
pub mod fixtures;
pub mod lex;
pub mod resilience;
pub mod status;

pub use blocks::{validate_blocks, BlockRule, BlockRuleDiagnostic};
pub use case::{
    check_wellformed, has_errors, Argument, BlockType, CaseGraph, Claim, Defeater, DefeaterKind, Diagnostic,
    Evidence, NodeId, NodeKind, Severity, WellformedRule,
};
pub use confirm::{case_confirmation, classify, ko_measure, likelihoods_from_joint, Grade, JointDistribution, Likelihoods};
pub use dot::emit_dot;
pub use dsl::{parse, parse_bytes, serialize, CaseDocument, ParseError, ParseErrors};
pub use status::{propagate, report, ExpansionLoader, Level, NoExpansions, Status, StatusMap, StatusReport};
