//! Resilience analysis of a service: FRAM models, outcome-derived
//! requirements, their verification against service specifications, case
//! emission and the analysis loop.

mod catalogue;
mod emit;
mod fram;
mod records;
mod specs;
mod verify;
mod workflow;

pub use catalogue::{
    derive_requirements, parse_catalogue, DeriveError, Outcome, OutcomeRequirement, Source, SERVICE_PLACEHOLDER,
};
pub use emit::{emit_case, EmittedCase, ROOT_ID};
pub use fram::{parse_fram, validate_fram, Aspect, FramCoupling, FramDiagnostic, FramFunction, FramModel, FramRule};
pub use records::{format_records, parse_records, Revise, VerificationRecord, RECORD_STATUSES};
pub use specs::{is_spec_id, parse_specs, ServiceSpec};
pub use verify::{verify, VerificationReport, VerificationRow, VerifyError, VerifyWarning};
pub use workflow::{advance, outcomes_accepted, WorkflowError, WorkflowState};
