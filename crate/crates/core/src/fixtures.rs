//! Packaged example inputs: the delivery-service analysis and a generic
//! autonomous-vehicle case template.

/// Template case: top claim decomposed into four claims and their sub-claims.
pub const TEMPLATE_CASE: &str = include_str!("../fixtures/vehicle_template.casl");
/// Failure response outcome catalogue with requirement templates.
pub const OUTCOMES: &str = include_str!("../fixtures/failure_response.outcomes");
/// Verification results for the delivery service.
pub const RECORDS: &str = include_str!("../fixtures/delivery.records");
/// Preliminary service specifications.
pub const SPECS: &str = include_str!("../fixtures/delivery.specs");
/// Initial FRAM model of the delivery service.
pub const FRAM_INITIAL: &str = include_str!("../fixtures/delivery_initial.fram");
/// FRAM model after the analysis loop, with placeholder functions.
pub const FRAM_IMPROVED: &str = include_str!("../fixtures/delivery_improved.fram");
/// Six-place delivery lifecycle net.
pub const DELIVERY_NET: &str = include_str!("../fixtures/delivery.dpnl");
/// Event log serving one order through the delivery net.
pub const DELIVERY_LOG: &str = include_str!("../fixtures/delivery.evl");

/// Service name used throughout the delivery fixtures.
pub const SERVICE: &str = "autonomous delivery service";
/// Failure response case emitted from the outcome catalogue and records.
pub const FAILURE_RESPONSE_CASE: &str = include_str!("../fixtures/failure_response.casl");
