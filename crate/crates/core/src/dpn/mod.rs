//! Dependent Petri nets used as a lifecycle workflow engine: places carry
//! conditions, tokens carry an artefact with its assurance data, transitions
//! are lifecycle stages.

mod engine;
mod format;
mod model;
mod reach;

pub use engine::{
    binding, bindings, condition_violations, enabled, fire, fire_with, initial_marking, replay, Binding,
    FireError, FiringRecord, ReplayError, ReplayErrorKind, Trace, TraceEntry,
};
pub use format::{
    check_net, format_net, parse_events, parse_guard, parse_net, parse_payload, parse_transform, Event,
    EventLog,
};
pub use model::{
    is_valid_key, Atom, Edit, Fingerprint, Guard, InputArc, Marking, Net, Op, OutputArc, Payload, Place,
    Token, Transform, Transition, Value, View, ARTEFACT_KEY,
};
pub use reach::{reachable, BoundsError, ReachResult};
