//! Enabling, firing and log replay.

use std::fmt::{self, Write};

use serde::Serialize;

use crate::case::NodeId;

use super::format::{Event, EventLog};
use super::model::{Fingerprint, Marking, Net, Payload, Transition};

/// A transition together with the token serials bound to its input arcs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Binding {
    pub transition: NodeId,
    pub serials: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiringRecord {
    pub transition: NodeId,
    pub consumed: Vec<(NodeId, u64)>,
    pub produced: Vec<(NodeId, u64)>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FireError {
    #[error("unknown transition `{0}`")]
    UnknownTransition(NodeId),
    #[error("transition `{0}` is not enabled")]
    NotEnabled(NodeId),
    #[error("assurance check failed: `{transition}` output to `{place}` violates `{atom}`")]
    AssuranceCheck {
        transition: NodeId,
        place: NodeId,
        atom: String,
    },
    #[error("binding {serials:?} does not fit `{transition}`")]
    BadBinding { transition: NodeId, serials: Vec<u64> },
}

/// The marking described by the net's `init` lines.
pub fn initial_marking(net: &Net) -> Marking {
    Marking::from_tokens(net.initial.iter().map(|(p, payload)| (p, payload.clone())))
}

fn search(
    t: &Transition,
    marking: &Marking,
    arc: usize,
    chosen: &mut Vec<u64>,
    all: bool,
    out: &mut Vec<Vec<u64>>,
) {
    if arc == t.inputs.len() {
        out.push(chosen.clone());
        return;
    }
    let input = &t.inputs[arc];
    for token in marking.tokens(&input.place) {
        if chosen.contains(&token.serial) || !input.guard.holds(&token.payload) {
            continue;
        }
        chosen.push(token.serial);
        search(t, marking, arc + 1, chosen, all, out);
        chosen.pop();
        if !all && !out.is_empty() {
            return;
        }
    }
}

/// The deterministic binding: lowest serial first on each arc, backtracking
/// when a later arc cannot be satisfied.
pub fn binding(t: &Transition, marking: &Marking) -> Option<Vec<u64>> {
    let mut out = Vec::new();
    search(t, marking, 0, &mut Vec::new(), false, &mut out);
    out.pop()
}

/// Every binding of distinct tokens satisfying the arc guards, in
/// lexicographic serial order.
pub fn bindings(t: &Transition, marking: &Marking) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    search(t, marking, 0, &mut Vec::new(), true, &mut out);
    out
}

/// Enabled transitions with their deterministic bindings, by transition id.
pub fn enabled(net: &Net, marking: &Marking) -> Vec<Binding> {
    net.transitions
        .values()
        .filter_map(|t| {
            binding(t, marking).map(|serials| Binding {
                transition: t.id.clone(),
                serials,
            })
        })
        .collect()
}

/// Fires `transition` with its deterministic binding. The input marking is
/// never modified; on error the caller keeps it as is.
pub fn fire(net: &Net, marking: &Marking, transition: &NodeId) -> Result<(Marking, FiringRecord), FireError> {
    let t = net
        .transitions
        .get(transition)
        .ok_or_else(|| FireError::UnknownTransition(transition.clone()))?;
    let serials = binding(t, marking).ok_or_else(|| FireError::NotEnabled(transition.clone()))?;
    fire_with(net, marking, t, &serials)
}

/// Fires `t` consuming exactly the tokens in `serials`, one per input arc.
pub fn fire_with(
    net: &Net,
    marking: &Marking,
    t: &Transition,
    serials: &[u64],
) -> Result<(Marking, FiringRecord), FireError> {
    let bad = || FireError::BadBinding {
        transition: t.id.clone(),
        serials: serials.to_vec(),
    };
    if serials.len() != t.inputs.len() {
        return Err(bad());
    }
    let mut inputs: Vec<&Payload> = Vec::with_capacity(serials.len());
    for (arc, serial) in t.inputs.iter().zip(serials) {
        let token = marking
            .tokens(&arc.place)
            .iter()
            .find(|tok| tok.serial == *serial)
            .filter(|tok| arc.guard.holds(&tok.payload))
            .ok_or_else(bad)?;
        inputs.push(&token.payload);
    }
    if (1..serials.len()).any(|i| serials[..i].contains(&serials[i])) {
        return Err(bad());
    }

    let mut outputs = Vec::with_capacity(t.outputs.len());
    for arc in &t.outputs {
        let payload = arc.transform.apply(&inputs);
        if let Some(place) = net.places.get(&arc.place) {
            if let Some(atom) = place.condition.violation(&payload) {
                return Err(FireError::AssuranceCheck {
                    transition: t.id.clone(),
                    place: arc.place.clone(),
                    atom: atom.to_string(),
                });
            }
        }
        outputs.push((arc.place.clone(), payload));
    }

    let mut next = marking.clone();
    let mut consumed = Vec::with_capacity(serials.len());
    for (arc, serial) in t.inputs.iter().zip(serials) {
        if let Some(tokens) = next.places.get_mut(&arc.place) {
            tokens.retain(|tok| tok.serial != *serial);
            if tokens.is_empty() {
                next.places.remove(&arc.place);
            }
        }
        consumed.push((arc.place.clone(), *serial));
    }
    let produced = outputs
        .into_iter()
        .map(|(place, payload)| {
            let serial = next.push(&place, payload);
            (place, serial)
        })
        .collect();
    Ok((
        next,
        FiringRecord {
            transition: t.id.clone(),
            consumed,
            produced,
        },
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "event", rename_all = "lowercase")]
pub enum TraceEntry {
    Inject {
        step: usize,
        place: NodeId,
        serial: u64,
        payload: Payload,
    },
    Fire {
        step: usize,
        #[serde(flatten)]
        record: FiringRecord,
    },
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |xs: &[(NodeId, u64)]| {
            xs.iter().map(|(p, s)| format!("{p}#{s}")).collect::<Vec<_>>().join(",")
        };
        match self {
            TraceEntry::Inject { step, place, serial, payload } => {
                write!(f, "{step} inject {place}#{serial} {payload}")
            }
            TraceEntry::Fire { step, record } => write!(
                f,
                "{step} fire {} consumed={} produced={}",
                record.transition,
                list(&record.consumed),
                if record.produced.is_empty() { "-".to_string() } else { list(&record.produced) }
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
}

impl Trace {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let _ = writeln!(out, "{e}");
        }
        out
    }

    pub fn fingerprint(&self) -> Fingerprint {
        Fingerprint::of(&self.render())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReplayErrorKind {
    #[error("unknown place `{0}`")]
    UnknownPlace(NodeId),
    #[error("`{0}` is not an input place")]
    NotAnInput(NodeId),
    #[error("injected token violates `{place}` condition `{atom}`")]
    Condition { place: NodeId, atom: String },
    #[error(transparent)]
    Fire(#[from] FireError),
}

/// A replay failure at a 1-based event index (and the log's source line).
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("step {step} (line {line}): {kind}")]
pub struct ReplayError {
    pub step: usize,
    pub line: usize,
    pub kind: ReplayErrorKind,
}

/// Applies `log` to `initial` in order. Stops at the first failing event.
pub fn replay(net: &Net, initial: &Marking, log: &EventLog) -> Result<(Marking, Trace), ReplayError> {
    let mut marking = initial.clone();
    let mut trace = Trace::default();
    for (idx, (line, event)) in log.events.iter().enumerate() {
        let step = idx + 1;
        let fail = |kind| ReplayError { step, line: *line, kind };
        match event {
            Event::Inject { place, payload } => {
                let p = net
                    .places
                    .get(place)
                    .ok_or_else(|| fail(ReplayErrorKind::UnknownPlace(place.clone())))?;
                if !net.inputs.contains(place) {
                    return Err(fail(ReplayErrorKind::NotAnInput(place.clone())));
                }
                if let Some(atom) = p.condition.violation(payload) {
                    return Err(fail(ReplayErrorKind::Condition {
                        place: place.clone(),
                        atom: atom.to_string(),
                    }));
                }
                let serial = marking.push(place, payload.clone());
                trace.entries.push(TraceEntry::Inject {
                    step,
                    place: place.clone(),
                    serial,
                    payload: payload.clone(),
                });
            }
            Event::Fire { transition } => {
                let (next, record) = fire(net, &marking, transition).map_err(|e| fail(e.into()))?;
                marking = next;
                trace.entries.push(TraceEntry::Fire { step, record });
            }
        }
    }
    Ok((marking, trace))
}

/// Checks that every token satisfies its place's condition and sits in a
/// declared place. Returns the offending (place, serial) pairs.
pub fn condition_violations(net: &Net, marking: &Marking) -> Vec<(NodeId, u64)> {
    marking
        .iter()
        .filter(|(place, token)| {
            net.places
                .get(*place)
                .is_none_or(|p| !p.condition.holds(&token.payload))
        })
        .map(|(p, t)| (p.clone(), t.serial))
        .collect()
}
