//! `.dpnl` nets and `.evl` event logs.
//!
//! ```text
//! place <id> [view=<view>] [cond=<key><op><literal>[&...]]
//! transition <id> stage="<label>" in=<place>[:<guard>][,...] [out=<place>[:<transform>][,...]] [view=<view>]
//! input <place>
//! init <place> <key>=<value>[,...]
//! ```
//!
//! Guard operators are `=`, `!=`, `>=` and `<=`. A transform is a `&`-separated
//! edit list applied to a copy of the first bound input token: `key=literal`
//! sets, `key=@N` copies `key` from the token bound to input arc `N` (0-based),
//! `-key` drops. Event logs hold `inject <place> <key>=<value>[,...]` and
//! `fire <transition>` lines. Every payload names its `artefact`.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::case::NodeId;
use crate::lex::{self, split_attr, split_unquoted, Field, LineError, LineErrors};

use super::model::{
    is_valid_key, Atom, Edit, Guard, InputArc, Net, Op, OutputArc, Payload, Place, Transform, Transition,
    Value, View, ARTEFACT_KEY,
};

#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    Inject { place: NodeId, payload: Payload },
    Fire { transition: NodeId },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EventLog {
    /// Events with the source line they came from.
    pub events: Vec<(usize, Event)>,
}

impl EventLog {
    pub fn new(events: impl IntoIterator<Item = Event>) -> Self {
        EventLog {
            events: events.into_iter().enumerate().map(|(i, e)| (i + 1, e)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

fn literal(raw: &str) -> Result<Value, String> {
    if raw.starts_with('"') {
        lex::unquote(raw).map(Value::Text)
    } else if raw.is_empty() {
        Err("empty literal".into())
    } else if raw.contains('"') {
        Err(format!("stray quote in `{raw}`"))
    } else {
        Ok(Value::from_literal(raw, false))
    }
}

fn key(raw: &str) -> Result<String, String> {
    if is_valid_key(raw) {
        Ok(raw.to_string())
    } else {
        Err(format!("invalid key `{raw}`"))
    }
}

pub fn parse_guard(raw: &str) -> Result<Guard, String> {
    if raw.is_empty() {
        return Ok(Guard::default());
    }
    let mut atoms = Vec::new();
    for part in split_unquoted(raw, '&') {
        let (idx, op) = ["!=", ">=", "<="]
            .iter()
            .zip([Op::Ne, Op::Ge, Op::Le])
            .filter_map(|(sym, op)| part.find(sym).map(|i| (i, (op, sym.len()))))
            .min_by_key(|(i, _)| *i)
            .or_else(|| part.find('=').map(|i| (i, (Op::Eq, 1))))
            .ok_or_else(|| format!("`{part}` is not `key op literal`"))?;
        let (op, width) = op;
        let k = key(&part[..idx])?;
        let lit = literal(&part[idx + width..])?;
        if matches!(op, Op::Ge | Op::Le) && !matches!(lit, Value::Number(_)) {
            return Err(format!("`{part}`: {} needs a numeric literal", op.symbol()));
        }
        atoms.push(Atom { key: k, op, literal: lit });
    }
    Ok(Guard { atoms })
}

pub fn parse_transform(raw: &str) -> Result<Transform, String> {
    if raw.is_empty() {
        return Ok(Transform::default());
    }
    let mut edits = Vec::new();
    for part in split_unquoted(raw, '&') {
        if let Some(k) = part.strip_prefix('-') {
            let k = key(k)?;
            if k == ARTEFACT_KEY {
                return Err("the artefact cannot be dropped".into());
            }
            edits.push(Edit::Drop { key: k });
            continue;
        }
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| format!("`{part}` is not `key=literal`, `key=@N` or `-key`"))?;
        let k = key(k)?;
        match v.strip_prefix('@') {
            Some(n) => {
                let input = n.parse::<usize>().map_err(|_| format!("`{part}`: bad input index"))?;
                edits.push(Edit::Copy { key: k, input });
            }
            None => edits.push(Edit::Set {
                key: k,
                value: literal(v)?,
            }),
        }
    }
    Ok(Transform { edits })
}

/// `k=v[,k=v...]` spread over one or more fields; `artefact` is required.
pub fn parse_payload(fields: &[Field<'_>]) -> Result<Payload, (usize, String)> {
    let mut artefact = None;
    let mut values = BTreeMap::new();
    for field in fields {
        for part in split_unquoted(field.raw, ',') {
            let (k, v) = split_attr(part).ok_or((field.column, format!("`{part}` is not `key=value`")))?;
            let k = key(k).map_err(|e| (field.column, e))?;
            let v = literal(v).map_err(|e| (field.column, e))?;
            let duplicate = if k == ARTEFACT_KEY {
                let text = match v {
                    Value::Text(s) => s,
                    other => other.to_string(),
                };
                artefact.replace(text).is_some()
            } else {
                values.insert(k.clone(), v).is_some()
            };
            if duplicate {
                return Err((field.column, format!("key `{k}` given twice")));
            }
        }
    }
    let column = fields.first().map_or(1, |f| f.column);
    match artefact {
        Some(a) if !a.is_empty() => Ok(Payload {
            artefact: a,
            fields: values,
        }),
        _ => Err((column, "payload needs a non-empty `artefact=`".into())),
    }
}

fn node_id(raw: &str, what: &str) -> Result<NodeId, String> {
    NodeId::new(raw).map_err(|e| format!("{what}: {e}"))
}

fn view(raw: &str) -> Result<View, String> {
    View::from_keyword(raw).ok_or_else(|| {
        format!("unknown view `{raw}` (consensus-building, accountability-achievement, failure-response, change-accommodation)")
    })
}

struct Attrs<'t> {
    map: BTreeMap<&'t str, (&'t str, usize)>,
}

impl<'t> Attrs<'t> {
    fn collect(fields: &[Field<'t>], allowed: &[&str]) -> Result<Self, (usize, String)> {
        let mut map = BTreeMap::new();
        for f in fields {
            let (k, v) = split_attr(f.raw).ok_or((f.column, format!("expected `key=value`, found `{}`", f.raw)))?;
            if !allowed.contains(&k) {
                return Err((f.column, format!("unknown attribute `{k}`")));
            }
            if map.insert(k, (v, f.column)).is_some() {
                return Err((f.column, format!("attribute `{k}` given twice")));
            }
        }
        Ok(Attrs { map })
    }

    fn get(&self, k: &str) -> Option<(&'t str, usize)> {
        self.map.get(k).copied()
    }
}

/// Parses a `.dpnl` net and validates its references.
pub fn parse_net(text: &str) -> Result<Net, LineErrors> {
    let mut errors = Vec::new();
    let mut net = Net::default();
    let mut pending_inputs = Vec::new();
    let mut pending_init = Vec::new();

    for (line, fields) in lex::lines(text, &mut errors) {
        let head = &fields[0];
        let rest = &fields[1..];
        let result: Result<(), (usize, String)> = (|| {
            let id_field = rest.first().ok_or((head.column, format!("`{}` needs an id", head.raw)))?;
            let id = |what| node_id(id_field.raw, what).map_err(|e| (id_field.column, e));
            match head.raw {
                "place" => {
                    let id = id("place id")?;
                    let attrs = Attrs::collect(&rest[1..], &["view", "cond"])?;
                    let condition = match attrs.get("cond") {
                        Some((raw, col)) => parse_guard(raw).map_err(|e| (col, e))?,
                        None => Guard::default(),
                    };
                    let view = attrs.get("view").map(|(raw, col)| view(raw).map_err(|e| (col, e))).transpose()?;
                    if net.places.contains_key(&id) {
                        return Err((id_field.column, format!("duplicate place `{id}`")));
                    }
                    net.places.insert(id.clone(), Place { id, condition, view });
                }
                "transition" => {
                    let id = id("transition id")?;
                    let attrs = Attrs::collect(&rest[1..], &["stage", "in", "out", "view"])?;
                    let stage = match attrs.get("stage") {
                        Some((raw, col)) => lex::value_text(raw).map_err(|e| (col, e))?,
                        None => return Err((id_field.column, "transition needs `stage=`".into())),
                    };
                    let (in_raw, in_col) = attrs.get("in").ok_or((id_field.column, "transition needs `in=`".to_string()))?;
                    let mut inputs = Vec::new();
                    for arc in split_unquoted(in_raw, ',') {
                        let (place, guard) = arc.split_once(':').unwrap_or((arc, ""));
                        inputs.push(InputArc {
                            place: node_id(place, "input place").map_err(|e| (in_col, e))?,
                            guard: parse_guard(guard).map_err(|e| (in_col, e))?,
                        });
                    }
                    let mut outputs = Vec::new();
                    if let Some((out_raw, out_col)) = attrs.get("out") {
                        for arc in split_unquoted(out_raw, ',') {
                            let (place, transform) = arc.split_once(':').unwrap_or((arc, ""));
                            outputs.push(OutputArc {
                                place: node_id(place, "output place").map_err(|e| (out_col, e))?,
                                transform: parse_transform(transform).map_err(|e| (out_col, e))?,
                            });
                        }
                    }
                    let view = attrs.get("view").map(|(raw, col)| view(raw).map_err(|e| (col, e))).transpose()?;
                    if net.transitions.contains_key(&id) {
                        return Err((id_field.column, format!("duplicate transition `{id}`")));
                    }
                    net.transitions.insert(id.clone(), Transition { id, stage, inputs, outputs, view });
                }
                "input" => {
                    if rest.len() > 1 {
                        return Err((rest[1].column, "unexpected field".into()));
                    }
                    pending_inputs.push((line, id_field.column, id("input place")?));
                }
                "init" => {
                    let place = id("init place")?;
                    let payload = parse_payload(&rest[1..])?;
                    pending_init.push((line, id_field.column, place, payload));
                }
                other => return Err((head.column, format!("unknown keyword `{other}`"))),
            }
            Ok(())
        })();
        if let Err((column, message)) = result {
            errors.push(LineError::new(line, column, message));
        }
    }

    for (line, column, place) in pending_inputs {
        if net.places.contains_key(&place) {
            net.inputs.insert(place);
        } else {
            errors.push(LineError::new(line, column, format!("unknown input place `{place}`")));
        }
    }
    for (line, column, place, payload) in pending_init {
        match net.places.get(&place) {
            None => errors.push(LineError::new(line, column, format!("unknown place `{place}`"))),
            Some(p) => match p.condition.violation(&payload) {
                Some(atom) => errors.push(LineError::new(
                    line,
                    column,
                    format!("initial token violates `{place}` condition `{atom}`"),
                )),
                None => net.initial.push((place, payload)),
            },
        }
    }
    errors.extend(check_net(&net).into_iter().map(|m| LineError::new(0, 0, m)));

    if errors.is_empty() {
        Ok(net)
    } else {
        errors.sort_by_key(|e| (e.line == 0, e.line, e.column));
        Err(LineErrors(errors))
    }
}

/// Structural checks on a net: arcs reference declared places, every
/// transition has inputs, copy edits name an existing input arc.
pub fn check_net(net: &Net) -> Vec<String> {
    let mut out = Vec::new();
    for t in net.transitions.values() {
        if t.inputs.is_empty() {
            out.push(format!("transition `{}` has no inputs", t.id));
        }
        for arc in &t.inputs {
            if !net.places.contains_key(&arc.place) {
                out.push(format!("transition `{}` reads unknown place `{}`", t.id, arc.place));
            }
        }
        for arc in &t.outputs {
            if !net.places.contains_key(&arc.place) {
                out.push(format!("transition `{}` writes unknown place `{}`", t.id, arc.place));
            }
            for edit in &arc.transform.edits {
                if let Edit::Copy { key, input } = edit {
                    if *input >= t.inputs.len() {
                        out.push(format!(
                            "transition `{}` copies `{key}` from input {input} but has {} input(s)",
                            t.id,
                            t.inputs.len()
                        ));
                    }
                }
            }
        }
    }
    out
}

pub fn parse_events(text: &str) -> Result<EventLog, LineErrors> {
    let mut errors = Vec::new();
    let mut log = EventLog::default();
    for (line, fields) in lex::lines(text, &mut errors) {
        let head = &fields[0];
        let result: Result<Event, (usize, String)> = (|| {
            let id_field = fields.get(1).ok_or((head.column, format!("`{}` needs an id", head.raw)))?;
            match head.raw {
                "inject" => Ok(Event::Inject {
                    place: node_id(id_field.raw, "place").map_err(|e| (id_field.column, e))?,
                    payload: parse_payload(&fields[2..])?,
                }),
                "fire" => {
                    if let Some(extra) = fields.get(2) {
                        return Err((extra.column, "unexpected field".into()));
                    }
                    Ok(Event::Fire {
                        transition: node_id(id_field.raw, "transition").map_err(|e| (id_field.column, e))?,
                    })
                }
                other => Err((head.column, format!("unknown event `{other}`"))),
            }
        })();
        match result {
            Ok(event) => log.events.push((line, event)),
            Err((column, message)) => errors.push(LineError::new(line, column, message)),
        }
    }
    if errors.is_empty() {
        Ok(log)
    } else {
        Err(LineErrors(errors))
    }
}

/// Renders a net back to `.dpnl`.
pub fn format_net(net: &Net) -> String {
    let mut out = String::new();
    for p in net.places.values() {
        let _ = write!(out, "place {}", p.id);
        if let Some(v) = p.view {
            let _ = write!(out, " view={}", v.keyword());
        }
        if !p.condition.is_true() {
            let _ = write!(out, " cond={}", p.condition);
        }
        out.push('\n');
    }
    for i in &net.inputs {
        let _ = writeln!(out, "input {i}");
    }
    for (place, payload) in &net.initial {
        let _ = writeln!(out, "init {place} {payload}");
    }
    for t in net.transitions.values() {
        let arcs_in: Vec<String> = t
            .inputs
            .iter()
            .map(|a| if a.guard.is_true() { a.place.to_string() } else { format!("{}:{}", a.place, a.guard) })
            .collect();
        let _ = write!(out, "transition {} stage={} in={}", t.id, lex::quote(&t.stage), arcs_in.join(","));
        if !t.outputs.is_empty() {
            let arcs_out: Vec<String> = t
                .outputs
                .iter()
                .map(|a| {
                    if a.transform.edits.is_empty() {
                        a.place.to_string()
                    } else {
                        format!("{}:{}", a.place, a.transform)
                    }
                })
                .collect();
            let _ = write!(out, " out={}", arcs_out.join(","));
        }
        if let Some(v) = t.view {
            let _ = write!(out, " view={}", v.keyword());
        }
        out.push('\n');
    }
    out
}
