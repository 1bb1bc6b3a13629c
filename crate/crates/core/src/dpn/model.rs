use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::case::NodeId;
use crate::lex::quote;

/// Payload key naming the artefact a token carries.
pub const ARTEFACT_KEY: &str = "artefact";

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Number(f64),
    Text(String),
}

impl Value {
    /// Bare numbers (optionally negative decimals) become numbers, anything
    /// else text. Quoted literals are always text.
    pub fn from_literal(raw: &str, quoted: bool) -> Value {
        if !quoted {
            let digits = raw.strip_prefix('-').unwrap_or(raw);
            if crate::lex::is_decimal(digits) {
                if let Ok(n) = raw.parse::<f64>() {
                    return Value::Number(if n == 0.0 { 0.0 } else { n });
                }
            }
        }
        Value::Text(raw.to_string())
    }

    fn canonical(&self) -> String {
        match self {
            Value::Number(n) => n.to_string(),
            Value::Text(s) => quote(s),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(n) => write!(f, "{n}"),
            Value::Text(s) if is_bare(s) => f.write_str(s),
            Value::Text(s) => f.write_str(&quote(s)),
        }
    }
}

fn is_bare(s: &str) -> bool {
    !s.is_empty()
        && !s.chars().any(|c| c.is_whitespace() || matches!(c, '"' | ',' | '&' | '\\' | '='))
        && !matches!(Value::from_literal(s, false), Value::Number(_))
}

pub fn is_valid_key(key: &str) -> bool {
    let mut chars = key.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
}

/// An artefact together with its assurance data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Payload {
    pub artefact: String,
    pub fields: BTreeMap<String, Value>,
}

impl Payload {
    pub fn new(artefact: impl Into<String>) -> Self {
        Payload {
            artefact: artefact.into(),
            fields: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: Value) -> Self {
        self.set(key, value);
        self
    }

    /// Looks up a key; `artefact` resolves to the artefact label.
    pub fn get(&self, key: &str) -> Option<Value> {
        if key == ARTEFACT_KEY {
            Some(Value::Text(self.artefact.clone()))
        } else {
            self.fields.get(key).cloned()
        }
    }

    pub fn set(&mut self, key: &str, value: Value) {
        if key == ARTEFACT_KEY {
            self.artefact = match value {
                Value::Text(s) => s,
                other => other.to_string(),
            };
        } else {
            self.fields.insert(key.to_string(), value);
        }
    }

    pub fn remove(&mut self, key: &str) {
        self.fields.remove(key);
    }

    pub fn canonical(&self) -> String {
        let mut s = format!("{ARTEFACT_KEY}={}", quote(&self.artefact));
        for (k, v) in &self.fields {
            s.push(',');
            s.push_str(k);
            s.push('=');
            s.push_str(&v.canonical());
        }
        s
    }
}

impl fmt::Display for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{ARTEFACT_KEY}={}", Value::Text(self.artefact.clone()))?;
        for (k, v) in &self.fields {
            write!(f, ",{k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Op {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
}

impl Op {
    pub fn symbol(self) -> &'static str {
        match self {
            Op::Eq => "=",
            Op::Ne => "!=",
            Op::Ge => ">=",
            Op::Le => "<=",
        }
    }
}

/// `key op literal`. A missing key fails every operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Atom {
    pub key: String,
    pub op: Op,
    pub literal: Value,
}

impl Atom {
    pub fn holds(&self, payload: &Payload) -> bool {
        let Some(value) = payload.get(&self.key) else {
            return false;
        };
        let equal = match (&value, &self.literal) {
            (Value::Number(a), Value::Number(b)) => a == b,
            (Value::Text(a), Value::Text(b)) => a == b,
            _ => false,
        };
        match self.op {
            Op::Eq => equal,
            Op::Ne => !equal,
            Op::Ge | Op::Le => match (&value, &self.literal) {
                (Value::Number(a), Value::Number(b)) => {
                    if self.op == Op::Ge {
                        a >= b
                    } else {
                        a <= b
                    }
                }
                _ => false,
            },
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.key, self.op.symbol(), self.literal)
    }
}

/// Conjunction of atoms; the empty guard is true.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Guard {
    pub atoms: Vec<Atom>,
}

impl Guard {
    pub fn is_true(&self) -> bool {
        self.atoms.is_empty()
    }

    /// The first atom the payload violates, if any.
    pub fn violation(&self, payload: &Payload) -> Option<&Atom> {
        self.atoms.iter().find(|a| !a.holds(payload))
    }

    pub fn holds(&self, payload: &Payload) -> bool {
        self.violation(payload).is_none()
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.atoms.iter().map(Atom::to_string).collect();
        f.write_str(&parts.join("&"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Edit {
    Set { key: String, value: Value },
    /// Copy `key` from the token bound to input arc `input` (0-based).
    Copy { key: String, input: usize },
    Drop { key: String },
}

/// Edits applied left to right to a copy of the first bound input token.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Transform {
    pub edits: Vec<Edit>,
}

impl Transform {
    pub fn apply(&self, inputs: &[&Payload]) -> Payload {
        let mut out = inputs.first().map(|p| (*p).clone()).unwrap_or_else(|| Payload::new(""));
        for edit in &self.edits {
            match edit {
                Edit::Set { key, value } => out.set(key, value.clone()),
                Edit::Copy { key, input } => {
                    match inputs.get(*input).and_then(|p| p.get(key)) {
                        Some(v) => out.set(key, v),
                        None => out.remove(key),
                    }
                }
                Edit::Drop { key } => out.remove(key),
            }
        }
        out
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .edits
            .iter()
            .map(|e| match e {
                Edit::Set { key, value } => format!("{key}={value}"),
                Edit::Copy { key, input } => format!("{key}=@{input}"),
                Edit::Drop { key } => format!("-{key}"),
            })
            .collect();
        f.write_str(&parts.join("&"))
    }
}

/// The four process views of open systems dependability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum View {
    ConsensusBuilding,
    AccountabilityAchievement,
    FailureResponse,
    ChangeAccommodation,
}

impl View {
    pub const ALL: [View; 4] = [
        View::ConsensusBuilding,
        View::AccountabilityAchievement,
        View::FailureResponse,
        View::ChangeAccommodation,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            View::ConsensusBuilding => "consensus-building",
            View::AccountabilityAchievement => "accountability-achievement",
            View::FailureResponse => "failure-response",
            View::ChangeAccommodation => "change-accommodation",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.keyword() == word)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Place {
    pub id: NodeId,
    pub condition: Guard,
    pub view: Option<View>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputArc {
    pub place: NodeId,
    pub guard: Guard,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputArc {
    pub place: NodeId,
    pub transform: Transform,
}

/// A lifecycle stage.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub id: NodeId,
    pub stage: String,
    pub inputs: Vec<InputArc>,
    pub outputs: Vec<OutputArc>,
    pub view: Option<View>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Net {
    pub places: BTreeMap<NodeId, Place>,
    pub transitions: BTreeMap<NodeId, Transition>,
    /// Places that accept externally injected tokens.
    pub inputs: BTreeSet<NodeId>,
    /// Tokens present before any event, in declaration order.
    pub initial: Vec<(NodeId, Payload)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Token {
    pub serial: u64,
    pub payload: Payload,
}

/// Canonical SHA-256 of a marking's (place, payload) multiset. Serials are
/// not part of the fingerprint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint(pub [u8; 32]);

impl Fingerprint {
    pub fn of(text: &str) -> Self {
        let digest = Sha256::digest(text.as_bytes());
        let mut out = [0u8; 32];
        out.copy_from_slice(&digest);
        Fingerprint(out)
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

impl Serialize for Fingerprint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Tokens per place, each list ordered by serial.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Marking {
    pub(crate) places: BTreeMap<NodeId, Vec<Token>>,
    pub(crate) next_serial: u64,
}

impl Marking {
    pub fn new() -> Self {
        Marking {
            places: BTreeMap::new(),
            next_serial: 1,
        }
    }

    /// Adds a token with a fresh serial and returns the serial. No condition
    /// check; the engine validates before calling this.
    pub(crate) fn push(&mut self, place: &NodeId, payload: Payload) -> u64 {
        let serial = self.next_serial.max(1);
        self.next_serial = serial + 1;
        self.places.entry(place.clone()).or_default().push(Token { serial, payload });
        serial
    }

    pub fn tokens(&self, place: &NodeId) -> &[Token] {
        self.places.get(place).map_or(&[], Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NodeId, &Token)> {
        self.places.iter().flat_map(|(p, ts)| ts.iter().map(move |t| (p, t)))
    }

    pub fn token_count(&self) -> usize {
        self.places.values().map(Vec::len).sum()
    }

    pub fn max_tokens_in_a_place(&self) -> usize {
        self.places.values().map(Vec::len).max().unwrap_or(0)
    }

    /// Sorted `place|payload` lines; the fingerprint preimage.
    pub fn canonical(&self) -> String {
        let mut lines: Vec<String> = self
            .iter()
            .map(|(p, t)| format!("{p}|{}", t.payload.canonical()))
            .collect();
        lines.sort();
        lines.join("\n")
    }

    pub fn fingerprint(&self) -> Fingerprint {
        Fingerprint::of(&self.canonical())
    }

    /// Builds a marking from (place, payload) pairs, assigning serials in order.
    pub fn from_tokens<'a>(tokens: impl IntoIterator<Item = (&'a NodeId, Payload)>) -> Marking {
        let mut m = Marking::new();
        for (place, payload) in tokens {
            m.push(place, payload);
        }
        m
    }
}
