//! GSN node colours, effective-status roll-up and status reports.
//!
//! Roll-up order, weakest first: white < red < orange < yellow < green.
//! An argument is as strong as its weakest support (including its side
//! claim); a claim takes its strongest argument. Purple marks a claim
//! developed in another document and is never an effective status: it is
//! resolved through the expansion. Unresolved defeaters cap their target,
//! undercuts at orange and rebuttals at red.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::case::{CaseGraph, DefeaterKind, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// White: not yet evaluated.
    Unevaluated,
    /// Purple: developed in another case document.
    Expanded,
    /// Green: fully met by the current specifications.
    Satisfied,
    /// Orange: partially met, further work required.
    Partial,
    /// Yellow: met on the assumption that other safety standards are applied.
    StandardsAssumed,
    /// Red: not met; further development or operation-phase evaluation needed.
    Deferred,
}

impl Status {
    pub const ALL: [Status; 6] = [
        Status::Unevaluated,
        Status::Expanded,
        Status::Satisfied,
        Status::Partial,
        Status::StandardsAssumed,
        Status::Deferred,
    ];

    pub fn colour(self) -> &'static str {
        match self {
            Status::Unevaluated => "white",
            Status::Expanded => "purple",
            Status::Satisfied => "green",
            Status::Partial => "orange",
            Status::StandardsAssumed => "yellow",
            Status::Deferred => "red",
        }
    }

    pub fn from_colour(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.colour() == word)
    }

    /// Position in the roll-up order; `None` for purple.
    pub fn level(self) -> Option<Level> {
        match self {
            Status::Unevaluated => Some(Level::Unevaluated),
            Status::Deferred => Some(Level::Deferred),
            Status::Partial => Some(Level::Partial),
            Status::StandardsAssumed => Some(Level::StandardsAssumed),
            Status::Satisfied => Some(Level::Satisfied),
            Status::Expanded => None,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.colour())
    }
}

/// The totally ordered part of [`Status`] used for roll-up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Unevaluated,
    Deferred,
    Partial,
    StandardsAssumed,
    Satisfied,
}

impl Level {
    pub const ALL: [Level; 5] = [
        Level::Unevaluated,
        Level::Deferred,
        Level::Partial,
        Level::StandardsAssumed,
        Level::Satisfied,
    ];

    pub fn status(self) -> Status {
        match self {
            Level::Unevaluated => Status::Unevaluated,
            Level::Deferred => Status::Deferred,
            Level::Partial => Status::Partial,
            Level::StandardsAssumed => Status::StandardsAssumed,
            Level::Satisfied => Status::Satisfied,
        }
    }

    /// Ceiling imposed by an unresolved defeater of the given kind.
    pub fn defeater_cap(kind: DefeaterKind) -> Level {
        match kind {
            DefeaterKind::Undercut => Level::Partial,
            DefeaterKind::Rebuttal => Level::Deferred,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Declared,
    RolledUp,
    Expanded,
    CappedByDefeater,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Declared => "declared",
            Provenance::RolledUp => "rolled-up",
            Provenance::Expanded => "expanded",
            Provenance::CappedByDefeater => "capped-by-defeater",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Effective {
    pub level: Level,
    pub provenance: Provenance,
}

impl Effective {
    pub fn status(&self) -> Status {
        self.level.status()
    }
}

/// Effective status of every claim and evidence item of one case.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StatusMap {
    entries: BTreeMap<NodeId, Effective>,
}

impl StatusMap {
    pub fn get(&self, id: &NodeId) -> Option<&Effective> {
        self.entries.get(id)
    }

    pub fn status(&self, id: &NodeId) -> Option<Status> {
        self.get(id).map(Effective::status)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NodeId, &Effective)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatusError {
    #[error("cannot load expansion `{path}`: {reason}")]
    MissingExpansion { path: String, reason: String },
    #[error("expansion cycle: {}", chain.join(" -> "))]
    ExpansionCycle { chain: Vec<String> },
    #[error("expansion `{path}` has {found} root claims; exactly one is required")]
    ExpansionRoot { path: String, found: usize },
    #[error("support relation is cyclic at `{0}`")]
    Cyclic(NodeId),
}

/// Resolves `expands` paths to case documents.
pub trait ExpansionLoader {
    fn load(&self, path: &str) -> Result<CaseGraph, String>;
}

impl<F> ExpansionLoader for F
where
    F: Fn(&str) -> Result<CaseGraph, String>,
{
    fn load(&self, path: &str) -> Result<CaseGraph, String> {
        self(path)
    }
}

/// Loader for cases without expansions; any lookup fails.
pub struct NoExpansions;

impl ExpansionLoader for NoExpansions {
    fn load(&self, path: &str) -> Result<CaseGraph, String> {
        Err(format!("no loader configured for `{path}`"))
    }
}

/// Computes the effective status of every claim and evidence item.
pub fn propagate(graph: &CaseGraph, loader: &dyn ExpansionLoader) -> Result<StatusMap, StatusError> {
    let mut expansions = HashMap::new();
    let mut chain = Vec::new();
    propagate_in(graph, loader, &mut expansions, &mut chain)
}

fn propagate_in(
    graph: &CaseGraph,
    loader: &dyn ExpansionLoader,
    expansions: &mut HashMap<String, Level>,
    chain: &mut Vec<String>,
) -> Result<StatusMap, StatusError> {
    let mut eval = Evaluator {
        graph,
        loader,
        expansions,
        chain,
        memo: HashMap::new(),
        visiting: Vec::new(),
    };
    let mut entries = BTreeMap::new();
    for ev in graph.evidence() {
        entries.insert(ev.id.clone(), eval.node(&ev.id)?);
    }
    for claim in graph.claims() {
        entries.insert(claim.id.clone(), eval.node(&claim.id)?);
    }
    Ok(StatusMap { entries })
}

struct Evaluator<'g, 'c> {
    graph: &'g CaseGraph,
    loader: &'c dyn ExpansionLoader,
    expansions: &'c mut HashMap<String, Level>,
    chain: &'c mut Vec<String>,
    memo: HashMap<NodeId, Effective>,
    visiting: Vec<NodeId>,
}

impl Evaluator<'_, '_> {
    fn node(&mut self, id: &NodeId) -> Result<Effective, StatusError> {
        if let Some(done) = self.memo.get(id) {
            return Ok(*done);
        }
        if self.visiting.contains(id) {
            return Err(StatusError::Cyclic(id.clone()));
        }
        self.visiting.push(id.clone());
        let raw = self.uncapped(id)?;
        self.visiting.pop();
        let eff = self.cap(id, raw);
        self.memo.insert(id.clone(), eff);
        Ok(eff)
    }

    fn uncapped(&mut self, id: &NodeId) -> Result<Effective, StatusError> {
        let graph = self.graph;
        if let Some(ev) = graph.evidence_item(id) {
            return Ok(declared(ev.declared_status));
        }
        let Some(claim) = graph.claim(id) else {
            // Dangling reference; unknowns are pessimistic.
            return Ok(declared(None));
        };
        if let Some(path) = &claim.expands {
            let level = self.expansion(path)?;
            return Ok(Effective {
                level,
                provenance: Provenance::Expanded,
            });
        }
        let mut best: Option<Level> = None;
        for arg in graph.arguments_for(id) {
            let mut weakest = Level::Satisfied;
            for child in arg.supports.iter().chain(arg.side.iter()) {
                weakest = weakest.min(self.node(child)?.level);
            }
            let rolled = cap_level(graph, &arg.id, weakest).0;
            best = Some(best.map_or(rolled, |b| b.max(rolled)));
        }
        Ok(match best {
            Some(level) => Effective {
                level,
                provenance: Provenance::RolledUp,
            },
            None => declared(claim.declared_status),
        })
    }

    fn cap(&self, id: &NodeId, eff: Effective) -> Effective {
        let (level, capped) = cap_level(self.graph, id, eff.level);
        if capped {
            Effective {
                level,
                provenance: Provenance::CappedByDefeater,
            }
        } else {
            eff
        }
    }

    fn expansion(&mut self, path: &str) -> Result<Level, StatusError> {
        if let Some(level) = self.expansions.get(path) {
            return Ok(*level);
        }
        if self.chain.iter().any(|p| p == path) {
            let mut chain = self.chain.clone();
            chain.push(path.to_string());
            return Err(StatusError::ExpansionCycle { chain });
        }
        let sub = self.loader.load(path).map_err(|reason| StatusError::MissingExpansion {
            path: path.to_string(),
            reason,
        })?;
        let roots = sub.roots();
        if roots.len() != 1 {
            return Err(StatusError::ExpansionRoot {
                path: path.to_string(),
                found: roots.len(),
            });
        }
        let root = roots[0].id.clone();
        self.chain.push(path.to_string());
        let map = propagate_in(&sub, self.loader, self.expansions, self.chain);
        self.chain.pop();
        let level = map?.get(&root).map(|e| e.level).unwrap_or(Level::Unevaluated);
        self.expansions.insert(path.to_string(), level);
        Ok(level)
    }
}

fn declared(status: Option<Status>) -> Effective {
    Effective {
        level: status.and_then(Status::level).unwrap_or(Level::Unevaluated),
        provenance: Provenance::Declared,
    }
}

/// Applies unresolved defeaters on `id`; reports whether the level dropped.
fn cap_level(graph: &CaseGraph, id: &NodeId, level: Level) -> (Level, bool) {
    let capped = graph
        .defeaters_on(id)
        .filter(|d| !d.resolved)
        .map(|d| Level::defeater_cap(d.kind))
        .fold(level, Level::min);
    (capped, capped < level)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub id: NodeId,
    pub text: String,
    pub status: Status,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatusReport {
    pub rows: Vec<ReportRow>,
    /// Row count per colour in [`Status::ALL`] order.
    pub counts: Vec<(Status, usize)>,
}

impl StatusReport {
    pub fn count(&self, status: Status) -> usize {
        self.counts
            .iter()
            .find(|(s, _)| *s == status)
            .map_or(0, |(_, n)| *n)
    }
}

/// Tabulates a status map as rows sorted by id, with per-colour counts.
pub fn report(map: &StatusMap, graph: &CaseGraph) -> StatusReport {
    let rows: Vec<ReportRow> = map
        .iter()
        .map(|(id, eff)| {
            let text = graph
                .claim(id)
                .map(|c| c.text.clone())
                .or_else(|| graph.evidence_item(id).map(|e| e.text.clone()))
                .unwrap_or_default();
            ReportRow {
                id: id.clone(),
                text,
                status: eff.status(),
                provenance: eff.provenance,
            }
        })
        .collect();
    let counts = Status::ALL
        .into_iter()
        .map(|s| (s, rows.iter().filter(|r| r.status == s).count()))
        .collect();
    StatusReport { rows, counts }
}
