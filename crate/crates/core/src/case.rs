//! Claims–arguments–evidence graph and its well-formedness rules.
//!
//! Claims are supported only through arguments. An argument links exactly one
//! top claim to one or more sub-claims or evidence items and may name a side
//! claim explaining why the supports are sufficient. Evidence is terminal.
//! Defeaters record doubts against any claim, evidence item or argument.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;
use thiserror::Error;

use crate::status::Status;

/// Identifier of a node in a case document: `[A-Za-z][A-Za-z0-9_.-]*`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct NodeId(String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid identifier `{0}`: expected a letter followed by letters, digits, `_`, `.` or `-`")]
pub struct InvalidId(pub String);

impl NodeId {
    pub fn new(value: impl Into<String>) -> Result<Self, InvalidId> {
        let value = value.into();
        if Self::is_valid(&value) {
            Ok(NodeId(value))
        } else {
            Err(InvalidId(value))
        }
    }

    pub fn is_valid(value: &str) -> bool {
        let mut chars = value.chars();
        matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for NodeId {
    type Err = InvalidId;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NodeId::new(s)
    }
}

impl AsRef<str> for NodeId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub id: NodeId,
    pub text: String,
    pub declared_status: Option<Status>,
    /// Path of another case document this claim is developed in.
    pub expands: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evidence {
    pub id: NodeId,
    pub text: String,
    pub declared_status: Option<Status>,
}

/// The five CAE argument blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockType {
    Decomposition,
    Substitution,
    EvidenceIncorporation,
    Concretion,
    Calculation,
}

impl BlockType {
    pub const ALL: [BlockType; 5] = [
        BlockType::Decomposition,
        BlockType::Substitution,
        BlockType::EvidenceIncorporation,
        BlockType::Concretion,
        BlockType::Calculation,
    ];

    /// Keyword used in `.casl` documents.
    pub fn keyword(self) -> &'static str {
        match self {
            BlockType::Decomposition => "decomposition",
            BlockType::Substitution => "substitution",
            BlockType::EvidenceIncorporation => "evidence",
            BlockType::Concretion => "concretion",
            BlockType::Calculation => "calculation",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.keyword() == word)
    }
}

impl fmt::Display for BlockType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Argument {
    pub id: NodeId,
    pub block: BlockType,
    pub top: NodeId,
    pub supports: Vec<NodeId>,
    pub side: Option<NodeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DefeaterKind {
    /// Attacks the inference from supports to claim.
    Undercut,
    /// Attacks the target directly.
    Rebuttal,
}

impl DefeaterKind {
    pub fn keyword(self) -> &'static str {
        match self {
            DefeaterKind::Undercut => "undercut",
            DefeaterKind::Rebuttal => "rebut",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        match word {
            "undercut" => Some(DefeaterKind::Undercut),
            "rebut" => Some(DefeaterKind::Rebuttal),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Defeater {
    pub id: NodeId,
    pub kind: DefeaterKind,
    pub target: NodeId,
    pub text: String,
    pub resolved: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Claim,
    Evidence,
    Argument,
    Defeater,
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NodeKind::Claim => "claim",
            NodeKind::Evidence => "evidence",
            NodeKind::Argument => "argument",
            NodeKind::Defeater => "defeater",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("duplicate identifier `{id}` (already used by a {existing})")]
pub struct DuplicateId {
    pub id: NodeId,
    pub existing: NodeKind,
}

/// An assurance case. Identifiers are unique across all node kinds.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CaseGraph {
    pub title: String,
    claims: BTreeMap<NodeId, Claim>,
    evidence: BTreeMap<NodeId, Evidence>,
    arguments: BTreeMap<NodeId, Argument>,
    defeaters: BTreeMap<NodeId, Defeater>,
}

impl CaseGraph {
    pub fn new(title: impl Into<String>) -> Self {
        CaseGraph {
            title: title.into(),
            ..Default::default()
        }
    }

    pub fn kind_of(&self, id: &NodeId) -> Option<NodeKind> {
        if self.claims.contains_key(id) {
            Some(NodeKind::Claim)
        } else if self.evidence.contains_key(id) {
            Some(NodeKind::Evidence)
        } else if self.arguments.contains_key(id) {
            Some(NodeKind::Argument)
        } else if self.defeaters.contains_key(id) {
            Some(NodeKind::Defeater)
        } else {
            None
        }
    }

    fn ensure_fresh(&self, id: &NodeId) -> Result<(), DuplicateId> {
        match self.kind_of(id) {
            Some(existing) => Err(DuplicateId {
                id: id.clone(),
                existing,
            }),
            None => Ok(()),
        }
    }

    pub fn add_claim(&mut self, claim: Claim) -> Result<(), DuplicateId> {
        self.ensure_fresh(&claim.id)?;
        self.claims.insert(claim.id.clone(), claim);
        Ok(())
    }

    pub fn add_evidence(&mut self, evidence: Evidence) -> Result<(), DuplicateId> {
        self.ensure_fresh(&evidence.id)?;
        self.evidence.insert(evidence.id.clone(), evidence);
        Ok(())
    }

    pub fn add_argument(&mut self, argument: Argument) -> Result<(), DuplicateId> {
        self.ensure_fresh(&argument.id)?;
        self.arguments.insert(argument.id.clone(), argument);
        Ok(())
    }

    pub fn add_defeater(&mut self, defeater: Defeater) -> Result<(), DuplicateId> {
        self.ensure_fresh(&defeater.id)?;
        self.defeaters.insert(defeater.id.clone(), defeater);
        Ok(())
    }

    pub fn claims(&self) -> impl Iterator<Item = &Claim> {
        self.claims.values()
    }

    pub fn evidence(&self) -> impl Iterator<Item = &Evidence> {
        self.evidence.values()
    }

    pub fn arguments(&self) -> impl Iterator<Item = &Argument> {
        self.arguments.values()
    }

    pub fn defeaters(&self) -> impl Iterator<Item = &Defeater> {
        self.defeaters.values()
    }

    pub fn claim(&self, id: &NodeId) -> Option<&Claim> {
        self.claims.get(id)
    }

    pub fn evidence_item(&self, id: &NodeId) -> Option<&Evidence> {
        self.evidence.get(id)
    }

    pub fn argument(&self, id: &NodeId) -> Option<&Argument> {
        self.arguments.get(id)
    }

    pub fn defeater(&self, id: &NodeId) -> Option<&Defeater> {
        self.defeaters.get(id)
    }

    pub fn is_empty(&self) -> bool {
        self.claims.is_empty()
            && self.evidence.is_empty()
            && self.arguments.is_empty()
            && self.defeaters.is_empty()
    }

    /// Arguments whose top claim is `claim`, in id order.
    pub fn arguments_for<'a>(&'a self, claim: &'a NodeId) -> impl Iterator<Item = &'a Argument> + 'a {
        self.arguments.values().filter(move |a| &a.top == claim)
    }

    /// Defeaters aimed at `target`, in id order.
    pub fn defeaters_on<'a>(&'a self, target: &'a NodeId) -> impl Iterator<Item = &'a Defeater> + 'a {
        self.defeaters.values().filter(move |d| &d.target == target)
    }

    /// Claims that are neither a support nor a side claim of any argument.
    pub fn roots(&self) -> Vec<&Claim> {
        let used: BTreeSet<&NodeId> = self
            .arguments
            .values()
            .flat_map(|a| a.supports.iter().chain(a.side.iter()))
            .collect();
        self.claims.values().filter(|c| !used.contains(&c.id)).collect()
    }

    /// Every evidence id reachable below `claim` through arguments (including
    /// side claims), without repetition.
    pub fn evidence_under(&self, claim: &NodeId) -> BTreeSet<NodeId> {
        let mut found = BTreeSet::new();
        let mut seen = BTreeSet::new();
        let mut stack = vec![claim.clone()];
        while let Some(node) = stack.pop() {
            if !seen.insert(node.clone()) {
                continue;
            }
            if self.evidence.contains_key(&node) {
                found.insert(node);
                continue;
            }
            for arg in self.arguments_for(&node) {
                stack.extend(arg.supports.iter().cloned());
                stack.extend(arg.side.iter().cloned());
            }
        }
        found
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// Structural rules checked by [`check_wellformed`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WellformedRule {
    EmptyText,
    EmptySupports,
    DanglingReference,
    WrongNodeKind,
    Cycle,
    StatusOnNonLeaf,
    ExpandedWithoutPath,
    ExpandsWithArguments,
    Assumption,
}

impl WellformedRule {
    pub fn id(self) -> &'static str {
        match self {
            WellformedRule::EmptyText => "empty-text",
            WellformedRule::EmptySupports => "empty-supports",
            WellformedRule::DanglingReference => "dangling-reference",
            WellformedRule::WrongNodeKind => "wrong-node-kind",
            WellformedRule::Cycle => "cycle",
            WellformedRule::StatusOnNonLeaf => "status-on-non-leaf",
            WellformedRule::ExpandedWithoutPath => "expanded-without-path",
            WellformedRule::ExpandsWithArguments => "expands-with-arguments",
            WellformedRule::Assumption => "assumption",
        }
    }

    pub fn severity(self) -> Severity {
        match self {
            WellformedRule::EmptyText
            | WellformedRule::EmptySupports
            | WellformedRule::DanglingReference
            | WellformedRule::WrongNodeKind
            | WellformedRule::Cycle => Severity::Error,
            WellformedRule::StatusOnNonLeaf
            | WellformedRule::ExpandedWithoutPath
            | WellformedRule::ExpandsWithArguments => Severity::Warning,
            WellformedRule::Assumption => Severity::Info,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub node: NodeId,
    pub rule: WellformedRule,
    pub message: String,
}

impl Diagnostic {
    fn new(node: &NodeId, rule: WellformedRule, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: rule.severity(),
            node: node.clone(),
            rule,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}] {}: {}", self.severity, self.rule.id(), self.node, self.message)
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(|d| d.severity == Severity::Error)
}

/// Reports every structural violation in `graph`, sorted by node id and then
/// rule. The graph is well-formed iff no diagnostic has error severity.
pub fn check_wellformed(graph: &CaseGraph) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    for claim in graph.claims() {
        if claim.text.trim().is_empty() {
            out.push(Diagnostic::new(&claim.id, WellformedRule::EmptyText, "claim text is empty"));
        }
        let supported = graph.arguments_for(&claim.id).next().is_some();
        if supported && claim.declared_status.is_some() {
            out.push(Diagnostic::new(
                &claim.id,
                WellformedRule::StatusOnNonLeaf,
                "declared status on a claim with supporting arguments is ignored",
            ));
        }
        if claim.declared_status == Some(Status::Expanded) && claim.expands.is_none() {
            out.push(Diagnostic::new(
                &claim.id,
                WellformedRule::ExpandedWithoutPath,
                "status purple requires an `expands` path",
            ));
        }
        match (&claim.expands, supported) {
            (Some(_), true) => out.push(Diagnostic::new(
                &claim.id,
                WellformedRule::ExpandsWithArguments,
                "claim is expanded elsewhere; its local arguments are ignored",
            )),
            (None, false) => out.push(Diagnostic::new(
                &claim.id,
                WellformedRule::Assumption,
                "claim has no supporting argument and is treated as an assumption",
            )),
            _ => {}
        }
    }

    for ev in graph.evidence() {
        if ev.text.trim().is_empty() {
            out.push(Diagnostic::new(&ev.id, WellformedRule::EmptyText, "evidence text is empty"));
        }
        if ev.declared_status == Some(Status::Expanded) {
            out.push(Diagnostic::new(
                &ev.id,
                WellformedRule::ExpandedWithoutPath,
                "evidence cannot be expanded; status purple is ignored",
            ));
        }
    }

    for arg in graph.arguments() {
        check_reference(graph, &arg.id, "top", &arg.top, &[NodeKind::Claim], &mut out);
        if arg.supports.is_empty() {
            out.push(Diagnostic::new(&arg.id, WellformedRule::EmptySupports, "argument has no supports"));
        }
        for support in &arg.supports {
            check_reference(
                graph,
                &arg.id,
                "support",
                support,
                &[NodeKind::Claim, NodeKind::Evidence],
                &mut out,
            );
        }
        if let Some(side) = &arg.side {
            check_reference(graph, &arg.id, "side claim", side, &[NodeKind::Claim], &mut out);
        }
    }

    for def in graph.defeaters() {
        if def.text.trim().is_empty() {
            out.push(Diagnostic::new(&def.id, WellformedRule::EmptyText, "defeater text is empty"));
        }
        check_reference(
            graph,
            &def.id,
            "target",
            &def.target,
            &[NodeKind::Claim, NodeKind::Evidence, NodeKind::Argument],
            &mut out,
        );
    }

    for id in nodes_on_cycles(graph) {
        out.push(Diagnostic::new(
            &id,
            WellformedRule::Cycle,
            format!("`{id}` supports itself through a cycle of arguments"),
        ));
    }

    out.sort_by(|a, b| (&a.node, a.rule, &a.message).cmp(&(&b.node, b.rule, &b.message)));
    out
}

fn check_reference(
    graph: &CaseGraph,
    owner: &NodeId,
    role: &str,
    target: &NodeId,
    allowed: &[NodeKind],
    out: &mut Vec<Diagnostic>,
) {
    match graph.kind_of(target) {
        None => out.push(Diagnostic::new(
            owner,
            WellformedRule::DanglingReference,
            format!("{role} `{target}` does not exist"),
        )),
        Some(kind) if !allowed.contains(&kind) => out.push(Diagnostic::new(
            owner,
            WellformedRule::WrongNodeKind,
            format!("{role} `{target}` is a {kind}"),
        )),
        Some(_) => {}
    }
}

/// Claims that lie on a cycle of the support relation (top -> supports and
/// top -> side claim), including self-loops.
pub fn nodes_on_cycles(graph: &CaseGraph) -> BTreeSet<NodeId> {
    let mut g: DiGraph<&NodeId, ()> = DiGraph::new();
    let mut index = BTreeMap::new();
    for claim in graph.claims() {
        index.insert(&claim.id, g.add_node(&claim.id));
    }
    let mut self_loops = BTreeSet::new();
    for arg in graph.arguments() {
        let Some(&from) = index.get(&arg.top) else {
            continue;
        };
        for child in arg.supports.iter().chain(arg.side.iter()) {
            if let Some(&to) = index.get(child) {
                if from == to {
                    self_loops.insert(child.clone());
                }
                g.update_edge(from, to, ());
            }
        }
    }
    let mut on_cycle = self_loops;
    for scc in tarjan_scc(&g) {
        if scc.len() > 1 {
            on_cycle.extend(scc.into_iter().map(|n| g[n].clone()));
        }
    }
    on_cycle
}
