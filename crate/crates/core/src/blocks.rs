//! Structural rules for the five CAE argument blocks.
//!
//! | block        | supports                       | side claim  |
//! |--------------|--------------------------------|-------------|
//! | decomposition| two or more, all claims        | required    |
//! | substitution | exactly one claim              | required    |
//! | evidence     | one or more, all evidence      | recommended |
//! | concretion   | exactly one claim              | required    |
//! | calculation  | one or more claims or evidence | required    |
//!
//! A missing side claim is only ever a warning: outline cases routinely leave
//! them out.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::case::{Argument, BlockType, CaseGraph, NodeId, NodeKind, Severity};

/// Closed catalogue of block rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BlockRule {
    DecompositionArity,
    DecompositionKind,
    SubstitutionArity,
    SubstitutionKind,
    EvidenceKind,
    ConcretionArity,
    ConcretionKind,
    CalculationArity,
    SideClaimMissing,
    DuplicateSupport,
    SideClaimOverlap,
}

impl BlockRule {
    pub const CATALOGUE: [BlockRule; 11] = [
        BlockRule::DecompositionArity,
        BlockRule::DecompositionKind,
        BlockRule::SubstitutionArity,
        BlockRule::SubstitutionKind,
        BlockRule::EvidenceKind,
        BlockRule::ConcretionArity,
        BlockRule::ConcretionKind,
        BlockRule::CalculationArity,
        BlockRule::SideClaimMissing,
        BlockRule::DuplicateSupport,
        BlockRule::SideClaimOverlap,
    ];

    pub fn id(self) -> &'static str {
        match self {
            BlockRule::DecompositionArity => "BR01-decomposition-arity",
            BlockRule::DecompositionKind => "BR02-decomposition-kind",
            BlockRule::SubstitutionArity => "BR03-substitution-arity",
            BlockRule::SubstitutionKind => "BR04-substitution-kind",
            BlockRule::EvidenceKind => "BR05-evidence-kind",
            BlockRule::ConcretionArity => "BR06-concretion-arity",
            BlockRule::ConcretionKind => "BR07-concretion-kind",
            BlockRule::CalculationArity => "BR08-calculation-arity",
            BlockRule::SideClaimMissing => "BR09-side-claim-missing",
            BlockRule::DuplicateSupport => "BR10-duplicate-support",
            BlockRule::SideClaimOverlap => "BR11-side-claim-overlap",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::CATALOGUE.into_iter().find(|r| r.id() == id)
    }

    pub fn severity(self) -> Severity {
        match self {
            BlockRule::SideClaimMissing => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for BlockRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl Serialize for BlockRuleDiagnostic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("BlockRuleDiagnostic", 4)?;
        st.serialize_field("argument", &self.argument)?;
        st.serialize_field("rule", self.rule.id())?;
        st.serialize_field("severity", &self.severity)?;
        st.serialize_field("message", &self.message)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockRuleDiagnostic {
    pub argument: NodeId,
    pub rule: BlockRule,
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for BlockRuleDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}] {}: {}", self.severity, self.rule, self.argument, self.message)
    }
}

/// Checks every argument against its block's rules. Sorted by argument id,
/// then rule.
pub fn validate_blocks(graph: &CaseGraph) -> Vec<BlockRuleDiagnostic> {
    let mut out = Vec::new();
    for arg in graph.arguments() {
        check_argument(graph, arg, &mut out);
    }
    out.sort_by(|a, b| (&a.argument, a.rule, &a.message).cmp(&(&b.argument, b.rule, &b.message)));
    out
}

fn check_argument(graph: &CaseGraph, arg: &Argument, out: &mut Vec<BlockRuleDiagnostic>) {
    let mut emit = |rule: BlockRule, message: String| {
        out.push(BlockRuleDiagnostic {
            argument: arg.id.clone(),
            rule,
            severity: rule.severity(),
            message,
        })
    };
    let n = arg.supports.len();
    let non_claims: Vec<&NodeId> = arg
        .supports
        .iter()
        .filter(|s| graph.kind_of(s) != Some(NodeKind::Claim))
        .collect();
    let non_evidence: Vec<&NodeId> = arg
        .supports
        .iter()
        .filter(|s| graph.kind_of(s) != Some(NodeKind::Evidence))
        .collect();
    let list = |ids: &[&NodeId]| ids.iter().map(|i| format!("`{i}`")).collect::<Vec<_>>().join(", ");

    match arg.block {
        BlockType::Decomposition => {
            if n < 2 {
                emit(
                    BlockRule::DecompositionArity,
                    format!("decomposition requires ≥2 children, found {n}"),
                );
            }
            if !non_claims.is_empty() {
                emit(
                    BlockRule::DecompositionKind,
                    format!("decomposition children must be claims: {}", list(&non_claims)),
                );
            }
        }
        BlockType::Substitution => {
            if n != 1 {
                emit(
                    BlockRule::SubstitutionArity,
                    format!("substitution requires exactly 1 claim about an equivalent object, found {n}"),
                );
            }
            if !non_claims.is_empty() {
                emit(
                    BlockRule::SubstitutionKind,
                    format!("substitution child must be a claim: {}", list(&non_claims)),
                );
            }
        }
        BlockType::EvidenceIncorporation => {
            if n == 0 {
                emit(
                    BlockRule::EvidenceKind,
                    "evidence incorporation requires at least one evidence item".to_string(),
                );
            }
            if !non_evidence.is_empty() {
                emit(
                    BlockRule::EvidenceKind,
                    format!("evidence incorporation supports must be evidence: {}", list(&non_evidence)),
                );
            }
        }
        BlockType::Concretion => {
            if n != 1 {
                emit(
                    BlockRule::ConcretionArity,
                    format!("concretion requires exactly 1 more precise claim, found {n}"),
                );
            }
            if !non_claims.is_empty() {
                emit(
                    BlockRule::ConcretionKind,
                    format!("concretion child must be a claim: {}", list(&non_claims)),
                );
            }
        }
        BlockType::Calculation => {
            if n == 0 {
                emit(
                    BlockRule::CalculationArity,
                    "calculation requires at least one claim or evidence item".to_string(),
                );
            }
        }
    }

    let mut seen = BTreeSet::new();
    let dups: BTreeSet<&NodeId> = arg.supports.iter().filter(|s| !seen.insert(*s)).collect();
    if !dups.is_empty() {
        let dups: Vec<&NodeId> = dups.into_iter().collect();
        emit(BlockRule::DuplicateSupport, format!("supports listed more than once: {}", list(&dups)));
    }

    match &arg.side {
        None => emit(
            BlockRule::SideClaimMissing,
            match arg.block {
                BlockType::EvidenceIncorporation => "side claim recommended for evidence incorporation".to_string(),
                block => format!("{block} should carry a side claim justifying the step"),
            },
        ),
        Some(side) if side == &arg.top || arg.supports.contains(side) => emit(
            BlockRule::SideClaimOverlap,
            format!("side claim `{side}` is also the top claim or a support"),
        ),
        Some(_) => {}
    }
}
