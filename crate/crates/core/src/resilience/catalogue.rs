//! Outcome catalogue and requirement derivation.
//!
//! ```text
//! outcome <id> "<outcome text>" template="<requirement template>" [parent=<id>] [source=table|appendix]
//! ```
//!
//! `{service}` in a template is replaced by the service name. `parent` places
//! the outcome under another one when a case is emitted.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::case::NodeId;
use crate::lex::{self, split_attr, LineError, LineErrors};

pub const SERVICE_PLACEHOLDER: &str = "{service}";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// Outcome and template given in full.
    Table,
    /// Only the identifier is known; texts are placeholders.
    Appendix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub id: NodeId,
    pub outcome_text: String,
    pub template: String,
    pub parent: Option<NodeId>,
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutcomeRequirement {
    pub id: NodeId,
    pub outcome_text: String,
    pub requirement_template: String,
    pub derived_text: String,
    pub parent: Option<NodeId>,
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DeriveError {
    #[error("service name must not be empty")]
    EmptyService,
}

/// At most one placeholder per sentence.
fn check_template(template: &str) -> Result<(), String> {
    let crowded = template
        .split_inclusive(['.', '!', '?'])
        .find(|sentence| sentence.matches(SERVICE_PLACEHOLDER).count() > 1);
    match crowded {
        Some(s) => Err(format!("more than one {SERVICE_PLACEHOLDER} in sentence `{}`", s.trim())),
        None => Ok(()),
    }
}

pub fn parse_catalogue(text: &str) -> Result<Vec<Outcome>, LineErrors> {
    let mut errors = Vec::new();
    let mut out: Vec<Outcome> = Vec::new();
    let mut parents = Vec::new();
    for (line, fields) in lex::lines(text, &mut errors) {
        let result: Result<(), (usize, String)> = (|| {
            if fields[0].raw != "outcome" {
                return Err((fields[0].column, format!("unknown keyword `{}`", fields[0].raw)));
            }
            if fields.len() < 4 {
                return Err((
                    fields[0].column,
                    "expected `outcome <id> \"<outcome>\" template=\"<requirement>\"`".into(),
                ));
            }
            let id = NodeId::new(fields[1].raw).map_err(|e| (fields[1].column, e.to_string()))?;
            if out.iter().any(|o| o.id == id) {
                return Err((fields[1].column, format!("duplicate outcome `{id}`")));
            }
            let outcome_text = lex::unquote(fields[2].raw).map_err(|e| (fields[2].column, e))?;
            let (mut template, mut parent, mut source) = (None, None, None);
            for f in &fields[3..] {
                let (k, v) = split_attr(f.raw).ok_or((f.column, format!("expected `key=value`, found `{}`", f.raw)))?;
                let dup = match k {
                    "template" => template
                        .replace(lex::value_text(v).map_err(|e| (f.column, e))?)
                        .is_some(),
                    "parent" => {
                        let p = NodeId::new(v).map_err(|e| (f.column, e.to_string()))?;
                        parents.push((line, f.column, p.clone()));
                        parent.replace(p).is_some()
                    }
                    "source" => {
                        let s = match v {
                            "table" => Source::Table,
                            "appendix" => Source::Appendix,
                            other => return Err((f.column, format!("unknown source `{other}` (table, appendix)"))),
                        };
                        source.replace(s).is_some()
                    }
                    other => return Err((f.column, format!("unknown attribute `{other}`"))),
                };
                if dup {
                    return Err((f.column, format!("attribute `{k}` given twice")));
                }
            }
            let template = template.ok_or((fields[1].column, "outcome needs `template=`".to_string()))?;
            check_template(&template).map_err(|e| (fields[1].column, e))?;
            out.push(Outcome {
                id,
                outcome_text,
                template,
                parent,
                source: source.unwrap_or(Source::Table),
            });
            Ok(())
        })();
        if let Err((column, message)) = result {
            errors.push(LineError::new(line, column, message));
        }
    }
    let ids: BTreeSet<&NodeId> = out.iter().map(|o| &o.id).collect();
    for (line, column, parent) in parents {
        if !ids.contains(&parent) {
            errors.push(LineError::new(line, column, format!("unknown parent outcome `{parent}`")));
        }
    }
    if errors.is_empty() {
        if let Some(o) = first_on_parent_cycle(&out) {
            errors.push(LineError::new(0, 0, format!("outcome `{o}` is its own ancestor")));
        }
    }
    if errors.is_empty() {
        Ok(out)
    } else {
        errors.sort_by_key(|e| (e.line, e.column));
        Err(LineErrors(errors))
    }
}

fn first_on_parent_cycle(outcomes: &[Outcome]) -> Option<&NodeId> {
    let parent_of = |id: &NodeId| outcomes.iter().find(|o| &o.id == id).and_then(|o| o.parent.as_ref());
    outcomes.iter().map(|o| &o.id).find(|start| {
        let mut cur = parent_of(start);
        for _ in 0..outcomes.len() {
            match cur {
                Some(p) if p == *start => return true,
                Some(p) => cur = parent_of(p),
                None => return false,
            }
        }
        false
    })
}

/// Instantiates every template with `service`, in catalogue order.
pub fn derive_requirements(catalogue: &[Outcome], service: &str) -> Result<Vec<OutcomeRequirement>, DeriveError> {
    if service.trim().is_empty() {
        return Err(DeriveError::EmptyService);
    }
    Ok(catalogue
        .iter()
        .map(|o| OutcomeRequirement {
            id: o.id.clone(),
            outcome_text: o.outcome_text.clone(),
            requirement_template: o.template.clone(),
            derived_text: o.template.replace(SERVICE_PLACEHOLDER, service),
            parent: o.parent.clone(),
            source: o.source,
        })
        .collect())
}
