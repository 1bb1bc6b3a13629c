//! Service specifications: `spec SS-001 "<text>" [parent=SS-005]`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::lex::{self, split_attr, LineError, LineErrors};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ServiceSpec {
    pub id: String,
    pub text: String,
    pub parent: Option<String>,
}

/// `SS-` followed by one or more digits.
pub fn is_spec_id(id: &str) -> bool {
    id.strip_prefix("SS-")
        .is_some_and(|n| !n.is_empty() && n.bytes().all(|b| b.is_ascii_digit()))
}

pub fn parse_specs(text: &str) -> Result<Vec<ServiceSpec>, LineErrors> {
    let mut errors = Vec::new();
    let mut specs: Vec<ServiceSpec> = Vec::new();
    let mut parents = Vec::new();
    for (line, fields) in lex::lines(text, &mut errors) {
        let result: Result<(), (usize, String)> = (|| {
            if fields[0].raw != "spec" {
                return Err((fields[0].column, format!("unknown keyword `{}`", fields[0].raw)));
            }
            if !(3..=4).contains(&fields.len()) {
                return Err((fields[0].column, "expected `spec <SS-id> \"<text>\" [parent=<SS-id>]`".into()));
            }
            let id = fields[1].raw;
            if !is_spec_id(id) {
                return Err((fields[1].column, format!("`{id}` is not a service spec id (SS-<digits>)")));
            }
            if specs.iter().any(|s| s.id == id) {
                return Err((fields[1].column, format!("duplicate spec `{id}`")));
            }
            let text = lex::unquote(fields[2].raw).map_err(|e| (fields[2].column, e))?;
            let parent = match fields.get(3) {
                None => None,
                Some(f) => match split_attr(f.raw) {
                    Some(("parent", p)) if is_spec_id(p) => {
                        parents.push((line, f.column, p.to_string()));
                        Some(p.to_string())
                    }
                    _ => return Err((f.column, "expected `parent=<SS-id>`".into())),
                },
            };
            specs.push(ServiceSpec {
                id: id.to_string(),
                text,
                parent,
            });
            Ok(())
        })();
        if let Err((column, message)) = result {
            errors.push(LineError::new(line, column, message));
        }
    }
    let ids: BTreeSet<&str> = specs.iter().map(|s| s.id.as_str()).collect();
    for (line, column, parent) in parents {
        if !ids.contains(parent.as_str()) {
            errors.push(LineError::new(line, column, format!("unknown parent spec `{parent}`")));
        }
    }
    if errors.is_empty() {
        Ok(specs)
    } else {
        errors.sort_by_key(|e| (e.line, e.column));
        Err(LineErrors(errors))
    }
}
