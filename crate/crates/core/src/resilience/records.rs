//! Verification records:
//! `record <req-id> status=<colour> [revise=requirements|specs] [specs=SS-..,SS-..] "<justification>"`.

use serde::Serialize;

use crate::case::NodeId;
use crate::lex::{self, split_attr, split_unquoted, LineError, LineErrors};
use crate::status::Status;

use super::specs::is_spec_id;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Revise {
    Requirements,
    Specs,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationRecord {
    pub requirement: NodeId,
    pub status: Status,
    pub justification: String,
    pub specs: Vec<String>,
    pub revise: Option<Revise>,
}

/// Colours a verification can conclude with.
pub const RECORD_STATUSES: [Status; 4] = [Status::Satisfied, Status::Partial, Status::StandardsAssumed, Status::Deferred];

pub fn parse_records(text: &str) -> Result<Vec<VerificationRecord>, LineErrors> {
    let mut errors = Vec::new();
    let mut out = Vec::new();
    for (line, fields) in lex::lines(text, &mut errors) {
        let result: Result<VerificationRecord, (usize, String)> = (|| {
            if fields[0].raw != "record" {
                return Err((fields[0].column, format!("unknown keyword `{}`", fields[0].raw)));
            }
            let id_field = fields.get(1).ok_or((fields[0].column, "record needs a requirement id".to_string()))?;
            let requirement = NodeId::new(id_field.raw).map_err(|e| (id_field.column, e.to_string()))?;
            let (mut status, mut revise, mut specs, mut justification) = (None, None, None, None);
            for f in &fields[2..] {
                if f.raw.starts_with('"') {
                    let text = lex::unquote(f.raw).map_err(|e| (f.column, e))?;
                    if justification.replace(text).is_some() {
                        return Err((f.column, "justification given twice".into()));
                    }
                    continue;
                }
                let (k, v) = split_attr(f.raw).ok_or((f.column, format!("expected `key=value`, found `{}`", f.raw)))?;
                let dup = match k {
                    "status" => {
                        let s = Status::from_colour(v)
                            .filter(|s| RECORD_STATUSES.contains(s))
                            .ok_or((f.column, format!("record status must be green, orange, yellow or red, found `{v}`")))?;
                        status.replace(s).is_some()
                    }
                    "revise" => {
                        let r = match v {
                            "requirements" => Revise::Requirements,
                            "specs" => Revise::Specs,
                            other => return Err((f.column, format!("unknown revise target `{other}` (requirements, specs)"))),
                        };
                        revise.replace(r).is_some()
                    }
                    "specs" => {
                        let list: Vec<String> = split_unquoted(v, ',').into_iter().map(str::to_string).collect();
                        if let Some(bad) = list.iter().find(|s| !is_spec_id(s)) {
                            return Err((f.column, format!("`{bad}` is not a service spec id")));
                        }
                        specs.replace(list).is_some()
                    }
                    other => return Err((f.column, format!("unknown attribute `{other}`"))),
                };
                if dup {
                    return Err((f.column, format!("attribute `{k}` given twice")));
                }
            }
            Ok(VerificationRecord {
                requirement,
                status: status.ok_or((id_field.column, "record needs `status=`".to_string()))?,
                justification: justification.unwrap_or_default(),
                specs: specs.unwrap_or_default(),
                revise,
            })
        })();
        match result {
            Ok(r) => out.push(r),
            Err((column, message)) => errors.push(LineError::new(line, column, message)),
        }
    }
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(LineErrors(errors))
    }
}

/// Renders records back to the line format.
pub fn format_records(records: &[VerificationRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&format!("record {} status={}", r.requirement, r.status.colour()));
        if let Some(rev) = r.revise {
            out.push_str(match rev {
                Revise::Requirements => " revise=requirements",
                Revise::Specs => " revise=specs",
            });
        }
        if !r.specs.is_empty() {
            out.push_str(&format!(" specs={}", r.specs.join(",")));
        }
        out.push(' ');
        out.push_str(&lex::quote(&r.justification));
        out.push('\n');
    }
    out
}
