//! FRAM models: functions with six aspects and the couplings between them.
//!
//! ```text
//! function <id> "<name>" owner=<label>
//! port <function> <I|O|P|R|C|T> <name>
//! couple <function>.<output> -> <function>.<aspect>.<port>
//! ```

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::case::{NodeId, Severity};
use crate::lex::{self, split_attr, LineError, LineErrors};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Aspect {
    Input,
    Output,
    Precondition,
    Resource,
    Control,
    Time,
}

impl Aspect {
    pub const ALL: [Aspect; 6] = [
        Aspect::Input,
        Aspect::Output,
        Aspect::Precondition,
        Aspect::Resource,
        Aspect::Control,
        Aspect::Time,
    ];

    pub fn letter(self) -> char {
        match self {
            Aspect::Input => 'I',
            Aspect::Output => 'O',
            Aspect::Precondition => 'P',
            Aspect::Resource => 'R',
            Aspect::Control => 'C',
            Aspect::Time => 'T',
        }
    }

    pub fn from_letter(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| s.len() == 1 && s.starts_with(a.letter()))
    }
}

impl fmt::Display for Aspect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FramFunction {
    pub id: NodeId,
    pub name: String,
    pub owner: String,
    /// Port names per aspect, in declaration order.
    pub ports: BTreeMap<Aspect, Vec<String>>,
}

impl FramFunction {
    pub fn new(id: NodeId, name: impl Into<String>, owner: impl Into<String>) -> Self {
        FramFunction {
            id,
            name: name.into(),
            owner: owner.into(),
            ports: BTreeMap::new(),
        }
    }

    pub fn ports(&self, aspect: Aspect) -> &[String] {
        self.ports.get(&aspect).map_or(&[], Vec::as_slice)
    }

    pub fn has_port(&self, aspect: Aspect, name: &str) -> bool {
        self.ports(aspect).iter().any(|p| p == name)
    }

    /// Port names are unique across all six aspects of one function.
    pub fn add_port(&mut self, aspect: Aspect, name: impl Into<String>) -> Result<(), String> {
        let name = name.into();
        if let Some(a) = Aspect::ALL.into_iter().find(|a| self.has_port(*a, &name)) {
            return Err(format!("function `{}` already has port `{name}` ({a})", self.id));
        }
        self.ports.entry(aspect).or_default().push(name);
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FramCoupling {
    pub from_function: NodeId,
    pub from_port: String,
    pub to_function: NodeId,
    pub to_aspect: Aspect,
    pub to_port: String,
}

impl fmt::Display for FramCoupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}.{} -> {}.{}.{}",
            self.from_function, self.from_port, self.to_function, self.to_aspect, self.to_port
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FramModel {
    pub functions: Vec<FramFunction>,
    pub couplings: Vec<FramCoupling>,
}

impl FramModel {
    pub fn function(&self, id: &NodeId) -> Option<&FramFunction> {
        self.functions.iter().find(|f| &f.id == id)
    }

    pub fn owners(&self) -> BTreeSet<&str> {
        self.functions.iter().map(|f| f.owner.as_str()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FramRule {
    DanglingEndpoint,
    SelfCoupling,
    UnusedOutput,
    UnfedAspect,
    IsolatedFunction,
}

impl FramRule {
    pub fn severity(self) -> Severity {
        match self {
            FramRule::DanglingEndpoint => Severity::Error,
            _ => Severity::Warning,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FramDiagnostic {
    pub severity: Severity,
    pub rule: FramRule,
    pub subject: String,
    pub message: String,
}

impl fmt::Display for FramDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.severity, self.subject, self.message)
    }
}

/// Errors for couplings whose endpoints do not exist; warnings for self
/// couplings, outputs nothing consumes, P/R/C/T ports nothing feeds, and
/// functions with neither outputs nor incoming couplings. Input ports may
/// stay unfed: they model triggers from outside the model.
pub fn validate_fram(model: &FramModel) -> Vec<FramDiagnostic> {
    let mut out = Vec::new();
    let mut push = |rule: FramRule, subject: String, message: String| {
        out.push(FramDiagnostic {
            severity: rule.severity(),
            rule,
            subject,
            message,
        })
    };

    let mut used_outputs = BTreeSet::new();
    let mut fed = BTreeSet::new();
    for c in &model.couplings {
        let from_ok = model
            .function(&c.from_function)
            .is_some_and(|f| f.has_port(Aspect::Output, &c.from_port));
        let to_ok = c.to_aspect != Aspect::Output
            && model
                .function(&c.to_function)
                .is_some_and(|f| f.has_port(c.to_aspect, &c.to_port));
        if !from_ok || !to_ok {
            let mut missing = Vec::new();
            if !from_ok {
                missing.push(format!("source `{}.{}` is not an output port", c.from_function, c.from_port));
            }
            if !to_ok {
                missing.push(format!(
                    "target `{}.{}.{}` is not a declared port",
                    c.to_function, c.to_aspect, c.to_port
                ));
            }
            push(
                FramRule::DanglingEndpoint,
                c.to_string(),
                format!("coupling {c}: {}", missing.join("; ")),
            );
            continue;
        }
        if c.from_function == c.to_function {
            push(
                FramRule::SelfCoupling,
                c.to_string(),
                format!("function `{}` feeds itself", c.from_function),
            );
        }
        used_outputs.insert((&c.from_function, c.from_port.as_str()));
        fed.insert((&c.to_function, c.to_aspect, c.to_port.as_str()));
    }

    for f in &model.functions {
        for port in f.ports(Aspect::Output) {
            if !used_outputs.contains(&(&f.id, port.as_str())) {
                push(
                    FramRule::UnusedOutput,
                    format!("{}.{port}", f.id),
                    format!("output `{port}` of `{}` is not coupled to any function", f.id),
                );
            }
        }
        for aspect in [Aspect::Precondition, Aspect::Resource, Aspect::Control, Aspect::Time] {
            for port in f.ports(aspect) {
                if !fed.contains(&(&f.id, aspect, port.as_str())) {
                    push(
                        FramRule::UnfedAspect,
                        format!("{}.{aspect}.{port}", f.id),
                        format!("{aspect} port `{port}` of `{}` is never fed", f.id),
                    );
                }
            }
        }
        let receives = fed.iter().any(|(id, _, _)| *id == &f.id);
        if f.ports(Aspect::Output).is_empty() && !receives {
            push(
                FramRule::IsolatedFunction,
                f.id.to_string(),
                format!("`{}` has no outputs and nothing feeds it", f.id),
            );
        }
    }
    out.sort_by(|a, b| {
        (Reverse(a.severity), &a.subject, a.rule).cmp(&(Reverse(b.severity), &b.subject, b.rule))
    });
    out
}

/// Parses the FRAM line format. Port and coupling lines may precede the
/// function they name; references are resolved after the whole file is read.
pub fn parse_fram(text: &str) -> Result<FramModel, LineErrors> {
    let mut errors = Vec::new();
    let mut model = FramModel::default();
    let mut ports = Vec::new();

    for (line, fields) in lex::lines(text, &mut errors) {
        let head = &fields[0];
        let result: Result<(), (usize, String)> = (|| match head.raw {
            "function" => {
                if fields.len() != 4 {
                    return Err((head.column, "expected `function <id> \"<name>\" owner=<label>`".into()));
                }
                let id = NodeId::new(fields[1].raw).map_err(|e| (fields[1].column, e.to_string()))?;
                let name = lex::unquote(fields[2].raw).map_err(|e| (fields[2].column, e))?;
                let owner = match split_attr(fields[3].raw) {
                    Some(("owner", v)) => lex::value_text(v).map_err(|e| (fields[3].column, e))?,
                    _ => return Err((fields[3].column, "expected `owner=<label>`".into())),
                };
                if model.function(&id).is_some() {
                    return Err((fields[1].column, format!("duplicate function `{id}`")));
                }
                model.functions.push(FramFunction::new(id, name, owner));
                Ok(())
            }
            "port" => {
                if fields.len() != 4 {
                    return Err((head.column, "expected `port <function> <I|O|P|R|C|T> <name>`".into()));
                }
                let id = NodeId::new(fields[1].raw).map_err(|e| (fields[1].column, e.to_string()))?;
                let aspect = Aspect::from_letter(fields[2].raw)
                    .ok_or((fields[2].column, format!("unknown aspect `{}`", fields[2].raw)))?;
                let name = port_name(fields[3].raw).map_err(|e| (fields[3].column, e))?;
                ports.push((line, fields[1].column, id, aspect, name));
                Ok(())
            }
            "couple" => {
                if fields.len() != 4 || fields[2].raw != "->" {
                    return Err((head.column, "expected `couple <fn>.<out> -> <fn>.<aspect>.<port>`".into()));
                }
                let (from_fn, from_port) = fields[1]
                    .raw
                    .split_once('.')
                    .ok_or((fields[1].column, "expected `<function>.<output>`".to_string()))?;
                let mut to = fields[3].raw.splitn(3, '.');
                let (Some(to_fn), Some(aspect), Some(to_port)) = (to.next(), to.next(), to.next()) else {
                    return Err((fields[3].column, "expected `<function>.<aspect>.<port>`".into()));
                };
                let bad = |col: usize| move |e: crate::case::InvalidId| (col, e.to_string());
                model.couplings.push(FramCoupling {
                    from_function: NodeId::new(from_fn).map_err(bad(fields[1].column))?,
                    from_port: port_name(from_port).map_err(|e| (fields[1].column, e))?,
                    to_function: NodeId::new(to_fn).map_err(bad(fields[3].column))?,
                    to_aspect: Aspect::from_letter(aspect)
                        .ok_or((fields[3].column, format!("unknown aspect `{aspect}`")))?,
                    to_port: port_name(to_port).map_err(|e| (fields[3].column, e))?,
                });
                Ok(())
            }
            other => Err((head.column, format!("unknown keyword `{other}`"))),
        })();
        if let Err((column, message)) = result {
            errors.push(LineError::new(line, column, message));
        }
    }

    for (line, column, id, aspect, name) in ports {
        match model.functions.iter_mut().find(|f| f.id == id) {
            Some(f) => {
                if let Err(e) = f.add_port(aspect, name) {
                    errors.push(LineError::new(line, column, e));
                }
            }
            None => errors.push(LineError::new(line, column, format!("unknown function `{id}`"))),
        }
    }

    if errors.is_empty() {
        Ok(model)
    } else {
        errors.sort_by_key(|e| (e.line, e.column));
        Err(LineErrors(errors))
    }
}

fn port_name(raw: &str) -> Result<String, String> {
    if !raw.is_empty() && raw.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-')) {
        Ok(raw.to_string())
    } else {
        Err(format!("invalid port name `{raw}`"))
    }
}
