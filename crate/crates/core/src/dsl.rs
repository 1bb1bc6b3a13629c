//! The `.casl` line format for assurance cases.
//!
//! ```text
//! case "<title>"
//! claim <id> "<text>" [status=<colour>] [expands=<path>]
//! evidence <id> "<text>" [status=<colour>]
//! argument <id> block=<decomposition|substitution|evidence|concretion|calculation> claim=<id> from=<id>[,<id>...] [side=<id>]
//! defeater <id> kind=<undercut|rebut> target=<id> "<text>" [resolved=<true|false>]
//! prob <evidence-id> given=<claim-id> p_e_h=<decimal> p_e_nh=<decimal>
//! ```
//!
//! One statement per line, `#` starts a comment, blank lines are ignored.
//! Parsing collects every error in a single pass.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::case::{
    check_wellformed, has_errors, Argument, BlockType, CaseGraph, Claim, Defeater, DefeaterKind,
    Diagnostic, Evidence, NodeId,
};
use crate::confirm::{Likelihoods, Prob};
use crate::lex::{self, quote, split_attr, split_fields, unquote, Field};
use crate::status::Status;

/// A parsed case document: the graph plus its confirmation inputs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CaseDocument {
    pub graph: CaseGraph,
    pub probs: Vec<Prob>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StatementKind {
    CaseHeader,
    Claim,
    Evidence,
    Argument,
    Defeater,
    Prob,
}

impl StatementKind {
    fn from_keyword(word: &str) -> Option<Self> {
        Some(match word {
            "case" => StatementKind::CaseHeader,
            "claim" => StatementKind::Claim,
            "evidence" => StatementKind::Evidence,
            "argument" => StatementKind::Argument,
            "defeater" => StatementKind::Defeater,
            "prob" => StatementKind::Prob,
            _ => return None,
        })
    }

    fn allowed_attributes(self) -> &'static [&'static str] {
        match self {
            StatementKind::CaseHeader => &[],
            StatementKind::Claim => &["status", "expands"],
            StatementKind::Evidence => &["status"],
            StatementKind::Argument => &["block", "claim", "from", "side"],
            StatementKind::Defeater => &["kind", "target", "resolved"],
            StatementKind::Prob => &["given", "p_e_h", "p_e_nh"],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub raw: String,
    pub column: usize,
}

/// One line of a document, split into positional fields and attributes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub line: usize,
    pub kind: StatementKind,
    pub positional: Vec<Token>,
    pub attributes: BTreeMap<String, Token>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParseErrorKind {
    Encoding,
    Lexical,
    UnknownKeyword,
    MalformedAttribute,
    MissingField,
    DuplicateId,
    DuplicateHeader,
    BadProbability,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

/// All errors found in one document.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} parse error(s); first: {}", .0.len(), .0[0])]
pub struct ParseErrors(pub Vec<ParseError>);

fn error(line: usize, column: usize, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        kind,
        message: message.into(),
    }
}

/// First pass: lexes each line into a [`Statement`].
pub fn statements(text: &str) -> (Vec<Statement>, Vec<ParseError>) {
    let mut out = Vec::new();
    let mut errors = Vec::new();
    for (idx, line) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let fields = match split_fields(line) {
            Ok(f) => f,
            Err(e) => {
                errors.push(error(line_no, e.column, ParseErrorKind::Lexical, e.message));
                continue;
            }
        };
        let Some((head, rest)) = fields.split_first() else {
            continue;
        };
        let Some(kind) = StatementKind::from_keyword(head.raw) else {
            errors.push(error(
                line_no,
                head.column,
                ParseErrorKind::UnknownKeyword,
                format!("unknown keyword `{}`", head.raw),
            ));
            continue;
        };
        match split_statement(line_no, kind, rest) {
            Ok(stmt) => out.push(stmt),
            Err(mut e) => errors.append(&mut e),
        }
    }
    (out, errors)
}

fn split_statement(line: usize, kind: StatementKind, fields: &[Field<'_>]) -> Result<Statement, Vec<ParseError>> {
    let mut positional = Vec::new();
    let mut attributes = BTreeMap::new();
    let mut errors = Vec::new();
    for field in fields {
        let token = |raw: &str| Token {
            raw: raw.to_string(),
            column: field.column,
        };
        match split_attr(field.raw).filter(|_| !field.raw.starts_with('"')) {
            Some((key, value)) => {
                if !kind.allowed_attributes().contains(&key) {
                    errors.push(error(
                        line,
                        field.column,
                        ParseErrorKind::MalformedAttribute,
                        format!("unknown attribute `{key}`"),
                    ));
                } else if attributes.insert(key.to_string(), token(value)).is_some() {
                    errors.push(error(
                        line,
                        field.column,
                        ParseErrorKind::MalformedAttribute,
                        format!("attribute `{key}` given twice"),
                    ));
                }
            }
            None => positional.push(token(field.raw)),
        }
    }
    if errors.is_empty() {
        Ok(Statement {
            line,
            kind,
            positional,
            attributes,
        })
    } else {
        Err(errors)
    }
}

/// Accumulates field-level errors while a statement is interpreted.
struct Fields<'s> {
    stmt: &'s Statement,
    errors: Vec<ParseError>,
}

impl<'s> Fields<'s> {
    fn err(&mut self, column: usize, kind: ParseErrorKind, message: impl Into<String>) {
        self.errors.push(error(self.stmt.line, column, kind, message));
    }

    fn end_column(&self) -> usize {
        let last_pos = self.stmt.positional.iter().map(|t| t.column + t.raw.chars().count());
        let last_attr = self.stmt.attributes.iter().map(|(k, t)| t.column + k.len() + 1 + t.raw.chars().count());
        last_pos.chain(last_attr).max().unwrap_or(1)
    }

    fn positional_count(&mut self, expected: usize) {
        if let Some(extra) = self.stmt.positional.get(expected) {
            let column = extra.column;
            self.err(column, ParseErrorKind::MalformedAttribute, format!("unexpected field `{}`", extra.raw));
        }
    }

    fn id_at(&mut self, index: usize, what: &str) -> Option<NodeId> {
        let Some(tok) = self.stmt.positional.get(index) else {
            let column = self.end_column();
            self.err(column, ParseErrorKind::MissingField, format!("missing {what}"));
            return None;
        };
        self.parse_id(&tok.raw, tok.column, what)
    }

    fn parse_id(&mut self, raw: &str, column: usize, what: &str) -> Option<NodeId> {
        match NodeId::new(raw) {
            Ok(id) => Some(id),
            Err(e) => {
                self.err(column, ParseErrorKind::MalformedAttribute, format!("{what}: {e}"));
                None
            }
        }
    }

    fn text_at(&mut self, index: usize, what: &str) -> Option<String> {
        let Some(tok) = self.stmt.positional.get(index) else {
            let column = self.end_column();
            self.err(column, ParseErrorKind::MissingField, format!("missing quoted {what}"));
            return None;
        };
        match unquote(&tok.raw) {
            Ok(s) => Some(s),
            Err(e) => {
                let column = tok.column;
                self.err(column, ParseErrorKind::MalformedAttribute, format!("{what}: {e}"));
                None
            }
        }
    }

    fn attr(&mut self, key: &str) -> Option<&'s Token> {
        self.stmt.attributes.get(key)
    }

    fn required(&mut self, key: &str) -> Option<&'s Token> {
        let tok = self.attr(key);
        if tok.is_none() {
            let column = self.end_column();
            self.err(column, ParseErrorKind::MissingField, format!("missing attribute `{key}=`"));
        }
        tok
    }

    fn id_attr(&mut self, key: &str, required: bool) -> Option<NodeId> {
        let tok = if required { self.required(key)? } else { self.attr(key)? };
        self.parse_id(&tok.raw, tok.column, key)
    }

    fn keyword<T>(&mut self, key: &str, required: bool, parse: impl Fn(&str) -> Option<T>, expected: &str) -> Option<T> {
        let tok = if required { self.required(key)? } else { self.attr(key)? };
        let parsed = parse(&tok.raw);
        if parsed.is_none() {
            self.err(
                tok.column,
                ParseErrorKind::MalformedAttribute,
                format!("`{key}={}`: expected {expected}", tok.raw),
            );
        }
        parsed
    }

    fn status(&mut self) -> Option<Status> {
        self.keyword("status", false, Status::from_colour, "white, purple, green, orange, yellow or red")
    }

    fn probability(&mut self, key: &str) -> Option<f64> {
        let tok = self.required(key)?;
        let value = lex::is_decimal(&tok.raw)
            .then(|| tok.raw.parse::<f64>().ok())
            .flatten()
            .filter(|v| (0.0..=1.0).contains(v));
        if value.is_none() {
            self.err(
                tok.column,
                ParseErrorKind::BadProbability,
                format!("`{key}={}`: expected a decimal probability in [0, 1]", tok.raw),
            );
        }
        value
    }
}

enum Item {
    Header(String),
    Claim(Claim),
    Evidence(Evidence),
    Argument(Argument),
    Defeater(Defeater),
    Prob(Prob),
}

fn interpret(stmt: &Statement) -> Result<Item, Vec<ParseError>> {
    let mut f = Fields {
        stmt,
        errors: Vec::new(),
    };
    let item = match stmt.kind {
        StatementKind::CaseHeader => {
            f.positional_count(1);
            f.text_at(0, "title").map(Item::Header)
        }
        StatementKind::Claim => {
            f.positional_count(2);
            let id = f.id_at(0, "claim id");
            let text = f.text_at(1, "claim text");
            let status = f.status();
            let expands = match f.attr("expands") {
                Some(tok) => match lex::value_text(&tok.raw).ok().filter(|p| !p.is_empty()) {
                    Some(path) => Some(path),
                    None => {
                        f.err(tok.column, ParseErrorKind::MalformedAttribute, "`expands=` needs a path");
                        None
                    }
                },
                None => None,
            };
            match (id, text) {
                (Some(id), Some(text)) => Some(Item::Claim(Claim {
                    id,
                    text,
                    declared_status: status,
                    expands,
                })),
                _ => None,
            }
        }
        StatementKind::Evidence => {
            f.positional_count(2);
            let id = f.id_at(0, "evidence id");
            let text = f.text_at(1, "evidence text");
            let status = f.status();
            match (id, text) {
                (Some(id), Some(text)) => Some(Item::Evidence(Evidence {
                    id,
                    text,
                    declared_status: status,
                })),
                _ => None,
            }
        }
        StatementKind::Argument => {
            f.positional_count(1);
            let id = f.id_at(0, "argument id");
            let block = f.keyword(
                "block",
                true,
                BlockType::from_keyword,
                "decomposition, substitution, evidence, concretion or calculation",
            );
            let top = f.id_attr("claim", true);
            let supports = f.required("from").and_then(|tok| {
                let mut ids = Vec::new();
                let mut ok = true;
                for part in tok.raw.split(',') {
                    match f.parse_id(part, tok.column, "from") {
                        Some(id) => ids.push(id),
                        None => ok = false,
                    }
                }
                ok.then_some(ids)
            });
            let side = f.id_attr("side", false);
            match (id, block, top, supports) {
                (Some(id), Some(block), Some(top), Some(supports)) => Some(Item::Argument(Argument {
                    id,
                    block,
                    top,
                    supports,
                    side,
                })),
                _ => None,
            }
        }
        StatementKind::Defeater => {
            f.positional_count(2);
            let id = f.id_at(0, "defeater id");
            let text = f.text_at(1, "defeater text");
            let kind = f.keyword("kind", true, DefeaterKind::from_keyword, "undercut or rebut");
            let target = f.id_attr("target", true);
            let resolved = f
                .keyword(
                    "resolved",
                    false,
                    |w| match w {
                        "true" => Some(true),
                        "false" => Some(false),
                        _ => None,
                    },
                    "true or false",
                )
                .unwrap_or(false);
            match (id, text, kind, target) {
                (Some(id), Some(text), Some(kind), Some(target)) => Some(Item::Defeater(Defeater {
                    id,
                    kind,
                    target,
                    text,
                    resolved,
                })),
                _ => None,
            }
        }
        StatementKind::Prob => {
            f.positional_count(1);
            let evidence = f.id_at(0, "evidence id");
            let given = f.id_attr("given", true);
            let p_e_h = f.probability("p_e_h");
            let p_e_nh = f.probability("p_e_nh");
            match (evidence, given, p_e_h, p_e_nh) {
                (Some(evidence), Some(given), Some(p_e_h), Some(p_e_nh)) => Some(Item::Prob(Prob {
                    evidence,
                    given,
                    likelihoods: Likelihoods { p_e_h, p_e_nh },
                })),
                _ => None,
            }
        }
    };
    match item {
        Some(item) if f.errors.is_empty() => Ok(item),
        _ => Err(f.errors),
    }
}

/// Parses a `.casl` document. An empty document yields an empty, untitled case.
pub fn parse(text: &str) -> Result<CaseDocument, ParseErrors> {
    let (stmts, mut errors) = statements(text);
    let mut doc = CaseDocument::default();
    let mut header_line: Option<usize> = None;
    let mut prob_keys = BTreeSet::new();

    for stmt in &stmts {
        let item = match interpret(stmt) {
            Ok(item) => item,
            Err(mut e) => {
                errors.append(&mut e);
                continue;
            }
        };
        let id_column = stmt.positional.first().map_or(1, |t| t.column);
        let duplicate = |e: crate::case::DuplicateId| {
            error(stmt.line, id_column, ParseErrorKind::DuplicateId, e.to_string())
        };
        let result = match item {
            Item::Header(title) => match header_line {
                Some(first) => Err(error(
                    stmt.line,
                    1,
                    ParseErrorKind::DuplicateHeader,
                    format!("second `case` header (first on line {first})"),
                )),
                None => {
                    header_line = Some(stmt.line);
                    doc.graph.title = title;
                    Ok(())
                }
            },
            Item::Claim(c) => doc.graph.add_claim(c).map_err(duplicate),
            Item::Evidence(e) => doc.graph.add_evidence(e).map_err(duplicate),
            Item::Argument(a) => doc.graph.add_argument(a).map_err(duplicate),
            Item::Defeater(d) => doc.graph.add_defeater(d).map_err(duplicate),
            Item::Prob(p) => {
                if prob_keys.insert((p.evidence.clone(), p.given.clone())) {
                    doc.probs.push(p);
                    Ok(())
                } else {
                    Err(error(
                        stmt.line,
                        id_column,
                        ParseErrorKind::DuplicateId,
                        format!("duplicate prob for `{}` given `{}`", p.evidence, p.given),
                    ))
                }
            }
        };
        if let Err(e) = result {
            errors.push(e);
        }
    }

    if errors.is_empty() {
        Ok(doc)
    } else {
        errors.sort_by_key(|e| (e.line, e.column));
        Err(ParseErrors(errors))
    }
}

/// Parses raw bytes, rejecting invalid UTF-8 with the line it occurs on.
pub fn parse_bytes(bytes: &[u8]) -> Result<CaseDocument, ParseErrors> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse(text),
        Err(e) => {
            let valid = &bytes[..e.valid_up_to()];
            let line = valid.iter().filter(|&&b| b == b'\n').count() + 1;
            let column = valid.iter().rev().take_while(|&&b| b != b'\n').count() + 1;
            Err(ParseErrors(vec![error(line, column, ParseErrorKind::Encoding, "invalid UTF-8")]))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("refusing to serialize a case with {} error(s); first: {}", .0.len(), .0[0])]
pub struct SerializeError(pub Vec<Diagnostic>);

/// Writes the canonical form: header, then claims, evidence, arguments,
/// defeaters and probs, each sorted by id, attributes in fixed order.
pub fn serialize(doc: &CaseDocument) -> Result<String, SerializeError> {
    let diagnostics = check_wellformed(&doc.graph);
    if has_errors(&diagnostics) {
        return Err(SerializeError(
            diagnostics
                .into_iter()
                .filter(|d| d.severity == crate::case::Severity::Error)
                .collect(),
        ));
    }
    let g = &doc.graph;
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line(format!("case {}", quote(&g.title)));
    for c in g.claims() {
        let mut s = format!("claim {} {}", c.id, quote(&c.text));
        if let Some(st) = c.declared_status {
            s.push_str(&format!(" status={st}"));
        }
        if let Some(path) = &c.expands {
            s.push_str(&format!(" expands={}", bare_or_quoted(path)));
        }
        line(s);
    }
    for e in g.evidence() {
        let mut s = format!("evidence {} {}", e.id, quote(&e.text));
        if let Some(st) = e.declared_status {
            s.push_str(&format!(" status={st}"));
        }
        line(s);
    }
    for a in g.arguments() {
        let from: Vec<&str> = a.supports.iter().map(NodeId::as_str).collect();
        let mut s = format!("argument {} block={} claim={} from={}", a.id, a.block, a.top, from.join(","));
        if let Some(side) = &a.side {
            s.push_str(&format!(" side={side}"));
        }
        line(s);
    }
    for d in g.defeaters() {
        let mut s = format!(
            "defeater {} kind={} target={} {}",
            d.id,
            d.kind.keyword(),
            d.target,
            quote(&d.text)
        );
        if d.resolved {
            s.push_str(" resolved=true");
        }
        line(s);
    }
    let mut probs: Vec<&Prob> = doc.probs.iter().collect();
    probs.sort_by(|a, b| (&a.evidence, &a.given).cmp(&(&b.evidence, &b.given)));
    for p in probs {
        line(format!(
            "prob {} given={} p_e_h={} p_e_nh={}",
            p.evidence, p.given, p.likelihoods.p_e_h, p.likelihoods.p_e_nh
        ));
    }
    Ok(out)
}

fn bare_or_quoted(value: &str) -> String {
    let bare_ok = !value.is_empty()
        && !value.starts_with('#')
        && !value.chars().any(|c| c.is_whitespace() || c == '"' || c == '\\');
    if bare_ok {
        value.to_string()
    } else {
        quote(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::case::NodeKind;

    fn id(s: &str) -> NodeId {
        NodeId::new(s).unwrap()
    }

    fn errors_of(text: &str) -> Vec<ParseError> {
        parse(text).unwrap_err().0
    }

    #[test]
    fn empty_document_is_untitled_case() {
        let doc = parse("").unwrap();
        assert!(doc.graph.is_empty());
        assert_eq!(doc.graph.title, "");
        assert_eq!(serialize(&doc).unwrap(), "case \"\"\n");
    }

    #[test]
    fn single_claim() {
        let doc = parse("claim C1 \"System meets key properties\"").unwrap();
        let c = doc.graph.claim(&id("C1")).unwrap();
        assert_eq!(c.text, "System meets key properties");
        assert_eq!(c.declared_status, None);
    }

    #[test]
    fn decomposition_argument() {
        let text = "claim G0 \"top\"\nclaim G1 \"a\"\nclaim G2 \"b\"\nclaim G3 \"c\"\n\
                    argument A1 block=decomposition claim=G0 from=G1,G2,G3\n";
        let doc = parse(text).unwrap();
        let a = doc.graph.argument(&id("A1")).unwrap();
        assert_eq!(a.block, BlockType::Decomposition);
        assert_eq!(a.top, id("G0"));
        assert_eq!(a.supports, vec![id("G1"), id("G2"), id("G3")]);
    }

    #[test]
    fn duplicate_id_reported_on_second_line() {
        let errs = errors_of("claim C1 \"x\"\nclaim C1 \"y\"\n");
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].line, 2);
        assert_eq!(errs[0].kind, ParseErrorKind::DuplicateId);
    }

    #[test]
    fn all_errors_collected_in_one_pass() {
        let text = "bogus line\nclaim 1bad \"x\"\nprob E1 given=C1 p_e_h=1.5 p_e_nh=0.1\nclaim C2 \"y\" colour=red\n";
        let errs = errors_of(text);
        let summary: Vec<_> = errs.iter().map(|e| (e.line, e.kind)).collect();
        assert_eq!(
            summary,
            vec![
                (1, ParseErrorKind::UnknownKeyword),
                (2, ParseErrorKind::MalformedAttribute),
                (3, ParseErrorKind::BadProbability),
                (4, ParseErrorKind::MalformedAttribute),
            ]
        );
    }

    #[test]
    fn probability_literals_are_decimal_only() {
        for bad in ["1e-1", "-0.1", "1.0001", "nan", "0x1"] {
            let text = format!("prob E1 given=C1 p_e_h={bad} p_e_nh=0.1");
            let errs = errors_of(&text);
            assert_eq!(errs[0].kind, ParseErrorKind::BadProbability, "{bad}");
        }
        let doc = parse("prob E1 given=C1 p_e_h=.9 p_e_nh=0").unwrap();
        assert_eq!(doc.probs[0].likelihoods, Likelihoods { p_e_h: 0.9, p_e_nh: 0.0 });
    }

    #[test]
    fn missing_fields_and_duplicate_header() {
        let errs = errors_of("case \"a\"\ncase \"b\"\nargument A1 block=decomposition claim=G0\nclaim C1\n");
        let kinds: Vec<_> = errs.iter().map(|e| (e.line, e.kind)).collect();
        assert_eq!(
            kinds,
            vec![
                (2, ParseErrorKind::DuplicateHeader),
                (3, ParseErrorKind::MissingField),
                (4, ParseErrorKind::MissingField),
            ]
        );
    }

    #[test]
    fn crlf_and_comments_tolerated() {
        let doc = parse("# header comment\r\ncase \"T\"\r\n\r\nclaim C1 \"x\" status=green # trailing\r\n").unwrap();
        assert_eq!(doc.graph.title, "T");
        assert_eq!(doc.graph.claim(&id("C1")).unwrap().declared_status, Some(Status::Satisfied));
    }

    #[test]
    fn canonical_ordering() {
        let text = "prob E1 given=C1 p_e_h=0.9 p_e_nh=0.1\n\
                    argument A1 block=evidence claim=C1 from=E1\n\
                    defeater D1 kind=rebut target=C1 \"doubt\" resolved=false\n\
                    evidence E1 \"test report\" status=green\n\
                    claim C2 \"later\" expands=\"detail file.casl\"\n\
                    claim C1 \"first\"\n\
                    case \"Demo\"\n";
        let doc = parse(text).unwrap();
        let out = serialize(&doc).unwrap();
        assert_eq!(
            out,
            "case \"Demo\"\n\
             claim C1 \"first\"\n\
             claim C2 \"later\" expands=\"detail file.casl\"\n\
             evidence E1 \"test report\" status=green\n\
             argument A1 block=evidence claim=C1 from=E1\n\
             defeater D1 kind=rebut target=C1 \"doubt\"\n\
             prob E1 given=C1 p_e_h=0.9 p_e_nh=0.1\n"
        );
        assert_eq!(parse(&out).unwrap(), doc);
        assert_eq!(serialize(&parse(&out).unwrap()).unwrap(), out);
    }

    #[test]
    fn serialize_refuses_invalid_graphs() {
        let doc = parse("claim C1 \"x\"\nargument A1 block=concretion claim=C1 from=C1\n").unwrap();
        let err = serialize(&doc).unwrap_err();
        assert!(err.0.iter().all(|d| d.severity == crate::case::Severity::Error));
        assert_eq!(doc.graph.kind_of(&id("A1")), Some(NodeKind::Argument));
    }

    #[test]
    fn invalid_utf8_reports_position() {
        let errs = parse_bytes(b"claim C1 \"ok\"\nclaim C2 \"\xff\"").unwrap_err().0;
        assert_eq!((errs[0].line, errs[0].column, errs[0].kind), (2, 11, ParseErrorKind::Encoding));
    }

    #[test]
    fn line_numbers_increase() {
        let (stmts, errs) = statements("case \"t\"\n\nclaim A \"x\"\n# c\nevidence E \"y\"\n");
        assert!(errs.is_empty());
        let lines: Vec<_> = stmts.iter().map(|s| s.line).collect();
        assert_eq!(lines, vec![1, 3, 5]);
    }
}
