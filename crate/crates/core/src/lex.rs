//! Field splitting shared by every line-oriented format in the crate.
//!
//! A line is split on unquoted whitespace into raw fields. Double quotes may
//! appear anywhere inside a field (`template="a b"`, `k="x y",n=2`) and
//! protect whitespace, commas and other separators. Inside quotes the escapes
//! `\"`, `\\`, `\n`, `\r` and `\t` are recognised. A `#` at the start of a
//! field (outside quotes) begins a comment that runs to the end of the line.

use std::fmt;

/// One whitespace-delimited field, still carrying its quotes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field<'a> {
    pub raw: &'a str,
    /// 1-based character column of the first character.
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexError {
    pub column: usize,
    pub message: String,
}

impl fmt::Display for LexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl LexError {
    fn new(column: usize, message: impl Into<String>) -> Self {
        LexError {
            column,
            message: message.into(),
        }
    }
}

/// Error in one of the auxiliary line formats (`.dpnl`, `.evl`, catalogues,
/// records, specs, FRAM models).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl LineError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        LineError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for LineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

/// Every error found in one file.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{} error(s); first: {}", .0.len(), .0[0])]
pub struct LineErrors(pub Vec<LineError>);

/// Non-empty lines of `text` as (line number, fields). Lexical errors are
/// collected into `errors` and their lines skipped.
pub fn lines<'t>(text: &'t str, errors: &mut Vec<LineError>) -> Vec<(usize, Vec<Field<'t>>)> {
    let mut out = Vec::new();
    for (idx, line) in text.split('\n').enumerate() {
        match split_fields(line) {
            Ok(fields) if fields.is_empty() => {}
            Ok(fields) => out.push((idx + 1, fields)),
            Err(e) => errors.push(LineError::new(idx + 1, e.column, e.message)),
        }
    }
    out
}

/// Splits one line into raw fields. A trailing `\r` is ignored.
pub fn split_fields(line: &str) -> Result<Vec<Field<'_>>, LexError> {
    let line = line.strip_suffix('\r').unwrap_or(line);
    let mut fields = Vec::new();
    let mut chars = line.char_indices().peekable();
    let mut column = 0usize;

    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        let start_column = column + 1;
        let mut in_quotes = false;
        let mut quote_column = 0;
        let mut end = line.len();
        while let Some(&(idx, c)) = chars.peek() {
            if !in_quotes && c.is_whitespace() {
                end = idx;
                break;
            }
            chars.next();
            column += 1;
            match c {
                '"' => {
                    in_quotes = !in_quotes;
                    quote_column = column;
                }
                '\\' if in_quotes => {
                    if chars.next().is_none() {
                        return Err(LexError::new(column, "escape at end of line"));
                    }
                    column += 1;
                }
                _ => {}
            }
        }
        if in_quotes {
            return Err(LexError::new(quote_column, "unterminated string"));
        }
        fields.push(Field {
            raw: &line[start..end],
            column: start_column,
        });
    }
    Ok(fields)
}

/// Decodes a fully quoted field (`"..."`) into its string value.
pub fn unquote(raw: &str) -> Result<String, String> {
    let inner = raw
        .strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
        .filter(|_| raw.len() >= 2)
        .ok_or_else(|| format!("expected a quoted string, found `{raw}`"))?;
    let mut out = String::with_capacity(inner.len());
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => match chars.next() {
                Some('"') => out.push('"'),
                Some('\\') => out.push('\\'),
                Some('n') => out.push('\n'),
                Some('r') => out.push('\r'),
                Some('t') => out.push('\t'),
                Some(other) => return Err(format!("unknown escape `\\{other}`")),
                None => return Err("dangling escape".into()),
            },
            '"' => return Err("unescaped quote inside string".into()),
            _ => out.push(c),
        }
    }
    Ok(out)
}

/// Encodes a string as a quoted literal understood by [`unquote`].
pub fn quote(value: &str) -> String {
    let mut out = String::with_capacity(value.len() + 2);
    out.push('"');
    for c in value.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Either a bare token or a quoted string, decoded.
pub fn value_text(raw: &str) -> Result<String, String> {
    if raw.starts_with('"') {
        unquote(raw)
    } else if raw.contains('"') {
        Err(format!("stray quote in `{raw}`"))
    } else {
        Ok(raw.to_string())
    }
}

/// Splits `key=value` at the first unquoted `=`. Returns `None` for fields
/// without one or whose key part is quoted.
pub fn split_attr(raw: &str) -> Option<(&str, &str)> {
    let eq = raw.find('=')?;
    let key = &raw[..eq];
    if key.is_empty() || key.contains('"') {
        return None;
    }
    Some((key, &raw[eq + 1..]))
}

/// Splits on `sep` outside double quotes, honouring backslash escapes.
pub fn split_unquoted(raw: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut in_quotes = false;
    let mut escaped = false;
    let mut start = 0;
    for (idx, c) in raw.char_indices() {
        if escaped {
            escaped = false;
            continue;
        }
        match c {
            '\\' if in_quotes => escaped = true,
            '"' => in_quotes = !in_quotes,
            c if c == sep && !in_quotes => {
                parts.push(&raw[start..idx]);
                start = idx + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&raw[start..]);
    parts
}

/// Decimal literal: digits with an optional fractional part, no sign or exponent.
pub fn is_decimal(raw: &str) -> bool {
    let (int, frac) = match raw.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (raw, None),
    };
    let digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    match frac {
        None => !int.is_empty() && digits(int),
        Some(f) => (!int.is_empty() || !f.is_empty()) && digits(int) && digits(f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raws(line: &str) -> Vec<&str> {
        split_fields(line).unwrap().into_iter().map(|f| f.raw).collect()
    }

    #[test]
    fn splits_on_unquoted_whitespace() {
        assert_eq!(
            raws(r#"claim C1 "System meets key properties" status=green"#),
            vec!["claim", "C1", "\"System meets key properties\"", "status=green"]
        );
        assert_eq!(raws(r#"outcome G2 "a b" template="x {service} y""#).len(), 4);
        assert_eq!(raws(r#"inject P artefact=req,note="two words""#), vec!["inject", "P", "artefact=req,note=\"two words\""]);
    }

    #[test]
    fn comments_and_columns() {
        let fields = split_fields("  claim C1 # trailing").unwrap();
        assert_eq!(fields.len(), 2);
        assert_eq!(fields[0].column, 3);
        assert_eq!(fields[1].column, 9);
        assert!(split_fields("# whole line").unwrap().is_empty());
        assert_eq!(raws("claim a#b"), vec!["claim", "a#b"]);
    }

    #[test]
    fn unterminated_string_is_reported() {
        let err = split_fields(r#"claim C1 "open"#).unwrap_err();
        assert_eq!(err.column, 10);
    }

    #[test]
    fn quote_round_trips() {
        for s in ["", "plain", "with \"quotes\"", "back\\slash", "line\nbreak\ttab\r"] {
            assert_eq!(unquote(&quote(s)).unwrap(), s);
        }
        assert!(unquote("\"bad\\q\"").is_err());
        assert!(unquote("\"").is_err());
    }

    #[test]
    fn split_respects_quotes() {
        assert_eq!(split_unquoted(r#"a=1,b="x,y",c"#, ','), vec!["a=1", "b=\"x,y\"", "c"]);
        assert_eq!(split_unquoted("", ','), vec![""]);
    }

    #[test]
    fn decimal_literals() {
        for ok in ["0", "1", "0.5", ".5", "1.", "0.000001"] {
            assert!(is_decimal(ok), "{ok}");
        }
        for bad in ["", ".", "-1", "1e-3", "+0.1", "0x1", "1.2.3", "inf"] {
            assert!(!is_decimal(bad), "{bad}");
        }
    }
}
