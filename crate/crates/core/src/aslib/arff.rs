//! Minimal ARFF reader/writer covering the subset used by ASlib scenarios.
//!
//! Supported: `@RELATION`, `@ATTRIBUTE` with `numeric`/`real`/`integer`,
//! `string` and nominal `{a, b, c}` types, dense `@DATA` rows, quoted
//! tokens, `%` comments and the `?` missing-value token. Sparse rows,
//! `date` and `relational` attributes are rejected.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArffError {
    #[error("line {line}: malformed header: {message}")]
    MalformedHeader { line: usize, message: String },
    #[error("line {line}: expected {expected} cells, found {found}")]
    ArityMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: attribute `{attribute}`: `{token}` is not numeric")]
    BadNumeric {
        line: usize,
        attribute: String,
        token: String,
    },
    #[error("line {line}: attribute `{attribute}`: `{token}` is not a declared level")]
    UnknownLevel {
        line: usize,
        attribute: String,
        token: String,
    },
}

impl ArffError {
    pub fn line(&self) -> usize {
        match self {
            ArffError::MalformedHeader { line, .. }
            | ArffError::ArityMismatch { line, .. }
            | ArffError::BadNumeric { line, .. }
            | ArffError::UnknownLevel { line, .. } => *line,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AttributeKind {
    Numeric,
    Categorical(Vec<String>),
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Attribute {
    pub name: String,
    pub kind: AttributeKind,
}

impl Attribute {
    pub fn new(name: impl Into<String>, kind: AttributeKind) -> Self {
        Self {
            name: name.into(),
            kind,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Category(String),
    Text(String),
    Missing,
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Number(v) => Some(*v),
            _ => None,
        }
    }

    /// Textual content of a nominal or string cell; numbers are rendered.
    pub fn as_text(&self) -> Option<String> {
        match self {
            Value::Category(s) | Value::Text(s) => Some(s.clone()),
            Value::Number(v) => Some(format_number(*v)),
            Value::Missing => None,
        }
    }

    pub fn is_missing(&self) -> bool {
        matches!(self, Value::Missing)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationTable {
    pub relation_name: String,
    pub attributes: Vec<Attribute>,
    pub rows: Vec<Vec<Value>>,
}

impl RelationTable {
    pub fn new(relation_name: impl Into<String>, attributes: Vec<Attribute>) -> Self {
        Self {
            relation_name: relation_name.into(),
            attributes,
            rows: Vec::new(),
        }
    }

    /// Case-insensitive attribute lookup.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.attributes
            .iter()
            .position(|a| a.name.eq_ignore_ascii_case(name))
    }
}

pub fn parse_arff(text: &str) -> Result<RelationTable, ArffError> {
    let mut relation_name = None;
    let mut attributes = Vec::new();
    let mut rows = Vec::new();
    let mut in_data = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }

        if !in_data {
            let (directive, rest) = split_directive(line);
            match directive.to_ascii_lowercase().as_str() {
                "@relation" => {
                    let (name, _) = take_token(rest).ok_or_else(|| malformed(line_no, "missing relation name"))?;
                    relation_name = Some(name);
                }
                "@attribute" => attributes.push(parse_attribute(rest, line_no)?),
                "@data" => {
                    if attributes.is_empty() {
                        return Err(malformed(line_no, "@DATA before any @ATTRIBUTE"));
                    }
                    in_data = true;
                }
                _ => return Err(malformed(line_no, format!("unexpected line `{line}`"))),
            }
            continue;
        }

        if line.starts_with('{') {
            return Err(malformed(line_no, "sparse ARFF rows are not supported"));
        }
        let cells = split_cells(line, line_no)?;
        if cells.len() != attributes.len() {
            return Err(ArffError::ArityMismatch {
                line: line_no,
                expected: attributes.len(),
                found: cells.len(),
            });
        }
        let row = cells
            .into_iter()
            .zip(&attributes)
            .map(|((token, quoted), attr)| convert_cell(token, quoted, attr, line_no))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }

    if !in_data {
        let last = text.lines().count().max(1);
        return Err(malformed(last, "missing @DATA section"));
    }

    Ok(RelationTable {
        relation_name: relation_name.unwrap_or_default(),
        attributes,
        rows,
    })
}

fn malformed(line: usize, message: impl Into<String>) -> ArffError {
    ArffError::MalformedHeader {
        line,
        message: message.into(),
    }
}

fn split_directive(line: &str) -> (&str, &str) {
    match line.find(char::is_whitespace) {
        Some(pos) => (&line[..pos], line[pos..].trim_start()),
        None => (line, ""),
    }
}

/// Reads one (possibly quoted) token from the start of `s`.
fn take_token(s: &str) -> Option<(String, &str)> {
    let s = s.trim_start();
    let mut chars = s.char_indices();
    let (_, first) = chars.next()?;
    if first == '\'' || first == '"' {
        let mut out = String::new();
        let mut escaped = false;
        for (i, c) in chars {
            if escaped {
                out.push(c);
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == first {
                return Some((out, &s[i + c.len_utf8()..]));
            } else {
                out.push(c);
            }
        }
        None
    } else {
        let end = s.find(char::is_whitespace).unwrap_or(s.len());
        Some((s[..end].to_string(), &s[end..]))
    }
}

fn parse_attribute(rest: &str, line_no: usize) -> Result<Attribute, ArffError> {
    let (name, rest) = take_token(rest).ok_or_else(|| malformed(line_no, "attribute without a name"))?;
    let spec = rest.trim();
    if spec.is_empty() {
        return Err(malformed(line_no, format!("attribute `{name}` has no type")));
    }
    let kind = if spec.starts_with('{') {
        if !spec.ends_with('}') {
            return Err(malformed(line_no, format!("unterminated level set for `{name}`")));
        }
        let inner = &spec[1..spec.len() - 1];
        let levels = if inner.trim().is_empty() {
            Vec::new()
        } else {
            split_cells(inner, line_no)?.into_iter().map(|(t, _)| t).collect()
        };
        AttributeKind::Categorical(levels)
    } else {
        match spec.to_ascii_lowercase().as_str() {
            "numeric" | "real" | "integer" => AttributeKind::Numeric,
            "string" => AttributeKind::Text,
            other => {
                return Err(malformed(
                    line_no,
                    format!("unsupported attribute type `{other}` for `{name}`"),
                ))
            }
        }
    };
    Ok(Attribute { name, kind })
}

/// Splits a comma-separated line, honouring single and double quotes.
/// Each cell is returned trimmed together with a flag telling whether it was quoted.
fn split_cells(line: &str, line_no: usize) -> Result<Vec<(String, bool)>, ArffError> {
    let mut cells = Vec::new();
    let mut current = String::new();
    let mut quoted = false;
    let mut quote: Option<char> = None;
    let mut escaped = false;

    for c in line.chars() {
        if let Some(q) = quote {
            if escaped {
                current.push(c);
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == q {
                quote = None;
            } else {
                current.push(c);
            }
            continue;
        }
        match c {
            '\'' | '"' if current.trim().is_empty() => {
                current.clear();
                quote = Some(c);
                quoted = true;
            }
            ',' => {
                cells.push(finish_cell(&mut current, quoted));
                quoted = false;
            }
            '%' => break,
            _ => current.push(c),
        }
    }
    if quote.is_some() {
        return Err(malformed(line_no, "unterminated quoted value"));
    }
    cells.push(finish_cell(&mut current, quoted));
    Ok(cells)
}

fn finish_cell(current: &mut String, quoted: bool) -> (String, bool) {
    let cell = if quoted {
        std::mem::take(current)
    } else {
        let t = current.trim().to_string();
        current.clear();
        t
    };
    (cell, quoted)
}

fn convert_cell(token: String, quoted: bool, attr: &Attribute, line_no: usize) -> Result<Value, ArffError> {
    if !quoted && token == "?" {
        return Ok(Value::Missing);
    }
    match &attr.kind {
        AttributeKind::Numeric => token.parse::<f64>().map(Value::Number).map_err(|_| ArffError::BadNumeric {
            line: line_no,
            attribute: attr.name.clone(),
            token,
        }),
        AttributeKind::Categorical(levels) => {
            if levels.contains(&token) {
                Ok(Value::Category(token))
            } else {
                Err(ArffError::UnknownLevel {
                    line: line_no,
                    attribute: attr.name.clone(),
                    token,
                })
            }
        }
        AttributeKind::Text => Ok(Value::Text(token)),
    }
}

pub(crate) fn format_number(v: f64) -> String {
    // `{}` on f64 is the shortest representation that parses back exactly.
    format!("{v}")
}

fn needs_quotes(s: &str) -> bool {
    s.is_empty()
        || s == "?"
        || s.chars().any(|c| {
            c.is_whitespace() || matches!(c, ',' | '\'' | '"' | '%' | '{' | '}' | '\\')
        })
}

fn quote(s: &str) -> String {
    if !needs_quotes(s) {
        return s.to_string();
    }
    let mut out = String::with_capacity(s.len() + 2);
    out.push('\'');
    for c in s.chars() {
        if c == '\'' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('\'');
    out
}

pub fn write_arff(table: &RelationTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "@RELATION {}", quote(&table.relation_name));
    out.push('\n');
    for attr in &table.attributes {
        let kind = match &attr.kind {
            AttributeKind::Numeric => "NUMERIC".to_string(),
            AttributeKind::Text => "STRING".to_string(),
            AttributeKind::Categorical(levels) => {
                let inner: Vec<String> = levels.iter().map(|l| quote(l)).collect();
                format!("{{{}}}", inner.join(", "))
            }
        };
        let _ = writeln!(out, "@ATTRIBUTE {} {}", quote(&attr.name), kind);
    }
    out.push_str("\n@DATA\n");
    for row in &table.rows {
        let cells: Vec<String> = row
            .iter()
            .map(|v| match v {
                Value::Number(x) => format_number(*x),
                Value::Category(s) | Value::Text(s) => quote(s),
                Value::Missing => "?".to_string(),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let t = parse_arff("@relation r\n@attribute x numeric\n@data\n1.5\n").unwrap();
        assert_eq!(t.relation_name, "r");
        assert_eq!(t.attributes, vec![Attribute::new("x", AttributeKind::Numeric)]);
        assert_eq!(t.rows, vec![vec![Value::Number(1.5)]]);
    }

    #[test]
    fn missing_cell_in_run_row() {
        let text = "@RELATION runs\n\
            @ATTRIBUTE instance_id STRING\n\
            @ATTRIBUTE repetition NUMERIC\n\
            @ATTRIBUTE algorithm STRING\n\
            @ATTRIBUTE runtime NUMERIC\n\
            @ATTRIBUTE runstatus {ok, timeout, memout, crash, other}\n\
            @DATA\n\
            i1,1,algoA,?,timeout\n";
        let t = parse_arff(text).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0][3], Value::Missing);
        assert_eq!(t.rows[0][4], Value::Category("timeout".into()));
        assert_eq!(t.rows[0][0], Value::Text("i1".into()));
    }

    #[test]
    fn arity_mismatch_reports_line() {
        let text = "@relation r\n@attribute a numeric\n@attribute b numeric\n@attribute c numeric\n@data\n1,2\n";
        let err = parse_arff(text).unwrap_err();
        assert_eq!(
            err,
            ArffError::ArityMismatch {
                line: 6,
                expected: 3,
                found: 2
            }
        );
    }

    #[test]
    fn bad_numeric() {
        let err = parse_arff("@relation r\n@attribute x numeric\n@data\nabc\n").unwrap_err();
        assert!(matches!(err, ArffError::BadNumeric { line: 4, .. }));
    }

    #[test]
    fn missing_data_section() {
        let err = parse_arff("@relation r\n@attribute x numeric\n").unwrap_err();
        assert!(matches!(err, ArffError::MalformedHeader { .. }));
    }

    #[test]
    fn bad_attribute_line() {
        let err = parse_arff("@relation r\n@attribute x\n@data\n").unwrap_err();
        assert_eq!(err.line(), 2);
        let err = parse_arff("@relation r\n@attribute d date\n@data\n").unwrap_err();
        assert!(matches!(err, ArffError::MalformedHeader { line: 2, .. }));
    }

    #[test]
    fn directives_case_insensitive_and_comments() {
        let text = "% header comment\n@RELATION 'my rel'\n@Attribute 'a b' REAL\n@attribute c {x, 'y z'}\n\n@DaTa\n% row comment\n3, 'y z'\n?, x % trailing\n";
        let t = parse_arff(text).unwrap();
        assert_eq!(t.relation_name, "my rel");
        assert_eq!(t.attributes[0].name, "a b");
        assert_eq!(
            t.attributes[1].kind,
            AttributeKind::Categorical(vec!["x".into(), "y z".into()])
        );
        assert_eq!(t.rows[0], vec![Value::Number(3.0), Value::Category("y z".into())]);
        assert_eq!(t.rows[1], vec![Value::Missing, Value::Category("x".into())]);
    }

    #[test]
    fn quoted_question_mark_is_text() {
        let t = parse_arff("@relation r\n@attribute s string\n@data\n'?'\n?\n").unwrap();
        assert_eq!(t.rows[0][0], Value::Text("?".into()));
        assert_eq!(t.rows[1][0], Value::Missing);
    }

    #[test]
    fn unknown_level() {
        let err = parse_arff("@relation r\n@attribute s {a,b}\n@data\nc\n").unwrap_err();
        assert!(matches!(err, ArffError::UnknownLevel { line: 4, .. }));
    }

    #[test]
    fn write_then_parse() {
        let mut t = RelationTable::new(
            "rel, with comma",
            vec![
                Attribute::new("id", AttributeKind::Text),
                Attribute::new("v", AttributeKind::Numeric),
                Attribute::new("s", AttributeKind::Categorical(vec!["ok".into(), "time out".into()])),
            ],
        );
        t.rows.push(vec![Value::Text("a,'b'".into()), Value::Number(0.1), Value::Category("time out".into())]);
        t.rows.push(vec![Value::Text("?".into()), Value::Missing, Value::Missing]);
        let back = parse_arff(&write_arff(&t)).unwrap();
        assert_eq!(back, t);
    }
}
