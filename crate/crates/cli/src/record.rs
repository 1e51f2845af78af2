//! Line records: space-separated `key=value` fields.
//!
//! Values escape `\` as `\\` and space as `\s`. Lists are comma-separated,
//! `-` for an empty list.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad record: {0}")]
pub struct RecordError(pub String);

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Record {
    fields: Vec<(String, String)>,
}

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    pub fn fields(&self) -> &[(String, String)] {
        &self.fields
    }

    pub fn get(&self, key: &str) -> Result<&str, RecordError> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| RecordError(format!("missing field `{key}`")))
    }

    pub fn parse(line: &str) -> Result<Record, RecordError> {
        let mut fields = Vec::new();
        for part in line.split(' ').filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| RecordError(format!("field without `=`: `{part}`")))?;
            if k.is_empty() || fields.iter().any(|(x, _): &(String, String)| x == k) {
                return Err(RecordError(format!("empty or repeated key `{k}`")));
            }
            fields.push((k.to_string(), unescape(v)?));
        }
        Ok(Record { fields })
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, (k, v)) in self.fields.iter().enumerate() {
            if idx > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{k}={}", escape(v))?;
        }
        Ok(())
    }
}

fn escape(v: &str) -> String {
    v.replace('\\', "\\\\").replace(' ', "\\s")
}

fn unescape(v: &str) -> Result<String, RecordError> {
    let mut out = String::with_capacity(v.len());
    let mut chars = v.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('s') => out.push(' '),
            _ => return Err(RecordError(format!("bad escape in `{v}`"))),
        }
    }
    Ok(out)
}

pub fn join_list<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    if parts.is_empty() {
        "-".to_string()
    } else {
        parts.join(",")
    }
}

pub fn split_list(s: &str) -> Vec<&str> {
    if s == "-" {
        Vec::new()
    } else {
        s.split(',').collect()
    }
}

pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, RecordError> {
    split_list(s).into_iter().map(|x| x.parse().map_err(|_| RecordError(format!("bad list item `{x}`")))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes_round_trip() {
        let r = Record::new().with("chain", "P -[P P1 ~P2 P2]-> P1").with("odd", "a\\s b");
        let line = r.to_string();
        assert!(!line.contains("  "));
        assert_eq!(Record::parse(&line).unwrap(), r);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(Record::parse("a=1 a=2").is_err());
        assert!(Record::parse("novalue").is_err());
        assert!(Record::parse("a=x\\q").is_err());
    }
}
