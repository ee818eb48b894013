//! Report records and their two renderings: `key=value` blocks separated
//! by blank lines, or one JSON object per line.

use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    JsonLines,
}

/// One block: a name and ordered fields.
#[derive(Clone, Debug)]
pub struct Record {
    name: &'static str,
    fields: Vec<(String, Value)>,
}

impl Record {
    pub fn new(name: &'static str) -> Self {
        Record { name, fields: Vec::new() }
    }

    pub fn with(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.fields.push((key.to_string(), v.into()));
        self
    }

    pub fn push(&mut self, key: &str, v: impl Into<Value>) {
        self.fields.push((key.to_string(), v.into()));
    }
}

#[derive(Debug, Default)]
pub struct Report {
    records: Vec<Record>,
}

impl Report {
    pub fn add(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.add(Record::new("warning").with("message", msg.into()));
    }

    pub fn render(&self, f: Format) -> String {
        let mut out = String::new();
        match f {
            Format::Text => {
                for (i, r) in self.records.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    out.push_str(&format!("[{}]\n", r.name));
                    for (k, v) in &r.fields {
                        out.push_str(&format!("{k}={}\n", text(v)));
                    }
                }
            }
            Format::JsonLines => {
                for r in &self.records {
                    let mut m = Map::new();
                    m.insert("record".into(), Value::String(r.name.into()));
                    for (k, v) in &r.fields {
                        m.insert(k.clone(), v.clone());
                    }
                    out.push_str(&Value::Object(m).to_string());
                    out.push('\n');
                }
            }
        }
        out
    }
}

fn text(v: &Value) -> String {
    match v {
        Value::Null => "none".into(),
        Value::String(s) => s.clone(),
        Value::Array(xs) => xs.iter().map(text).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_renderings() {
        let mut r = Report::default();
        r.add(Record::new("counts").with("t", 2).with("groups", vec!["c2,c4", "c3"]).with("w", Value::Null));
        r.warn("cap hit");
        assert_eq!(r.render(Format::Text), "[counts]\nt=2\ngroups=c2,c4,c3\nw=none\n\n[warning]\nmessage=cap hit\n");
        let rendered = r.render(Format::JsonLines);
        let lines: Vec<&str> = rendered.lines().collect();
        assert_eq!(lines[0], r#"{"record":"counts","t":2,"groups":["c2,c4","c3"],"w":null}"#);
    }
}
