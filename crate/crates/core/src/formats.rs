//! Plain-text file formats for configurations, codes and target lists.
//!
//! All three share the same conventions: `#` starts a comment line, a
//! `# primitive-poly <mask>` comment names the field modulus, and the first
//! non-comment line is a header of `key=value` pairs after a format tag.
//! Writers produce a canonical form that parses back to the same value.

use std::fmt::Write as _;

use thiserror::Error;

use crate::code::{CodeError, CodeGraph};
use crate::config::{ConfigError, Configuration, ObjectKind};
use crate::gf::{Field, FieldElement, GfError};
use crate::linalg::{GfMatrix, LinalgError};
use crate::removal::Target;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

/// Parses `0b…`, `0x…` or decimal.
pub fn parse_mask(s: &str) -> Option<u32> {
    if let Some(b) = s.strip_prefix("0b") {
        u32::from_str_radix(b, 2).ok()
    } else if let Some(h) = s.strip_prefix("0x") {
        u32::from_str_radix(h, 16).ok()
    } else {
        s.parse().ok()
    }
}

struct Lines<'a> {
    poly: Option<u32>,
    body: Vec<(usize, &'a str)>,
}

fn split(text: &str) -> Result<Lines<'_>, FormatError> {
    let mut poly = None;
    let mut body = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix('#') {
            let mut it = rest.split_whitespace();
            if it.next() == Some("primitive-poly") {
                let v = it.next().ok_or_else(|| syntax(i + 1, "missing polynomial"))?;
                poly = Some(parse_mask(v).ok_or_else(|| syntax(i + 1, format!("bad polynomial `{v}`")))?);
            }
            continue;
        }
        if !line.is_empty() {
            body.push((i + 1, line));
        }
    }
    Ok(Lines { poly, body })
}

struct Header<'a> {
    line: usize,
    pairs: Vec<(&'a str, &'a str)>,
}

impl Header<'_> {
    fn parse<'a>(line: usize, text: &'a str, tag: &str) -> Result<Header<'a>, FormatError> {
        let mut it = text.split_whitespace();
        if it.next() != Some(tag) {
            return Err(syntax(line, format!("expected `{tag}` header")));
        }
        let pairs = it
            .map(|kv| kv.split_once('=').ok_or_else(|| syntax(line, format!("expected key=value, got `{kv}`"))))
            .collect::<Result<_, _>>()?;
        Ok(Header { line, pairs })
    }

    fn get(&self, key: &str) -> Result<usize, FormatError> {
        let (_, v) = self
            .pairs
            .iter()
            .find(|(k, _)| *k == key)
            .ok_or_else(|| syntax(self.line, format!("header lacks `{key}`")))?;
        v.parse().map_err(|_| syntax(self.line, format!("`{key}` is not a number")))
    }
}

fn field_for(q: usize, poly: Option<u32>, line: usize) -> Result<Field, FormatError> {
    if !(4..=65536).contains(&q) || !q.is_power_of_two() {
        return Err(syntax(line, format!("q={q} is not a power of two in 4..=65536")));
    }
    Ok(Field::of_order(q as u32, poly)?)
}

/// Reads a configuration. `poly` overrides any polynomial named in the
/// file.
pub fn parse_config(text: &str, poly: Option<u32>) -> Result<Configuration, FormatError> {
    let lines = split(text)?;
    let (hl, ht) = *lines.body.first().ok_or_else(|| syntax(1, "empty file"))?;
    let h = Header::parse(hl, ht, "config")?;
    let (q, gamma, a, ell) = (h.get("q")?, h.get("gamma")?, h.get("a")?, h.get("ell")?);
    let field = field_for(q, poly.or(lines.poly), hl)?;
    let rows = &lines.body[1..];
    if rows.len() != ell {
        return Err(syntax(hl, format!("header says ell={ell}, found {} rows", rows.len())));
    }
    let mut data = Vec::with_capacity(ell * a);
    for &(ln, row) in rows {
        let vals: Vec<&str> = row.split_whitespace().collect();
        if vals.len() != a {
            return Err(syntax(ln, format!("expected {a} entries, found {}", vals.len())));
        }
        for v in vals {
            let x: u32 = v.parse().map_err(|_| syntax(ln, format!("bad entry `{v}`")))?;
            data.push(field.element(x).map_err(|e| syntax(ln, e.to_string()))?);
        }
    }
    Ok(Configuration::new(gamma, GfMatrix::new(field, ell, a, data)?)?)
}

pub fn write_config(c: &Configuration) -> String {
    let mut s = String::new();
    writeln!(s, "# primitive-poly {:#b}", c.field().primitive_poly()).unwrap();
    writeln!(s, "config q={} gamma={} a={} ell={}", c.field().q(), c.gamma(), c.a(), c.ell()).unwrap();
    for r in 0..c.ell() {
        let row: Vec<String> = c.matrix().row(r).iter().map(|x| x.value().to_string()).collect();
        writeln!(s, "{}", row.join(" ")).unwrap();
    }
    s
}

/// Reads a code: `code rows= cols= q= gamma=` then one `row col weight`
/// triplet per line, 1-based.
pub fn parse_code(text: &str, poly: Option<u32>) -> Result<CodeGraph, FormatError> {
    let lines = split(text)?;
    let (hl, ht) = *lines.body.first().ok_or_else(|| syntax(1, "empty file"))?;
    let h = Header::parse(hl, ht, "code")?;
    let (rows, cols, q, gamma) = (h.get("rows")?, h.get("cols")?, h.get("q")?, h.get("gamma")?);
    let field = field_for(q, poly.or(lines.poly), hl)?;
    let mut entries = Vec::new();
    for &(ln, line) in &lines.body[1..] {
        let v: Vec<u32> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| syntax(ln, format!("bad number `{t}`"))))
            .collect::<Result<_, _>>()?;
        let [r, c, w] = v[..] else {
            return Err(syntax(ln, "expected `row col weight`"));
        };
        if r == 0 || c == 0 {
            return Err(syntax(ln, "indices are 1-based"));
        }
        let w = field.element(w).map_err(|e| syntax(ln, e.to_string()))?;
        entries.push((r as usize - 1, c as usize - 1, w));
    }
    Ok(CodeGraph::new(field, gamma, rows, cols, &entries)?)
}

pub fn write_code(g: &CodeGraph) -> String {
    let mut s = String::new();
    writeln!(s, "# primitive-poly {:#b}", g.field().primitive_poly()).unwrap();
    writeln!(s, "code rows={} cols={} q={} gamma={}", g.n_rows(), g.n_cols(), g.field().q(), g.gamma()).unwrap();
    for (r, c, w) in g.entries() {
        writeln!(s, "{} {} {}", r + 1, c + 1, w.value()).unwrap();
    }
    s
}

fn parse_list(line: usize, s: &str) -> Result<Vec<usize>, FormatError> {
    s.split(',').map(|t| t.parse().map_err(|_| syntax(line, format!("bad number `{t}`")))).collect()
}

/// Reads a target list: one `<gast|ost> vns=i,j,… [params=a,b,d1,d2,d3]`
/// per line, 1-based VN ids.
pub fn parse_targets(text: &str) -> Result<Vec<Target>, FormatError> {
    let lines = split(text)?;
    let mut out = Vec::new();
    for &(ln, line) in &lines.body {
        let mut it = line.split_whitespace();
        let kind = match it.next() {
            Some("gast") => ObjectKind::Gast,
            Some("ost") => ObjectKind::Ost,
            other => return Err(syntax(ln, format!("unknown kind `{}`", other.unwrap_or("")))),
        };
        let (mut vns, mut label) = (None, None);
        for kv in it {
            match kv.split_once('=') {
                Some(("vns", v)) => {
                    let ids = parse_list(ln, v)?;
                    if ids.contains(&0) {
                        return Err(syntax(ln, "indices are 1-based"));
                    }
                    vns = Some(ids.into_iter().map(|x| x - 1).collect::<Vec<_>>());
                }
                Some(("params", v)) => {
                    let p = parse_list(ln, v)?;
                    label = Some(<[usize; 5]>::try_from(p).map_err(|_| syntax(ln, "params needs five numbers"))?);
                }
                _ => return Err(syntax(ln, format!("unexpected `{kv}`"))),
            }
        }
        let mut vns = vns.ok_or_else(|| syntax(ln, "missing vns="))?;
        vns.sort_unstable();
        vns.dedup();
        out.push(Target { vns, kind, label });
    }
    Ok(out)
}

pub fn write_targets(targets: &[Target]) -> String {
    let mut s = String::new();
    for t in targets {
        let kind = match t.kind {
            ObjectKind::Gast => "gast",
            ObjectKind::Ost => "ost",
        };
        let vns: Vec<String> = t.vns.iter().map(|v| (v + 1).to_string()).collect();
        write!(s, "{kind} vns={}", vns.join(",")).unwrap();
        if let Some(p) = t.label {
            let p: Vec<String> = p.iter().map(|x| x.to_string()).collect();
            write!(s, " params={}", p.join(",")).unwrap();
        }
        s.push('\n');
    }
    s
}

/// Renders a vector in power notation, e.g. `[α 1 1 α 1 1]`.
pub fn power_vector(f: &Field, v: &[FieldElement]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| f.power_notation(x)).collect();
    format!("[{}]", parts.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;

    const CFG: &str = "# primitive-poly 0b111\nconfig q=4 gamma=2 a=2 ell=3\n1 2\n3 0\n0 1\n";

    #[test]
    fn config_round_trip() {
        let c = parse_config(CFG, None).unwrap();
        assert_eq!((c.a(), c.ell(), c.gamma()), (2, 3, 2));
        assert_eq!(write_config(&c), CFG);
    }

    #[test]
    fn config_errors_carry_line_numbers() {
        let bad = CFG.replace("3 0", "3 x");
        assert!(matches!(parse_config(&bad, None), Err(FormatError::Syntax { line: 4, .. })));
        let bad = CFG.replace("3 0", "4 0");
        assert!(matches!(parse_config(&bad, None), Err(FormatError::Syntax { line: 4, .. })));
        let bad = CFG.replace("ell=3", "ell=2");
        assert!(matches!(parse_config(&bad, None), Err(FormatError::Syntax { line: 2, .. })));
        let bad = CFG.replace("gamma=2", "gamma=3");
        assert!(matches!(parse_config(&bad, None), Err(FormatError::Config(_))));
    }

    #[test]
    fn poly_override_applies() {
        let c = parse_config(&CFG.replace("0b111", "0b1"), Some(0b111));
        assert!(c.is_ok());
        assert!(parse_config(&CFG.replace("0b111", "0b101"), None).is_err());
    }

    #[test]
    fn code_and_targets_round_trip() {
        let text = "# primitive-poly 0b111\ncode rows=2 cols=2 q=4 gamma=1\n1 1 2\n2 2 3\n";
        let g = parse_code(text, None).unwrap();
        assert_eq!(write_code(&g), text);
        let t = "gast vns=1,2,3\nost vns=4,5 params=2,1,1,1,0\n";
        let parsed = parse_targets(t).unwrap();
        assert_eq!(parsed[0].vns, vec![0, 1, 2]);
        assert_eq!(write_targets(&parsed), t);
        assert!(parse_targets("gast vns=0,1\n").is_err());
    }
}
