use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use wcm_core::fixtures::{self, TOY_CODE};
use wcm_core::formats::{parse_code, parse_config, parse_targets, write_code};
use wcm_core::FieldElement;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn wcm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wcm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Values of `key=` lines in a text report.
fn values<'a>(report: &'a str, key: &str) -> Vec<&'a str> {
    report.lines().filter_map(|l| l.strip_prefix(key)?.strip_prefix('=')).collect()
}

#[test]
fn analyze_counts() {
    let o = wcm(&["analyze", s(&fixture("gast_6_2_2_5_2.cfg"))]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(values(&out, "t"), ["2"]);
    assert_eq!(values(&out, "t_prime"), ["5"]);
    assert_eq!(values(&out, "reduction"), ["3"]);
}

#[test]
fn analyze_reports_all_unbroken_wcms() {
    let o = wcm(&["analyze", s(&fixture("gast_6_0_0_9_0.cfg"))]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(values(&out, "verdict"), ["b=0 (smallest), 10 WCMs, all unbroken"]);
    assert_eq!(values(&out, "broken"), ["false"; 10]);
    assert_eq!(values(&out, "p").iter().filter(|&&p| p == "2").count(), 1);
}

#[test]
fn bad_column_weight_exits_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.cfg", "config q=4 gamma=3 a=2 ell=3\n1 1\n1 1\n1 0\n");
    let o = wcm(&["analyze", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    let o = wcm(&["verify", s(&write(&dir, "syn.cfg", "config q=4 gamma=1 a=1 ell=1\nx\n"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn remove_single_change_then_idempotent() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out.cfg");
    let o = wcm(&["remove", s(&fixture("gast_6_2_2_5_2.cfg")), "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rep = stdout(&o);
    assert_eq!(values(&rep, "outcome"), ["removed"]);
    assert_eq!(values(&rep, "changes").len(), 1);
    assert_eq!(values(&rep, "all_broken"), ["true"]);

    let v = wcm(&["verify", s(&out)]);
    assert!(v.status.success());
    assert_eq!(values(&stdout(&v), "summary"), ["not in Z; WCM verdict agrees"]);

    let again = dir.path().join("again.cfg");
    let o = wcm(&["remove", s(&out), "--out", s(&again)]);
    assert!(o.status.success());
    assert_eq!(values(&stdout(&o), "message"), ["not in Z, nothing to do"]);
    assert_eq!(values(&stdout(&o), "changes"), [""]);
    assert_eq!(std::fs::read_to_string(&again).unwrap(), std::fs::read_to_string(&out).unwrap());
}

#[test]
fn remove_two_changes_for_the_cycle_object() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out.cfg");
    let o = wcm(&["remove", s(&fixture("gast_6_0_0_9_0.cfg")), "--out", s(&out)]);
    assert!(o.status.success());
    let rep = stdout(&o);
    assert_eq!(values(&rep, "changes")[0].matches("->").count(), 2);
    assert_eq!(values(&rep, "all_broken"), ["true"]);
    let c = parse_config(&std::fs::read_to_string(&out).unwrap(), None).unwrap();
    let orig = fixtures::load("gast_6_0_0_9_0");
    assert_eq!(c.edges().zip(orig.edges()).filter(|(a, b)| a != b).count(), 2);
}

#[test]
fn exhausted_search_exits_3() {
    let o = wcm(&["remove", "--max-evaluations", "1", s(&fixture("gast_6_0_0_9_0.cfg"))]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(values(&stdout(&o), "outcome"), ["unremovable"]);
}

#[test]
fn verify_reports_witnesses() {
    let o = wcm(&["verify", s(&fixture("gast_6_0_0_9_0.cfg"))]);
    assert!(o.status.success());
    assert_eq!(values(&stdout(&o), "summary"), ["GAST (6,0,0,9,0), witness [α 1 1 α 1 1]; WCM verdict agrees"]);
    let o = wcm(&["verify", s(&fixture("gast_6_2_2_5_2.cfg"))]);
    assert_eq!(values(&stdout(&o), "summary"), ["GAST (6,2,2,5,2), witness [α² 1 1 1 α α]; WCM verdict agrees"]);
}

#[test]
fn verify_after_paper_change_is_out() {
    let dir = TempDir::new().unwrap();
    let text = std::fs::read_to_string(fixture("gast_6_2_2_5_2.cfg")).unwrap();
    // w12: α² -> α
    let changed = text.replacen("\n0 3 3 0 0 0\n", "\n0 2 3 0 0 0\n", 1);
    assert_ne!(text, changed);
    let o = wcm(&["verify", s(&write(&dir, "c.cfg", &changed))]);
    assert!(o.status.success());
    assert_eq!(values(&stdout(&o), "summary"), ["not in Z; WCM verdict agrees"]);
}

#[test]
fn oracle_cap_exits_4() {
    let o = wcm(&["verify", "--oracle-cap", "100", s(&fixture("gast_6_0_0_9_0.cfg"))]);
    assert_eq!(o.status.code(), Some(4));
    let o = wcm(&["analyze", "--oracle-cap", "100", s(&fixture("gast_6_0_0_9_0.cfg"))]);
    assert!(o.status.success());
    assert!(values(&stdout(&o), "message")[0].starts_with("oracle skipped"));
}

fn parse_change(line: &str) -> (usize, usize, u16, u16) {
    // (cN,vM): old -> new
    let (pos, vals) = line.split_once(": ").unwrap();
    let (c, v) = pos.trim_matches(|ch| ch == '(' || ch == ')').split_once(',').unwrap();
    let (old, new) = vals.split_once(" -> ").unwrap();
    (c[1..].parse().unwrap(), v[1..].parse().unwrap(), old.parse().unwrap(), new.parse().unwrap())
}

fn split_changes(field: &str) -> Vec<(usize, usize, u16, u16)> {
    if field.is_empty() {
        return Vec::new();
    }
    // Entries are joined by ','; each entry itself contains one ','.
    let parts: Vec<&str> = field.split(',').collect();
    parts.chunks(2).map(|p| parse_change(&format!("{},{}", p[0], p[1]))).collect()
}

#[test]
fn optimize_single_target_and_replay() {
    let dir = TempDir::new().unwrap();
    let code = write(&dir, "toy.code", TOY_CODE);
    let targets = write(&dir, "t.txt", "gast vns=1,2,3,4,5,6\n");
    let out = dir.path().join("opt.code");
    let o = wcm(&["optimize", s(&code), s(&targets), "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rep = stdout(&o);
    assert_eq!(values(&rep, "status"), ["removed"]);
    assert_eq!(values(&rep, "unremovable"), [""]);
    assert_eq!(values(&rep, "total_changes"), ["2"]);

    let mut g = parse_code(TOY_CODE, None).unwrap();
    for (c, v, old, new) in split_changes(values(&rep, "changes").last().unwrap()) {
        assert_eq!(g.weight(c - 1, v - 1), Some(FieldElement::from_raw(old)));
        g.set_weight(c - 1, v - 1, FieldElement::from_raw(new)).unwrap();
    }
    assert_eq!(write_code(&g), std::fs::read_to_string(&out).unwrap());
}

#[test]
fn optimize_with_no_targets_is_identity() {
    let dir = TempDir::new().unwrap();
    let text = format!("# a hand-written comment\n{TOY_CODE}");
    let code = write(&dir, "toy.code", &text);
    let targets = write(&dir, "t.txt", "");
    let out = dir.path().join("opt.code");
    let o = wcm(&["optimize", s(&code), s(&targets), "--out", s(&out)]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), text);
}

#[test]
fn overlapping_targets_are_reverified() {
    let dir = TempDir::new().unwrap();
    let code = write(&dir, "toy.code", TOY_CODE);
    let targets = write(&dir, "t.txt", "gast vns=1,2,3,4,5,6\ngast vns=1,5,6\n");
    let o = wcm(&["optimize", "--format", "json-lines", s(&code), s(&targets)]);
    assert!(o.status.success());
    let recs: Vec<serde_json::Value> = stderr(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let rever: Vec<_> = recs.iter().filter(|r| r["record"] == "reverification").collect();
    assert!(!rever.is_empty());
    assert!(rever.iter().all(|r| r["candidate_for"] == 1 && r["protected"] == 2));
    let objects: Vec<_> = recs.iter().filter(|r| r["record"] == "object").collect();
    // The smaller target goes first.
    assert_eq!(objects[0]["target"], 2);
    assert_eq!(parse_code(&stdout(&o), None).unwrap().n_cols(), 32);
}

#[test]
fn enumerate_toy_code() {
    let dir = TempDir::new().unwrap();
    let code = write(&dir, "toy.code", TOY_CODE);
    let o = wcm(&["enumerate", s(&code), "--max-a", "6", "--kind", "gast"]);
    assert!(o.status.success());
    let list = parse_targets(&stdout(&o)).unwrap();
    let whole: Vec<_> = list.iter().filter(|t| t.vns.len() == 6).collect();
    assert_eq!(whole.len(), 1);
    assert_eq!(whole[0].vns, [0, 1, 2, 3, 4, 5]);
    assert_eq!(whole[0].label, Some([6, 0, 0, 9, 0]));
    assert!(list.iter().all(|t| t.vns.iter().all(|&v| v < 6)));

    let o = wcm(&["enumerate", s(&code), "--max-a", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "");
    assert_eq!(values(&stderr(&o), "found"), ["0"]);
}

#[test]
fn enumerate_optimize_enumerate_does_not_grow() {
    let dir = TempDir::new().unwrap();
    let code = write(&dir, "toy.code", TOY_CODE);
    let list = dir.path().join("list.txt");
    assert!(wcm(&["enumerate", s(&code), "--max-a", "6", "--out", s(&list)]).status.success());
    let before = parse_targets(&std::fs::read_to_string(&list).unwrap()).unwrap().len();
    let opt = dir.path().join("opt.code");
    assert!(wcm(&["optimize", s(&code), s(&list), "--out", s(&opt)]).status.success());
    let o = wcm(&["enumerate", s(&opt), "--max-a", "6"]);
    let after = parse_targets(&stdout(&o)).unwrap().len();
    assert!(after <= before, "{after} > {before}");
}

#[test]
fn enumerate_lists_two_disjoint_objects() {
    let dir = TempDir::new().unwrap();
    let mut text = String::from("# primitive-poly 0b111\ncode rows=18 cols=12 q=4 gamma=3\n");
    for (off, name) in [(0, "gast_6_0_0_9_0"), (6, "gast_6_2_2_5_2")] {
        let c = fixtures::load(name);
        let r0 = if off == 0 { 0 } else { 9 };
        for (r, v, w) in c.edges() {
            text.push_str(&format!("{} {} {}\n", r0 + r + 1, off + v + 1, w.value()));
        }
    }
    let code = write(&dir, "two.code", &text);
    let o = wcm(&["enumerate", s(&code), "--max-a", "6"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let list = parse_targets(&stdout(&o)).unwrap();
    let whole: Vec<_> = list.iter().filter(|t| t.vns.len() == 6).map(|t| (t.vns.clone(), t.label)).collect();
    assert_eq!(
        whole,
        [((0..6).collect::<Vec<_>>(), Some([6, 0, 0, 9, 0])), ((6..12).collect(), Some([6, 2, 2, 5, 2]))]
    );
}

#[test]
fn json_lines_are_valid() {
    let o = wcm(&["analyze", "--format", "json-lines", s(&fixture("topology_8_0_16_0.cfg"))]);
    assert!(o.status.success());
    let recs: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let counts = recs.iter().find(|r| r["record"] == "counts").unwrap();
    assert_eq!((counts["t"].as_u64(), counts["t_prime"].as_u64()), (Some(24), Some(209)));
    assert_eq!(recs.iter().filter(|r| r["record"] == "wcm").count(), 24);
}

#[test]
fn field_poly_override() {
    let dir = TempDir::new().unwrap();
    let text = std::fs::read_to_string(fixture("gast_6_0_0_9_0.cfg")).unwrap().replace("# primitive-poly 0b111\n", "");
    let p = write(&dir, "np.cfg", &text);
    assert!(wcm(&["verify", "--field-poly", "0b111", s(&p)]).status.success());
    assert_eq!(wcm(&["verify", "--field-poly", "0b101", s(&p)]).status.code(), Some(2));
}
