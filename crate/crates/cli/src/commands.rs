//! The five subcommands.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde_json::Value;
use wcm_core::config::b_max;
use wcm_core::formats::{parse_code, parse_config, parse_targets, power_vector, write_code, write_config, write_targets};
use wcm_core::removal::{
    evaluate_weight_conditions, is_in_z, optimize_code, oracle_scan, remove_object, ObjectStatus, OracleVerdict,
    Phases, RemovalOutcome, Witness,
};
use wcm_core::search::{enumerate as scan, SearchOptions};
use wcm_core::wcmtree::{count_suboptimal, wcms_of};
use wcm_core::{
    build_tree, classify_unlabeled, compute_b_o_ut, compute_b_ut, extract_wcms, CodeGraph, Configuration,
    FormatError, Mode, ObjectKind, RemovalError, RemovalOptions, WcmError, WeightChange,
};

use crate::report::{Record, Report};
use crate::{Global, KindArg, PhasesArg};

pub enum CliError {
    Io(String),
    Parse(String),
    Unremovable,
    OracleInfeasible(String),
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Failed(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Unremovable => 3,
            CliError::OracleInfeasible(_) => 4,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Io(m) | CliError::Parse(m) | CliError::OracleInfeasible(m) | CliError::Failed(m) => m.clone(),
            CliError::Unremovable => "object is unremovable within the search limits".into(),
        }
    }
}

impl From<RemovalError> for CliError {
    fn from(e: RemovalError) -> Self {
        match e {
            RemovalError::OracleTooLarge { .. } => CliError::OracleInfeasible(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<WcmError> for CliError {
    fn from(e: WcmError) -> Self {
        CliError::Failed(e.to_string())
    }
}

type Res<T> = Result<T, CliError>;

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn parse_err(path: &Path, e: FormatError) -> CliError {
    CliError::Parse(format!("{}: {e}", path.display()))
}

fn load_config(path: &Path, g: &Global) -> Res<Configuration> {
    parse_config(&read(path)?, g.field_poly).map_err(|e| parse_err(path, e))
}

fn load_code(path: &Path, g: &Global) -> Res<(CodeGraph, String)> {
    let text = read(path)?;
    let code = parse_code(&text, g.field_poly).map_err(|e| parse_err(path, e))?;
    Ok((code, text))
}

fn write_file(path: &Path, text: &str) -> Res<()> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Sends the report, and the artifact when there is one. The artifact takes
/// `--out` (or stdout); the report then goes to stdout (or stderr).
fn emit(g: &Global, report: &Report, artifact: Option<&str>) -> Res<()> {
    let text = report.render(g.format);
    match (artifact, &g.out) {
        (Some(a), Some(out)) => {
            write_file(out, a)?;
            print!("{text}");
        }
        (Some(a), None) => {
            print!("{a}");
            eprint!("{text}");
        }
        (None, Some(out)) => write_file(out, &text)?,
        (None, None) => print!("{text}"),
    }
    std::io::stdout().flush().map_err(|e| CliError::Io(e.to_string()))
}

fn cn_label(cn: usize) -> String {
    format!("c{}", cn + 1)
}

fn one_based(xs: &[usize]) -> Vec<usize> {
    xs.iter().map(|x| x + 1).collect()
}

fn change_line(ch: &WeightChange) -> String {
    format!("(c{},v{}): {} -> {}", ch.cn + 1, ch.vn + 1, ch.old.value(), ch.new.value())
}

fn changes_value(chs: &[WeightChange]) -> Value {
    Value::from(chs.iter().map(change_line).collect::<Vec<_>>())
}

fn kind_name(k: ObjectKind) -> &'static str {
    match k {
        ObjectKind::Gast => "gast",
        ObjectKind::Ost => "ost",
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Gast => "gast",
        Mode::Ost => "ost",
        Mode::Eas => "eas",
        Mode::Bast => "bast",
    }
}

fn params(c: &Configuration, w: &Witness) -> [usize; 5] {
    [c.a(), w.b, c.d1(), c.d2(), c.d3()]
}

fn params_text(p: &[usize; 5]) -> String {
    format!("({},{},{},{},{})", p[0], p[1], p[2], p[3], p[4])
}

fn options(g: &Global) -> RemovalOptions {
    RemovalOptions {
        support_cap: g.support_cap,
        oracle_cap: g.oracle_cap,
        max_evaluations: g.max_evaluations,
        ..RemovalOptions::default()
    }
}

fn configuration_record(c: &Configuration) -> Record {
    Record::new("configuration")
        .with("q", c.field().q())
        .with("gamma", c.gamma())
        .with("a", c.a())
        .with("ell", c.ell())
        .with("d1", c.d1())
        .with("d2", c.d2())
        .with("d3", c.d3())
        .with("g", c.g())
}

fn witness_record(name: &'static str, c: &Configuration, w: Option<&Witness>) -> Record {
    let mut r = Record::new(name).with("found", w.is_some());
    if let Some(w) = w {
        r.push("b", w.b);
        r.push("params", params_text(&params(c, w)));
        r.push("witness", power_vector(c.field(), &w.values));
        r.push("unsatisfied", w.unsat.iter().map(|&x| cn_label(x)).collect::<Vec<_>>());
    }
    r
}

fn mode_fits(c: &Configuration, mode: Mode) -> bool {
    let t = classify_unlabeled(c);
    match mode {
        Mode::Ost => t.ost,
        _ => t.gast,
    }
}

pub fn analyze(path: &Path, g: &Global) -> Res<()> {
    let c = load_config(path, g)?;
    let mode: Mode = g.mode.into();
    let mut rep = Report::default();
    rep.add(configuration_record(&c));
    let topo = classify_unlabeled(&c);
    rep.add(
        Record::new("classification")
            .with("gas", topo.gas)
            .with("gast", topo.gast)
            .with("os", topo.os)
            .with("ost", topo.ost)
            .with("mode", mode_name(mode)),
    );
    if mode == Mode::Ost && c.gamma() % 2 != 0 {
        rep.warn("oscillating mode needs an even column weight; nothing more to report");
        return emit(g, &rep, None);
    }

    let mut smallest_b = None;
    match oracle_scan(&c, mode, g.oracle_cap) {
        Ok(v) => {
            smallest_b = v.member.as_ref().map(|w| w.b);
            let mut r = witness_record("oracle", &c, v.member.as_ref());
            r.push("assignments", v.assignments);
            rep.add(r);
        }
        Err(RemovalError::OracleTooLarge { needed, cap }) => {
            rep.warn(format!("oracle skipped: {needed} assignments exceed the cap of {cap}"));
        }
        Err(e) => return Err(e.into()),
    }

    let ut = compute_b_ut(&c);
    if ut.clamped() {
        rep.warn(format!("a*g - d1 = {} is negative; b_ut clamped to 0", ut.raw));
    }
    let mut bounds = Record::new("bounds").with("b_ut", ut.value).with("b_max", b_max(&c));
    if let Ok(o) = compute_b_o_ut(&c) {
        bounds.push("b_o_ut", o.value);
    }
    let tree = match build_tree(&c, mode) {
        Ok(t) => t,
        Err(e) => {
            rep.add(bounds);
            rep.warn(format!("tree not built: {e}"));
            return emit(g, &rep, None);
        }
    };
    bounds.push("b_et", tree.b_et());
    bounds.push("b_st", tree.b_st());
    bounds.push("same_size", tree.is_same_size());
    bounds.push("u_profile", tree.u_profile().map_or(Value::Null, Value::from));
    rep.add(bounds);
    let wcms = extract_wcms(&c, &tree);
    let sub = count_suboptimal(&tree);
    rep.add(Record::new("counts").with("t", wcms.t).with("t_prime", sub.t_prime).with("reduction", sub.reduction));

    match evaluate_weight_conditions(&c, &wcms, g.support_cap) {
        Ok(eval) => {
            for (h, (w, e)) in wcms.wcms.iter().zip(&eval.entries).enumerate() {
                rep.add(
                    Record::new("wcm")
                        .with("h", h + 1)
                        .with("removed", w.deg2_removed.iter().map(|&x| cn_label(x)).collect::<Vec<_>>())
                        .with("rows", w.kept.len())
                        .with("short", e.short)
                        .with("broken", e.broken)
                        .with("p", e.null_dim)
                        .with("delta", e.delta)
                        .with("component_dims", e.component_null_dims.clone())
                        .with("witness", e.witness.as_ref().map_or(Value::Null, |v| power_vector(c.field(), v).into())),
                );
            }
            let open = eval.unbroken().len();
            let status = match open {
                0 => "all broken".to_string(),
                n if n == eval.entries.len() => "all unbroken".to_string(),
                n => format!("{n} unbroken"),
            };
            let b = smallest_b.map_or_else(|| "b unknown".to_string(), |b| format!("b={b} (smallest)"));
            rep.add(
                Record::new("summary")
                    .with("in_set", open > 0)
                    .with("unbroken", open)
                    .with("verdict", format!("{b}, {} WCMs, {status}", wcms.len())),
            );
        }
        Err(e) => rep.warn(format!("weight conditions not evaluated: {e}")),
    }
    emit(g, &rep, None)
}

pub fn remove(path: &Path, mode: Mode, g: &Global) -> Res<()> {
    let c = load_config(path, g)?;
    let mut rep = Report::default();
    rep.add(configuration_record(&c));
    if mode == Mode::Ost && c.gamma() % 2 != 0 {
        return Err(CliError::Failed("oscillating mode needs an even column weight".into()));
    }
    let set = if mode == Mode::Ost { "Z_o" } else { "Z" };
    if !mode_fits(&c, mode) {
        rep.add(Record::new("plan").with("outcome", "not-in-set").with("message", format!("topology does not qualify; not in {set}, nothing to do")));
        return emit(g, &rep, Some(&write_config(&c)));
    }
    let w = wcms_of(&c, mode)?;
    let plan = remove_object(&c, &w, &options(g), &mut ())?;
    let mut r = Record::new("plan")
        .with("kind", kind_name(plan.kind))
        .with("e_min", plan.e_min.e_min)
        .with("e_bound", plan.e_min.e_bound)
        .with("b_vn_max", plan.e_min.b_vn_max.map_or(Value::Null, Value::from))
        .with("d1_vn_max", plan.e_min.d1_vn_max)
        .with("params", plan.witness.as_ref().map_or(Value::Null, |x| params_text(&params(&c, x)).into()));
    let out = match plan.outcome {
        RemovalOutcome::NotInSet => {
            r.push("outcome", "not-in-set");
            r.push("message", format!("not in {set}, nothing to do"));
            c.clone()
        }
        RemovalOutcome::Removed => {
            r.push("outcome", "removed");
            let local: Vec<_> = plan.changes.iter().map(|ch| (ch.cn, ch.vn, ch.new)).collect();
            c.with_weights(&local).map_err(|e| CliError::Failed(e.to_string()))?
        }
        RemovalOutcome::Unremovable => {
            r.push("outcome", "unremovable");
            r.push("message", format!("search exhausted after {} evaluations", plan.evaluations));
            c.clone()
        }
    };
    r.push("selected_vn", plan.selected_vn.map_or(Value::Null, |v| format!("v{}", v + 1).into()));
    r.push("changes", changes_value(&plan.changes));
    r.push("evaluations", plan.evaluations);
    r.push("exceeded_bound", plan.exceeded_bound);
    rep.add(r);
    if plan.outcome == RemovalOutcome::Unremovable {
        emit(g, &rep, None)?;
        return Err(CliError::Unremovable);
    }
    let after = evaluate_weight_conditions(&out, &w, g.support_cap)?;
    rep.add(Record::new("verification").with("all_broken", after.all_broken()).with("unbroken", after.unbroken().len()));
    emit(g, &rep, Some(&write_config(&out)))
}

pub fn optimize(code: &Path, targets: &Path, phases: PhasesArg, g: &Global) -> Res<()> {
    let (graph, original) = load_code(code, g)?;
    let list = parse_targets(&read(targets)?).map_err(|e| parse_err(targets, e))?;
    for (i, t) in list.iter().enumerate() {
        if let Some(&v) = t.vns.iter().find(|&&v| v >= graph.n_cols()) {
            return Err(CliError::Parse(format!("{}: target {} names v{} beyond {} columns", targets.display(), i + 1, v + 1, graph.n_cols())));
        }
    }
    let phases = match phases {
        PhasesArg::Gast => Phases::GastOnly,
        PhasesArg::GastOst => Phases::GastThenOst,
    };
    let (out, report) = optimize_code(&graph, &list, phases, &options(g));
    let mut rep = Report::default();
    for o in &report.objects {
        let (status, why) = match &o.status {
            ObjectStatus::Removed => ("removed", None),
            ObjectStatus::AlreadyOut => ("already-out", None),
            ObjectStatus::Unremovable(m) => ("unremovable", Some(m.clone())),
            ObjectStatus::Skipped(m) => ("skipped", Some(m.clone())),
        };
        let mut r = Record::new("object")
            .with("target", o.target + 1)
            .with("kind", kind_name(o.kind))
            .with("vns", one_based(&o.vns))
            .with("status", status)
            .with("params", o.params.as_ref().map_or(Value::Null, |p| params_text(p).into()))
            .with("changes", changes_value(&o.changes));
        if let Some(p) = &o.plan {
            r.push("e_min", p.e_min.e_min);
            r.push("e_bound", p.e_min.e_bound);
            r.push("vetoed", p.vetoed);
        }
        if let Some(m) = why {
            r.push("reason", m);
        }
        rep.add(r);
    }
    for v in &report.reverifications {
        rep.add(
            Record::new("reverification")
                .with("candidate_for", v.candidate_for + 1)
                .with("protected", v.protected + 1)
                .with("held", v.held),
        );
    }
    rep.add(
        Record::new("summary")
            .with("processed", one_based(&report.processed))
            .with("unremovable", one_based(&report.unremovable))
            .with("skipped", one_based(&report.skipped))
            .with("total_changes", report.total_changes())
            .with("changes", changes_value(&report.changes)),
    );
    let text = if report.changes.is_empty() { original } else { write_code(&out) };
    emit(g, &rep, Some(&text))
}

pub fn enumerate(code: &Path, max_a: usize, kind: KindArg, budget: u64, g: &Global) -> Res<()> {
    let (graph, _) = load_code(code, g)?;
    let kind = match kind {
        KindArg::Gast => ObjectKind::Gast,
        KindArg::Ost => ObjectKind::Ost,
    };
    if kind == ObjectKind::Ost && graph.gamma() % 2 != 0 {
        return Err(CliError::Failed("oscillating objects need an even column weight".into()));
    }
    let mut opts = SearchOptions::new(max_a, kind);
    opts.budget = budget;
    opts.support_cap = g.support_cap;
    opts.oracle_cap = g.oracle_cap;
    let res = scan(&graph, &opts)?;
    let mut rep = Report::default();
    if res.truncated {
        rep.warn(format!("budget of {budget} subsets exhausted; the list is partial"));
    }
    for f in &res.found {
        rep.add(
            Record::new("found")
                .with("kind", kind_name(f.kind))
                .with("vns", one_based(&f.vns))
                .with("params", params_text(&f.params))
                .with("b_known", f.b_known),
        );
    }
    rep.add(
        Record::new("summary")
            .with("examined", res.examined)
            .with("found", res.found.len())
            .with("truncated", res.truncated),
    );
    let targets: Vec<_> = res.found.iter().map(|f| f.to_target()).collect();
    emit(g, &rep, Some(&write_targets(&targets)))
}

fn verdict(c: &Configuration, kind: ObjectKind, v: &OracleVerdict) -> String {
    let (name, set) = match kind {
        ObjectKind::Gast => ("GAST", "Z"),
        ObjectKind::Ost => ("OST", "Z_o"),
    };
    match &v.member {
        Some(w) => format!("{name} {}, witness {}", params_text(&params(c, w)), power_vector(c.field(), &w.values)),
        None => format!("not in {set}"),
    }
}

pub fn verify(path: &Path, g: &Global) -> Res<()> {
    let c = load_config(path, g)?;
    let mode: Mode = g.mode.into();
    if mode == Mode::Ost && c.gamma() % 2 != 0 {
        return Err(CliError::Failed("oscillating mode needs an even column weight".into()));
    }
    let v = oracle_scan(&c, mode, g.oracle_cap)?;
    let topo = classify_unlabeled(&c);
    let mut rep = Report::default();
    rep.add(configuration_record(&c));
    rep.add(
        Record::new("oracle")
            .with("mode", mode_name(mode))
            .with("assignments", v.assignments)
            .with("gas", v.is_gas())
            .with("gast", v.is_gas() && topo.gast)
            .with("os", v.is_os())
            .with("ost", v.is_os() && topo.ost),
    );
    rep.add(witness_record("smallest_gas", &c, v.gas.as_ref()));
    if c.gamma() % 2 == 0 {
        rep.add(witness_record("smallest_os", &c, v.os.as_ref()));
    }
    let wcm_in = mode_fits(&c, mode) && is_in_z(&c, &wcms_of(&c, mode)?, g.support_cap)?;
    let agrees = wcm_in == v.in_set();
    let mut text = verdict(&c, mode.kind(), &v);
    text.push_str(if agrees { "; WCM verdict agrees" } else { "; WCM verdict disagrees" });
    rep.add(
        Record::new("verdict")
            .with("in_set", v.in_set())
            .with("wcm_in_set", wcm_in)
            .with("agrees", agrees)
            .with("b", v.member.as_ref().map_or(Value::Null, |w| w.b.into()))
            .with("summary", text),
    );
    emit(g, &rep, None)?;
    if agrees {
        Ok(())
    } else {
        Err(CliError::Failed("oracle and WCM verdicts disagree".into()))
    }
}
