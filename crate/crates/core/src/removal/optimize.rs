//! Removal of a list of objects from a whole code, smallest first, without
//! undoing earlier removals.

use std::collections::BTreeMap;

use crate::code::{CodeGraph, Embedding};
use crate::config::{classify_unlabeled, ObjectKind, WeightChange};
use crate::wcmtree::{wcms_of, Mode, WcmSet};

use super::plan::{remove_object, RemovalGuard, RemovalOptions, RemovalOutcome, RemovalPlan};
use super::{is_in_z, RemovalError};

/// An object instance inside the code: global VN indices (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Target {
    pub vns: Vec<usize>,
    pub kind: ObjectKind,
    /// (a, b, d1, d2, d3) as supplied; informational only.
    pub label: Option<[usize; 5]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phases {
    GastOnly,
    GastThenOst,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObjectStatus {
    /// Removed by the listed changes.
    Removed,
    /// Already outside its set; nothing to do.
    AlreadyOut,
    Unremovable(String),
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProcessedObject {
    pub target: usize,
    pub kind: ObjectKind,
    pub vns: Vec<usize>,
    pub status: ObjectStatus,
    /// Global changes applied for this object.
    pub changes: Vec<WeightChange>,
    pub plan: Option<RemovalPlan>,
    /// (a, b, d1, d2, d3) with b from the smallest-b member assignment.
    pub params: Option<[usize; 5]>,
}

/// One check of an earlier removal against a candidate change set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Reverification {
    /// Target whose candidate was checked.
    pub candidate_for: usize,
    /// Earlier target that was re-evaluated.
    pub protected: usize,
    /// Whether the earlier target stayed removed.
    pub held: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OptimizationReport {
    /// In processing order.
    pub objects: Vec<ProcessedObject>,
    /// Targets removed or already out.
    pub processed: Vec<usize>,
    pub unremovable: Vec<usize>,
    pub skipped: Vec<usize>,
    /// Every global change, in application order.
    pub changes: Vec<WeightChange>,
    pub reverifications: Vec<Reverification>,
}

impl OptimizationReport {
    pub fn total_changes(&self) -> usize {
        self.changes.len()
    }
}

struct Protected {
    target: usize,
    vns: Vec<usize>,
    wcms: WcmSet,
}

struct CodeGuard<'a> {
    graph: &'a CodeGraph,
    emb: &'a Embedding,
    protected: &'a [Protected],
    by_vn: &'a BTreeMap<usize, Vec<usize>>,
    current: usize,
    support_cap: usize,
    events: &'a mut Vec<Reverification>,
}

impl RemovalGuard for CodeGuard<'_> {
    fn accepts(&mut self, changes: &[WeightChange]) -> Result<bool, RemovalError> {
        let global: Vec<WeightChange> = changes.iter().map(|c| self.emb.to_global(c)).collect();
        let mut hit: Vec<usize> = global.iter().filter_map(|c| self.by_vn.get(&c.vn)).flatten().copied().collect();
        hit.sort_unstable();
        hit.dedup();
        for p in hit {
            let prot = &self.protected[p];
            let (cfg, pemb) = self.graph.induced(&prot.vns).map_err(RemovalError::from)?;
            let local: Vec<_> = global
                .iter()
                .filter_map(|c| pemb.to_local(c.cn, c.vn).map(|(cn, vn)| (cn, vn, c.new)))
                .collect();
            let cfg = cfg.with_weights(&local)?;
            let held = !is_in_z(&cfg, &prot.wcms, self.support_cap)?;
            self.events.push(Reverification { candidate_for: self.current, protected: prot.target, held });
            if !held {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Removes `targets` from a copy of `graph` and reports what happened.
///
/// GAST targets go first, smallest a first (input order breaks ties); OST
/// targets follow when `phases` asks for them and γ is even. Each accepted
/// change set must leave all earlier processed objects outside their sets.
pub fn optimize_code(
    graph: &CodeGraph,
    targets: &[Target],
    phases: Phases,
    opts: &RemovalOptions,
) -> (CodeGraph, OptimizationReport) {
    let mut g = graph.clone();
    let mut report = OptimizationReport::default();
    let mut protected: Vec<Protected> = Vec::new();
    let mut by_vn: BTreeMap<usize, Vec<usize>> = BTreeMap::new();

    let ordered = |kind: ObjectKind| {
        let mut idx: Vec<usize> = (0..targets.len()).filter(|&i| targets[i].kind == kind).collect();
        idx.sort_by_key(|&i| (targets[i].vns.len(), i));
        idx
    };
    let skip = |report: &mut OptimizationReport, i: usize, why: &str| {
        report.skipped.push(i);
        report.objects.push(ProcessedObject {
            target: i,
            kind: targets[i].kind,
            vns: targets[i].vns.clone(),
            status: ObjectStatus::Skipped(why.to_string()),
            changes: Vec::new(),
            plan: None,
            params: None,
        });
    };

    let mut schedule: Vec<(usize, Mode)> = ordered(ObjectKind::Gast).into_iter().map(|i| (i, Mode::Gast)).collect();
    let ost = ordered(ObjectKind::Ost);
    if phases == Phases::GastOnly {
        for &i in &ost {
            skip(&mut report, i, "oscillating phase not requested");
        }
    } else if g.gamma() % 2 != 0 {
        for &i in &ost {
            skip(&mut report, i, "column weight is odd");
        }
    } else {
        schedule.extend(ost.into_iter().map(|i| (i, Mode::Ost)));
    }

    for (i, mode) in schedule {
        let t = &targets[i];
        let (cfg, emb) = match g.induced(&t.vns) {
            Ok(x) => x,
            Err(e) => {
                skip(&mut report, i, &e.to_string());
                continue;
            }
        };
        let topo = classify_unlabeled(&cfg);
        let fits = match mode {
            Mode::Ost => topo.ost,
            _ => topo.gast,
        };
        if !fits {
            skip(&mut report, i, "topology does not qualify");
            continue;
        }
        let wcms = match wcms_of(&cfg, mode) {
            Ok(w) => w,
            Err(e) => {
                skip(&mut report, i, &e.to_string());
                continue;
            }
        };
        let mut events = Vec::new();
        let result = {
            let mut guard = CodeGuard {
                graph: &g,
                emb: &emb,
                protected: &protected,
                by_vn: &by_vn,
                current: i,
                support_cap: opts.support_cap,
                events: &mut events,
            };
            remove_object(&cfg, &wcms, opts, &mut guard)
        };
        report.reverifications.extend(events);
        let label = |plan: &RemovalPlan| {
            plan.witness.as_ref().map(|w| [cfg.a(), w.b, cfg.d1(), cfg.d2(), cfg.d3()])
        };
        let mut obj = ProcessedObject {
            target: i,
            kind: t.kind,
            vns: emb.vns.clone(),
            status: ObjectStatus::AlreadyOut,
            changes: Vec::new(),
            plan: None,
            params: None,
        };
        match result {
            Ok(plan) => {
                obj.params = label(&plan);
                match plan.outcome {
                    RemovalOutcome::NotInSet => {}
                    RemovalOutcome::Removed => {
                        let global: Vec<WeightChange> = plan.changes.iter().map(|c| emb.to_global(c)).collect();
                        g.apply(&global).expect("changes target existing edges");
                        report.changes.extend(global.iter().copied());
                        obj.changes = global;
                        obj.status = ObjectStatus::Removed;
                    }
                    RemovalOutcome::Unremovable => {
                        obj.status = ObjectStatus::Unremovable("search exhausted".to_string());
                    }
                }
                obj.plan = Some(plan);
            }
            Err(e) => obj.status = ObjectStatus::Unremovable(e.to_string()),
        }
        if matches!(obj.status, ObjectStatus::Unremovable(_)) {
            report.unremovable.push(i);
        } else {
            report.processed.push(i);
            let p = protected.len();
            for &v in &emb.vns {
                by_vn.entry(v).or_default().push(p);
            }
            protected.push(Protected { target: i, vns: emb.vns.clone(), wcms });
        }
        report.objects.push(obj);
    }
    (g, report)
}
