//! Minimum edge-change counts, candidate edges and the weight search that
//! removes one object.

use crate::config::{Configuration, ObjectKind, WeightChange};
use crate::gf::FieldElement;
use crate::linalg::{has_full_support_vector, DEFAULT_SUPPORT_CAP};
use crate::wcmtree::WcmSet;

use super::oracle::{oracle_scan, Witness, DEFAULT_ORACLE_CAP};
use super::RemovalError;

/// Fewest edge-weight changes needed and the topological bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EMin {
    pub e_min: usize,
    pub e_bound: usize,
    /// Most unsatisfied neighbours at one VN under the defining assignment,
    /// when one is known.
    pub b_vn_max: Option<usize>,
    pub d1_vn_max: usize,
}

/// E_min from the defining assignment (or the bound alone when none is
/// available).
pub fn compute_e_min(c: &Configuration, witness: Option<&Witness>, kind: ObjectKind) -> EMin {
    let d1_vn_max = c.d1_vn_max();
    match kind {
        ObjectKind::Gast => {
            let g = c.g();
            let e_bound = (g + 1).saturating_sub(d1_vn_max);
            let b_vn_max = witness.map(|w| w.b_vn_max(c));
            let e_min = b_vn_max.map_or(e_bound, |b| (g + 1).saturating_sub(b));
            EMin { e_min, e_bound, b_vn_max, d1_vn_max }
        }
        ObjectKind::Ost => {
            let e_bound = (c.gamma() / 2 + 1).saturating_sub(d1_vn_max);
            EMin { e_min: 1, e_bound, b_vn_max: witness.map(|w| w.b_vn_max(c)), d1_vn_max }
        }
    }
}

/// VNs carrying the most degree-1 neighbours, ascending.
fn maximal_vns(c: &Configuration) -> Vec<usize> {
    let m = c.d1_vn_max();
    (0..c.a()).filter(|&v| c.deg1_count(v) == m).collect()
}

fn combinations(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if k > n {
        return true;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return false;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return true;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Local candidate edge sets, as (cn, vn) pairs: for each size 1..=e_bound
/// and each VN with the most degree-1 neighbours, every subset of its
/// degree-2 CNs of that size.
pub fn select_candidate_edges(
    c: &Configuration,
    e_bound: usize,
    _kind: ObjectKind,
) -> Result<Vec<Vec<(usize, usize)>>, RemovalError> {
    let vns = maximal_vns(c);
    let per_vn: Vec<(usize, Vec<usize>)> = vns
        .iter()
        .map(|&v| (v, c.cns_of(v).iter().copied().filter(|&cn| c.cn_degree(cn) == 2).collect()))
        .collect();
    if per_vn.iter().all(|(_, cns)| cns.is_empty()) {
        return Err(RemovalError::NoCandidate);
    }
    let mut out = Vec::new();
    for k in 1..=e_bound {
        for (v, cns) in &per_vn {
            combinations(cns.len(), k, |idx| {
                out.push(idx.iter().map(|&i| (cns[i], *v)).collect());
                true
            });
        }
    }
    Ok(out)
}

/// Check on the wider code before a candidate is accepted: earlier removals
/// must not be undone.
pub trait RemovalGuard {
    /// `changes` are in the local indices of the configuration being
    /// removed.
    fn accepts(&mut self, changes: &[WeightChange]) -> Result<bool, RemovalError>;
}

impl RemovalGuard for () {
    fn accepts(&mut self, _: &[WeightChange]) -> Result<bool, RemovalError> {
        Ok(true)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RemovalOptions {
    pub support_cap: usize,
    pub oracle_cap: u64,
    /// Changes allowed beyond e_bound before giving up.
    pub extra_changes: usize,
    /// Weight assignments tried before giving up.
    pub max_evaluations: u64,
}

impl Default for RemovalOptions {
    fn default() -> Self {
        RemovalOptions {
            support_cap: DEFAULT_SUPPORT_CAP,
            oracle_cap: DEFAULT_ORACLE_CAP,
            extra_changes: 2,
            max_evaluations: 2_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RemovalOutcome {
    /// Every WCM was already broken; nothing changed.
    NotInSet,
    Removed,
    Unremovable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemovalPlan {
    pub kind: ObjectKind,
    pub e_min: EMin,
    /// VN whose edges were changed, when all changes share one.
    pub selected_vn: Option<usize>,
    pub changes: Vec<WeightChange>,
    pub outcome: RemovalOutcome,
    /// Weight assignments evaluated.
    pub evaluations: u64,
    /// Candidates that broke every WCM but were vetoed by the guard.
    pub vetoed: u64,
    /// The plan needed more than e_bound changes.
    pub exceeded_bound: bool,
    /// Smallest-b member assignment before any change, when the scan ran.
    pub witness: Option<Witness>,
}

fn all_broken(c: &Configuration, w: &WcmSet, cap: usize) -> Result<bool, RemovalError> {
    for x in &w.wcms {
        let ns = c.matrix().select_rows(&x.kept).null_space();
        if has_full_support_vector(&ns, cap)? {
            return Ok(false);
        }
    }
    Ok(true)
}

enum Step {
    Found(Vec<WeightChange>),
    Continue,
    Exhausted,
}

struct Search<'a> {
    c: &'a Configuration,
    w: &'a WcmSet,
    opts: RemovalOptions,
    guard: &'a mut dyn RemovalGuard,
    evaluations: u64,
    vetoed: u64,
    found: Option<Vec<WeightChange>>,
    error: Option<RemovalError>,
}

impl Search<'_> {
    /// Runs one edge set; false once the search should stop.
    fn run(&mut self, edges: &[(usize, usize)]) -> bool {
        match self.try_edges(edges) {
            Ok(Step::Continue) => true,
            Ok(Step::Found(ch)) => {
                self.found = Some(ch);
                false
            }
            Ok(Step::Exhausted) => false,
            Err(e) => {
                self.error = Some(e);
                false
            }
        }
    }

    /// Tries every new-weight assignment for one edge set, first edge most
    /// significant, weights ascending.
    fn try_edges(&mut self, edges: &[(usize, usize)]) -> Result<Step, RemovalError> {
        let f = self.c.field().clone();
        let olds: Vec<FieldElement> = edges.iter().map(|&(cn, vn)| self.c.weight(cn, vn)).collect();
        let choices: Vec<Vec<FieldElement>> =
            olds.iter().map(|&o| f.nonzero().filter(|&x| x != o).collect()).collect();
        if choices.iter().any(|c| c.is_empty()) {
            return Ok(Step::Continue);
        }
        let mut idx = vec![0usize; edges.len()];
        loop {
            if self.evaluations >= self.opts.max_evaluations {
                return Ok(Step::Exhausted);
            }
            self.evaluations += 1;
            let subst: Vec<(usize, usize, FieldElement)> =
                edges.iter().zip(&idx).zip(&choices).map(|((&(cn, vn), &i), ch)| (cn, vn, ch[i])).collect();
            let d = self.c.with_weights(&subst)?;
            if all_broken(&d, self.w, self.opts.support_cap)? {
                let changes: Vec<WeightChange> = subst
                    .iter()
                    .zip(&olds)
                    .map(|(&(cn, vn, new), &old)| WeightChange { cn, vn, old, new })
                    .collect();
                if self.guard.accepts(&changes)? {
                    return Ok(Step::Found(changes));
                }
                self.vetoed += 1;
            }
            let mut k = idx.len();
            loop {
                if k == 0 {
                    return Ok(Step::Continue);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }
}

/// Finds the first weight assignment, in a fixed order, that breaks every
/// WCM of `w` and passes `guard`.
///
/// Candidate sets come from [`select_candidate_edges`] up to e_bound; past
/// that, any degree-2 CN edges of the object are tried, one per CN, for up
/// to `extra_changes` more.
pub fn remove_object(
    c: &Configuration,
    w: &WcmSet,
    opts: &RemovalOptions,
    guard: &mut dyn RemovalGuard,
) -> Result<RemovalPlan, RemovalError> {
    let kind = w.mode.kind();
    let witness = match oracle_scan(c, w.mode, opts.oracle_cap) {
        Ok(v) => v.member,
        Err(RemovalError::OracleTooLarge { .. }) => None,
        Err(e) => return Err(e),
    };
    let e = compute_e_min(c, witness.as_ref(), kind);
    let mut plan = RemovalPlan {
        kind,
        e_min: e,
        selected_vn: None,
        changes: Vec::new(),
        outcome: RemovalOutcome::NotInSet,
        evaluations: 0,
        vetoed: 0,
        exceeded_bound: false,
        witness,
    };
    if all_broken(c, w, opts.support_cap)? {
        return Ok(plan);
    }

    let local = select_candidate_edges(c, e.e_bound, kind)?;
    let mut search = Search { c, w, opts: *opts, guard, evaluations: 0, vetoed: 0, found: None, error: None };
    let mut going = local.iter().all(|edges| search.run(edges));
    let pool = c.t_set();
    for k in e.e_bound + 1..=e.e_bound + opts.extra_changes {
        if !going {
            break;
        }
        going = combinations(pool.len(), k, |idx| {
            // Each CN contributes one of its two edges.
            (0..1u32 << k).all(|mask| {
                let edges: Vec<(usize, usize)> = idx
                    .iter()
                    .enumerate()
                    .map(|(j, &i)| (pool[i], c.vns_of(pool[i])[((mask >> (k - 1 - j)) & 1) as usize]))
                    .collect();
                search.run(&edges)
            })
        });
    }
    if let Some(err) = search.error.take() {
        return Err(err);
    }
    let found = search.found.take();
    plan.evaluations = search.evaluations;
    plan.vetoed = search.vetoed;
    match found {
        Some(ch) => {
            let vns: Vec<usize> = ch.iter().map(|x| x.vn).collect();
            plan.selected_vn = vns.first().copied().filter(|v| vns.iter().all(|x| x == v));
            plan.exceeded_bound = ch.len() > e.e_bound;
            plan.changes = ch;
            plan.outcome = RemovalOutcome::Removed;
        }
        None => plan.outcome = RemovalOutcome::Unremovable,
    }
    Ok(plan)
}
