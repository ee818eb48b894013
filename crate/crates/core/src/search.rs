//! Naive finder: scans connected VN subsets of a code for objects in Z
//! (or, for oscillating sets, in Z_o but not Z).

use std::collections::BTreeSet;

use crate::code::CodeGraph;
use crate::config::{classify_unlabeled, ObjectKind};
use crate::linalg::DEFAULT_SUPPORT_CAP;
use crate::removal::{is_in_z, oracle_scan, RemovalError, Target};
use crate::wcmtree::{wcms_of, Mode};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub max_a: usize,
    pub kind: ObjectKind,
    /// Subsets examined before stopping.
    pub budget: u64,
    pub support_cap: usize,
    /// Assignment cap for computing b; above it b is left unknown.
    pub oracle_cap: u64,
}

impl SearchOptions {
    pub fn new(max_a: usize, kind: ObjectKind) -> Self {
        SearchOptions { max_a, kind, budget: 5_000_000, support_cap: DEFAULT_SUPPORT_CAP, oracle_cap: 1_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Found {
    pub vns: Vec<usize>,
    pub kind: ObjectKind,
    /// (a, b, d1, d2, d3); b is the smallest member b when computable.
    pub params: [usize; 5],
    pub b_known: bool,
}

impl Found {
    pub fn to_target(&self) -> Target {
        Target { vns: self.vns.clone(), kind: self.kind, label: self.b_known.then_some(self.params) }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchResult {
    pub found: Vec<Found>,
    pub examined: u64,
    /// The budget ran out before the scan finished.
    pub truncated: bool,
}

/// Calls `visit` on every connected VN subset of size at most `max_a`,
/// each exactly once, ordered by smallest member then extension order.
/// Stops early when `visit` returns false.
pub fn for_each_connected_subset(g: &CodeGraph, max_a: usize, mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    let nbrs: Vec<Vec<usize>> = (0..g.n_cols()).map(|v| g.vn_neighbours(v)).collect();
    let mut sub = Vec::new();
    for v in 0..g.n_cols() {
        sub.clear();
        sub.push(v);
        let ext: BTreeSet<usize> = nbrs[v].iter().copied().filter(|&u| u > v).collect();
        if !extend(&nbrs, &mut sub, ext, v, max_a, &mut visit) {
            return false;
        }
    }
    true
}

// Enumeration of connected subgraphs after Wernicke's ESU scheme: a vertex
// joins the extension set only through its first-reached neighbour.
fn extend(
    nbrs: &[Vec<usize>],
    sub: &mut Vec<usize>,
    mut ext: BTreeSet<usize>,
    root: usize,
    max_a: usize,
    visit: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if !visit(sub) {
        return false;
    }
    if sub.len() == max_a {
        return true;
    }
    while let Some(w) = ext.pop_first() {
        let mut next = ext.clone();
        for &u in &nbrs[w] {
            if u > root && !sub.contains(&u) && !sub.iter().any(|&s| nbrs[s].binary_search(&u).is_ok()) {
                next.insert(u);
            }
        }
        sub.push(w);
        let go = extend(nbrs, sub, next, root, max_a, visit);
        sub.pop();
        if !go {
            return false;
        }
    }
    true
}

/// Membership of the subset `vns` in the requested family.
pub fn classify_subset(g: &CodeGraph, vns: &[usize], opts: &SearchOptions) -> Result<Option<Found>, RemovalError> {
    let (c, emb) = g.induced(vns)?;
    let topo = classify_unlabeled(&c);
    let hit = match opts.kind {
        ObjectKind::Gast => topo.gast && is_in_z(&c, &wcms_of(&c, Mode::Gast)?, opts.support_cap)?,
        ObjectKind::Ost => {
            topo.ost
                && is_in_z(&c, &wcms_of(&c, Mode::Ost)?, opts.support_cap)?
                && !(topo.gast && is_in_z(&c, &wcms_of(&c, Mode::Gast)?, opts.support_cap)?)
        }
    };
    if !hit {
        return Ok(None);
    }
    let mode = match opts.kind {
        ObjectKind::Gast => Mode::Gast,
        ObjectKind::Ost => Mode::Ost,
    };
    let (b, b_known) = match oracle_scan(&c, mode, opts.oracle_cap) {
        Ok(v) => (v.member.map_or(c.d1(), |w| w.b), true),
        Err(RemovalError::OracleTooLarge { .. }) => (c.d1(), false),
        Err(e) => return Err(e),
    };
    Ok(Some(Found { vns: emb.vns, kind: opts.kind, params: [c.a(), b, c.d1(), c.d2(), c.d3()], b_known }))
}

/// Scans connected subsets of size ≤ `max_a`, smallest first in output.
pub fn enumerate(g: &CodeGraph, opts: &SearchOptions) -> Result<SearchResult, RemovalError> {
    let mut res = SearchResult::default();
    let mut err = None;
    let finished = for_each_connected_subset(g, opts.max_a, |vns| {
        if res.examined >= opts.budget {
            res.truncated = true;
            return false;
        }
        res.examined += 1;
        match classify_subset(g, vns, opts) {
            Ok(Some(f)) => res.found.push(f),
            Ok(None) => {}
            Err(e) => {
                err = Some(e);
                return false;
            }
        }
        true
    });
    if let Some(e) = err {
        return Err(e);
    }
    debug_assert!(finished || res.truncated);
    res.found.sort_by(|a, b| (a.vns.len(), &a.vns).cmp(&(b.vns.len(), &b.vns)));
    res.found.dedup_by(|a, b| a.vns == b.vns);
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{Field, FieldElement};

    #[test]
    fn connected_subsets_of_a_path() {
        // Path v0 – v1 – v2 – v3 through degree-2 CNs; end CNs are degree 1.
        let one = FieldElement::ONE;
        let entries = [
            (0, 0, one),
            (1, 0, one),
            (1, 1, one),
            (2, 1, one),
            (2, 2, one),
            (3, 2, one),
            (3, 3, one),
            (4, 3, one),
        ];
        let g = CodeGraph::new(Field::gf4(), 2, 5, 4, &entries).unwrap();
        let mut seen = Vec::new();
        for_each_connected_subset(&g, 3, |s| {
            let mut s = s.to_vec();
            s.sort_unstable();
            seen.push(s);
            true
        });
        seen.sort();
        let expect: Vec<Vec<usize>> = vec![
            vec![0],
            vec![0, 1],
            vec![0, 1, 2],
            vec![1],
            vec![1, 2],
            vec![1, 2, 3],
            vec![2],
            vec![2, 3],
            vec![3],
        ];
        assert_eq!(seen, expect);
    }
}
