//! The unlabeled tree of flippable degree-2 CNs and the weight consistency
//! matrices read off its leaves.
//!
//! Each non-root node holds one degree-2 CN. The path from the root to a
//! node is an ordered choice of CNs marked unsatisfied; a node's children are
//! the CNs that may be marked next without breaking the majority condition.
//! A leaf therefore names a maximal set of degree-2 CNs that can be
//! unsatisfied together.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::config::{compute_b_o_ut, compute_b_ut, ConfigError, Configuration, FlipState, ObjectKind};
use crate::linalg::GfMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WcmError {
    #[error("count is not an integer: {num} / {den}")]
    NonIntegralCount { num: u128, den: u128 },
    #[error("leaves of the tree sit at different depths")]
    NotSameSize,
    #[error("tree exceeds {0} nodes")]
    TooLarge(usize),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Pruning rule for the tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// General absorbing sets of type two.
    Gast,
    /// Oscillating sets of type two.
    Ost,
    /// Elementary absorbing sets: no degree-2 CN may be unsatisfied.
    Eas,
    /// Balanced absorbing sets: depth limited to ⌊a·g/2⌋ − d1.
    Bast,
}

impl Mode {
    pub fn kind(self) -> ObjectKind {
        match self {
            Mode::Ost => ObjectKind::Ost,
            _ => ObjectKind::Gast,
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "gast" => Ok(Mode::Gast),
            "ost" => Ok(Mode::Ost),
            "eas" => Ok(Mode::Eas),
            "bast" => Ok(Mode::Bast),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

/// Largest depth the tree may reach in the given mode.
pub fn depth_cap(c: &Configuration, mode: Mode) -> Result<usize, ConfigError> {
    let b_ut = compute_b_ut(c).value;
    Ok(match mode {
        Mode::Gast => b_ut,
        Mode::Ost => compute_b_o_ut(c)?.value,
        Mode::Eas => 0,
        Mode::Bast => {
            let raw = (c.a() * c.g() / 2) as i64 - c.d1() as i64;
            (raw.max(0) as usize).min(b_ut)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    /// CN stored at the node; `None` for the root.
    pub cn: Option<usize>,
    pub parent: Option<usize>,
    pub depth: usize,
    pub children: Vec<usize>,
}

/// Default bound on the number of tree nodes.
pub const DEFAULT_NODE_LIMIT: usize = 5_000_000;

/// Arena-stored tree; node 0 is the root.
#[derive(Clone, Debug)]
pub struct UnlabeledTree {
    mode: Mode,
    loop_max: usize,
    nodes: Vec<TreeNode>,
}

impl UnlabeledTree {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Depth cap used while building.
    pub fn loop_max(&self) -> usize {
        self.loop_max
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &TreeNode {
        &self.nodes[i]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// True when only the root exists.
    pub fn is_empty(&self) -> bool {
        self.nodes.len() == 1
    }

    /// Number of children of node `i`.
    pub fn u(&self, i: usize) -> usize {
        self.nodes[i].children.len()
    }

    /// CNs along the path from the root to node `i`, root side first.
    pub fn path(&self, mut i: usize) -> Vec<usize> {
        let mut p = Vec::new();
        while let Some(cn) = self.nodes[i].cn {
            p.push(cn);
            i = self.nodes[i].parent.expect("non-root has a parent");
        }
        p.reverse();
        p
    }

    /// Non-root nodes without children.
    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (1..self.nodes.len()).filter(|&i| self.nodes[i].children.is_empty())
    }

    /// Node count per depth, root level included.
    pub fn level_counts(&self) -> Vec<u64> {
        let mut counts: Vec<u64> = Vec::new();
        for n in &self.nodes {
            if counts.len() <= n.depth {
                counts.resize(n.depth + 1, 0);
            }
            counts[n.depth] += 1;
        }
        counts
    }

    /// Leaf count per depth, depth 0 included (always 0).
    pub fn leaf_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.b_et() + 1];
        for l in self.leaves() {
            counts[self.nodes[l].depth] += 1;
        }
        counts
    }

    /// Maximum depth reached: the most degree-2 CNs unsatisfied at once.
    pub fn b_et(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    /// Minimum leaf depth, or 0 when the root has no children.
    pub fn b_st(&self) -> usize {
        self.leaves().map(|l| self.nodes[l].depth).min().unwrap_or(0)
    }

    /// Whether every leaf sits at depth b_et.
    pub fn is_same_size(&self) -> bool {
        let b = self.b_et();
        self.leaves().all(|l| self.nodes[l].depth == b)
    }

    /// Children count per level when it is constant across each level, a
    /// proxy used by the closed-form count.
    pub fn u_profile(&self) -> Option<Vec<u64>> {
        let mut by_depth: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if n.depth >= self.b_et() {
                continue;
            }
            let u = self.u(i);
            match by_depth.get(&n.depth) {
                Some(&prev) if prev != u => return None,
                _ => {
                    by_depth.insert(n.depth, u);
                }
            }
        }
        Some(by_depth.values().map(|&u| u as u64).collect())
    }
}

/// Builds the tree for `c`. Children are generated in ascending CN order and
/// depth is capped by [`depth_cap`].
pub fn build_tree(c: &Configuration, mode: Mode) -> Result<UnlabeledTree, WcmError> {
    build_tree_limited(c, mode, DEFAULT_NODE_LIMIT)
}

pub fn build_tree_limited(c: &Configuration, mode: Mode, node_limit: usize) -> Result<UnlabeledTree, WcmError> {
    let loop_max = depth_cap(c, mode)?;
    let kind = mode.kind();
    let mut tree = UnlabeledTree {
        mode,
        loop_max,
        nodes: vec![TreeNode { cn: None, parent: None, depth: 0, children: Vec::new() }],
    };
    let mut st = FlipState::new(c);
    grow(c, kind, &mut st, &mut tree, 0, node_limit)?;
    Ok(tree)
}

fn grow(
    c: &Configuration,
    kind: ObjectKind,
    st: &mut FlipState,
    tree: &mut UnlabeledTree,
    at: usize,
    node_limit: usize,
) -> Result<(), WcmError> {
    let depth = tree.nodes[at].depth;
    if depth >= tree.loop_max {
        return Ok(());
    }
    for cn in st.flippable(c, kind) {
        if tree.nodes.len() >= node_limit {
            return Err(WcmError::TooLarge(node_limit));
        }
        let id = tree.nodes.len();
        tree.nodes.push(TreeNode { cn: Some(cn), parent: Some(at), depth: depth + 1, children: Vec::new() });
        tree.nodes[at].children.push(id);
        st.mark(c, cn);
        grow(c, kind, st, tree, id, node_limit)?;
        st.unmark(c, cn);
    }
    Ok(())
}

/// One weight consistency matrix: the rows of A that stay once the
/// degree-1 CNs and one maximal set of unsatisfiable degree-2 CNs are
/// removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wcm {
    /// Degree-2 CNs marked unsatisfied, ascending.
    pub deg2_removed: Vec<usize>,
    /// All removed rows (degree-1 plus `deg2_removed`), ascending.
    pub removed: Vec<usize>,
    /// Remaining rows, ascending.
    pub kept: Vec<usize>,
    pub matrix: GfMatrix,
}

impl Wcm {
    fn new(c: &Configuration, o: &[usize], mut deg2: Vec<usize>) -> Wcm {
        deg2.sort_unstable();
        let mut removed: Vec<usize> = o.iter().copied().chain(deg2.iter().copied()).collect();
        removed.sort_unstable();
        let kept: Vec<usize> = (0..c.ell()).filter(|r| removed.binary_search(r).is_err()).collect();
        let matrix = c.matrix().select_rows(&kept);
        Wcm { deg2_removed: deg2, removed, kept, matrix }
    }

    /// Whether fewer rows remain than there are VNs, so the null space is
    /// never trivial.
    pub fn is_short(&self, a: usize) -> bool {
        self.kept.len() < a
    }
}

/// The distinct WCMs of a configuration with their counts.
#[derive(Clone, Debug)]
pub struct WcmSet {
    pub mode: Mode,
    pub wcms: Vec<Wcm>,
    /// Number of distinct WCMs.
    pub t: u64,
    /// Number of nodes a permutation-unaware enumeration would visit.
    pub t_prime: u64,
    pub b_et: usize,
    pub b_st: usize,
}

impl WcmSet {
    /// Finds the WCM whose removed degree-2 CNs are exactly `deg2`.
    pub fn find(&self, deg2: &[usize]) -> Option<&Wcm> {
        let mut key = deg2.to_vec();
        key.sort_unstable();
        self.wcms.iter().find(|w| w.deg2_removed == key)
    }

    pub fn len(&self) -> usize {
        self.wcms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wcms.is_empty()
    }
}

/// One WCM per distinct leaf path set, ordered lexicographically by the
/// removed degree-2 CNs. A childless root yields the single WCM that drops
/// only the degree-1 rows.
pub fn extract_wcms(c: &Configuration, tree: &UnlabeledTree) -> WcmSet {
    let o = c.o_set();
    let mut keys: BTreeSet<Vec<usize>> = BTreeSet::new();
    if tree.u(0) == 0 {
        keys.insert(Vec::new());
    } else {
        for l in tree.leaves() {
            let mut p = tree.path(l);
            p.sort_unstable();
            keys.insert(p);
        }
    }
    let wcms: Vec<Wcm> = keys.into_iter().map(|k| Wcm::new(c, &o, k)).collect();
    let t_prime = count_suboptimal(tree).t_prime;
    WcmSet { mode: tree.mode(), t: wcms.len() as u64, wcms, t_prime, b_et: tree.b_et(), b_st: tree.b_st() }
}

/// Builds the tree and extracts the WCMs in one call.
pub fn wcms_of(c: &Configuration, mode: Mode) -> Result<WcmSet, WcmError> {
    let tree = build_tree(c, mode)?;
    Ok(extract_wcms(c, &tree))
}

fn factorials(n: usize) -> Vec<u128> {
    let mut f = vec![1u128; n + 1];
    for k in 1..=n {
        f[k] = f[k - 1] * k as u128;
    }
    f
}

fn exact_div(num: u128, den: u128) -> Result<u64, WcmError> {
    if num % den != 0 {
        return Err(WcmError::NonIntegralCount { num, den });
    }
    Ok((num / den) as u64)
}

/// t = Σ_k (leaves at depth k)/k!. Every leaf at depth k is one of the k!
/// orderings of its CN set, so the sum counts distinct sets.
pub fn count_wcms_general(tree: &UnlabeledTree) -> Result<u64, WcmError> {
    if tree.u(0) == 0 {
        return Ok(1);
    }
    let leaves = tree.leaf_counts();
    let fact = factorials(leaves.len());
    let mut total = 0u64;
    for (k, &n) in leaves.iter().enumerate().skip(1) {
        total += exact_div(n as u128, fact[k])?;
    }
    Ok(total)
}

/// t = (nodes at depth b_et)/b_et!, valid when all leaves share one depth.
pub fn count_wcms_same_size(tree: &UnlabeledTree) -> Result<u64, WcmError> {
    if !tree.is_same_size() {
        return Err(WcmError::NotSameSize);
    }
    let b = tree.b_et();
    let n = tree.level_counts()[b];
    exact_div(n as u128, factorials(b)[b])
}

/// t = Π u_k / b_et! for a tree where every node at depth k has u_k
/// children; `u` lists u_0, …, u_{b_et−1}.
pub fn count_wcms_u_symmetric(u: &[u64]) -> Result<u64, WcmError> {
    let prod: u128 = u.iter().map(|&x| x as u128).product();
    exact_div(prod, factorials(u.len())[u.len()])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuboptimalCount {
    /// Nodes an order-sensitive enumeration would visit, the empty root
    /// set included.
    pub t_prime: u64,
    /// t' − t.
    pub reduction: u64,
}

/// t' = 1 + Σ_j (nodes at depth j)/j!: every distinct partial
/// unsatisfied set, counted once.
pub fn count_suboptimal(tree: &UnlabeledTree) -> SuboptimalCount {
    let levels = tree.level_counts();
    let fact = factorials(levels.len());
    let mut tp = 1u64;
    for (j, &n) in levels.iter().enumerate().skip(1) {
        tp += (n as u128 / fact[j]) as u64;
    }
    let t = count_wcms_general(tree).unwrap_or(0);
    SuboptimalCount { t_prime: tp, reduction: tp - t }
}

/// t' − t counted from internal nodes: 1 + Σ_{1 ≤ j < b_et} (nodes at
/// depth j that have children) / j!.
pub fn count_reduction_internal(tree: &UnlabeledTree) -> Result<u64, WcmError> {
    let b = tree.b_et();
    let fact = factorials(b + 1);
    let mut per_depth = vec![0u128; b + 1];
    for (i, n) in tree.nodes().iter().enumerate() {
        if n.depth >= 1 && n.depth < b && tree.u(i) > 0 {
            per_depth[n.depth] += 1;
        }
    }
    let mut total = 1u64;
    for (j, &n) in per_depth.iter().enumerate().skip(1) {
        total += exact_div(n, fact[j])?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    fn six_three() -> Configuration {
        Configuration::from_rows(
            Field::gf4(),
            3,
            6,
            &[
                vec![0, 3, 3, 0, 0, 0],
                vec![0, 0, 1, 1, 0, 0],
                vec![0, 0, 0, 2, 1, 0],
                vec![0, 0, 0, 0, 1, 1],
                vec![1, 0, 0, 0, 0, 2],
                vec![2, 0, 2, 0, 2, 0],
                vec![0, 2, 0, 3, 0, 3],
                vec![0, 3, 0, 0, 0, 0],
                vec![1, 0, 0, 0, 0, 0],
            ],
        )
        .unwrap()
    }

    #[test]
    fn mixed_depth_tree() {
        let c = six_three();
        let tree = build_tree(&c, Mode::Gast).unwrap();
        assert_eq!(tree.u(0), 3);
        assert_eq!(tree.b_et(), 2);
        assert_eq!(tree.b_st(), 1);
        assert!(!tree.is_same_size());
        let set = extract_wcms(&c, &tree);
        assert_eq!(set.t, 2);
        assert!(set.find(&[1, 3]).is_some());
        assert!(set.find(&[2]).is_some());
        assert_eq!(count_wcms_general(&tree).unwrap(), 2);
        assert_eq!(count_suboptimal(&tree), SuboptimalCount { t_prime: 5, reduction: 3 });
        assert_eq!(count_reduction_internal(&tree).unwrap(), 3);
        assert_eq!(count_wcms_same_size(&tree), Err(WcmError::NotSameSize));
    }

    #[test]
    fn eas_mode_has_one_wcm() {
        let c = six_three();
        let set = wcms_of(&c, Mode::Eas).unwrap();
        assert_eq!(set.t, 1);
        assert_eq!(set.wcms[0].removed, vec![7, 8]);
        assert_eq!(set.wcms[0].matrix.rows(), 7);
    }

    #[test]
    fn u_symmetric_rejects_fractions() {
        assert_eq!(count_wcms_u_symmetric(&[3, 2, 1]).unwrap(), 1);
        assert_eq!(count_wcms_u_symmetric(&[5, 2, 1]).unwrap_err(), WcmError::NonIntegralCount { num: 10, den: 6 });
    }

    #[test]
    fn node_limit_is_enforced() {
        let c = six_three();
        assert_eq!(build_tree_limited(&c, Mode::Gast, 3).unwrap_err(), WcmError::TooLarge(3));
    }

    #[test]
    fn wcms_are_short_when_rows_run_out() {
        let c = six_three();
        let set = wcms_of(&c, Mode::Gast).unwrap();
        let w = set.find(&[1, 3]).unwrap();
        assert_eq!(w.kept, vec![0, 2, 4, 5, 6]);
        assert!(w.is_short(c.a()));
    }
}
