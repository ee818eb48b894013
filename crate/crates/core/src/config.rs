//! Absorbing-set configurations: the submatrix of a parity-check matrix
//! induced by a set of variable nodes, with its check-node degree classes.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::gf::{Field, FieldElement, GfError};
use crate::linalg::{GfMatrix, LinalgError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("variable node {vn} has degree {found}, expected column weight {gamma}")]
    ColumnWeight { vn: usize, found: usize, gamma: usize },
    #[error("check node {cn} has no neighbour in the configuration")]
    EmptyRow { cn: usize },
    #[error("column weight must be even for oscillating-set bounds, got {0}")]
    OddColumnWeight(usize),
    #[error("edge ({cn}, {vn}) is not part of the configuration")]
    NoSuchEdge { cn: usize, vn: usize },
    #[error("weights must be nonzero")]
    ZeroWeight,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Which kind of object the thresholds refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObjectKind {
    /// General absorbing sets of type two (strict majority).
    Gast,
    /// Oscillating sets of type two (weak majority, γ even).
    Ost,
}

/// Degree class of a check node inside a configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CnClass {
    /// Degree one (set O).
    One,
    /// Degree two (set T).
    Two,
    /// Degree above two (set H).
    High,
}

/// Unlabeled topology verdict.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TopoClass {
    pub gas: bool,
    pub gast: bool,
    pub os: bool,
    pub ost: bool,
}

/// A degree-based upper bound that was clamped at zero when its raw value
/// came out negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UpperBound {
    pub value: usize,
    pub raw: i64,
}

impl UpperBound {
    fn from_raw(raw: i64) -> Self {
        UpperBound { value: raw.max(0) as usize, raw }
    }

    pub fn clamped(&self) -> bool {
        self.raw < 0
    }
}

/// One weight substitution inside a configuration, in local indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightChange {
    pub cn: usize,
    pub vn: usize,
    pub old: FieldElement,
    pub new: FieldElement,
}

/// An ℓ × a matrix A over GF(q) whose columns each hold exactly γ nonzeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    gamma: usize,
    matrix: GfMatrix,
    cn_vns: Vec<Vec<usize>>,
    vn_cns: Vec<Vec<usize>>,
}

impl Configuration {
    pub fn new(gamma: usize, matrix: GfMatrix) -> Result<Self, ConfigError> {
        let (l, a) = (matrix.rows(), matrix.cols());
        let mut cn_vns = vec![Vec::new(); l];
        let mut vn_cns = vec![Vec::new(); a];
        for (c, vns) in cn_vns.iter_mut().enumerate() {
            for v in 0..a {
                if !matrix.get(c, v).is_zero() {
                    vns.push(v);
                    vn_cns[v].push(c);
                }
            }
            if vns.is_empty() {
                return Err(ConfigError::EmptyRow { cn: c });
            }
        }
        for (v, cns) in vn_cns.iter().enumerate() {
            if cns.len() != gamma {
                return Err(ConfigError::ColumnWeight { vn: v, found: cns.len(), gamma });
            }
        }
        Ok(Configuration { gamma, matrix, cn_vns, vn_cns })
    }

    /// Convenience constructor from integer-encoded rows.
    pub fn from_rows(field: Field, gamma: usize, a: usize, rows: &[Vec<u16>]) -> Result<Self, ConfigError> {
        Configuration::new(gamma, GfMatrix::from_rows(field, a, rows)?)
    }

    pub fn field(&self) -> &Field {
        self.matrix.field()
    }

    pub fn matrix(&self) -> &GfMatrix {
        &self.matrix
    }

    pub fn gamma(&self) -> usize {
        self.gamma
    }

    /// ⌊(γ − 1)/2⌋, the most unsatisfied neighbours a VN may have.
    pub fn g(&self) -> usize {
        (self.gamma - 1) / 2
    }

    /// Number of variable nodes.
    pub fn a(&self) -> usize {
        self.matrix.cols()
    }

    /// Number of check nodes.
    pub fn ell(&self) -> usize {
        self.matrix.rows()
    }

    pub fn weight(&self, cn: usize, vn: usize) -> FieldElement {
        self.matrix.get(cn, vn)
    }

    pub fn vns_of(&self, cn: usize) -> &[usize] {
        &self.cn_vns[cn]
    }

    pub fn cns_of(&self, vn: usize) -> &[usize] {
        &self.vn_cns[vn]
    }

    pub fn cn_degree(&self, cn: usize) -> usize {
        self.cn_vns[cn].len()
    }

    pub fn cn_class(&self, cn: usize) -> CnClass {
        match self.cn_degree(cn) {
            1 => CnClass::One,
            2 => CnClass::Two,
            _ => CnClass::High,
        }
    }

    fn cns_with(&self, class: CnClass) -> Vec<usize> {
        (0..self.ell()).filter(|&c| self.cn_class(c) == class).collect()
    }

    /// Degree-1 check nodes.
    pub fn o_set(&self) -> Vec<usize> {
        self.cns_with(CnClass::One)
    }

    /// Degree-2 check nodes.
    pub fn t_set(&self) -> Vec<usize> {
        self.cns_with(CnClass::Two)
    }

    /// Check nodes of degree above two.
    pub fn h_set(&self) -> Vec<usize> {
        self.cns_with(CnClass::High)
    }

    pub fn d1(&self) -> usize {
        self.o_set().len()
    }

    pub fn d2(&self) -> usize {
        self.t_set().len()
    }

    pub fn d3(&self) -> usize {
        self.h_set().len()
    }

    /// Number of degree-1 neighbours of `vn`.
    pub fn deg1_count(&self, vn: usize) -> usize {
        self.vn_cns[vn].iter().filter(|&&c| self.cn_degree(c) == 1).count()
    }

    /// Largest per-VN count of degree-1 neighbours.
    pub fn d1_vn_max(&self) -> usize {
        (0..self.a()).map(|v| self.deg1_count(v)).max().unwrap_or(0)
    }

    /// The other endpoint of a degree-2 check node.
    pub fn partner(&self, cn: usize, vn: usize) -> Option<usize> {
        let vns = &self.cn_vns[cn];
        if vns.len() != 2 {
            return None;
        }
        if vns[0] == vn {
            Some(vns[1])
        } else if vns[1] == vn {
            Some(vns[0])
        } else {
            None
        }
    }

    /// Returns a copy with the given weights replaced. Each change must hit an
    /// existing edge and carry a nonzero weight, so the topology is kept.
    pub fn with_weights(&self, changes: &[(usize, usize, FieldElement)]) -> Result<Configuration, ConfigError> {
        let mut m = self.matrix.clone();
        for &(cn, vn, w) in changes {
            if cn >= self.ell() || vn >= self.a() || m.get(cn, vn).is_zero() {
                return Err(ConfigError::NoSuchEdge { cn, vn });
            }
            if w.is_zero() {
                return Err(ConfigError::ZeroWeight);
            }
            if !self.field().contains(w) {
                return Err(GfError::ElementOutOfRange { value: w.value() as u32, q: self.field().q() }.into());
            }
            m.set(cn, vn, w);
        }
        Ok(Configuration { gamma: self.gamma, matrix: m, cn_vns: self.cn_vns.clone(), vn_cns: self.vn_cns.clone() })
    }

    /// All edges as (cn, vn, weight), row-major.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, FieldElement)> + '_ {
        self.cn_vns
            .iter()
            .enumerate()
            .flat_map(move |(c, vns)| vns.iter().map(move |&v| (c, v, self.matrix.get(c, v))))
    }
}

/// Unlabeled GAS / GAST / OS / OST test from degrees alone.
///
/// A VN passes the GAS test when it has more degree ≥ 2 neighbours than
/// degree-1 neighbours; the OS test relaxes this to "at least as many" and
/// needs γ even. The type-two variants additionally need d2 > d3.
pub fn classify_unlabeled(c: &Configuration) -> TopoClass {
    let gamma = c.gamma();
    let (mut strict, mut weak) = (true, true);
    for v in 0..c.a() {
        let o = c.deg1_count(v);
        let rest = gamma - o;
        strict &= rest > o;
        weak &= rest >= o;
    }
    let type_two = c.d2() > c.d3();
    let os = weak && gamma % 2 == 0;
    TopoClass { gas: strict, gast: strict && type_two, os, ost: os && type_two }
}

/// ⌊(a·g − d1)/2⌋: the most degree-2 CNs that can be unsatisfied in a GAST
/// with this topology.
pub fn compute_b_ut(c: &Configuration) -> UpperBound {
    let raw = (c.a() * c.g()) as i64 - c.d1() as i64;
    UpperBound::from_raw(raw.div_euclid(2))
}

/// ⌊(a·γ/2 − d1)/2⌋: the oscillating-set counterpart of [`compute_b_ut`].
pub fn compute_b_o_ut(c: &Configuration) -> Result<UpperBound, ConfigError> {
    if c.gamma() % 2 != 0 {
        return Err(ConfigError::OddColumnWeight(c.gamma()));
    }
    let raw = (c.a() * c.gamma() / 2) as i64 - c.d1() as i64;
    Ok(UpperBound::from_raw(raw.div_euclid(2)))
}

/// Largest total unsatisfied count b = d1 + b_ut for a GAST.
pub fn b_max(c: &Configuration) -> usize {
    c.d1() + compute_b_ut(c).value
}

/// Smallest number of satisfied neighbours a VN must keep *before* one
/// more of its degree-2 CNs may be flipped, exclusive.
///
/// For GASTs the bound is ⌈(γ+1)/2⌉, which is the same as requiring a
/// strict satisfied majority after the flip. For OSTs it is γ/2.
pub fn flip_threshold(gamma: usize, kind: ObjectKind) -> usize {
    match kind {
        ObjectKind::Gast => (gamma + 2) / 2,
        ObjectKind::Ost => gamma / 2,
    }
}

/// Working state for flippable-partner queries: per-VN count of currently
/// unsatisfied neighbours (degree-1 plus marked degree-2).
#[derive(Clone, Debug)]
pub struct FlipState {
    unsat: Vec<usize>,
    marked: Vec<bool>,
}

impl FlipState {
    pub fn new(c: &Configuration) -> Self {
        FlipState { unsat: (0..c.a()).map(|v| c.deg1_count(v)).collect(), marked: vec![false; c.ell()] }
    }

    pub fn is_marked(&self, cn: usize) -> bool {
        self.marked[cn]
    }

    pub fn mark(&mut self, c: &Configuration, cn: usize) {
        debug_assert!(!self.marked[cn]);
        self.marked[cn] = true;
        for &v in c.vns_of(cn) {
            self.unsat[v] += 1;
        }
    }

    pub fn unmark(&mut self, c: &Configuration, cn: usize) {
        debug_assert!(self.marked[cn]);
        self.marked[cn] = false;
        for &v in c.vns_of(cn) {
            self.unsat[v] -= 1;
        }
    }

    pub fn satisfied(&self, c: &Configuration, vn: usize) -> usize {
        c.gamma() - self.unsat[vn]
    }

    /// Unmarked degree-2 CNs whose flip keeps both endpoints within the
    /// threshold, ascending.
    pub fn flippable(&self, c: &Configuration, kind: ObjectKind) -> Vec<usize> {
        let th = flip_threshold(c.gamma(), kind);
        (0..c.ell())
            .filter(|&cn| {
                !self.marked[cn]
                    && c.cn_degree(cn) == 2
                    && c.vns_of(cn).iter().all(|&v| self.satisfied(c, v) > th)
            })
            .collect()
    }
}

/// Degree-2 CNs that may be marked unsatisfied next, given the set already
/// marked.
pub fn cn_flippable_partners(c: &Configuration, marked: &BTreeSet<usize>, kind: ObjectKind) -> Vec<usize> {
    let mut st = FlipState::new(c);
    for &m in marked {
        st.mark(c, m);
    }
    st.flippable(c, kind)
}
