//! Labeled analysis: weight conditions per WCM, membership in the sets of
//! harmful objects, and their removal through edge-weight changes.

mod optimize;
mod oracle;
mod plan;

pub use optimize::{optimize_code, ObjectStatus, OptimizationReport, Phases, ProcessedObject, Reverification, Target};
pub use oracle::{compute_b_for_values, oracle_scan, OracleVerdict, SyndromeProfile, Witness, DEFAULT_ORACLE_CAP};
pub use plan::{
    compute_e_min, remove_object, select_candidate_edges, EMin, RemovalGuard, RemovalOptions, RemovalOutcome,
    RemovalPlan,
};

use thiserror::Error;

use crate::code::CodeError;
use crate::config::{ConfigError, Configuration};
use crate::gf::FieldElement;
use crate::linalg::{find_full_support_vector, has_full_support_vector, GfMatrix, LinalgError};
use crate::wcmtree::{Wcm, WcmError, WcmSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RemovalError {
    #[error("exhaustive scan needs {needed} assignments, cap is {cap}")]
    OracleTooLarge { needed: u128, cap: u64 },
    #[error("no degree-2 check node touches a candidate variable node")]
    NoCandidate,
    #[error("value vector must have {expected} nonzero entries")]
    InvalidValues { expected: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Wcm(#[from] WcmError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Weight-condition status of one WCM.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WcmCondition {
    pub deg2_removed: Vec<usize>,
    pub broken: bool,
    /// Null-space dimension p_h.
    pub null_dim: usize,
    pub witness: Option<Vec<FieldElement>>,
    /// Connected components of the VNs joined by the remaining rows.
    pub delta: usize,
    pub component_null_dims: Vec<usize>,
    pub short: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightConditionReport {
    pub entries: Vec<WcmCondition>,
}

impl WeightConditionReport {
    pub fn all_broken(&self) -> bool {
        self.entries.iter().all(|e| e.broken)
    }

    /// Indices of WCMs whose weight conditions still hold.
    pub fn unbroken(&self) -> Vec<usize> {
        (0..self.entries.len()).filter(|&i| !self.entries[i].broken).collect()
    }
}

/// Partition of the columns of `m` into classes joined by shared nonzero
/// rows. Columns untouched by any row are singletons.
pub fn column_components(m: &GfMatrix) -> Vec<Vec<usize>> {
    let n = m.cols();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for r in 0..m.rows() {
        let mut first = None;
        for c in 0..n {
            if m.get(r, c).is_zero() {
                continue;
            }
            match first {
                None => first = Some(c),
                Some(f) => {
                    let (a, b) = (find(&mut parent, f), find(&mut parent, c));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for c in 0..n {
        let root = find(&mut parent, c);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(c);
    }
    groups
}

/// Null dimension of each connected block of `m`, in the order of
/// [`column_components`].
pub fn component_null_dims(m: &GfMatrix) -> Vec<usize> {
    column_components(m)
        .iter()
        .map(|comp| {
            let rows: Vec<usize> = (0..m.rows()).filter(|&r| comp.iter().any(|&c| !m.get(r, c).is_zero())).collect();
            let block: Vec<Vec<u16>> =
                rows.iter().map(|&r| comp.iter().map(|&c| m.get(r, c).value()).collect()).collect();
            let sub = GfMatrix::from_rows(m.field().clone(), comp.len(), &block).expect("entries come from m");
            comp.len() - sub.rank()
        })
        .collect()
}

fn wcm_matrix(c: &Configuration, w: &Wcm) -> GfMatrix {
    c.matrix().select_rows(&w.kept)
}

/// Status of one WCM under the weights of `c`.
pub fn evaluate_wcm(c: &Configuration, w: &Wcm, support_cap: usize) -> Result<WcmCondition, RemovalError> {
    let m = wcm_matrix(c, w);
    let ns = m.null_space();
    let witness = find_full_support_vector(&ns, support_cap)?;
    let comps = column_components(&m);
    Ok(WcmCondition {
        deg2_removed: w.deg2_removed.clone(),
        broken: witness.is_none(),
        null_dim: ns.dimension(),
        witness,
        delta: comps.len(),
        component_null_dims: component_null_dims(&m),
        short: w.is_short(c.a()),
    })
}

/// Evaluates every WCM of `w` against the current weights of `c`. The WCM
/// row sets depend only on topology, so `w` may come from an earlier
/// labeling of the same configuration.
pub fn evaluate_weight_conditions(
    c: &Configuration,
    w: &WcmSet,
    support_cap: usize,
) -> Result<WeightConditionReport, RemovalError> {
    let entries = w.wcms.iter().map(|x| evaluate_wcm(c, x, support_cap)).collect::<Result<_, _>>()?;
    Ok(WeightConditionReport { entries })
}

/// Whether some WCM of `w` is unbroken under the weights of `c`.
pub fn is_in_z(c: &Configuration, w: &WcmSet, support_cap: usize) -> Result<bool, RemovalError> {
    for x in &w.wcms {
        let ns = wcm_matrix(c, x).null_space();
        if has_full_support_vector(&ns, support_cap)? {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    #[test]
    fn components_split_block_diagonal() {
        let m = GfMatrix::from_rows(Field::gf4(), 5, &[vec![1, 1, 0, 0, 0], vec![0, 0, 1, 2, 0], vec![0, 0, 0, 1, 0]])
            .unwrap();
        assert_eq!(column_components(&m), vec![vec![0, 1], vec![2, 3], vec![4]]);
        assert_eq!(component_null_dims(&m), vec![1, 0, 1]);
        assert_eq!(m.null_space().dimension(), 2);
    }
}
