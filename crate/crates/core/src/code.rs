//! Sparse parity-check matrix of a whole code, and the configurations it
//! induces on sets of variable nodes.

use thiserror::Error;

use crate::config::{ConfigError, Configuration, WeightChange};
use crate::gf::{Field, FieldElement};
use crate::linalg::GfMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("entry ({row}, {col}) lies outside a {rows}x{cols} matrix")]
    OutOfBounds { row: usize, col: usize, rows: usize, cols: usize },
    #[error("entry ({row}, {col}) given twice")]
    Duplicate { row: usize, col: usize },
    #[error("entry ({row}, {col}) is zero or not a field element")]
    BadWeight { row: usize, col: usize },
    #[error("column {col} has weight {found}, expected {gamma}")]
    ColumnWeight { col: usize, found: usize, gamma: usize },
    #[error("variable node {0} is out of range")]
    NoSuchVn(usize),
    #[error("edge ({cn}, {vn}) does not exist")]
    NoSuchEdge { cn: usize, vn: usize },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Column-regular sparse parity-check matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeGraph {
    field: Field,
    gamma: usize,
    /// Per row: (column, weight), sorted by column.
    rows: Vec<Vec<(usize, FieldElement)>>,
    /// Per column: rows, ascending.
    cols: Vec<Vec<usize>>,
}

/// Local-to-global index maps of an induced configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub vns: Vec<usize>,
    pub cns: Vec<usize>,
}

impl Embedding {
    pub fn to_global(&self, ch: &WeightChange) -> WeightChange {
        WeightChange { cn: self.cns[ch.cn], vn: self.vns[ch.vn], ..*ch }
    }

    /// Local (cn, vn) of a global edge, when both ends are in the object.
    pub fn to_local(&self, cn: usize, vn: usize) -> Option<(usize, usize)> {
        Some((self.cns.binary_search(&cn).ok()?, self.vns.binary_search(&vn).ok()?))
    }
}

impl CodeGraph {
    pub fn new(
        field: Field,
        gamma: usize,
        n_rows: usize,
        n_cols: usize,
        entries: &[(usize, usize, FieldElement)],
    ) -> Result<Self, CodeError> {
        let mut rows = vec![Vec::new(); n_rows];
        let mut cols = vec![Vec::new(); n_cols];
        for &(r, c, w) in entries {
            if r >= n_rows || c >= n_cols {
                return Err(CodeError::OutOfBounds { row: r, col: c, rows: n_rows, cols: n_cols });
            }
            if w.is_zero() || !field.contains(w) {
                return Err(CodeError::BadWeight { row: r, col: c });
            }
            rows[r].push((c, w));
            cols[c].push(r);
        }
        for (r, row) in rows.iter_mut().enumerate() {
            row.sort_unstable();
            if let Some(p) = row.windows(2).find(|p| p[0].0 == p[1].0) {
                return Err(CodeError::Duplicate { row: r, col: p[0].0 });
            }
        }
        for (c, col) in cols.iter_mut().enumerate() {
            col.sort_unstable();
            if col.len() != gamma {
                return Err(CodeError::ColumnWeight { col: c, found: col.len(), gamma });
            }
        }
        Ok(CodeGraph { field, gamma, rows, cols })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn gamma(&self) -> usize {
        self.gamma
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn cns_of(&self, vn: usize) -> &[usize] {
        &self.cols[vn]
    }

    /// (vn, weight) pairs of a row.
    pub fn row(&self, cn: usize) -> &[(usize, FieldElement)] {
        &self.rows[cn]
    }

    pub fn weight(&self, cn: usize, vn: usize) -> Option<FieldElement> {
        let row = &self.rows[cn];
        row.binary_search_by_key(&vn, |e| e.0).ok().map(|i| row[i].1)
    }

    pub fn set_weight(&mut self, cn: usize, vn: usize, w: FieldElement) -> Result<(), CodeError> {
        if w.is_zero() || !self.field.contains(w) {
            return Err(CodeError::BadWeight { row: cn, col: vn });
        }
        let row = self.rows.get_mut(cn).ok_or(CodeError::NoSuchEdge { cn, vn })?;
        let i = row.binary_search_by_key(&vn, |e| e.0).map_err(|_| CodeError::NoSuchEdge { cn, vn })?;
        row[i].1 = w;
        Ok(())
    }

    /// Applies global changes in order.
    pub fn apply(&mut self, changes: &[WeightChange]) -> Result<(), CodeError> {
        for ch in changes {
            self.set_weight(ch.cn, ch.vn, ch.new)?;
        }
        Ok(())
    }

    /// All entries, row-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, FieldElement)> + '_ {
        self.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |&(c, w)| (r, c, w)))
    }

    /// Variable nodes sharing a check node with `vn`, ascending.
    pub fn vn_neighbours(&self, vn: usize) -> Vec<usize> {
        let mut out: Vec<usize> =
            self.cols[vn].iter().flat_map(|&r| self.rows[r].iter().map(|e| e.0)).filter(|&v| v != vn).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Configuration induced by `vns`: every CN touching the set, rows in
    /// ascending global order, columns in ascending VN order.
    pub fn induced(&self, vns: &[usize]) -> Result<(Configuration, Embedding), CodeError> {
        let mut vns = vns.to_vec();
        vns.sort_unstable();
        vns.dedup();
        if let Some(&v) = vns.iter().find(|&&v| v >= self.n_cols()) {
            return Err(CodeError::NoSuchVn(v));
        }
        let mut cns: Vec<usize> = vns.iter().flat_map(|&v| self.cols[v].iter().copied()).collect();
        cns.sort_unstable();
        cns.dedup();
        let a = vns.len();
        let mut m = GfMatrix::zeros(self.field.clone(), cns.len(), a);
        for (i, &cn) in cns.iter().enumerate() {
            for &(v, w) in &self.rows[cn] {
                if let Ok(j) = vns.binary_search(&v) {
                    m.set(i, j, w);
                }
            }
        }
        let c = Configuration::new(self.gamma, m)?;
        Ok((c, Embedding { vns, cns }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: u16) -> FieldElement {
        FieldElement::from_raw(v)
    }

    fn cycle() -> CodeGraph {
        // Four VNs on a 4-cycle of CNs, γ = 2.
        let entries = [(0, 0, e(1)), (0, 1, e(2)), (1, 1, e(1)), (1, 2, e(3)), (2, 2, e(1)), (2, 3, e(1)), (3, 3, e(2)), (3, 0, e(1))];
        CodeGraph::new(Field::gf4(), 2, 4, 4, &entries).unwrap()
    }

    #[test]
    fn induced_configuration() {
        let g = cycle();
        let (c, emb) = g.induced(&[1, 0]).unwrap();
        assert_eq!(emb.vns, vec![0, 1]);
        assert_eq!(emb.cns, vec![0, 1, 3]);
        assert_eq!((c.d1(), c.d2()), (2, 1));
        assert_eq!(c.weight(0, 1), e(2));
        assert_eq!(emb.to_local(3, 0), Some((2, 0)));
        assert_eq!(emb.to_local(2, 0), None);
    }

    #[test]
    fn validation() {
        assert!(matches!(
            CodeGraph::new(Field::gf4(), 1, 1, 1, &[(0, 0, e(1)), (0, 0, e(2))]),
            Err(CodeError::Duplicate { row: 0, col: 0 })
        ));
        assert!(matches!(CodeGraph::new(Field::gf4(), 1, 1, 1, &[(0, 0, e(0))]), Err(CodeError::BadWeight { .. })));
        assert!(matches!(CodeGraph::new(Field::gf4(), 1, 1, 2, &[(0, 0, e(1))]), Err(CodeError::ColumnWeight { .. })));
    }

    #[test]
    fn weights_update() {
        let mut g = cycle();
        g.set_weight(1, 2, e(1)).unwrap();
        assert_eq!(g.weight(1, 2), Some(e(1)));
        assert!(g.set_weight(1, 3, e(1)).is_err());
        assert_eq!(g.vn_neighbours(0), vec![1, 3]);
    }
}
