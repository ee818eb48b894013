//! Dense matrices over GF(2^λ): row reduction, rank, null spaces and the
//! search for full-support null-space vectors.

use thiserror::Error;

use crate::gf::{Field, FieldElement, GfError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("null space of dimension {dim} exceeds the search cap {cap}")]
    SearchTooLarge { dim: usize, cap: usize },
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct GfMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl std::fmt::Debug for GfMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{:?} {}x{}", self.field, self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.value().to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl GfMatrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<FieldElement>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        if let Some(x) = data.iter().find(|x| !field.contains(**x)) {
            return Err(GfError::ElementOutOfRange { value: x.value() as u32, q: field.q() }.into());
        }
        Ok(GfMatrix { field, rows, cols, data })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        GfMatrix { field, rows, cols, data: vec![FieldElement::ZERO; rows * cols] }
    }

    /// Builds a matrix from integer-encoded rows. All rows must have equal
    /// length; `cols` is only consulted when `rows` is empty.
    pub fn from_rows(field: Field, cols: usize, rows: &[Vec<u16>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(cols, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend(r.iter().map(|&v| FieldElement::from_raw(v)));
        }
        GfMatrix::new(field, rows.len(), cols, data)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: FieldElement) {
        debug_assert!(self.field.contains(x));
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Submatrix made of the listed rows, in the listed order.
    pub fn select_rows(&self, rows: &[usize]) -> GfMatrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        GfMatrix { field: self.field.clone(), rows: rows.len(), cols: self.cols, data }
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (GfMatrix, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for k in 0..m.cols {
                    m.data.swap(p * m.cols + k, r * m.cols + k);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for k in 0..m.cols {
                let v = f.mul(m.get(r, k), inv);
                m.set(r, k, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let s = m.get(i, c);
                if s.is_zero() {
                    continue;
                }
                for k in 0..m.cols {
                    let v = m.get(i, k) + f.mul(s, m.get(r, k));
                    m.set(i, k, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of {x : M x = 0}, one vector per free column, with a 1 at that
    /// column.
    pub fn null_space(&self) -> NullSpaceBasis {
        let (m, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut vectors = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![FieldElement::ZERO; self.cols];
            v[free] = FieldElement::ONE;
            // Characteristic two: x_pivot = sum of row entries at free columns.
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = m.get(i, free);
            }
            vectors.push(v);
        }
        NullSpaceBasis { field: self.field.clone(), len: self.cols, vectors }
    }

    pub fn mat_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        if let Some(x) = v.iter().find(|x| !self.field.contains(**x)) {
            return Err(GfError::ElementOutOfRange { value: x.value() as u32, q: self.field.q() }.into());
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(FieldElement::ZERO, |acc, (&a, &b)| acc + self.field.mul(a, b))
            })
            .collect())
    }
}

/// A basis of a null space, as column vectors of length `len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullSpaceBasis {
    field: Field,
    len: usize,
    vectors: Vec<Vec<FieldElement>>,
}

impl NullSpaceBasis {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }

    pub fn vector_len(&self) -> usize {
        self.len
    }

    pub fn vectors(&self) -> &[Vec<FieldElement>] {
        &self.vectors
    }

    /// Whether `v` lies in the span.
    pub fn contains(&self, v: &[FieldElement]) -> bool {
        if v.len() != self.len {
            return false;
        }
        let mut rows: Vec<Vec<u16>> = self.vectors.iter().map(|b| b.iter().map(|x| x.value()).collect()).collect();
        rows.push(v.iter().map(|x| x.value()).collect());
        let m = GfMatrix::from_rows(self.field.clone(), self.len, &rows).expect("same field");
        m.rank() == self.dimension()
    }

    /// Whether both bases span the same space.
    pub fn spans_same(&self, other: &NullSpaceBasis) -> bool {
        self.field == other.field
            && self.len == other.len
            && self.dimension() == other.dimension()
            && other.vectors.iter().all(|v| self.contains(v))
    }
}

/// Default cap on the null-space dimension explored by
/// [`find_full_support_vector`].
pub const DEFAULT_SUPPORT_CAP: usize = 12;

/// Visits one representative of every projective point of the span (first
/// nonzero coefficient equal to 1), (q^p − 1)/(q − 1) in all. Stops when
/// `visit` returns false.
fn for_each_projective(basis: &NullSpaceBasis, mut visit: impl FnMut(&[FieldElement]) -> bool) {
    let p = basis.dimension();
    let f = &basis.field;
    let q = f.q() as u16;
    for lead in 0..p {
        let mut v = basis.vectors[lead].clone();
        let mut digits = vec![0u16; p - lead - 1];
        loop {
            if !visit(&v) {
                return;
            }
            // Odometer over the coefficients of basis vectors lead+1..p; each
            // digit change updates v by (old + new)·b.
            let mut k = digits.len();
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                let old = digits[k];
                let new = if old + 1 == q { 0 } else { old + 1 };
                digits[k] = new;
                let delta = FieldElement::from_raw(old ^ new);
                for (x, &bj) in v.iter_mut().zip(&basis.vectors[lead + 1 + k]) {
                    *x += f.mul(delta, bj);
                }
                if new != 0 {
                    k += 1;
                    break;
                }
            }
            if k == 0 {
                break;
            }
        }
    }
}

fn check_cap(basis: &NullSpaceBasis, cap: usize) -> Result<bool, LinalgError> {
    let p = basis.dimension();
    if p > cap {
        return Err(LinalgError::SearchTooLarge { dim: p, cap });
    }
    // A coordinate that vanishes on every basis vector vanishes everywhere.
    Ok(p > 0 && (0..basis.len).all(|j| basis.vectors.iter().any(|b| !b[j].is_zero())))
}

/// Whether the span holds a vector with every coordinate nonzero. Stops at
/// the first one found.
pub fn has_full_support_vector(basis: &NullSpaceBasis, cap: usize) -> Result<bool, LinalgError> {
    if !check_cap(basis, cap)? {
        return Ok(false);
    }
    let mut found = false;
    for_each_projective(basis, |v| {
        found = v.iter().all(|x| !x.is_zero());
        !found
    });
    Ok(found)
}

/// A full-support vector of the span, if any: over all of them, the one
/// that [`canonical_scaling`] leaves with the most coordinates equal to 1
/// (ties to the lexicographically smallest).
pub fn find_full_support_vector(
    basis: &NullSpaceBasis,
    cap: usize,
) -> Result<Option<Vec<FieldElement>>, LinalgError> {
    if !check_cap(basis, cap)? {
        return Ok(None);
    }
    let f = basis.field.clone();
    let mut best: Option<(usize, Vec<FieldElement>)> = None;
    for_each_projective(basis, |v| {
        if v.iter().all(|x| !x.is_zero()) {
            let w = canonical_scaling(&f, v.to_vec());
            let ones = w.iter().filter(|&&x| x == FieldElement::ONE).count();
            if best.as_ref().is_none_or(|(bo, bw)| ones > *bo || (ones == *bo && w < *bw)) {
                best = Some((ones, w));
            }
        }
        true
    });
    Ok(best.map(|(_, w)| w))
}

/// Rescales `v` so that as many coordinates as possible equal 1, breaking
/// ties towards the lexicographically smallest encoding.
pub fn canonical_scaling(f: &Field, v: Vec<FieldElement>) -> Vec<FieldElement> {
    let mut best: Option<(usize, Vec<FieldElement>)> = None;
    for s in f.nonzero() {
        let w: Vec<FieldElement> = v.iter().map(|&x| f.mul(x, s)).collect();
        let ones = w.iter().filter(|&&x| x == FieldElement::ONE).count();
        let better = match &best {
            None => true,
            Some((bo, bw)) => ones > *bo || (ones == *bo && w < *bw),
        };
        if better {
            best = Some((ones, w));
        }
    }
    best.map(|(_, w)| w).unwrap_or(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf4() -> Field {
        Field::gf4()
    }

    fn el(v: &[u16]) -> Vec<FieldElement> {
        v.iter().map(|&x| FieldElement::from_raw(x)).collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        let m = GfMatrix::from_rows(gf4(), 3, &[vec![1, 2, 3], vec![2, 3, 1], vec![1, 0, 0]]).unwrap();
        // Second row is α times the first.
        assert_eq!(m.rank(), 2);
        assert_eq!(m.null_space().dimension(), 1);
    }

    #[test]
    fn empty_matrix_has_full_null_space() {
        let m = GfMatrix::from_rows(gf4(), 4, &[]).unwrap();
        assert_eq!(m.rank(), 0);
        let ns = m.null_space();
        assert_eq!(ns.dimension(), 4);
        assert!(has_full_support_vector(&ns, DEFAULT_SUPPORT_CAP).unwrap());
    }

    #[test]
    fn trivial_null_space_has_no_support_vector() {
        let m = GfMatrix::from_rows(gf4(), 2, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(m.null_space().dimension(), 0);
        assert!(!has_full_support_vector(&m.null_space(), 12).unwrap());
    }

    #[test]
    fn span_needs_combination_for_full_support() {
        let f = gf4();
        // Basis {[α 0 0 0 1 1], [0 1 1 α 0 0]}; no basis vector has full
        // support, every combination with both coefficients nonzero does.
        let m = GfMatrix::from_rows(
            f.clone(),
            6,
            &[vec![0, 1, 1, 0, 0, 0], vec![0, 0, 0, 0, 1, 1], vec![1, 0, 0, 0, 2, 0], vec![0, 2, 0, 1, 0, 0]],
        )
        .unwrap();
        let ns = m.null_space();
        assert_eq!(ns.dimension(), 2);
        assert!(ns.contains(&el(&[2, 0, 0, 0, 1, 1])));
        assert!(ns.contains(&el(&[0, 1, 1, 2, 0, 0])));
        let w = find_full_support_vector(&ns, 12).unwrap().unwrap();
        assert_eq!(w, el(&[2, 1, 1, 2, 1, 1]));
        assert!(m.mat_vec(&w).unwrap().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn cap_is_enforced() {
        let m = GfMatrix::from_rows(gf4(), 3, &[]).unwrap();
        assert_eq!(
            has_full_support_vector(&m.null_space(), 2),
            Err(LinalgError::SearchTooLarge { dim: 3, cap: 2 })
        );
    }

    #[test]
    fn mat_vec_checks_length() {
        let m = GfMatrix::from_rows(gf4(), 2, &[vec![1, 1]]).unwrap();
        assert!(matches!(m.mat_vec(&el(&[1])), Err(LinalgError::DimensionMismatch { .. })));
    }

    fn arb_matrix() -> impl Strategy<Value = (u32, Vec<Vec<u16>>)> {
        (prop_oneof![Just(2u32), Just(3u32)], 0usize..7, 1usize..8).prop_flat_map(|(lambda, r, c)| {
            let q = 1u16 << lambda;
            (Just(lambda), prop::collection::vec(prop::collection::vec(0..q, c), r))
        })
    }

    /// Brute-force reference for the existence of a full-support vector:
    /// scans all vectors with nonzero entries.
    fn brute_full_support(m: &GfMatrix) -> bool {
        let f = m.field();
        let q = f.q() as u16;
        let n = m.cols();
        let mut v = vec![1u16; n];
        loop {
            let x = el(&v);
            if m.mat_vec(&x).unwrap().iter().all(|s| s.is_zero()) {
                return true;
            }
            let mut k = 0;
            while k < n {
                v[k] += 1;
                if v[k] < q {
                    break;
                }
                v[k] = 1;
                k += 1;
            }
            if k == n {
                return false;
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn rank_nullity((lambda, rows) in arb_matrix()) {
            let f = Field::with_default(lambda).unwrap();
            let cols = rows.first().map_or(1, |r| r.len());
            let m = GfMatrix::from_rows(f, cols, &rows).unwrap();
            let ns = m.null_space();
            prop_assert_eq!(m.rank() + ns.dimension(), m.cols());
            for b in ns.vectors() {
                prop_assert!(m.mat_vec(b).unwrap().iter().all(|x| x.is_zero()));
            }
        }

        #[test]
        fn support_search_matches_brute_force((lambda, rows) in arb_matrix()) {
            let f = Field::with_default(lambda).unwrap();
            let cols = rows.first().map_or(1, |r| r.len());
            let m = GfMatrix::from_rows(f, cols, &rows).unwrap();
            let found = find_full_support_vector(&m.null_space(), 12).unwrap();
            prop_assert_eq!(found.is_some(), brute_full_support(&m));
            if let Some(w) = found {
                prop_assert!(w.iter().all(|x| !x.is_zero()));
                prop_assert!(m.mat_vec(&w).unwrap().iter().all(|x| x.is_zero()));
            }
        }
    }
}
