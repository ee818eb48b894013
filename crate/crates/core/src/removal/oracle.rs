//! Exhaustive scan over all nonzero value assignments of a configuration.
//! Used as ground truth for the WCM-based membership test.

use crate::config::{CnClass, Configuration, ObjectKind};
use crate::gf::FieldElement;
use crate::linalg::canonical_scaling;
use crate::wcmtree::{depth_cap, Mode};

use super::RemovalError;

/// Default cap on the number of assignments scanned.
pub const DEFAULT_ORACLE_CAP: u64 = 10_000_000;

/// Unsatisfied check nodes under one assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyndromeProfile {
    /// Total unsatisfied CNs.
    pub b: usize,
    /// Unsatisfied CNs of degree two.
    pub b2: usize,
    pub unsat: Vec<usize>,
}

/// Syndrome of `v` against the full matrix of `c`.
pub fn compute_b_for_values(c: &Configuration, v: &[FieldElement]) -> Result<SyndromeProfile, RemovalError> {
    if v.len() != c.a() || v.iter().any(|x| x.is_zero()) {
        return Err(RemovalError::InvalidValues { expected: c.a() });
    }
    let s = c.matrix().mat_vec(v)?;
    let unsat: Vec<usize> = (0..c.ell()).filter(|&r| !s[r].is_zero()).collect();
    let b2 = unsat.iter().filter(|&&r| c.cn_degree(r) == 2).count();
    Ok(SyndromeProfile { b: unsat.len(), b2, unsat })
}

/// An assignment achieving the smallest b within its category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub b: usize,
    pub b2: usize,
    /// Canonical projective representative of the first such assignment in
    /// lexicographic order.
    pub values: Vec<FieldElement>,
    pub unsat: Vec<usize>,
}

impl Witness {
    /// Largest number of unsatisfied neighbours at one VN.
    pub fn b_vn_max(&self, c: &Configuration) -> usize {
        (0..c.a()).map(|v| c.cns_of(v).iter().filter(|cn| self.unsat.binary_search(cn).is_ok()).count()).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    /// Smallest-b assignment where every VN has a strict satisfied majority.
    pub gas: Option<Witness>,
    /// Smallest-b assignment with a weak majority everywhere and equality
    /// at some VN (γ even only).
    pub os: Option<Witness>,
    /// Smallest-b assignment meeting the membership rule of the requested
    /// mode: its majority rule, unsatisfied CNs of degree at most two, and
    /// at most the mode's cap of degree-2 unsatisfied CNs.
    pub member: Option<Witness>,
    pub assignments: u64,
}

impl OracleVerdict {
    pub fn is_gas(&self) -> bool {
        self.gas.is_some()
    }

    pub fn is_os(&self) -> bool {
        self.os.is_some()
    }

    pub fn in_set(&self) -> bool {
        self.member.is_some()
    }
}

fn consider(slot: &mut Option<(usize, usize, Vec<u16>, Vec<usize>)>, b: usize, b2: usize, x: &[u16], unsat: &[usize]) {
    if slot.as_ref().is_none_or(|s| b < s.0) {
        *slot = Some((b, b2, x.to_vec(), unsat.to_vec()));
    }
}

/// Scans all (q−1)^a nonzero assignments of `c`.
pub fn oracle_scan(c: &Configuration, mode: Mode, cap: u64) -> Result<OracleVerdict, RemovalError> {
    let f = c.field().clone();
    let q = f.q() as u16;
    let a = c.a();
    let needed = ((q - 1) as u128).pow(a as u32);
    if needed > cap as u128 {
        return Err(RemovalError::OracleTooLarge { needed, cap });
    }
    let gamma = c.gamma();
    let g = c.g();
    let kind = mode.kind();
    let member_cap = depth_cap(c, mode)?;
    let even = gamma % 2 == 0;
    let member_limit = match kind {
        ObjectKind::Gast => g,
        ObjectKind::Ost => gamma / 2,
    };
    let high: Vec<bool> = (0..c.ell()).map(|r| c.cn_class(r) == CnClass::High).collect();
    let deg2: Vec<bool> = (0..c.ell()).map(|r| c.cn_class(r) == CnClass::Two).collect();

    let mut x = vec![1u16; a];
    let mut syn = vec![FieldElement::ZERO; c.ell()];
    for r in 0..c.ell() {
        for &v in c.vns_of(r) {
            syn[r] += c.weight(r, v);
        }
    }
    let mut gas = None;
    let mut os = None;
    let mut member = None;
    let mut per_vn = vec![0usize; a];
    let mut unsat = Vec::with_capacity(c.ell());
    let mut count = 0u64;
    loop {
        count += 1;
        unsat.clear();
        per_vn.iter_mut().for_each(|p| *p = 0);
        let (mut b2, mut has_high) = (0usize, false);
        for r in 0..c.ell() {
            if !syn[r].is_zero() {
                unsat.push(r);
                b2 += deg2[r] as usize;
                has_high |= high[r];
                for &v in c.vns_of(r) {
                    per_vn[v] += 1;
                }
            }
        }
        let b = unsat.len();
        let worst = per_vn.iter().copied().max().unwrap_or(0);
        if 2 * worst < gamma {
            consider(&mut gas, b, b2, &x, &unsat);
        }
        if even && 2 * worst == gamma {
            consider(&mut os, b, b2, &x, &unsat);
        }
        if worst <= member_limit && !has_high && b2 <= member_cap {
            consider(&mut member, b, b2, &x, &unsat);
        }

        // Odometer, last coordinate fastest; syndromes follow incrementally.
        let mut k = a;
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            let old = x[k];
            let new = if old + 1 == q { 1 } else { old + 1 };
            x[k] = new;
            let (fo, fn_) = (FieldElement::from_raw(old), FieldElement::from_raw(new));
            for &r in c.cns_of(k) {
                let w = c.weight(r, k);
                syn[r] += f.mul(w, fo) + f.mul(w, fn_);
            }
            if new != 1 {
                k += 1;
                break;
            }
        }
        if k == 0 {
            break;
        }
    }

    let finish = |s: Option<(usize, usize, Vec<u16>, Vec<usize>)>| {
        s.map(|(b, b2, vals, unsat)| Witness {
            b,
            b2,
            values: canonical_scaling(&f, vals.into_iter().map(FieldElement::from_raw).collect()),
            unsat,
        })
    };
    Ok(OracleVerdict { gas: finish(gas), os: finish(os), member: finish(member), assignments: count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    #[test]
    fn zero_entries_are_rejected() {
        let c = Configuration::from_rows(Field::gf4(), 1, 2, &[vec![1, 1]]).unwrap();
        let v = [FieldElement::ONE, FieldElement::ZERO];
        assert_eq!(compute_b_for_values(&c, &v), Err(RemovalError::InvalidValues { expected: 2 }));
    }

    #[test]
    fn cap_is_enforced() {
        let c = Configuration::from_rows(Field::gf4(), 1, 2, &[vec![1, 1]]).unwrap();
        assert_eq!(oracle_scan(&c, Mode::Gast, 8), Err(RemovalError::OracleTooLarge { needed: 9, cap: 8 }));
        assert_eq!(oracle_scan(&c, Mode::Gast, 9).unwrap().assignments, 9);
    }
}
