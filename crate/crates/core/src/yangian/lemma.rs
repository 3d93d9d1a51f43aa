//! Identities among the S-elements: the symmetry relations, the action of
//! S^{(1)} on S^{(r)}, and the two degree-two commutators.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::liealg::signed_indices;
use crate::report::{Entry, Status};
use crate::scalars::{HbarPoly, Rational};
use crate::yangian::{TPoly, Yangian};

/// Index pattern used for the action of S^{(1)}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaVariant {
    /// δ_{i,k}S^{(r)}_{i,l} − δ_{i,l}S^{(r)}_{k,j} − δ_{k,−i}S^{(1)}_{−j,l} + δ_{−j,l}S^{(r)}_{k,−i}
    PaperLiteral,
    /// δ_{j,k}S^{(r)}_{i,l} − δ_{i,l}S^{(r)}_{k,j} − δ_{k,−i}S^{(r)}_{−j,l} + δ_{−j,l}S^{(r)}_{k,−i}
    Corrected,
}

impl LemmaVariant {
    pub fn label(self) -> &'static str {
        match self {
            LemmaVariant::PaperLiteral => "paper_literal",
            LemmaVariant::Corrected => "corrected",
        }
    }
}

pub const SUITE: &str = "s-lemma";

struct STable<'a> {
    y: &'a Yangian,
    table: HashMap<(u32, i32, i32), TPoly>,
}

impl<'a> STable<'a> {
    fn new(y: &'a Yangian, max_r: u32) -> Self {
        let n = y.n();
        let mut keys = Vec::new();
        for r in 1..=max_r {
            for i in signed_indices(n) {
                for j in signed_indices(n) {
                    keys.push((r, i, j));
                }
            }
        }
        let table = keys.par_iter().map(|&(r, i, j)| ((r, i, j), y.s_element(r, i, j))).collect();
        STable { y, table }
    }

    fn s(&self, r: u32, i: i32, j: i32) -> TPoly {
        self.table.get(&(r, i, j)).cloned().unwrap_or_else(|| self.y.s_element(r, i, j))
    }

    fn delta_s(&self, cond: bool, r: u32, i: i32, j: i32) -> TPoly {
        if cond {
            self.s(r, i, j)
        } else {
            TPoly::zero(self.y.n())
        }
    }

    fn hprod(&self, a: &TPoly, b: &TPoly) -> TPoly {
        self.y.mul(a, b).scale(&HbarPoly::hbar())
    }
}

fn entry(id: &str, params: &[(&str, i64)], residual: &TPoly) -> Entry {
    let status = if residual.is_zero() { Status::Pass } else { Status::Fail };
    let mut e = Entry::new(SUITE, id, status);
    for (k, v) in params {
        e = e.with_param(k, *v);
    }
    if !residual.is_zero() {
        e = e.with_residual(residual.to_string());
    }
    e
}

/// Runs every identity at all applicable indices of I_n (the degree-two
/// commutator of diagonal elements only for positive i, j).
pub fn check_s_lemma(y: &Yangian, variant: LemmaVariant) -> Vec<Entry> {
    let n = y.n();
    let st = STable::new(y, 3);
    let idx: Vec<i32> = signed_indices(n).collect();
    let pairs: Vec<(i32, i32)> = idx.iter().flat_map(|&i| idx.iter().map(move |&j| (i, j))).collect();
    let mut out = Vec::new();

    for (id, r) in [("s1-antisymmetry", 1u32), ("s2-twist", 2), ("s3-antisymmetry", 3)] {
        out.par_extend(pairs.par_iter().map(|&(i, j)| {
            let res = match r {
                2 => st.s(2, i, j).sub(&st.s(2, -j, -i)).add(&st.s(1, i, j).scale(&HbarPoly::hbar())),
                _ => st.s(r, i, j).add(&st.s(r, -j, -i)),
            };
            entry(id, &[("i", i as i64), ("j", j as i64)], &res)
        }));
    }

    let mut quads = Vec::with_capacity(3 * pairs.len() * pairs.len());
    for r in 1..=3u32 {
        for &(i, j) in &pairs {
            for &(k, l) in &pairs {
                quads.push((r, i, j, k, l));
            }
        }
    }
    let action_id = match variant {
        LemmaVariant::PaperLiteral => "s1-action-literal",
        LemmaVariant::Corrected => "s1-action",
    };
    out.par_extend(quads.par_iter().map(|&(r, i, j, k, l)| {
        let lhs = y.bracket(&st.s(1, i, j), &st.s(r, k, l));
        let (first, third) = match variant {
            LemmaVariant::PaperLiteral => (st.delta_s(i == k, r, i, l), st.delta_s(k == -i, 1, -j, l)),
            LemmaVariant::Corrected => (st.delta_s(j == k, r, i, l), st.delta_s(k == -i, r, -j, l)),
        };
        let rhs = first
            .sub(&st.delta_s(i == l, r, k, j))
            .sub(&third)
            .add(&st.delta_s(-j == l, r, k, -i));
        let params = [("r", r as i64), ("i", i as i64), ("j", j as i64), ("k", k as i64), ("l", l as i64)];
        entry(action_id, &params, &lhs.sub(&rhs))
    }));

    let pos: Vec<(i32, i32)> = pairs.iter().copied().filter(|&(i, j)| i > 0 && j > 0).collect();
    out.par_extend(pos.par_iter().map(|&(i, j)| {
        let lhs = y.bracket(&st.s(2, i, i), &st.s(2, j, j));
        let rhs = st
            .hprod(&st.s(1, j, i), &st.s(2, i, j))
            .sub(&st.hprod(&st.s(2, j, i), &st.s(1, i, j)))
            .sub(&st.hprod(&st.s(1, i, -j), &st.s(2, -i, j)))
            .add(&st.hprod(&st.s(2, j, -i), &st.s(1, -j, i)));
        entry("s2-diagonal-commutator", &[("i", i as i64), ("j", j as i64)], &lhs.sub(&rhs))
    }));

    let (a, b) = (n - 1, n);
    let lhs = y.bracket(&st.s(2, a, b), &st.s(2, b, a));
    let common = st
        .s(3, a, a)
        .sub(&st.s(3, b, b))
        .add(&st.hprod(&st.s(1, b, b), &st.s(2, a, a)))
        .sub(&st.hprod(&st.s(2, b, b), &st.s(1, a, a)))
        .sub(&st.hprod(&st.s(1, a, -b), &st.s(2, -b, a)));
    let literal = common.add(&st.hprod(&st.s(2, a, -b), &st.s(1, -a, b)));
    let symmetric = common.add(&st.hprod(&st.s(2, a, -b), &st.s(1, -b, a)));
    let hb2 = HbarPoly::monomial(Rational::from_int(-1), 2);
    let completed = literal.add(&y.mul(&st.s(1, a, -b), &st.s(1, -b, a)).scale(&hb2));
    out.push(entry("s2-pair-commutator", &[], &lhs.sub(&literal)));
    out.push(entry("s2-pair-commutator-symmetric", &[], &lhs.sub(&symmetric)));
    out.push(entry("s2-pair-commutator-completed", &[], &lhs.sub(&completed)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::yangian::Normalization;

    #[test]
    fn symmetry_relations_at_a_few_indices() {
        let y = Yangian::new(5, Normalization::Reduced).unwrap();
        let st = STable::new(&y, 3);
        for &(i, j) in &[(1, 2), (-3, 4), (5, -5), (2, 2)] {
            assert!(st.s(1, i, j).add(&st.s(1, -j, -i)).is_zero());
            let twist = st.s(2, i, j).sub(&st.s(2, -j, -i));
            assert_eq!(twist, st.s(1, i, j).scale(&HbarPoly::from_int(-1)).scale(&HbarPoly::hbar()));
            assert!(st.s(3, i, j).add(&st.s(3, -j, -i)).is_zero());
        }
    }
}
