//! Tensor products of shifted evaluation representations, used as an
//! independent check on normal forms.
//!
//! A single site with shift a sends t^{(r)}_{i,j} to a^{r−1}E_{i,j}; k sites are
//! combined by Δ(t^{(r)}_{i,j}) = Σ_{p+q=r} Σ_a t^{(p)}_{i,a} ⊗ t^{(q)}_{a,j}
//! with t^{(0)} = 1. The generators are then T^{(r)} = ħ^{r−1}t^{(r)} (reduced)
//! or ħ^r t^{(r)} (literal).

use std::collections::BTreeMap;
use std::sync::Arc;

use dashmap::DashMap;
use rayon::prelude::*;

use crate::error::{check_n, Result, TydError};
use crate::liealg::{linearize, signed_indices};
use crate::scalars::{HbarPoly, Rational};
use crate::yangian::{s_expression, Normalization, TPoly, TSymbol, YExpr};

/// Exact sparse square matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    dim: usize,
    rows: BTreeMap<usize, BTreeMap<usize, Rational>>,
}

impl SparseMatrix {
    pub fn zero(dim: usize) -> Self {
        SparseMatrix { dim, rows: BTreeMap::new() }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.add_entry(i, i, &Rational::one());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.rows.values().map(BTreeMap::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.rows.get(&i).and_then(|r| r.get(&j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_entry(&mut self, i: usize, j: usize, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let row = self.rows.entry(i).or_default();
        let v = row.entry(j).or_insert_with(Rational::zero);
        *v += c;
        if v.is_zero() {
            row.remove(&j);
            if row.is_empty() {
                self.rows.remove(&i);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &SparseMatrix, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (i, row) in &other.rows {
            for (j, v) in row {
                self.add_entry(*i, *j, &(v * c));
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> SparseMatrix {
        let mut out = SparseMatrix::zero(self.dim);
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::from_int(-1));
        out
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut out = SparseMatrix::zero(self.dim);
        for (i, row) in &self.rows {
            for (k, a) in row {
                if let Some(orow) = other.rows.get(k) {
                    for (j, b) in orow {
                        out.add_entry(*i, *j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &SparseMatrix) -> SparseMatrix {
        self.mul(other).sub(&other.mul(self))
    }
}

/// Compositions of r into k non-negative parts.
fn compositions(r: u32, k: usize) -> Vec<Vec<u32>> {
    if k == 1 {
        return vec![vec![r]];
    }
    let mut out = Vec::new();
    for first in 0..=r {
        for mut rest in compositions(r - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// A k-fold tensor product of shifted evaluation representations of
/// Y_ħ(gl(2n)) at a fixed rational ħ.
pub struct Evaluation {
    n: i32,
    norm: Normalization,
    shifts: Vec<Rational>,
    hbar: Rational,
    dim: usize,
    symbols: DashMap<TSymbol, Arc<SparseMatrix>>,
}

impl Evaluation {
    pub fn new(n: i32, norm: Normalization, shifts: Vec<Rational>, hbar: Rational) -> Result<Self> {
        check_n(n)?;
        if shifts.is_empty() {
            return Err(TydError::Oracle("at least one tensor factor is required".into()));
        }
        if hbar.is_zero() {
            return Err(TydError::Oracle("hbar must be nonzero".into()));
        }
        let dim = (2 * n as usize).pow(shifts.len() as u32);
        Ok(Evaluation { n, norm, shifts, hbar, dim, symbols: DashMap::new() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hbar(&self) -> &Rational {
        &self.hbar
    }

    fn digits(&self, mut b: usize) -> Vec<usize> {
        let base = 2 * self.n as usize;
        let mut d = vec![0; self.shifts.len()];
        for slot in d.iter_mut().rev() {
            *slot = b % base;
            b /= base;
        }
        d
    }

    fn encode(&self, d: &[usize]) -> usize {
        let base = 2 * self.n as usize;
        d.iter().fold(0, |acc, x| acc * base + x)
    }

    /// Scale relating T^{(r)} to t^{(r)}.
    fn t_scale(&self, r: u32) -> Rational {
        match self.norm {
            Normalization::Reduced => self.hbar.pow(r - 1),
            Normalization::Literal => self.hbar.pow(r),
        }
    }

    /// t^{(r)}_{i,j} on the tensor product.
    fn small_t(&self, r: u32, i: i32, j: i32) -> SparseMatrix {
        let (li, lj) = (linearize(i, self.n), linearize(j, self.n));
        let comps = compositions(r, self.shifts.len());
        let mut m = SparseMatrix::zero(self.dim);
        for b in 0..self.dim {
            let digits = self.digits(b);
            for comp in &comps {
                // Walk the chain t_{i,a1} ⊗ t_{a1,a2} ⊗ ... ⊗ t_{a_{k-1},j}.
                let mut row = li;
                let mut out = digits.clone();
                let mut coeff = Rational::one();
                for (site, &p) in comp.iter().enumerate() {
                    if p > 0 {
                        let col = digits[site];
                        out[site] = row;
                        coeff = &coeff * &self.shifts[site].pow(p - 1);
                        row = col;
                    }
                }
                if row == lj {
                    m.add_entry(self.encode(&out), b, &coeff);
                }
            }
        }
        m
    }

    pub fn symbol(&self, s: TSymbol) -> Arc<SparseMatrix> {
        if let Some(m) = self.symbols.get(&s) {
            return m.clone();
        }
        let m = Arc::new(self.small_t(s.r, s.i, s.j).scale(&self.t_scale(s.r)));
        self.symbols.insert(s, m.clone());
        m
    }

    /// The image of T^{(0)}_{i,j} as it enters the defining relation: δ
    /// (literal) or δ/ħ (reduced).
    pub fn zero_mode(&self, i: i32, j: i32) -> SparseMatrix {
        if i != j {
            return SparseMatrix::zero(self.dim);
        }
        let k = match self.norm {
            Normalization::Literal => Rational::one(),
            Normalization::Reduced => self.hbar.recip(),
        };
        SparseMatrix::identity(self.dim).scale(&k)
    }

    fn mode(&self, r: u32, i: i32, j: i32) -> SparseMatrix {
        if r == 0 {
            self.zero_mode(i, j)
        } else {
            (*self.symbol(TSymbol::new(r, i, j))).clone()
        }
    }

    pub fn scalar(&self, c: &HbarPoly) -> SparseMatrix {
        SparseMatrix::identity(self.dim).scale(&c.eval(&self.hbar))
    }

    pub fn word(&self, w: &[TSymbol]) -> SparseMatrix {
        let mut m = SparseMatrix::identity(self.dim);
        for s in w {
            m = m.mul(&self.symbol(*s));
        }
        m
    }

    pub fn poly(&self, p: &TPoly) -> SparseMatrix {
        let mut out = SparseMatrix::zero(self.dim);
        for (w, c) in p.terms() {
            out.add_scaled(&self.word(w), &c.eval(&self.hbar));
        }
        out
    }

    /// Direct evaluation of an expression, without normal ordering.
    pub fn expr(&self, e: &YExpr) -> SparseMatrix {
        match e {
            YExpr::T(s) => (*self.symbol(*s)).clone(),
            YExpr::S(r, i, j) => self.expr(&s_expression(self.n, *r, *i, *j)),
            YExpr::Scalar(c) => self.scalar(c),
            YExpr::Sum(v) => {
                let mut out = SparseMatrix::zero(self.dim);
                for x in v {
                    out.add_scaled(&self.expr(x), &Rational::one());
                }
                out
            }
            YExpr::Prod(v) => {
                let mut out = SparseMatrix::identity(self.dim);
                for x in v {
                    out = out.mul(&self.expr(x));
                }
                out
            }
            YExpr::Bracket(a, b) => self.expr(a).commutator(&self.expr(b)),
            YExpr::ScalarMul(c, x) => self.expr(x).scale(&c.eval(&self.hbar)),
        }
    }

    /// Residual of the defining relation
    /// [T^{(r+1)}_{i,j}, T^{(s)}_{k,l}] − [T^{(r)}_{i,j}, T^{(s+1)}_{k,l}]
    ///   − ħ(T^{(r)}_{k,j}T^{(s)}_{i,l} − T^{(s)}_{k,j}T^{(r)}_{i,l}).
    pub fn relation_residual(&self, r: u32, s: u32, (i, j, k, l): (i32, i32, i32, i32)) -> SparseMatrix {
        let lhs = self
            .mode(r + 1, i, j)
            .commutator(&self.mode(s, k, l))
            .sub(&self.mode(r, i, j).commutator(&self.mode(s + 1, k, l)));
        let rhs = self
            .mode(r, k, j)
            .mul(&self.mode(s, i, l))
            .sub(&self.mode(s, k, j).mul(&self.mode(r, i, l)))
            .scale(&self.hbar);
        lhs.sub(&rhs)
    }

    /// Checks the defining relation for every index quadruple and all
    /// r, s ≤ max_mode. Fails with the first violating instance.
    pub fn self_test(&self, max_mode: u32) -> Result<()> {
        let idx: Vec<i32> = signed_indices(self.n).collect();
        let mut quads = Vec::with_capacity(idx.len().pow(4));
        for &i in &idx {
            for &j in &idx {
                for &k in &idx {
                    for &l in &idx {
                        quads.push((i, j, k, l));
                    }
                }
            }
        }
        let bad = quads.par_iter().find_map_first(|&q| {
            for r in 0..=max_mode {
                for s in 0..=max_mode {
                    if !self.relation_residual(r, s, q).is_zero() {
                        return Some((r, s, q));
                    }
                }
            }
            None
        });
        match bad {
            None => Ok(()),
            Some((r, s, q)) => Err(TydError::Oracle(format!(
                "evaluation violates the defining relation at r={r}, s={s}, (i,j,k,l)={q:?}"
            ))),
        }
    }
}

/// Matrix of a normal form in the given tensor product of evaluation
/// representations.
pub fn evaluation_matrix(
    p: &TPoly,
    norm: Normalization,
    shifts: &[Rational],
    hbar: &Rational,
) -> Result<SparseMatrix> {
    Ok(Evaluation::new(p.n(), norm, shifts.to_vec(), hbar.clone())?.poly(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::yangian::Yangian;

    fn unit(n: i32, i: i32, j: i32) -> SparseMatrix {
        let mut m = SparseMatrix::zero(2 * n as usize);
        m.add_entry(linearize(i, n), linearize(j, n), &Rational::one());
        m
    }

    #[test]
    fn single_site_images() {
        let one = Rational::one();
        let ev = Evaluation::new(5, Normalization::Literal, vec![Rational::zero()], one.clone()).unwrap();
        assert_eq!(*ev.symbol(TSymbol::new(1, 2, -3)), unit(5, 2, -3));
        let a = Rational::new(3, 7);
        let ev = Evaluation::new(5, Normalization::Literal, vec![a.clone()], one).unwrap();
        assert_eq!(*ev.symbol(TSymbol::new(2, 1, 4)), unit(5, 1, 4).scale(&a));
    }

    #[test]
    fn self_test_passes_for_both_normalizations() {
        for norm in [Normalization::Literal, Normalization::Reduced] {
            let ev = Evaluation::new(5, norm, vec![Rational::new(1, 3)], Rational::new(2, 5)).unwrap();
            ev.self_test(2).unwrap();
        }
    }

    #[test]
    fn self_test_two_sites() {
        let shifts = vec![Rational::new(1, 2), Rational::new(-4, 3)];
        let ev = Evaluation::new(5, Normalization::Reduced, shifts, Rational::new(3, 2)).unwrap();
        ev.self_test(1).unwrap();
    }

    #[test]
    fn mismatched_normalization_is_detected() {
        // Literal images tested against the reduced reading of T^(0).
        let ev = Evaluation::new(5, Normalization::Literal, vec![Rational::new(1, 3)], Rational::new(2, 5)).unwrap();
        let y = Yangian::new(5, Normalization::Reduced).unwrap();
        let c = y.commutator(TSymbol::new(1, 1, 2), TSymbol::new(1, 2, 1));
        let direct = ev.symbol(TSymbol::new(1, 1, 2)).commutator(&ev.symbol(TSymbol::new(1, 2, 1)));
        assert_ne!(ev.poly(&c), direct);
    }

    #[test]
    fn normal_form_agrees_with_direct_evaluation() {
        let y = Yangian::new(5, Normalization::Reduced).unwrap();
        let e = YExpr::Prod(vec![YExpr::t(2, 1, -2), YExpr::S(2, 3, 1), YExpr::t(1, -2, 3)]);
        let nf = y.normal_form(&e);
        let shifts = vec![Rational::new(1, 2), Rational::new(5, 3)];
        let ev = Evaluation::new(5, Normalization::Reduced, shifts, Rational::new(-3, 4)).unwrap();
        assert_eq!(ev.poly(&nf), ev.expr(&e));
    }
}
