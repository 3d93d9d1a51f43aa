//! PBW normal forms in Y_ħ(gl(2n)) over the generators T^{(r)}_{i,j}, r ≥ 1.

pub mod lemma;
pub mod oracle;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;

use crate::error::{check_n, Result};
use crate::liealg::{check_index, signed_indices};
use crate::scalars::{HbarPoly, Rational};

/// T^{(r)}_{i,j} with r ≥ 1. The derived order is (r, i, j), and the natural
/// order on signed indices is the linearized one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TSymbol {
    pub r: u32,
    pub i: i32,
    pub j: i32,
}

impl TSymbol {
    pub fn new(r: u32, i: i32, j: i32) -> Self {
        assert!(r >= 1, "T^(0) is a scalar");
        TSymbol { r, i, j }
    }

    pub fn degree(&self) -> u32 {
        self.r - 1
    }
}

impl fmt::Display for TSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({};{},{})", self.r, self.i, self.j)
    }
}

pub type Word = Vec<TSymbol>;

pub fn word_degree(w: &[TSymbol]) -> u32 {
    w.iter().map(TSymbol::degree).sum()
}

pub fn is_ordered(w: &[TSymbol]) -> bool {
    w.windows(2).all(|p| p[0] <= p[1])
}

/// Linear combination of words with ħ-polynomial coefficients. Produced by the
/// engine, every word is ordered and the representation is the normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TPoly {
    n: i32,
    terms: BTreeMap<Word, HbarPoly>,
}

impl TPoly {
    pub fn zero(n: i32) -> Self {
        TPoly { n, terms: BTreeMap::new() }
    }

    pub fn scalar(n: i32, c: HbarPoly) -> Self {
        let mut p = Self::zero(n);
        p.add_term(Vec::new(), &c);
        p
    }

    pub fn one(n: i32) -> Self {
        Self::scalar(n, HbarPoly::one())
    }

    /// A single ordered word with coefficient 1. Unordered words are
    /// accepted but then the result is not a normal form.
    pub fn word(n: i32, w: Word) -> Self {
        let mut p = Self::zero(n);
        p.add_term(w, &HbarPoly::one());
        p
    }

    pub fn n(&self) -> i32 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Word, HbarPoly> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &[TSymbol]) -> HbarPoly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, w: Word, c: &HbarPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &TPoly, c: &HbarPoly) {
        if c.is_zero() {
            return;
        }
        for (w, a) in &other.terms {
            self.add_term(w.clone(), &(a * c));
        }
    }

    pub fn add(&self, other: &TPoly) -> TPoly {
        let mut out = self.clone();
        out.add_scaled(other, &HbarPoly::one());
        out
    }

    pub fn sub(&self, other: &TPoly) -> TPoly {
        let mut out = self.clone();
        out.add_scaled(other, &HbarPoly::from_int(-1));
        out
    }

    pub fn scale(&self, c: &HbarPoly) -> TPoly {
        let mut out = TPoly::zero(self.n);
        out.add_scaled(self, c);
        out
    }

    /// Maximal filtration degree over the words, None for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|w| word_degree(w)).max()
    }

    pub fn is_normal(&self) -> bool {
        self.terms.keys().all(|w| is_ordered(w))
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (w, c)) in self.terms.iter().enumerate() {
            let word: String = w.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("*");
            let single = c.terms().len() == 1;
            let neg = single && c.terms()[0].1.is_negative();
            let mag = if neg { -c } else { c.clone() };
            if idx > 0 {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            } else if neg {
                write!(f, "-")?;
            }
            let coeff = if single { mag.to_string() } else { format!("({mag})") };
            match (w.is_empty(), mag == HbarPoly::one()) {
                (true, _) => write!(f, "{coeff}")?,
                (false, true) => write!(f, "{word}")?,
                (false, false) => write!(f, "{coeff}*{word}")?,
            }
        }
        Ok(())
    }
}

/// How T^{(0)} = δ enters the defining relation.
///
/// `Literal` reads T^{(0)}_{i,j} = δ_{i,j} verbatim, so that
/// [T^{(1)}_{i,j}, T^{(s)}_{k,l}] = ħ(δ_{k,j}T^{(s)}_{i,l} − δ_{i,l}T^{(s)}_{k,j}).
/// `Reduced` substitutes δ/ħ, which is the normalization T^{(r)} = ħ^{r−1}t^{(r)}
/// of the standard Yangian: T^{(1)} spans gl(2n) and the S-elements are
/// homogeneous in ħ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Normalization {
    Literal,
    Reduced,
}

impl Normalization {
    /// The coefficient of T^{(a−1)}T^{(r+s−a)} in the closed-form commutator.
    fn chain_coeff(self, a: u32) -> HbarPoly {
        match (self, a) {
            (Normalization::Reduced, 1) => HbarPoly::one(),
            _ => HbarPoly::hbar(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Normalization::Literal => "literal",
            Normalization::Reduced => "reduced",
        }
    }
}

/// Input expressions; normalized by [`Yangian::normal_form`].
#[derive(Clone, Debug, PartialEq)]
pub enum YExpr {
    T(TSymbol),
    S(u32, i32, i32),
    Scalar(HbarPoly),
    Sum(Vec<YExpr>),
    Prod(Vec<YExpr>),
    Bracket(Box<YExpr>, Box<YExpr>),
    ScalarMul(HbarPoly, Box<YExpr>),
}

impl YExpr {
    pub fn t(r: u32, i: i32, j: i32) -> Self {
        YExpr::T(TSymbol::new(r, i, j))
    }

    pub fn bracket(a: YExpr, b: YExpr) -> Self {
        YExpr::Bracket(Box::new(a), Box::new(b))
    }

    pub fn scaled(c: HbarPoly, e: YExpr) -> Self {
        YExpr::ScalarMul(c, Box::new(e))
    }

    pub fn neg(e: YExpr) -> Self {
        YExpr::ScalarMul(HbarPoly::from_int(-1), Box::new(e))
    }

    pub fn sub(a: YExpr, b: YExpr) -> Self {
        YExpr::Sum(vec![a, YExpr::neg(b)])
    }
}

/// The defining expression of S^{(r)}_{i,j}, unevaluated.
pub fn s_expression(n: i32, r: u32, i: i32, j: i32) -> YExpr {
    if r == 0 {
        return YExpr::Scalar(HbarPoly::from_int((i == j) as i64));
    }
    let sign = if r.is_multiple_of(2) { -1 } else { 1 };
    let mut terms = vec![YExpr::t(r, i, j), YExpr::scaled(HbarPoly::from_int(-sign), YExpr::t(r, -j, -i))];
    for s in 1..r {
        let c = HbarPoly::monomial(Rational::from_int(if s % 2 == 0 { 1 } else { -1 }), 1);
        for a in signed_indices(n) {
            terms.push(YExpr::scaled(c.clone(), YExpr::Prod(vec![YExpr::t(r - s, i, a), YExpr::t(s, -j, -a)])));
        }
    }
    YExpr::Sum(terms)
}

type Terms = Arc<Vec<(Word, HbarPoly)>>;

/// Normal-form engine. The caches are pure memo tables and may be shared
/// across threads.
pub struct Yangian {
    n: i32,
    norm: Normalization,
    commutators: DashMap<(TSymbol, TSymbol), Terms>,
    inserts: DashMap<(TSymbol, Word), Terms>,
}

impl Yangian {
    pub fn new(n: i32, norm: Normalization) -> Result<Self> {
        check_n(n)?;
        Ok(Yangian { n, norm, commutators: DashMap::new(), inserts: DashMap::new() })
    }

    pub fn n(&self) -> i32 {
        self.n
    }

    pub fn normalization(&self) -> Normalization {
        self.norm
    }

    pub fn check_symbol(&self, s: &TSymbol) -> Result<()> {
        check_index(s.i, self.n)?;
        check_index(s.j, self.n)
    }

    /// [T^{(r)}_{i,j}, T^{(s)}_{k,l}] before normal ordering:
    /// Σ_{a=1}^{min(r,s)} c_a (T^{(a−1)}_{k,j} T^{(r+s−a)}_{i,l} − T^{(r+s−a)}_{k,j} T^{(a−1)}_{i,l})
    /// with T^{(0)} = δ.
    pub fn commutator_raw(&self, x: TSymbol, y: TSymbol) -> Vec<(Word, HbarPoly)> {
        let (r, i, j) = (x.r, x.i, x.j);
        let (s, k, l) = (y.r, y.i, y.j);
        let mut out = Vec::new();
        for a in 1..=r.min(s) {
            let c = self.norm.chain_coeff(a);
            let hi = r + s - a;
            if a == 1 {
                if k == j {
                    out.push((vec![TSymbol::new(hi, i, l)], c.clone()));
                }
                if i == l {
                    out.push((vec![TSymbol::new(hi, k, j)], -&c));
                }
            } else {
                out.push((vec![TSymbol::new(a - 1, k, j), TSymbol::new(hi, i, l)], c.clone()));
                out.push((vec![TSymbol::new(hi, k, j), TSymbol::new(a - 1, i, l)], -&c));
            }
        }
        out
    }

    /// Normal form of [x, y].
    pub fn commutator(&self, x: TSymbol, y: TSymbol) -> TPoly {
        let mut p = TPoly::zero(self.n);
        for (w, c) in self.commutator_terms(x, y).iter() {
            p.add_term(w.clone(), c);
        }
        p
    }

    fn commutator_terms(&self, x: TSymbol, y: TSymbol) -> Terms {
        if let Some(v) = self.commutators.get(&(x, y)) {
            return v.clone();
        }
        let mut acc = TPoly::zero(self.n);
        for (w, c) in self.commutator_raw(x, y) {
            let p = self.normalize_word(&w);
            acc.add_scaled(&p, &c);
        }
        let v: Terms = Arc::new(acc.terms.into_iter().collect());
        self.commutators.insert((x, y), v.clone());
        v
    }

    /// Normal form of s·m for an ordered word m.
    fn insert(&self, s: TSymbol, m: &[TSymbol]) -> Terms {
        if m.first().is_none_or(|t| s <= *t) {
            let mut w = Vec::with_capacity(m.len() + 1);
            w.push(s);
            w.extend_from_slice(m);
            return Arc::new(vec![(w, HbarPoly::one())]);
        }
        let key = (s, m.to_vec());
        if let Some(v) = self.inserts.get(&key) {
            return v.clone();
        }
        let t = m[0];
        let rest = &m[1..];
        let mut acc = TPoly::zero(self.n);
        // s t rest = t (s rest) + [s, t] rest
        for (w, c) in self.insert(s, rest).iter() {
            for (w2, c2) in self.insert(t, w).iter() {
                acc.add_term(w2.clone(), &(c * c2));
            }
        }
        for (u, c) in self.commutator_terms(s, t).iter() {
            for (w, c2) in self.mul_word_ordered(u, rest) {
                acc.add_term(w, &(c * &c2));
            }
        }
        let v: Terms = Arc::new(acc.terms.into_iter().collect());
        self.inserts.insert(key, v.clone());
        v
    }

    /// Normal form of u·m for ordered words u and m.
    fn mul_word_ordered(&self, u: &[TSymbol], m: &[TSymbol]) -> Vec<(Word, HbarPoly)> {
        let mut cur: Vec<(Word, HbarPoly)> = vec![(m.to_vec(), HbarPoly::one())];
        for s in u.iter().rev() {
            let mut next = TPoly::zero(self.n);
            for (w, c) in &cur {
                for (w2, c2) in self.insert(*s, w).iter() {
                    next.add_term(w2.clone(), &(c * c2));
                }
            }
            cur = next.terms.into_iter().collect();
        }
        cur
    }

    /// Normal form of an arbitrary word.
    pub fn normalize_word(&self, w: &[TSymbol]) -> TPoly {
        let mut p = TPoly::zero(self.n);
        for (w2, c) in self.mul_word_ordered(w, &[]) {
            p.add_term(w2, &c);
        }
        p
    }

    /// Normal form of an arbitrary linear combination of words.
    pub fn normalize(&self, p: &TPoly) -> TPoly {
        let mut out = TPoly::zero(self.n);
        for (w, c) in &p.terms {
            if is_ordered(w) {
                out.add_term(w.clone(), c);
            } else {
                out.add_scaled(&self.normalize_word(w), c);
            }
        }
        out
    }

    /// Product of two normal forms.
    pub fn mul(&self, a: &TPoly, b: &TPoly) -> TPoly {
        let mut out = TPoly::zero(self.n);
        for (wa, ca) in &a.terms {
            let mut cur: Vec<(Word, HbarPoly)> = b.terms.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
            for s in wa.iter().rev() {
                let mut next = TPoly::zero(self.n);
                for (w, c) in &cur {
                    for (w2, c2) in self.insert(*s, w).iter() {
                        next.add_term(w2.clone(), &(c * c2));
                    }
                }
                cur = next.terms.into_iter().collect();
            }
            for (w, c) in cur {
                out.add_term(w, &(ca * &c));
            }
        }
        out
    }

    pub fn bracket(&self, a: &TPoly, b: &TPoly) -> TPoly {
        self.mul(a, b).sub(&self.mul(b, a))
    }

    pub fn t(&self, r: u32, i: i32, j: i32) -> TPoly {
        TPoly::word(self.n, vec![TSymbol::new(r, i, j)])
    }

    /// T^{(r)}_{i,j} with T^{(0)}_{i,j} = δ_{i,j}.
    fn t_or_delta(&self, r: u32, i: i32, j: i32) -> TPoly {
        if r == 0 {
            if i == j {
                TPoly::one(self.n)
            } else {
                TPoly::zero(self.n)
            }
        } else {
            self.t(r, i, j)
        }
    }

    /// S^{(r)}_{i,j} = T^{(r)}_{i,j} − (−1)^r T^{(r)}_{−j,−i}
    ///   + ħ Σ_{s=1}^{r−1} Σ_a (−1)^s T^{(r−s)}_{i,a} T^{(s)}_{−j,−a}.
    pub fn s_element(&self, r: u32, i: i32, j: i32) -> TPoly {
        if r == 0 {
            return self.t_or_delta(0, i, j);
        }
        let sign = if r.is_multiple_of(2) { -1 } else { 1 };
        let mut out = self.t(r, i, j);
        out.add_scaled(&self.t(r, -j, -i), &HbarPoly::from_int(-sign));
        for s in 1..r {
            let c = HbarPoly::monomial(Rational::from_int(if s % 2 == 0 { 1 } else { -1 }), 1);
            for a in signed_indices(self.n) {
                let w = vec![TSymbol::new(r - s, i, a), TSymbol::new(s, -j, -a)];
                out.add_scaled(&self.normalize_word(&w), &c);
            }
        }
        out
    }

    pub fn s_expr(&self, r: u32, i: i32, j: i32) -> YExpr {
        s_expression(self.n, r, i, j)
    }

    pub fn normal_form(&self, e: &YExpr) -> TPoly {
        match e {
            YExpr::T(s) => TPoly::word(self.n, vec![*s]),
            YExpr::S(r, i, j) => self.s_element(*r, *i, *j),
            YExpr::Scalar(c) => TPoly::scalar(self.n, c.clone()),
            YExpr::Sum(v) => {
                let mut out = TPoly::zero(self.n);
                for x in v {
                    out.add_scaled(&self.normal_form(x), &HbarPoly::one());
                }
                out
            }
            YExpr::Prod(v) => {
                let mut out = TPoly::one(self.n);
                for x in v.iter().rev() {
                    out = self.mul(&self.normal_form(x), &out);
                }
                out
            }
            YExpr::Bracket(a, b) => self.bracket(&self.normal_form(a), &self.normal_form(b)),
            YExpr::ScalarMul(c, x) => self.normal_form(x).scale(c),
        }
    }

    /// Number of memoized insertions, for diagnostics.
    pub fn cache_len(&self) -> usize {
        self.inserts.len()
    }
}

/// Which adjacent inversion a rewriting step resolves first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

/// Normal ordering by plain rewriting, one adjacent swap at a time, using only
/// the raw commutator. Independent of the memoized insertion algorithm.
pub fn reduce_with_strategy(y: &Yangian, p: &TPoly, strategy: Strategy) -> TPoly {
    let mut work: BTreeMap<Word, HbarPoly> = BTreeMap::new();
    let mut done = TPoly::zero(y.n);
    let push = |work: &mut BTreeMap<Word, HbarPoly>, w: Word, c: HbarPoly| {
        let e = work.entry(w).or_default();
        *e = &*e + &c;
    };
    for (w, c) in p.terms() {
        push(&mut work, w.clone(), c.clone());
    }
    while let Some((w, c)) = work.pop_last() {
        if c.is_zero() {
            continue;
        }
        let pos = match strategy {
            Strategy::Leftmost => (0..w.len().saturating_sub(1)).find(|&k| w[k] > w[k + 1]),
            Strategy::Rightmost => (0..w.len().saturating_sub(1)).rev().find(|&k| w[k] > w[k + 1]),
        };
        let Some(k) = pos else {
            done.add_term(w, &c);
            continue;
        };
        let mut swapped = w.clone();
        swapped.swap(k, k + 1);
        push(&mut work, swapped, c.clone());
        for (u, c2) in y.commutator_raw(w[k], w[k + 1]) {
            let mut nw = Vec::with_capacity(w.len());
            nw.extend_from_slice(&w[..k]);
            nw.extend_from_slice(&u);
            nw.extend_from_slice(&w[k + 2..]);
            push(&mut work, nw, &c * &c2);
        }
    }
    done
}
