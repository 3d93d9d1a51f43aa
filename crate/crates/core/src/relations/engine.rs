//! Instantiation of schemas over parameter windows and evaluation of
//! instances in an algebra realization.

use crate::current::AdChain;
use crate::error::{Result, TydError};
use crate::liealg::GenKind;
use crate::relations::dsl::{
    range_is_causal, ChainFamily, Coeff, Expr, GenSel, IntTerm, Lin, Pred, RangeKind, RelationSchema,
};
use crate::scalars::{HbarPoly, Rational};

/// An algebra in which catalog expressions can be evaluated.
pub trait Realization: Sync {
    type Elem: Clone + Send;

    fn n(&self) -> i32;
    fn cartan(&self, i: i32, j: i32) -> Option<i64>;
    fn cartan_twisted(&self, r: i64, i: i32, j: i32) -> Option<i64>;
    fn gen_exists(&self, kind: GenKind, i: i32, r: i64) -> bool;
    fn generator(&self, kind: GenKind, i: i32, r: u32) -> Result<Self::Elem>;
    fn chain_exists(&self, _spec: &AdChain) -> bool {
        false
    }
    fn chain(&self, spec: &AdChain) -> Result<Self::Elem> {
        Err(TydError::InvalidChain(spec.to_string()))
    }
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn scale(&self, a: &Self::Elem, c: &HbarPoly) -> Result<Self::Elem>;
    fn bracket(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn product(&self, _a: &Self::Elem, _b: &Self::Elem) -> Result<Self::Elem> {
        Err(TydError::Catalog("products are not available in a Lie realization".into()))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn render(&self, a: &Self::Elem) -> String;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub values: Vec<i64>,
}

impl Instance {
    pub fn describe(&self, schema: &RelationSchema) -> Vec<(String, i64)> {
        schema.params.iter().map(|p| p.name.clone()).zip(self.values.iter().copied()).collect()
    }
}

pub fn eval_pred<R: Realization>(p: &Pred, vals: &[i64], real: &R) -> bool {
    let n = real.n();
    let e = |l: &Lin| l.eval(vals, n);
    match p {
        Pred::True => true,
        Pred::False => false,
        Pred::Even(a) => e(a).rem_euclid(2) == 0,
        Pred::Odd(a) => e(a).rem_euclid(2) == 1,
        Pred::Eq(a, b) => e(a) == e(b),
        Pred::Ne(a, b) => e(a) != e(b),
        Pred::Lt(a, b) => e(a) < e(b),
        Pred::Le(a, b) => e(a) <= e(b),
        Pred::TupleNe((a, b), (c, d)) => (e(a), e(b)) != (e(c), e(d)),
        Pred::Cartan(a, b, v) => real.cartan(e(a) as i32, e(b) as i32) == Some(*v),
        Pred::And(v) => v.iter().all(|x| eval_pred(x, vals, real)),
        Pred::Or(v) => v.iter().any(|x| eval_pred(x, vals, real)),
        Pred::Not(x) => !eval_pred(x, vals, real),
    }
}

fn int_term<R: Realization>(k: &IntTerm, vals: &[i64], real: &R) -> Option<i64> {
    let n = real.n();
    let e = |l: &Lin| l.eval(vals, n);
    match k {
        IntTerm::Lin(a) => Some(e(a)),
        IntTerm::Cartan(a, b) => real.cartan(e(a) as i32, e(b) as i32),
        IntTerm::CartanR(r, a, b) => real.cartan_twisted(e(r), e(a) as i32, e(b) as i32),
        IntTerm::Delta(a, b) => Some((e(a) == e(b)) as i64),
    }
}

pub fn coeff_value(c: &Coeff, n: i32) -> HbarPoly {
    let mut rat = c.rat.clone();
    if let Some((a, b)) = c.nlin {
        rat = &rat * &Rational::from_int(a * n as i64 + b);
    }
    HbarPoly::monomial(rat, c.hb)
}

fn gen_kind(sel: &GenSel, vals: &[i64]) -> GenKind {
    match sel {
        GenSel::Fixed(k) => *k,
        GenSel::Signed(p) => {
            if vals[*p] > 0 {
                GenKind::XPlus
            } else {
                GenKind::XMinus
            }
        }
    }
}

fn chain_spec(f: ChainFamily, i: i64, j: i64, r: i64) -> Option<AdChain> {
    if r < 0 {
        return None;
    }
    let (i, j, r) = (i as i32, j as i32, r as u32);
    Some(match f {
        ChainFamily::Xp => AdChain::Pos { i, j, r },
        ChainFamily::Xm => AdChain::Neg { i, j, r },
        ChainFamily::Xd => AdChain::Diag { i, r },
        ChainFamily::Yp => AdChain::PosT { i, j, r },
        ChainFamily::Ym => AdChain::NegT { i, j, r },
        ChainFamily::Yd => AdChain::DiagT { i, r },
    })
}

/// Whether every generator and chain reached by evaluation exists. Branches
/// multiplied by zero (`mul` with a zero factor, false `when`) are not visited.
pub fn references_exist<R: Realization>(e: &Expr, vals: &[i64], real: &R) -> bool {
    let n = real.n();
    match e {
        Expr::Zero => true,
        Expr::Gen(sel, i, r) => real.gen_exists(gen_kind(sel, vals), i.eval(vals, n) as i32, r.eval(vals, n)),
        Expr::Chain(f, i, j, r) => chain_spec(*f, i.eval(vals, n), j.eval(vals, n), r.eval(vals, n))
            .is_some_and(|c| real.chain_exists(&c)),
        Expr::Bracket(a, b) | Expr::Prod(a, b) => references_exist(a, vals, real) && references_exist(b, vals, real),
        Expr::Sum(v) => v.iter().all(|x| references_exist(x, vals, real)),
        Expr::Scal(_, x) | Expr::Sign(_, x) => references_exist(x, vals, real),
        Expr::Mul(k, x) => match int_term(k, vals, real) {
            None => false,
            Some(0) => true,
            Some(_) => references_exist(x, vals, real),
        },
        Expr::When(p, x) => !eval_pred(p, vals, real) || references_exist(x, vals, real),
    }
}

pub fn eval_expr<R: Realization>(e: &Expr, vals: &[i64], real: &R) -> Result<R::Elem> {
    let n = real.n();
    match e {
        Expr::Zero => Ok(real.zero()),
        Expr::Gen(sel, i, r) => {
            let kind = gen_kind(sel, vals);
            let (i, r) = (i.eval(vals, n) as i32, r.eval(vals, n));
            if r < 0 || !real.gen_exists(kind, i, r) {
                return Err(TydError::NoSuchGenerator(format!("{}({i},{r})", kind.label())));
            }
            real.generator(kind, i, r as u32)
        }
        Expr::Chain(f, i, j, r) => {
            let spec = chain_spec(*f, i.eval(vals, n), j.eval(vals, n), r.eval(vals, n))
                .ok_or_else(|| TydError::InvalidChain(format!("{} with negative mode", f.label())))?;
            real.chain(&spec)
        }
        Expr::Bracket(a, b) => real.bracket(&eval_expr(a, vals, real)?, &eval_expr(b, vals, real)?),
        Expr::Prod(a, b) => real.product(&eval_expr(a, vals, real)?, &eval_expr(b, vals, real)?),
        Expr::Sum(v) => {
            let mut acc = real.zero();
            for x in v {
                acc = real.add(&acc, &eval_expr(x, vals, real)?)?;
            }
            Ok(acc)
        }
        Expr::Scal(c, x) => real.scale(&eval_expr(x, vals, real)?, &coeff_value(c, n)),
        Expr::Sign(l, x) => {
            let v = eval_expr(x, vals, real)?;
            if l.eval(vals, n).rem_euclid(2) == 1 {
                real.scale(&v, &HbarPoly::from_int(-1))
            } else {
                Ok(v)
            }
        }
        Expr::Mul(k, x) => {
            let k = int_term(k, vals, real)
                .ok_or_else(|| TydError::Catalog("integer factor out of range".into()))?;
            if k == 0 {
                Ok(real.zero())
            } else {
                real.scale(&eval_expr(x, vals, real)?, &HbarPoly::from_int(k))
            }
        }
        Expr::When(p, x) => {
            if eval_pred(p, vals, real) {
                eval_expr(x, vals, real)
            } else {
                Ok(real.zero())
            }
        }
    }
}

/// Cartesian expansion of the parameter ranges in declaration order, filtered
/// by the guard and by existence of every referenced generator.
pub fn instantiate<R: Realization>(schema: &RelationSchema, real: &R, mode_bound: u32) -> Vec<Instance> {
    assert!(range_is_causal(&schema.params), "range bounds must refer to earlier parameters");
    let n = real.n();
    let mut out = Vec::new();
    let mut vals: Vec<i64> = Vec::with_capacity(schema.params.len());
    fn rec<R: Realization>(
        schema: &RelationSchema,
        real: &R,
        mode_bound: u32,
        n: i32,
        vals: &mut Vec<i64>,
        out: &mut Vec<Instance>,
    ) {
        let k = vals.len();
        if k == schema.params.len() {
            if eval_pred(&schema.guard, vals, real)
                && references_exist(&schema.lhs, vals, real)
                && references_exist(&schema.rhs, vals, real)
            {
                out.push(Instance { values: vals.clone() });
            }
            return;
        }
        let range: Vec<i64> = match &schema.params[k].kind {
            RangeKind::Node => (1..=n as i64).collect(),
            RangeKind::Mode => (0..=mode_bound as i64).collect(),
            RangeKind::Pm => vec![1, -1],
            RangeKind::Range(lo, hi) => (lo.eval(vals, n)..=hi.eval(vals, n)).collect(),
        };
        for v in range {
            vals.push(v);
            rec(schema, real, mode_bound, n, vals, out);
            vals.pop();
        }
    }
    rec(schema, real, mode_bound, n, &mut vals, &mut out);
    out
}

/// lhs − rhs of an instance.
pub fn residual<R: Realization>(schema: &RelationSchema, inst: &Instance, real: &R) -> Result<R::Elem> {
    let l = eval_expr(&schema.lhs, &inst.values, real)?;
    let r = eval_expr(&schema.rhs, &inst.values, real)?;
    real.add(&l, &real.scale(&r, &HbarPoly::from_int(-1))?)
}
