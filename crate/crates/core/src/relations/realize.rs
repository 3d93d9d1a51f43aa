//! Matrix realizations used by the Lie-level catalogs.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::current::{
    ad_chain, generator, generator_exists, type_a_cartan, type_a_generator, AdChain, CurrentElement,
};
use crate::error::{check_n, Result, TydError};
use crate::liealg::{cartan, cartan_twisted, GenKind};
use crate::relations::engine::Realization;
use crate::scalars::{HbarPoly, Rational};

fn constant_of(c: &HbarPoly) -> Result<Rational> {
    match c.terms() {
        [] => Ok(Rational::zero()),
        [(0, v)] => Ok(v.clone()),
        _ => Err(TydError::Catalog(format!("coefficient {c} involves hb at level lie"))),
    }
}

/// sl(2n)[u]^τ̃ with the generator table and ad-chains; chain images are memoized.
pub struct TwistedCurrent {
    n: i32,
    chains: RwLock<HashMap<AdChain, CurrentElement>>,
}

impl TwistedCurrent {
    pub fn new(n: i32) -> Result<Self> {
        check_n(n)?;
        Ok(TwistedCurrent { n, chains: RwLock::new(HashMap::new()) })
    }
}

impl Realization for TwistedCurrent {
    type Elem = CurrentElement;

    fn n(&self) -> i32 {
        self.n
    }

    fn cartan(&self, i: i32, j: i32) -> Option<i64> {
        cartan(i, j, self.n).ok()
    }

    fn cartan_twisted(&self, r: i64, i: i32, j: i32) -> Option<i64> {
        if r < 0 {
            return None;
        }
        cartan_twisted(i, j, r as u32, self.n).ok()
    }

    fn gen_exists(&self, kind: GenKind, i: i32, r: i64) -> bool {
        r >= 0 && generator_exists(kind, i, r as u32, self.n)
    }

    fn generator(&self, kind: GenKind, i: i32, r: u32) -> Result<CurrentElement> {
        generator(kind, i, r, self.n)
    }

    fn chain_exists(&self, spec: &AdChain) -> bool {
        spec.is_valid(self.n)
    }

    fn chain(&self, spec: &AdChain) -> Result<CurrentElement> {
        if let Some(v) = self.chains.read().expect("chain cache poisoned").get(spec) {
            return Ok(v.clone());
        }
        let v = ad_chain(*spec, self.n)?;
        self.chains.write().expect("chain cache poisoned").insert(*spec, v.clone());
        Ok(v)
    }

    fn zero(&self) -> CurrentElement {
        CurrentElement::zero(self.n)
    }

    fn add(&self, a: &CurrentElement, b: &CurrentElement) -> Result<CurrentElement> {
        a.add(b)
    }

    fn scale(&self, a: &CurrentElement, c: &HbarPoly) -> Result<CurrentElement> {
        Ok(a.scale(&constant_of(c)?))
    }

    fn bracket(&self, a: &CurrentElement, b: &CurrentElement) -> Result<CurrentElement> {
        a.bracket(b)
    }

    fn is_zero(&self, a: &CurrentElement) -> bool {
        a.is_zero()
    }

    fn render(&self, a: &CurrentElement) -> String {
        a.to_string()
    }
}

/// sl(n)[u] on the positive indices 1..n.
pub struct TypeACurrent {
    n: i32,
}

impl TypeACurrent {
    pub fn new(n: i32) -> Result<Self> {
        check_n(n)?;
        Ok(TypeACurrent { n })
    }
}

impl Realization for TypeACurrent {
    type Elem = CurrentElement;

    fn n(&self) -> i32 {
        self.n
    }

    fn cartan(&self, i: i32, j: i32) -> Option<i64> {
        let ok = |v: i32| (1..self.n).contains(&v);
        (ok(i) && ok(j)).then(|| type_a_cartan(i, j))
    }

    fn cartan_twisted(&self, _r: i64, i: i32, j: i32) -> Option<i64> {
        self.cartan(i, j)
    }

    fn gen_exists(&self, _kind: GenKind, i: i32, r: i64) -> bool {
        r >= 0 && (1..self.n).contains(&i)
    }

    fn generator(&self, kind: GenKind, i: i32, r: u32) -> Result<CurrentElement> {
        type_a_generator(kind, i, r, self.n)
    }

    fn zero(&self) -> CurrentElement {
        CurrentElement::zero(self.n)
    }

    fn add(&self, a: &CurrentElement, b: &CurrentElement) -> Result<CurrentElement> {
        a.add(b)
    }

    fn scale(&self, a: &CurrentElement, c: &HbarPoly) -> Result<CurrentElement> {
        Ok(a.scale(&constant_of(c)?))
    }

    fn bracket(&self, a: &CurrentElement, b: &CurrentElement) -> Result<CurrentElement> {
        a.bracket(b)
    }

    fn is_zero(&self, a: &CurrentElement) -> bool {
        a.is_zero()
    }

    fn render(&self, a: &CurrentElement) -> String {
        let mut out = String::new();
        for (idx, (r, m)) in a.components().iter().enumerate() {
            if idx > 0 {
                out.push_str(" + ");
            }
            out.push_str(&format!("({m})*u^{r}"));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}
