//! The map Φ from the finite presentation on H_{i,0}, H_{j,1}, X^±_{i,r}
//! (r = 0, 1) into the twisted Yangian, and the checks run on it.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::current::{generator, CurrentElement};
use crate::error::{check_n, Result, TydError};
use crate::liealg::{cartan, cartan_twisted, GenKind, GlMatrix};
use crate::relations::check::{check_entries, CheckOptions};
use crate::relations::dsl::CatalogEntry;
use crate::relations::engine::Realization;
use crate::report::{Entry, Status};
use crate::scalars::{HbarPoly, Rational};
use crate::yangian::{word_degree, Normalization, TPoly, Yangian};

pub const SUITE: &str = "ty-phi";
pub const GR_SUITE: &str = "ty-phi-gr";

/// Candidate images of X^−_{i,1} for i ≤ n−1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PhiVariant {
    /// The same expression as X^+_{i,1}.
    PaperLiteral,
    /// −S^{(2)}_{i+1,i} − ((i+n−1)/2)ħS^{(1)}_{i+1,i} + ħΣ_{a∈I_i}S^{(1)}_{i+1,a}S^{(1)}_{a,i}.
    TransposedMinus,
}

impl PhiVariant {
    pub const ALL: [PhiVariant; 2] = [PhiVariant::PaperLiteral, PhiVariant::TransposedMinus];

    pub fn label(self) -> &'static str {
        match self {
            PhiVariant::PaperLiteral => "paper_literal",
            PhiVariant::TransposedMinus => "transposed_minus",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.label() == s)
    }
}

/// Whether (kind, i, r) is one of H_{i,0}, H_{j,1} (j ≤ n−1), X^±_{i,0}, X^±_{i,1}.
pub fn in_domain(kind: GenKind, i: i32, r: u32, n: i32) -> bool {
    match (kind, r) {
        (GenKind::H, 1) => (1..n).contains(&i),
        (_, 0 | 1) => (1..=n).contains(&i),
        _ => false,
    }
}

/// I_k = {±1, …, ±k}.
pub fn i_set(k: i32) -> Vec<i32> {
    (1..=k).flat_map(|a| [a, -a]).collect()
}

fn hb(c: Rational) -> HbarPoly {
    HbarPoly::monomial(c, 1)
}

/// ħΣ_{a∈I_k} S^{(1)}_{p,a}S^{(1)}_{a,q}.
fn quadratic_sum(y: &Yangian, k: i32, p: i32, q: i32) -> TPoly {
    let mut acc = TPoly::zero(y.n());
    for a in i_set(k) {
        acc = acc.add(&y.mul(&y.s_element(1, p, a), &y.s_element(1, a, q)));
    }
    acc.scale(&HbarPoly::hbar())
}

/// −S^{(2)}_{p,q} − cħS^{(1)}_{p,q} + ħΣ_{a∈I_k}S^{(1)}_{p,a}S^{(1)}_{a,q}.
fn root_image(y: &Yangian, p: i32, q: i32, c: Rational, k: i32) -> TPoly {
    y.s_element(2, p, q)
        .scale(&HbarPoly::from_int(-1))
        .sub(&y.s_element(1, p, q).scale(&hb(c)))
        .add(&quadratic_sum(y, k, p, q))
}

/// Normal form of Φ(gen). Requires the reduced normalization, where S^{(1)}
/// spans a copy of so(2n).
pub fn phi_image(y: &Yangian, kind: GenKind, i: i32, r: u32, variant: PhiVariant) -> Result<TPoly> {
    let n = y.n();
    if y.normalization() != Normalization::Reduced {
        return Err(TydError::Catalog("the map is defined in the reduced normalization".into()));
    }
    if !in_domain(kind, i, r, n) {
        return Err(TydError::NoSuchGenerator(format!("{}({i},{r}) outside the generating set", kind.label())));
    }
    let s1 = |p, q| y.s_element(1, p, q);
    let half = |k: i64| Rational::new(k, 2);
    Ok(match (kind, r) {
        (GenKind::H, 0) if i < n => s1(i, i).sub(&s1(i + 1, i + 1)),
        (GenKind::H, 0) => s1(n - 1, n - 1).add(&s1(n, n)),
        (GenKind::XPlus, 0) if i < n => s1(i, i + 1),
        (GenKind::XPlus, 0) => s1(n - 1, -n),
        (GenKind::XMinus, 0) if i < n => s1(i + 1, i),
        (GenKind::XMinus, 0) => s1(-n, n - 1),
        (GenKind::H, _) => {
            let c = half((i + n - 1) as i64);
            y.s_element(2, i + 1, i + 1)
                .sub(&y.s_element(2, i, i))
                .sub(&s1(i, i).sub(&s1(i + 1, i + 1)).scale(&hb(c)))
                .sub(&y.mul(&s1(i, i), &s1(i + 1, i + 1)).scale(&HbarPoly::hbar()))
                .add(&quadratic_sum(y, i, i, i))
                .sub(&quadratic_sum(y, i, i + 1, i + 1))
        }
        (GenKind::XPlus, _) if i < n => root_image(y, i, i + 1, half((i + n - 1) as i64), i),
        (GenKind::XPlus, _) => root_image(y, n - 1, -n, Rational::from_int((n - 1) as i64), n - 1),
        (GenKind::XMinus, _) if i < n => match variant {
            PhiVariant::PaperLiteral => root_image(y, i, i + 1, half((i + n - 1) as i64), i),
            PhiVariant::TransposedMinus => root_image(y, i + 1, i, half((i + n - 1) as i64), i),
        },
        (GenKind::XMinus, _) => root_image(y, -n, n - 1, Rational::from_int((n - 1) as i64), n - 1),
    })
}

/// All generator images for one variant.
pub struct PhiMapping {
    pub variant: PhiVariant,
    pub n: i32,
    pub images: BTreeMap<(GenKind, i32, u32), TPoly>,
}

impl PhiMapping {
    pub fn new(y: &Yangian, variant: PhiVariant) -> Result<Self> {
        let n = y.n();
        let mut keys = Vec::new();
        for kind in [GenKind::H, GenKind::XPlus, GenKind::XMinus] {
            for r in 0..=1 {
                for i in 1..=n {
                    if in_domain(kind, i, r, n) {
                        keys.push((kind, i, r));
                    }
                }
            }
        }
        let images = keys
            .par_iter()
            .map(|&(k, i, r)| phi_image(y, k, i, r, variant).map(|p| ((k, i, r), p)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(PhiMapping { variant, n, images })
    }

    pub fn image(&self, kind: GenKind, i: i32, r: u32) -> Option<&TPoly> {
        self.images.get(&(kind, i, r))
    }
}

/// The twisted Yangian as a realization of the finite presentation through Φ.
pub struct TyRealization<'a> {
    y: &'a Yangian,
    phi: &'a PhiMapping,
}

impl<'a> TyRealization<'a> {
    pub fn new(y: &'a Yangian, phi: &'a PhiMapping) -> Self {
        TyRealization { y, phi }
    }
}

impl Realization for TyRealization<'_> {
    type Elem = TPoly;

    fn n(&self) -> i32 {
        self.phi.n
    }

    fn cartan(&self, i: i32, j: i32) -> Option<i64> {
        cartan(i, j, self.phi.n).ok()
    }

    fn cartan_twisted(&self, r: i64, i: i32, j: i32) -> Option<i64> {
        if r < 0 {
            return None;
        }
        cartan_twisted(i, j, r as u32, self.phi.n).ok()
    }

    fn gen_exists(&self, kind: GenKind, i: i32, r: i64) -> bool {
        (0..=1).contains(&r) && in_domain(kind, i, r as u32, self.phi.n)
    }

    fn generator(&self, kind: GenKind, i: i32, r: u32) -> Result<TPoly> {
        self.phi
            .image(kind, i, r)
            .cloned()
            .ok_or_else(|| TydError::NoSuchGenerator(format!("{}({i},{r})", kind.label())))
    }

    fn zero(&self) -> TPoly {
        TPoly::zero(self.phi.n)
    }

    fn add(&self, a: &TPoly, b: &TPoly) -> Result<TPoly> {
        Ok(a.add(b))
    }

    fn scale(&self, a: &TPoly, c: &HbarPoly) -> Result<TPoly> {
        Ok(a.scale(c))
    }

    fn bracket(&self, a: &TPoly, b: &TPoly) -> Result<TPoly> {
        Ok(self.y.bracket(a, b))
    }

    fn product(&self, a: &TPoly, b: &TPoly) -> Result<TPoly> {
        Ok(self.y.mul(a, b))
    }

    fn is_zero(&self, a: &TPoly) -> bool {
        a.is_zero()
    }

    fn render(&self, a: &TPoly) -> String {
        a.to_string()
    }
}

/// Runs the finite-presentation catalog through Φ for one variant. Entries
/// carry a `variant` parameter.
pub fn check_phi(y: &Yangian, variant: PhiVariant, catalog: &[CatalogEntry], timings: bool) -> Result<Vec<Entry>> {
    let phi = PhiMapping::new(y, variant)?;
    let real = TyRealization::new(y, &phi);
    let opts = CheckOptions { mode_bound: 1, timings };
    let entries = check_entries(SUITE, catalog, &real, opts);
    Ok(entries.into_iter().map(|e| tag_variant(e, variant)).collect())
}

fn tag_variant(mut e: Entry, variant: PhiVariant) -> Entry {
    e.params.insert("variant".into(), variant.label().into());
    e
}

/// Outcome of running both variants.
pub struct PhiOutcome {
    pub entries: Vec<Entry>,
    /// The variants with no failing entry.
    pub passing: Vec<PhiVariant>,
    /// The variant with strictly fewer failing entries, if any.
    pub preferred: Option<PhiVariant>,
    /// Failing entry count per variant, before demotion.
    pub failures: Vec<(PhiVariant, usize)>,
}

/// Runs both variants. The failures of the variant that is not preferred
/// are downgraded to informational.
pub fn check_phi_both(y: &Yangian, catalog: &[CatalogEntry], timings: bool) -> Result<PhiOutcome> {
    let mut runs = Vec::new();
    for v in PhiVariant::ALL {
        let mut es = check_phi(y, v, catalog, timings)?;
        es.extend(gr_leading_check(&PhiMapping::new(y, v)?));
        runs.push((v, es));
    }
    let failures: Vec<(PhiVariant, usize)> =
        runs.iter().map(|(v, es)| (*v, es.iter().filter(|e| e.status == Status::Fail).count())).collect();
    let passing: Vec<PhiVariant> = failures.iter().filter(|(_, f)| *f == 0).map(|(v, _)| *v).collect();
    let best = failures.iter().map(|(_, f)| *f).min().unwrap_or(0);
    let mut at_best = failures.iter().filter(|(_, f)| *f == best);
    let preferred = match (at_best.next(), at_best.next()) {
        (Some((v, _)), None) => Some(*v),
        _ => None,
    };
    let mut entries = Vec::new();
    for (v, es) in runs {
        let demote = preferred.is_some_and(|p| p != v);
        entries.extend(es.into_iter().map(|mut e| {
            if demote && e.status == Status::Fail {
                e.status = Status::Informational;
            }
            e
        }));
    }
    Ok(PhiOutcome { entries, passing, preferred, failures })
}

/// Image in the current algebra of a linear combination of T-symbols of one
/// filtration degree d, under T^{(d+1)}_{i,j} ↦ (−1)^d E_{i,j}u^d.
fn linear_to_current(p: &TPoly, d: u32) -> Result<CurrentElement> {
    let n = p.n();
    let mut m = GlMatrix::zero(n);
    for (w, c) in p.terms() {
        let [s] = w.as_slice() else {
            return Err(TydError::Catalog(format!("top-degree part of {p} is not linear")));
        };
        let [(0, v)] = c.terms() else {
            return Err(TydError::Catalog(format!("top-degree coefficient {c} depends on hb")));
        };
        let sign = if d.is_multiple_of(2) { v.clone() } else { -v };
        m.add_entry(s.i, s.j, &sign);
    }
    Ok(CurrentElement::from_matrix(m, d))
}

/// Part of p of filtration degree exactly d.
pub fn degree_part(p: &TPoly, d: u32) -> TPoly {
    let mut out = TPoly::zero(p.n());
    for (w, c) in p.terms() {
        if word_degree(w) == d {
            out.add_term(w.clone(), c);
        }
    }
    out
}

/// Compares the top filtration part of every image with the generator of
/// the twisted current algebra, and checks the filtration degree equals the mode.
pub fn gr_leading_check(phi: &PhiMapping) -> Vec<Entry> {
    let n = phi.n;
    let mut out = Vec::new();
    for (&(kind, i, r), img) in &phi.images {
        let base = || {
            Entry::new(GR_SUITE, &format!("leading-{}", kind.label()), Status::Pass)
                .with_param("i", i as i64)
                .with_param("r", r as i64)
                .with_param("variant", phi.variant.label())
        };
        let degree = img.degree();
        let leading = linear_to_current(&degree_part(img, r), r)
            .and_then(|got| generator(kind, i, r, n).and_then(|want| got.sub(&want)));
        let entry = match (degree, leading) {
            (Some(d), _) if d != r => {
                let mut e = base().with_residual(format!("filtration degree {d}"));
                e.status = Status::Fail;
                e
            }
            (None, _) => {
                let mut e = base().with_residual("zero image");
                e.status = Status::Fail;
                e
            }
            (_, Ok(diff)) if diff.is_zero() => base(),
            (_, Ok(diff)) => {
                let mut e = base().with_residual(diff.to_string());
                e.status = Status::Fail;
                e
            }
            (_, Err(err)) => {
                let mut e = base().with_residual(format!("error: {err}"));
                e.status = Status::Fail;
                e
            }
        };
        out.push(entry);
    }
    out
}

/// Smoke test at degree 0: [Φ(X^+_{i,0}), Φ(X^−_{j,0})] = δ_{i,j}Φ(H_{i,0}).
pub fn degree_zero_pairing(y: &Yangian, phi: &PhiMapping) -> bool {
    let n = phi.n;
    (1..=n).all(|i| {
        (1..=n).all(|j| {
            let lhs = y.bracket(&phi.images[&(GenKind::XPlus, i, 0)], &phi.images[&(GenKind::XMinus, j, 0)]);
            let rhs = if i == j { phi.images[&(GenKind::H, i, 0)].clone() } else { TPoly::zero(n) };
            lhs == rhs
        })
    })
}

pub fn reduced_yangian(n: i32) -> Result<Yangian> {
    check_n(n)?;
    Yangian::new(n, Normalization::Reduced)
}
