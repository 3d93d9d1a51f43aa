//! The twisted current algebra sl(2n)[u]^τ̃ realized by matrix-valued
//! polynomials in u, its generators h_{i,r}, x^±_{i,r}, and the ad-chain
//! elements X_{i,j,r}, X_{i,−j,r}, X_{i,−i,r} with their negative mirrors.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{check_n, Result, TydError};
use crate::liealg::{chevalley_pair, signed_indices, tau, GenKind, GlMatrix};
use crate::scalars::Rational;

/// Element of gl(2n)[u]: degree ↦ nonzero matrix coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CurrentElement {
    n: i32,
    comps: BTreeMap<u32, GlMatrix>,
}

impl CurrentElement {
    pub fn zero(n: i32) -> Self {
        CurrentElement { n, comps: BTreeMap::new() }
    }

    /// `x ⊗ u^r`.
    pub fn from_matrix(x: GlMatrix, r: u32) -> Self {
        let n = x.n();
        let mut comps = BTreeMap::new();
        if !x.is_zero() {
            comps.insert(r, x);
        }
        CurrentElement { n, comps }
    }

    pub fn n(&self) -> i32 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> &BTreeMap<u32, GlMatrix> {
        &self.comps
    }

    pub fn component(&self, r: u32) -> GlMatrix {
        self.comps.get(&r).cloned().unwrap_or_else(|| GlMatrix::zero(self.n))
    }

    fn check(&self, other: &CurrentElement) -> Result<()> {
        if self.n != other.n {
            Err(TydError::SizeMismatch(self.n, other.n))
        } else {
            Ok(())
        }
    }

    fn put(&mut self, r: u32, m: GlMatrix) -> Result<()> {
        let sum = match self.comps.remove(&r) {
            Some(old) => old.add(&m)?,
            None => m,
        };
        if !sum.is_zero() {
            self.comps.insert(r, sum);
        }
        Ok(())
    }

    pub fn add(&self, other: &CurrentElement) -> Result<CurrentElement> {
        self.check(other)?;
        let mut out = self.clone();
        for (r, m) in &other.comps {
            out.put(*r, m.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &CurrentElement) -> Result<CurrentElement> {
        self.add(&other.scale(&Rational::from_int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> CurrentElement {
        if c.is_zero() {
            return CurrentElement::zero(self.n);
        }
        CurrentElement {
            n: self.n,
            comps: self.comps.iter().map(|(r, m)| (*r, m.scale(c))).collect(),
        }
    }

    /// [x ⊗ u^r, y ⊗ u^s] = [x, y] ⊗ u^{r+s}.
    pub fn bracket(&self, other: &CurrentElement) -> Result<CurrentElement> {
        self.check(other)?;
        let mut out = CurrentElement::zero(self.n);
        for (r, a) in &self.comps {
            for (s, b) in &other.comps {
                out.put(r + s, a.commutator(b)?)?;
            }
        }
        Ok(out)
    }

    /// Trace of each component is zero.
    pub fn is_traceless(&self) -> bool {
        self.comps.values().all(|m| m.trace().is_zero())
    }

    /// Decomposition into the f-basis {f^r_{i,j}} with representatives
    /// (i,j) ≤ (−j,−i) in the linearized order; `None` if not τ̃-fixed.
    pub fn f_coordinates(&self) -> Option<Vec<(u32, i32, i32, Rational)>> {
        if !is_tau_tilde_fixed(self) {
            return None;
        }
        let mut out = Vec::new();
        for (r, m) in &self.comps {
            for ((i, j), c) in m.entries() {
                let mirror = (-*j, -*i);
                if (*i, *j) < mirror {
                    out.push((*r, *i, *j, c.clone()));
                } else if (*i, *j) == mirror {
                    out.push((*r, *i, *j, c * &Rational::new(1, 2)));
                }
            }
        }
        Some(out)
    }
}

impl fmt::Display for CurrentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        if let Some(coords) = self.f_coordinates() {
            for (idx, (r, i, j, c)) in coords.iter().enumerate() {
                let neg = c.is_negative();
                let mag = c.abs();
                if idx == 0 {
                    if neg {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, " {} ", if neg { "-" } else { "+" })?;
                }
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write!(f, "f({i},{j};{r})")?;
            }
            return Ok(());
        }
        for (idx, (r, m)) in self.comps.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({m})*u^{r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CurrentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CurrentElement[n={}]({self})", self.n)
    }
}

/// τ̃(x ⊗ u^r) = (−1)^r τ(x) ⊗ u^r.
pub fn tau_tilde(x: &CurrentElement) -> CurrentElement {
    let mut out = CurrentElement::zero(x.n);
    for (r, m) in &x.comps {
        let t = tau(m);
        let t = if r % 2 == 1 { t.scale(&Rational::from_int(-1)) } else { t };
        if !t.is_zero() {
            out.comps.insert(*r, t);
        }
    }
    out
}

pub fn is_tau_tilde_fixed(x: &CurrentElement) -> bool {
    tau_tilde(x) == *x
}

/// f^r_{i,j} = E_{i,j}u^r − (−1)^r E_{−j,−i}u^r.
pub fn f_mode(i: i32, j: i32, r: u32, n: i32) -> Result<CurrentElement> {
    check_n(n)?;
    crate::liealg::check_index(i, n)?;
    crate::liealg::check_index(j, n)?;
    let mut m = GlMatrix::zero(n);
    m.add_entry(i, j, &Rational::one());
    let sign = if r.is_multiple_of(2) { -1 } else { 1 };
    m.add_entry(-j, -i, &Rational::from_int(sign));
    Ok(CurrentElement::from_matrix(m, r))
}

/// Whether the generator h_{i,r} / x^±_{i,r} exists in the twisted current
/// algebra: h_{n,r} needs r even, x^±_{n+1,r} needs r odd.
pub fn generator_exists(kind: GenKind, i: i32, r: u32, n: i32) -> bool {
    match kind {
        GenKind::H => (1..n).contains(&i) || (i == n && r.is_multiple_of(2)),
        _ => (1..=n).contains(&i) || (i == n + 1 && r % 2 == 1),
    }
}

fn generator_name(kind: GenKind, i: i32, r: u32) -> String {
    format!("{}({i},{r})", kind.label())
}

pub fn generator(kind: GenKind, i: i32, r: u32, n: i32) -> Result<CurrentElement> {
    check_n(n)?;
    if !generator_exists(kind, i, r, n) {
        return Err(TydError::NoSuchGenerator(generator_name(kind, i, r)));
    }
    match (kind, i) {
        (GenKind::H, i) if i < n => f_mode(i, i, r, n)?.sub(&f_mode(i + 1, i + 1, r, n)?),
        (GenKind::H, _) => f_mode(n - 1, n - 1, r, n)?.add(&f_mode(n, n, r, n)?),
        (GenKind::XPlus, i) if i == n + 1 => f_mode(n, -n, r, n),
        (GenKind::XMinus, i) if i == n + 1 => f_mode(-n, n, r, n),
        (kind, i) => {
            let (p, q) = chevalley_pair(kind, i, n);
            f_mode(p, q, r, n)
        }
    }
}

/// Generators of sl(n)[u] embedded on the positive indices 1..n:
/// 𝔥_{i,r} = (E_{i,i} − E_{i+1,i+1})u^r, 𝔵^+_{i,r} = E_{i,i+1}u^r,
/// 𝔵^−_{i,r} = E_{i+1,i}u^r.
pub fn type_a_generator(kind: GenKind, i: i32, r: u32, n: i32) -> Result<CurrentElement> {
    check_n(n)?;
    if !(1..n).contains(&i) {
        return Err(TydError::NoSuchGenerator(format!("type A {}", generator_name(kind, i, r))));
    }
    let mut m = GlMatrix::zero(n);
    match kind {
        GenKind::H => {
            m.add_entry(i, i, &Rational::one());
            m.add_entry(i + 1, i + 1, &Rational::from_int(-1));
        }
        GenKind::XPlus => m.add_entry(i, i + 1, &Rational::one()),
        GenKind::XMinus => m.add_entry(i + 1, i, &Rational::one()),
    }
    Ok(CurrentElement::from_matrix(m, r))
}

/// Cartan matrix of sl(n), 1 ≤ i, j ≤ n−1.
pub fn type_a_cartan(i: i32, j: i32) -> i64 {
    2 * (i == j) as i64 - (i == j + 1) as i64 - (i + 1 == j) as i64
}

/// Iterated ad-elements. Positive families take 1 ≤ i < j ≤ n (diagonal: i ≤ n
/// and odd r); the `T` variants are their negative-root mirrors built from X^−.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AdChain {
    /// X_{i,j,r}.
    Pos { i: i32, j: i32, r: u32 },
    /// X_{i,−j,r}.
    Neg { i: i32, j: i32, r: u32 },
    /// X_{i,−i,r}, r odd.
    Diag { i: i32, r: u32 },
    /// X_{j,i,r}.
    PosT { i: i32, j: i32, r: u32 },
    /// X_{−i,j,r}.
    NegT { i: i32, j: i32, r: u32 },
    /// X_{−i,i,r}, r odd.
    DiagT { i: i32, r: u32 },
}

impl AdChain {
    pub fn is_valid(&self, n: i32) -> bool {
        match *self {
            AdChain::Pos { i, j, .. }
            | AdChain::Neg { i, j, .. }
            | AdChain::PosT { i, j, .. }
            | AdChain::NegT { i, j, .. } => 1 <= i && i < j && j <= n,
            AdChain::Diag { i, r } | AdChain::DiagT { i, r } => (1..=n).contains(&i) && r % 2 == 1,
        }
    }

    fn mirrored(&self) -> bool {
        matches!(self, AdChain::PosT { .. } | AdChain::NegT { .. } | AdChain::DiagT { .. })
    }

    /// The matrix position (p,q) the element is expected to sit on.
    pub fn nominal_pair(&self) -> (i32, i32, u32) {
        match *self {
            AdChain::Pos { i, j, r } => (i, j, r),
            AdChain::Neg { i, j, r } => (i, -j, r),
            AdChain::Diag { i, r } => (i, -i, r),
            AdChain::PosT { i, j, r } => (j, i, r),
            AdChain::NegT { i, j, r } => (-i, j, r),
            AdChain::DiagT { i, r } => (-i, i, r),
        }
    }
}

impl fmt::Display for AdChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q, r) = self.nominal_pair();
        write!(f, "X[{p},{q};{r}]")
    }
}

/// Evaluates an ad-chain in the matrix realization. Products ∏_{u=a}^{b} are
/// empty when a > b and are applied right to left (largest u innermost).
pub fn ad_chain(spec: AdChain, n: i32) -> Result<CurrentElement> {
    check_n(n)?;
    if !spec.is_valid(n) {
        return Err(TydError::InvalidChain(spec.to_string()));
    }
    let x = if spec.mirrored() { GenKind::XMinus } else { GenKind::XPlus };
    let pos = |a: i32, b: i32| -> Result<CurrentElement> {
        if spec.mirrored() {
            ad_chain(AdChain::PosT { i: a, j: b, r: 0 }, n)
        } else {
            ad_chain(AdChain::Pos { i: a, j: b, r: 0 }, n)
        }
    };
    let apply_simple = |mut v: CurrentElement, lo: i32, hi: i32| -> Result<CurrentElement> {
        for u in (lo..=hi).rev() {
            v = generator(x, u, 0, n)?.bracket(&v)?;
        }
        Ok(v)
    };
    let apply_long = |mut v: CurrentElement, lo: i32| -> Result<CurrentElement> {
        for u in (lo..=n).rev() {
            v = pos(u - 2, u)?.bracket(&v)?;
        }
        Ok(v)
    };
    match spec {
        AdChain::Pos { i, j, r } | AdChain::PosT { i, j, r } => {
            apply_simple(generator(x, j - 1, r, n)?, i, j - 2)
        }
        AdChain::Neg { i, j, r } | AdChain::NegT { i, j, r } => {
            let inner = apply_long(generator(x, n, r, n)?, j + 1)?;
            apply_simple(inner, i, j - 2)
        }
        AdChain::Diag { i, r } | AdChain::DiagT { i, r } => {
            if i == n {
                generator(x, n + 1, r, n)
            } else {
                let inner = apply_long(generator(x, n, r, n)?, i + 2)?;
                generator(x, i, 0, n)?.bracket(&inner)
            }
        }
    }
}

/// Finds c with ad_chain(spec) = c·f^r_{p,q} for the nominal pair (p,q).
pub fn correspondence_sign(spec: AdChain, n: i32) -> Result<(i32, i32, Rational)> {
    let v = ad_chain(spec, n)?;
    let (p, q, r) = spec.nominal_pair();
    let basis = f_mode(p, q, r, n)?;
    let unit = basis.component(r);
    let ((bi, bj), bc) = unit
        .entries()
        .iter()
        .next()
        .map(|(k, c)| (*k, c.clone()))
        .ok_or_else(|| TydError::NotProportional(format!("{spec}: f-mode vanishes")))?;
    let c = &v.component(r).get(bi, bj) / &bc;
    if c.is_zero() || v != basis.scale(&c) {
        return Err(TydError::NotProportional(format!("{spec} = {v}")));
    }
    Ok((p, q, c))
}

/// Random τ̃-fixed element with small integer coefficients, used by tests.
pub fn random_fixed_element<R: rand::Rng>(rng: &mut R, n: i32, max_deg: u32, terms: usize) -> CurrentElement {
    let idx: Vec<i32> = signed_indices(n).collect();
    let mut out = CurrentElement::zero(n);
    for _ in 0..terms {
        let i = idx[rng.gen_range(0..idx.len())];
        let j = idx[rng.gen_range(0..idx.len())];
        let r = rng.gen_range(0..=max_deg);
        let c = Rational::from_int(rng.gen_range(-3..=3));
        let f = f_mode(i, j, r, n).expect("valid indices").scale(&c);
        out = out.add(&f).expect("same n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{cartan_twisted, matrix_unit};

    const N: i32 = 5;

    fn f(i: i32, j: i32, r: u32) -> CurrentElement {
        f_mode(i, j, r, N).unwrap()
    }

    #[test]
    fn f_mode_examples() {
        let e = f(1, 2, 0);
        let mut m = matrix_unit(1, 2, N).unwrap();
        m = m.sub(&matrix_unit(-2, -1, N).unwrap()).unwrap();
        assert_eq!(e, CurrentElement::from_matrix(m, 0));
        for i in signed_indices(N) {
            assert!(f(i, -i, 2).is_zero());
            for j in signed_indices(N) {
                for r in 0..3 {
                    let sign = if r % 2 == 0 { -1 } else { 1 };
                    assert_eq!(f(-j, -i, r), f(i, j, r).scale(&Rational::from_int(sign)));
                }
            }
        }
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(f(1, 2, 1).bracket(&f(2, 3, 1)).unwrap(), f(1, 3, 2));
        let x = f(1, 2, 1).add(&f(-3, 4, 2)).unwrap();
        assert!(x.bracket(&x).unwrap().is_zero());
    }

    #[test]
    fn bracket_matches_four_delta_formula() {
        let idx: Vec<i32> = signed_indices(N).collect();
        for &i in &idx {
            for &j in &idx {
                for &p in &idx {
                    for &q in &idx {
                        for (r, s) in [(0u32, 1u32), (1, 1), (1, 2)] {
                            let lhs = f(i, j, r).bracket(&f(p, q, s)).unwrap();
                            let sr = if r % 2 == 0 { 1 } else { -1 };
                            let mut rhs = CurrentElement::zero(N);
                            let mut acc = |c: i64, e: CurrentElement| {
                                if c != 0 {
                                    rhs = rhs.add(&e.scale(&Rational::from_int(c))).unwrap();
                                }
                            };
                            acc((j == p) as i64, f(i, q, r + s));
                            acc(-((i == q) as i64), f(p, j, r + s));
                            acc(-sr * ((-i == p) as i64), f(-j, q, r + s));
                            acc(sr * ((-j == q) as i64), f(p, -i, r + s));
                            assert_eq!(lhs, rhs, "({i},{j};{r}) ({p},{q};{s})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tau_tilde_examples() {
        let e = CurrentElement::from_matrix(matrix_unit(1, 2, N).unwrap(), 1);
        let expect = CurrentElement::from_matrix(matrix_unit(-2, -1, N).unwrap(), 1);
        assert_eq!(tau_tilde(&e), expect);
        assert_eq!(tau_tilde(&tau_tilde(&e)), e);
        assert!(is_tau_tilde_fixed(&f(3, -1, 3)));
    }

    #[test]
    fn generator_table() {
        let h = generator(GenKind::H, N, 0, N).unwrap();
        assert_eq!(h, f(N - 1, N - 1, 0).add(&f(N, N, 0)).unwrap());
        assert_eq!(generator(GenKind::XPlus, N + 1, 3, N).unwrap(), f(N, -N, 3));
        assert!(generator(GenKind::H, N, 1, N).is_err());
        assert!(generator(GenKind::XPlus, N + 1, 2, N).is_err());
        for kind in [GenKind::H, GenKind::XPlus, GenKind::XMinus] {
            for i in 1..=N + 1 {
                for r in 0..4 {
                    if let Ok(g) = generator(kind, i, r, N) {
                        assert!(is_tau_tilde_fixed(&g));
                        assert!(g.is_traceless());
                    }
                }
            }
        }
    }

    #[test]
    fn cartan_action_on_generators() {
        for i in 1..=N {
            for j in 1..=N {
                for r in 0..=6u32 {
                    for s in 0..=(6 - r) {
                        let Ok(h) = generator(GenKind::H, i, r, N) else { continue };
                        let a = cartan_twisted(i, j, r, N).unwrap();
                        for kind in [GenKind::XPlus, GenKind::XMinus] {
                            let x = generator(kind, j, s, N).unwrap();
                            let expect = generator(kind, j, r + s, N)
                                .unwrap()
                                .scale(&Rational::from_int(kind.sign() * a));
                            assert_eq!(h.bracket(&x).unwrap(), expect, "h({i},{r}) x({j},{s})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn chain_examples() {
        for i in 1..N {
            for r in 0..3 {
                assert_eq!(
                    ad_chain(AdChain::Pos { i, j: i + 1, r }, N).unwrap(),
                    generator(GenKind::XPlus, i, r, N).unwrap()
                );
            }
        }
        for r in [1, 3] {
            assert_eq!(ad_chain(AdChain::Diag { i: N, r }, N).unwrap(), f(N, -N, r));
        }
        for r in 0..4 {
            assert_eq!(ad_chain(AdChain::Neg { i: N - 1, j: N, r }, N).unwrap(), f(N - 1, -N, r));
        }
        assert!(ad_chain(AdChain::Diag { i: 2, r: 2 }, N).is_err());
        assert!(ad_chain(AdChain::Pos { i: 3, j: 3, r: 0 }, N).is_err());
    }

    #[test]
    fn chains_are_proportional_to_f_modes() {
        for i in 1..=N {
            for j in (i + 1)..=N {
                for r in 0..=4 {
                    let (p, q, c) = correspondence_sign(AdChain::Pos { i, j, r }, N).unwrap();
                    assert_eq!((p, q, c), (i, j, Rational::one()));
                    correspondence_sign(AdChain::Neg { i, j, r }, N).unwrap();
                    correspondence_sign(AdChain::PosT { i, j, r }, N).unwrap();
                    correspondence_sign(AdChain::NegT { i, j, r }, N).unwrap();
                }
            }
            for r in [1, 3] {
                correspondence_sign(AdChain::Diag { i, r }, N).unwrap();
                correspondence_sign(AdChain::DiagT { i, r }, N).unwrap();
            }
        }
    }
}
