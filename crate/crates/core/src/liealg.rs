//! gl(2n) on the signed index set I_n = {±1, …, ±n}: matrix units, the
//! involution τ(E_{i,j}) = −E_{−j,−i}, the τ-fixed elements f_{i,j}, the
//! invariant form and the type D Cartan/Chevalley data.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{check_n, Result, TydError};
use crate::scalars::Rational;

/// Position of a signed index in the fixed order −n < … < −1 < 1 < … < n.
pub fn linearize(i: i32, n: i32) -> usize {
    debug_assert!(i != 0 && i.abs() <= n);
    if i < 0 {
        (i + n) as usize
    } else {
        (i + n - 1) as usize
    }
}

pub fn signed_indices(n: i32) -> impl Iterator<Item = i32> + Clone {
    (-n..=n).filter(|&i| i != 0)
}

pub fn check_index(i: i32, n: i32) -> Result<()> {
    if i == 0 || i.abs() > n {
        Err(TydError::IndexOutOfRange { index: i, n })
    } else {
        Ok(())
    }
}

fn delta(a: i32, b: i32) -> i64 {
    (a == b) as i64
}

/// Sparse matrix on I_n × I_n. Keys are ordered by signed value, which
/// coincides with the linearized order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GlMatrix {
    n: i32,
    entries: BTreeMap<(i32, i32), Rational>,
}

impl GlMatrix {
    pub fn zero(n: i32) -> Self {
        GlMatrix { n, entries: BTreeMap::new() }
    }

    pub fn n(&self) -> i32 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &BTreeMap<(i32, i32), Rational> {
        &self.entries
    }

    pub fn get(&self, i: i32, j: i32) -> Rational {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c` at `(i,j)`, dropping the entry if it cancels.
    pub fn add_entry(&mut self, i: i32, j: i32, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.entries.entry((i, j)) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
        }
    }

    fn same_size(&self, other: &GlMatrix) -> Result<()> {
        if self.n != other.n {
            Err(TydError::SizeMismatch(self.n, other.n))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &GlMatrix) -> Result<GlMatrix> {
        self.same_size(other)?;
        let mut out = self.clone();
        for ((i, j), c) in &other.entries {
            out.add_entry(*i, *j, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GlMatrix) -> Result<GlMatrix> {
        self.add(&other.scale(&Rational::from_int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> GlMatrix {
        if c.is_zero() {
            return GlMatrix::zero(self.n);
        }
        GlMatrix {
            n: self.n,
            entries: self.entries.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &GlMatrix) -> Result<GlMatrix> {
        self.same_size(other)?;
        let mut out = GlMatrix::zero(self.n);
        for ((i, k), a) in &self.entries {
            for ((_, j), b) in other.entries.range((*k, i32::MIN)..=(*k, i32::MAX)) {
                out.add_entry(*i, *j, &(a * b));
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &GlMatrix) -> Result<GlMatrix> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn trace(&self) -> Rational {
        let mut t = Rational::zero();
        for ((i, j), c) in &self.entries {
            if i == j {
                t += c;
            }
        }
        t
    }
}

impl fmt::Display for GlMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        for (idx, ((i, j), c)) in self.entries.iter().enumerate() {
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
            write!(f, "E({i},{j})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GlMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GlMatrix[n={}]({self})", self.n)
    }
}

pub fn matrix_unit(i: i32, j: i32, n: i32) -> Result<GlMatrix> {
    check_n(n)?;
    check_index(i, n)?;
    check_index(j, n)?;
    let mut m = GlMatrix::zero(n);
    m.add_entry(i, j, &Rational::one());
    Ok(m)
}

/// τ(E_{i,j}) = −E_{−j,−i}, extended linearly.
pub fn tau(x: &GlMatrix) -> GlMatrix {
    let mut out = GlMatrix::zero(x.n);
    for ((i, j), c) in &x.entries {
        out.add_entry(-j, -i, &-c);
    }
    out
}

pub fn is_tau_fixed(x: &GlMatrix) -> bool {
    tau(x) == *x
}

/// f_{i,j} = E_{i,j} − E_{−j,−i}.
pub fn f_elem(i: i32, j: i32, n: i32) -> Result<GlMatrix> {
    matrix_unit(i, j, n)?.sub(&matrix_unit(-j, -i, n)?)
}

/// The invariant form with (f_{i,j}, f_{p,q}) = δ_{i,q}δ_{j,p} − δ_{i,−p}δ_{j,−q}.
/// On τ-fixed arguments this equals ½·tr(xy).
pub fn bilinear_form(x: &GlMatrix, y: &GlMatrix) -> Result<Rational> {
    if !is_tau_fixed(x) || !is_tau_fixed(y) {
        return Err(TydError::NotTauFixed);
    }
    Ok(&x.mul(y)?.trace() * &Rational::new(1, 2))
}

/// The displayed form on generators, used as an independent check.
pub fn form_on_f(i: i32, j: i32, p: i32, q: i32) -> i64 {
    delta(i, q) * delta(j, p) - delta(i, -p) * delta(j, -q)
}

/// Cartan matrix of type D_n.
pub fn cartan(i: i32, j: i32, n: i32) -> Result<i64> {
    for v in [i, j] {
        if !(1..=n).contains(&v) {
            return Err(TydError::IndexOutOfRange { index: v, n });
        }
    }
    Ok(if i < n && j < n {
        2 * delta(i, j) - delta(i, j + 1) - delta(i + 1, j)
    } else {
        2 * delta(i, j) - delta(i, n - 2) - delta(j, n - 2)
    })
}

/// The parity-twisted matrix a^r: a for even r, a + 2δ_{i,n−1}δ_{j,n} for odd r
/// (defined for i ≤ n−1 only).
pub fn cartan_twisted(i: i32, j: i32, r: u32, n: i32) -> Result<i64> {
    let a = cartan(i, j, n)?;
    if r.is_multiple_of(2) {
        Ok(a)
    } else if i == n {
        Err(TydError::IndexOutOfRange { index: i, n })
    } else {
        Ok(a + 2 * delta(i, n - 1) * delta(j, n))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenKind {
    H,
    XPlus,
    XMinus,
}

impl GenKind {
    pub fn label(self) -> &'static str {
        match self {
            GenKind::H => "H",
            GenKind::XPlus => "X+",
            GenKind::XMinus => "X-",
        }
    }

    /// ±1 for X±; +1 for H.
    pub fn sign(self) -> i64 {
        match self {
            GenKind::XMinus => -1,
            _ => 1,
        }
    }
}

/// The pair (p,q) with x_i = f_{p,q} for the positive (resp. negative)
/// Chevalley generator; h_i is assembled from diagonal pairs.
pub(crate) fn chevalley_pair(kind: GenKind, i: i32, n: i32) -> (i32, i32) {
    match kind {
        GenKind::XPlus if i < n => (i, i + 1),
        GenKind::XPlus => (n - 1, -n),
        GenKind::XMinus if i < n => (i + 1, i),
        GenKind::XMinus => (-n, n - 1),
        GenKind::H => unreachable!("h is not a single f"),
    }
}

pub fn chevalley(kind: GenKind, i: i32, n: i32) -> Result<GlMatrix> {
    check_n(n)?;
    if !(1..=n).contains(&i) {
        return Err(TydError::IndexOutOfRange { index: i, n });
    }
    match kind {
        GenKind::H if i < n => f_elem(i, i, n)?.sub(&f_elem(i + 1, i + 1, n)?),
        GenKind::H => f_elem(n - 1, n - 1, n)?.add(&f_elem(n, n, n)?),
        _ => {
            let (p, q) = chevalley_pair(kind, i, n);
            f_elem(p, q, n)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: i32 = 5;

    #[test]
    fn units_and_commutator() {
        let e12 = matrix_unit(1, 2, N).unwrap();
        assert_eq!(e12.get(1, 2), Rational::one());
        assert_eq!(e12.entries().len(), 1);
        assert_eq!(matrix_unit(-1, -1, N).unwrap().get(-1, -1), Rational::one());
        let e23 = matrix_unit(2, 3, N).unwrap();
        assert_eq!(e12.commutator(&e23).unwrap(), matrix_unit(1, 3, N).unwrap());
        assert!(matrix_unit(0, 1, N).is_err());
        assert!(matrix_unit(6, 1, N).is_err());
        assert_eq!(matrix_unit(1, 1, 4), Err(TydError::SmallN(4)));
    }

    #[test]
    fn linearization_is_order_preserving() {
        let lin: Vec<usize> = signed_indices(N).map(|i| linearize(i, N)).collect();
        assert_eq!(lin, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn tau_examples() {
        let t = tau(&matrix_unit(1, 2, N).unwrap());
        assert_eq!(t, matrix_unit(-2, -1, N).unwrap().scale(&Rational::from_int(-1)));
        let f = f_elem(1, 2, N).unwrap();
        assert_eq!(tau(&f), f);
        assert!(f_elem(3, -3, N).unwrap().is_zero());
        for i in signed_indices(N) {
            for j in signed_indices(N) {
                let a = f_elem(-j, -i, N).unwrap();
                let b = f_elem(i, j, N).unwrap().scale(&Rational::from_int(-1));
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn form_examples_and_agreement() {
        let f = |i, j| f_elem(i, j, N).unwrap();
        assert_eq!(bilinear_form(&f(1, 2), &f(2, 1)).unwrap(), Rational::one());
        assert_eq!(bilinear_form(&f(1, 2), &f(-1, -2)).unwrap(), Rational::from_int(-1));
        assert_eq!(bilinear_form(&f(1, 2), &f(3, 4)).unwrap(), Rational::zero());
        assert_eq!(
            bilinear_form(&matrix_unit(1, 2, N).unwrap(), &f(2, 1)),
            Err(TydError::NotTauFixed)
        );
        let idx: Vec<i32> = signed_indices(N).collect();
        for &i in &idx {
            for &j in &idx {
                for &p in &idx {
                    for &q in &idx {
                        let lhs = bilinear_form(&f(i, j), &f(p, q)).unwrap();
                        assert_eq!(lhs, Rational::from_int(form_on_f(i, j, p, q)));
                    }
                }
            }
        }
    }

    #[test]
    fn cartan_entries() {
        for i in 1..=N {
            assert_eq!(cartan(i, i, N).unwrap(), 2);
        }
        assert_eq!(cartan(N - 1, N, N).unwrap(), 0);
        assert_eq!(cartan(N - 2, N, N).unwrap(), -1);
        assert_eq!(cartan_twisted(N - 1, N, 1, N).unwrap(), 2);
        assert_eq!(cartan_twisted(N - 1, N, 2, N).unwrap(), 0);
        assert!(cartan_twisted(N, 1, 1, N).is_err());
    }

    #[test]
    fn chevalley_table() {
        let h = chevalley(GenKind::H, N, N).unwrap();
        assert_eq!(h, f_elem(N - 1, N - 1, N).unwrap().add(&f_elem(N, N, N).unwrap()).unwrap());
        assert_eq!(chevalley(GenKind::XPlus, N, N).unwrap(), f_elem(N - 1, -N, N).unwrap());
        for i in 1..=N {
            for j in 1..=N {
                let hi = chevalley(GenKind::H, i, N).unwrap();
                let xj = chevalley(GenKind::XPlus, j, N).unwrap();
                let a = cartan(i, j, N).unwrap();
                assert_eq!(hi.commutator(&xj).unwrap(), xj.scale(&Rational::from_int(a)));
            }
        }
    }
}
