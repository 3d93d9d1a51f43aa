//! Seeded random inputs for the property and oracle suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::current::CurrentElement;
use crate::liealg::{signed_indices, GlMatrix};
use crate::scalars::{HbarPoly, Rational};
use crate::yangian::{TSymbol, YExpr};

/// Independent stream per (seed, label, case), so results do not depend on
/// evaluation order or thread count.
pub fn case_rng(seed: u64, label: &str, case: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&case.to_le_bytes());
    for (k, b) in label.bytes().take(16).enumerate() {
        key[16 + k] = b;
    }
    ChaCha8Rng::from_seed(key)
}

fn index<R: Rng>(rng: &mut R, n: i32) -> i32 {
    let idx: Vec<i32> = signed_indices(n).collect();
    idx[rng.gen_range(0..idx.len())]
}

/// Nonzero rational with small numerator and denominator.
pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let num = rng.gen_range(-7..=7);
        if num != 0 {
            return Rational::new(num, rng.gen_range(1..=5));
        }
    }
}

/// Random element of gl(2n)[u], not necessarily τ̃-fixed.
pub fn random_element<R: Rng>(rng: &mut R, n: i32, max_deg: u32, terms: usize) -> CurrentElement {
    let mut out = CurrentElement::zero(n);
    for _ in 0..terms {
        let mut m = GlMatrix::zero(n);
        m.add_entry(index(rng, n), index(rng, n), &Rational::from_int(rng.gen_range(-3..=3)));
        let r = rng.gen_range(0..=max_deg);
        out = out.add(&CurrentElement::from_matrix(m, r)).expect("same n");
    }
    out
}

pub fn random_symbol<R: Rng>(rng: &mut R, n: i32, max_mode: u32) -> TSymbol {
    TSymbol::new(rng.gen_range(1..=max_mode), index(rng, n), index(rng, n))
}

pub fn random_word<R: Rng>(rng: &mut R, n: i32, max_mode: u32, max_len: usize) -> Vec<TSymbol> {
    let len = rng.gen_range(1..=max_len);
    (0..len).map(|_| random_symbol(rng, n, max_mode)).collect()
}

fn random_coeff<R: Rng>(rng: &mut R) -> HbarPoly {
    HbarPoly::from_terms([(0, Rational::from_int(rng.gen_range(-2..=2))), (rng.gen_range(1..=2), small_rational(rng))])
}

/// Random expression over T- and S-symbols: sums, products, brackets and
/// ħ-polynomial multiples, with total filtration degree kept small.
pub fn random_expr<R: Rng>(rng: &mut R, n: i32, max_mode: u32, depth: u32) -> YExpr {
    let leaf = |rng: &mut R| -> YExpr {
        if rng.gen_bool(0.2) {
            YExpr::S(rng.gen_range(1..=max_mode.min(2)), index(rng, n), index(rng, n))
        } else {
            YExpr::T(random_symbol(rng, n, max_mode))
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..5) {
        0 => leaf(rng),
        1 => YExpr::Sum((0..rng.gen_range(2..=3)).map(|_| random_expr(rng, n, max_mode, depth - 1)).collect()),
        2 => YExpr::Prod(vec![leaf(rng), random_expr(rng, n, max_mode, depth - 1)]),
        3 => YExpr::bracket(leaf(rng), random_expr(rng, n, max_mode, depth - 1)),
        _ => YExpr::scaled(random_coeff(rng), random_expr(rng, n, max_mode, depth - 1)),
    }
}
