//! Randomized invariants of the current algebra, the normal-form engine and
//! the evaluation oracle.

use proptest::prelude::*;
use rand::Rng;
use tyd_core::current::{random_fixed_element, tau_tilde};
use tyd_core::sample::{case_rng, random_element, random_expr, random_word, small_rational};
use tyd_core::scalars::HbarPoly;
use tyd_core::yangian::oracle::Evaluation;
use tyd_core::yangian::{reduce_with_strategy, Normalization, Strategy as Rewrite, TPoly, Yangian};

const N: i32 = 5;

fn norm_strategy() -> impl Strategy<Value = Normalization> {
    prop_oneof![Just(Normalization::Literal), Just(Normalization::Reduced)]
}

fn yangian(norm: Normalization) -> &'static Yangian {
    use std::sync::OnceLock;
    static LIT: OnceLock<Yangian> = OnceLock::new();
    static RED: OnceLock<Yangian> = OnceLock::new();
    let cell = if norm == Normalization::Literal { &LIT } else { &RED };
    cell.get_or_init(|| Yangian::new(N, norm).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn jacobi_on_fixed_elements(seed in any::<u64>()) {
        let mut rng = case_rng(seed, "jacobi", 0);
        let [x, y, z] = [0, 1, 2].map(|_| random_fixed_element(&mut rng, N, 4, 4));
        let sum = x.bracket(&y.bracket(&z).unwrap()).unwrap()
            .add(&y.bracket(&z.bracket(&x).unwrap()).unwrap()).unwrap()
            .add(&z.bracket(&x.bracket(&y).unwrap()).unwrap()).unwrap();
        prop_assert!(sum.is_zero(), "{}", sum);
    }

    #[test]
    fn tau_tilde_preserves_brackets(seed in any::<u64>()) {
        let mut rng = case_rng(seed, "tau", 0);
        let x = random_element(&mut rng, N, 4, 5);
        let y = random_element(&mut rng, N, 4, 5);
        let lhs = tau_tilde(&x.bracket(&y).unwrap());
        let rhs = tau_tilde(&x).bracket(&tau_tilde(&y)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn normal_form_is_idempotent(seed in any::<u64>(), norm in norm_strategy()) {
        let y = yangian(norm);
        let p = y.normal_form(&random_expr(&mut case_rng(seed, "idem", 0), N, 3, 2));
        prop_assert!(p.is_normal());
        prop_assert_eq!(y.normalize(&p), p);
    }

    #[test]
    fn normal_form_is_linear(seed in any::<u64>(), norm in norm_strategy()) {
        let y = yangian(norm);
        let mut rng = case_rng(seed, "lin", 0);
        let (u, v) = (random_word(&mut rng, N, 3, 3), random_word(&mut rng, N, 3, 3));
        let a = HbarPoly::constant(small_rational(&mut rng));
        let b = HbarPoly::monomial(small_rational(&mut rng), rng.gen_range(0..3));
        let mut raw = TPoly::zero(N);
        raw.add_term(u.clone(), &a);
        raw.add_term(v.clone(), &b);
        let expect = y.normalize_word(&u).scale(&a).add(&y.normalize_word(&v).scale(&b));
        prop_assert_eq!(y.normalize(&raw), expect);
    }

    #[test]
    fn bracket_is_antisymmetric(seed in any::<u64>(), norm in norm_strategy()) {
        let y = yangian(norm);
        let mut rng = case_rng(seed, "anti", 0);
        let a = y.normal_form(&random_expr(&mut rng, N, 3, 1));
        let b = y.normal_form(&random_expr(&mut rng, N, 3, 1));
        prop_assert!(y.bracket(&a, &b).add(&y.bracket(&b, &a)).is_zero());
    }

    #[test]
    fn rewriting_strategies_agree(seed in any::<u64>(), norm in norm_strategy()) {
        let y = yangian(norm);
        let w = random_word(&mut case_rng(seed, "confl", 0), N, 3, 4);
        let p = TPoly::word(N, w.clone());
        let left = reduce_with_strategy(y, &p, Rewrite::Leftmost);
        prop_assert_eq!(&left, &reduce_with_strategy(y, &p, Rewrite::Rightmost));
        prop_assert_eq!(&left, &y.normalize_word(&w));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn evaluation_preserves_normal_form(seed in any::<u64>(), norm in norm_strategy()) {
        let y = yangian(norm);
        let mut rng = case_rng(seed, "oracle", 0);
        let e = random_expr(&mut rng, N, 3, 2);
        let nf = y.normal_form(&e);
        for _ in 0..5 {
            let sites = rng.gen_range(1..=3);
            let shifts = (0..sites).map(|_| small_rational(&mut rng)).collect();
            let ev = Evaluation::new(N, norm, shifts, small_rational(&mut rng)).unwrap();
            prop_assert!(ev.poly(&nf) == ev.expr(&e), "{:?}", e);
        }
    }
}
