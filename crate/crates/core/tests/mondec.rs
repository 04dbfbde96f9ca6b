mod common;

use num_bigint::BigInt;

use common::*;
use presdec::mondec::{
    check_decomposable_on, check_monadic, decompose_full, decompose_on, decompose_on_with, hardness_gadget,
    minimal_bound_search,
};
use presdec::{DecomposeOptions, Error, Formula, Solver};

#[test]
fn verdicts_on_small_formulas() {
    let s = Solver::builtin();
    let cases = [
        ("(<= (+ x y) 8)", true),
        ("(>= (+ x y) 2)", true),
        ("(= x y)", false),
        ("(<= x y)", false),
        ("(and (<= x 5) ((_ divisible 3) (- x y)))", true),
        ("((_ divisible 3) (- x y))", true),
        ("(and (<= (+ x 3) (* 2 y)) ((_ divisible 3) (- x y)))", false),
        ("(and (<= (+ x (* 2 y)) 5) (<= z 4))", true),
    ];
    for (text, want) in cases {
        let phi = parse(text);
        assert_eq!(check_monadic(&phi, &s).unwrap().decomposable, want, "{text}");
    }
}

#[test]
fn counterexamples_separate_the_formula() {
    let s = Solver::builtin();
    for text in ["(= x y)", "(<= x y)", "(and (<= (+ x 3) (* 2 y)) ((_ divisible 4) (- x y)))"] {
        let phi = parse(text);
        let verdict = check_decomposable_on(&phi, &v("x"), None, &s).unwrap();
        assert!(!verdict.decomposable);
        let c = verdict.counterexample.unwrap();
        let mut l = c.left.clone();
        l.extend(&c.context);
        let mut r = c.right.clone();
        r.extend(&c.context);
        assert!(phi.eval(&l).unwrap() && !phi.eval(&r).unwrap(), "{text}");
        assert!(c.left.get(&v("x")).unwrap() >= &verdict.bound);
        assert!(c.right.get(&v("x")).unwrap() >= &verdict.bound);
    }
}

#[test]
fn equality_counterexample_is_minimal() {
    let s = Solver::builtin();
    let verdict = check_decomposable_on(&parse("(= x y)"), &v("x"), Some(&BigInt::from(4)), &s).unwrap();
    let c = verdict.counterexample.unwrap();
    assert_eq!(c.left.get(&v("x")), Some(&BigInt::from(4)));
    assert_eq!(c.right.get(&v("x")), Some(&BigInt::from(5)));
    assert_eq!(c.context.get(&v("y")), Some(&BigInt::from(4)));
}

#[test]
fn sum_bound_decomposes_like_the_textbook_split() {
    let s = Solver::builtin();
    let phi = parse("(>= (+ x y) 2)");
    let d = decompose_full(&phi, &s).unwrap();
    assert!(is_monadic(&d));
    assert!(equivalent(&s, &d, &intro_decomposition()));
    assert!(equivalent(&s, &d, &phi));
}

#[test]
fn parity_example_matches_displayed_split() {
    let s = Solver::builtin();
    let phi = example_mod2();
    // Below 5 the residual at x = B or B + 1 still depends on x.
    assert!(!equivalent(&s, &phi, &example_mod2_displayed(3)));
    for b in [5, 7, 9] {
        assert!(equivalent(&s, &phi, &example_mod2_displayed(b)), "displayed split with B = {b}");
    }
    let d = decompose_on(&phi, &v("x"), &s).unwrap();
    assert!(equivalent(&s, &d, &phi));
    let full = decompose_full(&phi, &s).unwrap();
    assert!(is_monadic(&full) && equivalent(&s, &full, &phi));
}

#[test]
fn minimal_bound_is_validated_and_tight() {
    let s = Solver::builtin();
    let phi = parse("(<= (+ x y) 8)");
    let b = minimal_bound_search(&phi, &v("x"), &s).unwrap();
    assert!(check_decomposable_on(&phi, &v("x"), Some(&b), &s).unwrap().decomposable);
    if b > BigInt::from(1) {
        let half = &b / 2;
        assert!(!check_decomposable_on(&phi, &v("x"), Some(&half), &s).unwrap().decomposable);
    }
}

#[test]
fn pruned_cases_for_sum_bounds() {
    let s = Solver::builtin();
    for n in 1..=4u32 {
        let k = 1i64 << n;
        let phi = Formula::le(lin(&[("x", 1), ("y", 1)]), k);
        let d = decompose_on_with(&phi, &v("x"), &s, &DecomposeOptions::default()).unwrap();
        assert_eq!(d.len() as i64, k + 1);
        assert!(equivalent(&s, &d.to_formula(), &phi));
    }
}

#[test]
fn disjunct_cap_is_enforced() {
    let s = Solver::builtin();
    let phi = Formula::le(lin(&[("x", 1), ("y", 1)]), 64);
    let opts = DecomposeOptions { max_disjuncts: 10, ..DecomposeOptions::default() };
    let err = decompose_on_with(&phi, &v("x"), &s, &opts).unwrap_err();
    assert!(matches!(err, Error::TooLarge { .. }), "{err}");
}

#[test]
fn coupled_formula_is_refused() {
    let err = decompose_full(&parse("(= x y)"), &Solver::builtin()).unwrap_err();
    assert!(matches!(err, Error::NotDecomposable { .. }), "{err}");
}

#[test]
fn gadget_tracks_satisfiability() {
    let s = Solver::builtin();
    let mut r = rng(21);
    for _ in 0..15 {
        let cnf = random_cnf(&mut r, 3);
        let phi = hardness_gadget(&cnf).unwrap();
        assert_eq!(check_monadic(&phi, &s).unwrap().decomposable, cnf_unsat(&cnf), "{cnf:?}");
    }
}
