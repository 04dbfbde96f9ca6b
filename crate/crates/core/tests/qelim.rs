mod common;

use common::*;
use presdec::qelim::{eliminate, verify_elimination, QuantBlock};
use presdec::smtlib::parse_quantified;
use presdec::{Error, Formula, Solver};

/// Either two branches that each pair an `x`-only part with a part free of
/// `x`, or an arbitrary random matrix (which the fast path may refuse).
fn random_matrix(r: &mut rand_chacha::ChaCha8Rng, i: usize) -> Formula {
    if i % 2 == 1 {
        return random_formula(r, &Shape { atoms: 3, ..Shape::default() });
    }
    let only_x = Shape { vars: 1, atoms: 2, ..Shape::default() };
    let rest = Shape { vars: 3, atoms: 2, ..Shape::default() };
    let away: std::collections::BTreeMap<_, _> = [(v("x"), v("w"))].into_iter().collect();
    let mut branch = || Formula::and([random_formula(r, &only_x), random_formula(r, &rest).rename(&away)]);
    Formula::or([branch(), branch()])
}

#[test]
fn random_eliminations_match_enumeration() {
    let s = Solver::builtin();
    let mut r = rng(41);
    let (mut checked, mut refused) = (0, 0);
    for i in 0.. {
        if checked == 20 {
            break;
        }
        assert!(i < 400, "only {checked} eliminations in {i} attempts");
        let matrix = random_matrix(&mut r, i);
        let block = QuantBlock::exists(vec![v("x")], matrix.clone());
        let out = match eliminate(&block, &s) {
            Ok(out) => out,
            Err(Error::NotDecomposable { .. }) => {
                refused += 1;
                continue;
            }
            Err(e) => panic!("{matrix}: {e}"),
        };
        assert!(!out.free_vars().contains(&v("x")));
        assert!(verify_elimination(&block, &out, 6).unwrap(), "{matrix} gave {out}");
        let ys: Vec<_> = block.free_vars().into_iter().collect();
        for sigma in grid(&ys, 4) {
            let want = exists_by_enumeration(&matrix, &[v("x")], &sigma, 64);
            assert_eq!(out.eval(&sigma).unwrap(), want, "{matrix} at {sigma:?}");
        }
        checked += 1;
    }
    eprintln!("{checked} eliminations checked, {refused} matrices refused");
}

fn quantified(text: &str) -> QuantBlock {
    parse_quantified(&format!("(assert {text})")).unwrap().0
}

#[test]
fn bounded_shift() {
    let s = Solver::builtin();
    let block = quantified("(exists ((x Int)) (and (<= x 3) (>= (+ x y) 5) (<= z 2)))");
    let out = eliminate(&block, &s).unwrap();
    assert!(verify_elimination(&block, &out, 8).unwrap());
}

#[test]
fn coupling_is_not_eliminable_by_the_fast_path() {
    let s = Solver::builtin();
    let block = quantified("(exists ((x Int)) (= x y))");
    assert!(matches!(eliminate(&block, &s), Err(Error::NotDecomposable { .. })));
}

#[test]
fn universal_block() {
    let s = Solver::builtin();
    let block = quantified("(forall ((x Int)) (or (>= x 2) (<= y 3)))");
    let out = eliminate(&block, &s).unwrap();
    assert!(equivalent(&s, &out, &parse("(<= y 3)")));
    assert!(verify_elimination(&block, &out, 6).unwrap());
}
