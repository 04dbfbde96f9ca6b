//! Oracles shared by the integration suites: brute-force evaluation,
//! truth tables, seeded random formulas and reference examples built by hand.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use presdec::formula::to_pnf;
use presdec::mondec::Cnf;
use presdec::{Assignment, Atom, Formula, LinearTerm, Solver, VarId};

pub fn v(name: &str) -> VarId {
    VarId::new(name)
}

pub fn var(name: &str) -> LinearTerm {
    LinearTerm::var(v(name))
}

pub fn lin(pairs: &[(&str, i64)]) -> LinearTerm {
    LinearTerm::from_pairs(pairs.iter().map(|(x, c)| (v(x), *c)))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Reads a script, or a bare term as a single assertion.
pub fn parse(text: &str) -> Formula {
    let script = if text.contains("(assert") { text.to_string() } else { format!("(assert {text})") };
    presdec::smtlib::parse_formula(&script).expect("test input parses").formula
}

/// `a` and `b` agree on every natural assignment (solver check).
pub fn equivalent(solver: &Solver, a: &Formula, b: &Formula) -> bool {
    match solver.is_sat(&Formula::xor(a.clone(), b.clone())) {
        Ok(sat) => !sat,
        Err(e) => panic!("equivalence of {a} and {b}: {e}"),
    }
}

/// Every assignment of `vars` into `[0, r]`, in lexicographic order.
pub fn grid(vars: &[VarId], r: u64) -> impl Iterator<Item = Assignment> + '_ {
    let n = vars.len() as u32;
    let side = r + 1;
    (0..side.pow(n)).map(move |mut i| {
        let mut a = Assignment::new();
        for x in vars {
            a.insert(x.clone(), BigInt::from(i % side));
            i /= side;
        }
        a
    })
}

/// First point of the box `[0, r]^n` where `a` and `b` differ.
pub fn grid_disagreement(a: &Formula, b: &Formula, vars: &[VarId], r: u64) -> Option<Assignment> {
    grid(vars, r).find(|p| a.eval(p).unwrap() != b.eval(p).unwrap())
}

pub fn free_vars_of(fs: &[&Formula]) -> Vec<VarId> {
    let mut s = BTreeSet::new();
    for f in fs {
        s.extend(f.free_vars());
    }
    s.into_iter().collect()
}

/// Every atom of `phi` mentions at most one variable.
pub fn is_monadic(phi: &Formula) -> bool {
    phi.atoms().iter().all(|a| a.vars().len() <= 1)
}

/// Largest absolute coefficient or constant in `phi`.
pub fn largest_constant(phi: &Formula) -> i64 {
    let mut m = 0i64;
    for a in phi.atoms() {
        let vals: Vec<BigInt> = match &a {
            Atom::Ineq { term, bound, .. } => term.iter().map(|(_, c)| c.clone()).chain([bound.clone()]).collect(),
            Atom::CongUn { k, c, .. } => vec![k.clone(), c.clone()],
            Atom::CongBin { a, k, b, .. } => vec![a.clone(), k.clone(), b.clone()],
        };
        for c in vals {
            m = m.max(i64::try_from(c.magnitude().clone()).unwrap_or(i64::MAX));
        }
    }
    m
}

/// Least common multiple of the moduli of `phi` (1 without congruences).
pub fn lcm_of_moduli(phi: &Formula) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    phi.atoms()
        .iter()
        .filter_map(|a| match a {
            Atom::CongUn { k, .. } | Atom::CongBin { k, .. } => u64::try_from(k.clone()).ok(),
            Atom::Ineq { .. } => None,
        })
        .fold(1, |l, k| l / gcd(l, k) * k)
}

/// Knobs for random formulas.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub vars: usize,
    pub max_coeff: i64,
    pub max_modulus: i64,
    pub max_const: i64,
    pub atoms: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            vars: 3,
            max_coeff: 4,
            max_modulus: 6,
            max_const: 8,
            atoms: 3,
        }
    }
}

const NAMES: [&str; 4] = ["x", "y", "z", "w"];

fn nonzero(rng: &mut ChaCha8Rng, m: i64) -> i64 {
    let c = rng.gen_range(1..=m);
    if rng.gen_bool(0.5) { c } else { -c }
}

pub fn random_atom(rng: &mut ChaCha8Rng, s: &Shape) -> Formula {
    let names = &NAMES[..s.vars];
    let x = *names.choose(rng).unwrap();
    let y = *names.choose(rng).unwrap();
    let b = rng.gen_range(-s.max_const..=s.max_const);
    match rng.gen_range(0..5) {
        0 | 1 => {
            let t = lin(&[(x, rng.gen_range(1..=s.max_coeff))]);
            if rng.gen_bool(0.5) { Formula::le(t, b.abs()) } else { Formula::ge(t, b.abs()) }
        }
        2 => {
            let t = lin(&[(x, nonzero(rng, s.max_coeff)), (y, nonzero(rng, s.max_coeff))]);
            if rng.gen_bool(0.5) { Formula::le(t, b) } else { Formula::ge(t, b) }
        }
        3 => {
            let k = rng.gen_range(2..=s.max_modulus);
            Formula::cong_un(v(x), k.into(), rng.gen_range(0..k).into())
        }
        _ => {
            let k = rng.gen_range(2..=s.max_modulus);
            Formula::cong_bin(
                rng.gen_range(1..k).into(),
                v(x),
                k.into(),
                rng.gen_range(1..k).into(),
                v(y),
            )
        }
    }
}

/// Random Boolean combination of `s.atoms` atoms.
pub fn random_formula(rng: &mut ChaCha8Rng, s: &Shape) -> Formula {
    let mut parts: Vec<Formula> = (0..s.atoms).map(|_| random_atom(rng, s)).collect();
    while parts.len() > 1 {
        let a = parts.swap_remove(rng.gen_range(0..parts.len()));
        let b = parts.swap_remove(rng.gen_range(0..parts.len()));
        let a = if rng.gen_bool(0.2) { Formula::not(a) } else { a };
        parts.push(if rng.gen_bool(0.6) { Formula::and([a, b]) } else { Formula::or([a, b]) });
    }
    parts.pop().unwrap()
}

/// Random conjunction of atoms, each variable boxed into `[0, u]`.
pub fn random_boxed_conjunction(rng: &mut ChaCha8Rng, s: &Shape, u: i64) -> Formula {
    let mut parts: Vec<Formula> = (0..s.atoms).map(|_| random_atom(rng, s)).collect();
    for x in &NAMES[..s.vars] {
        parts.push(Formula::le(var(x), u));
    }
    Formula::and(parts)
}

pub fn random_cnf(rng: &mut ChaCha8Rng, max_vars: usize) -> Cnf {
    let num_vars = rng.gen_range(1..=max_vars);
    let clauses = (0..rng.gen_range(1..=6))
        .map(|_| {
            (0..rng.gen_range(1..=3))
                .map(|_| {
                    let p = rng.gen_range(1..=num_vars as i32);
                    if rng.gen_bool(0.5) { p } else { -p }
                })
                .collect()
        })
        .collect();
    Cnf { num_vars, clauses }
}

/// Unsatisfiability by truth table.
pub fn cnf_unsat(cnf: &Cnf) -> bool {
    (0u32..1 << cnf.num_vars).all(|bits| {
        !cnf.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let val = bits & (1 << (l.unsigned_abs() - 1)) != 0;
                if l > 0 { val } else { !val }
            })
        })
    })
}

/// `x ≥ 2 ∨ (x ≥ 1 ∧ y ≥ 1) ∨ y ≥ 2`, the decomposition of `x + y ≥ 2`.
pub fn intro_decomposition() -> Formula {
    Formula::or([
        Formula::ge(var("x"), 2),
        Formula::and([Formula::ge(var("x"), 1), Formula::ge(var("y"), 1)]),
        Formula::ge(var("y"), 2),
    ])
}

/// `x + 2y ≥ 5 ∧ z < 5 ∧ x ≡₂ y`.
pub fn example_mod2() -> Formula {
    Formula::and([
        Formula::ge(lin(&[("x", 1), ("y", 2)]), 5),
        Formula::le(var("z"), 4),
        Formula::cong_bin(1.into(), v("x"), 2.into(), 1.into(), v("y")),
    ])
}

/// Case split of [`example_mod2`] on `x` as displayed for an odd bound:
/// one case per value below `b`, then one per parity above it.
pub fn example_mod2_displayed(b: i64) -> Formula {
    assert!(b % 2 == 1);
    let rest = |xv: i64| {
        Formula::and([
            Formula::ge(var("y").scale(&2.into()), 5 - xv),
            Formula::le(var("z"), 4),
            Formula::cong_un(v("y"), 2.into(), xv.rem_euclid(2).into()),
        ])
    };
    let mut cases: Vec<Formula> = (0..b).map(|i| Formula::and([Formula::eq(var("x"), i), rest(i)])).collect();
    cases.push(Formula::and([
        Formula::cong_un(v("x"), 2.into(), 0.into()),
        Formula::ge(var("x"), b),
        rest(b + 1),
    ]));
    cases.push(Formula::and([
        Formula::cong_un(v("x"), 2.into(), 1.into()),
        Formula::ge(var("x"), b),
        rest(b),
    ]));
    Formula::or(cases)
}

/// `z = x + 2y ∧ z < 5`.
pub fn example_sum() -> Formula {
    Formula::and([Formula::eq(lin(&[("z", 1), ("x", -1), ("y", -2)]), 0), Formula::le(var("z"), 4)])
}

/// `∨_{i=0..4} ∨_{j=0..2−⌈i/2⌉} x=i ∧ y=j ∧ z=i+2j`.
pub fn example_sum_displayed() -> Formula {
    let mut cases = Vec::new();
    for i in 0..=4i64 {
        for j in 0..=(2 - (i + 1) / 2) {
            cases.push(Formula::and([
                Formula::eq(var("x"), i),
                Formula::eq(var("y"), j),
                Formula::eq(var("z"), i + 2 * j),
            ]));
        }
    }
    Formula::or(cases)
}

/// Existential truth by enumerating `xs` up to `limit`.
pub fn exists_by_enumeration(matrix: &Formula, xs: &[VarId], sigma: &Assignment, limit: u64) -> bool {
    let inst = matrix.substitute_all(sigma);
    grid(xs, limit).any(|p| inst.eval(&p).unwrap())
}

/// Positive normal form; handy for printing in failure messages.
pub fn pnf(phi: &Formula) -> Formula {
    to_pnf(phi)
}
