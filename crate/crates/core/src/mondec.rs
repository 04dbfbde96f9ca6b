//! Monadic decomposability: the per-variable check, the case-split
//! construction on one variable, and full decomposition into a Boolean
//! combination of one-variable atoms.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::decomposition::{
    check_cap, lattice_search, minimize_lex, point_guard, pow2, verify_and_prune, Case,
    Counterexample, DecompVerdict, DecomposeOptions, Decomposition,
};
use crate::error::{Error, Result};
use crate::formula::{size_metrics, Assignment, Atom, Formula, FreshNames, LinearTerm, VarId};
use crate::lia::{lcm_all, Solver};

/// Divisibility atoms of a formula that mention a block of variables,
/// together with their expansion into unary residue atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivAtomSet {
    pub vars: Vec<VarId>,
    /// Congruence atoms mentioning a block variable; a binary atom with
    /// one block variable has it on the left.
    pub short: Vec<Atom>,
    /// `v ≡_k c` for every block variable `v`, every modulus `k` of an
    /// atom mentioning `v`, and every residue `c < k`.
    pub expanded: Vec<Atom>,
}

impl DivAtomSet {
    pub fn of(phi: &Formula, x: &VarId) -> Self {
        DivAtomSet::for_block(phi, std::slice::from_ref(x))
    }

    pub fn for_block(phi: &Formula, block: &[VarId]) -> Self {
        let in_block = |v: &VarId| block.contains(v);
        let mut short: Vec<Atom> = Vec::new();
        let normalized = phi.normalized();
        for a in normalized.atoms() {
            let oriented = match a {
                Atom::CongUn { x, .. } if in_block(x) => a.clone(),
                Atom::CongBin { a: ca, x, k, b, y } if !in_block(x) && in_block(y) => Atom::CongBin {
                    a: b.clone(),
                    x: y.clone(),
                    k: k.clone(),
                    b: ca.clone(),
                    y: x.clone(),
                },
                Atom::CongBin { x, .. } if in_block(x) => a.clone(),
                _ => continue,
            };
            if !short.contains(&oriented) {
                short.push(oriented);
            }
        }
        let mut expanded = Vec::new();
        for v in block {
            for k in moduli_of(&short, v) {
                let mut c = BigInt::zero();
                while c < k {
                    expanded.push(Atom::CongUn {
                        x: v.clone(),
                        k: k.clone(),
                        c: c.clone(),
                    });
                    c += 1;
                }
            }
        }
        DivAtomSet {
            vars: block.to_vec(),
            short,
            expanded,
        }
    }

    /// Distinct moduli of atoms over `v`, ascending.
    pub fn moduli(&self, v: &VarId) -> Vec<BigInt> {
        moduli_of(&self.short, v)
    }

    /// Least common multiple of the moduli over `v`; 1 when there are none.
    pub fn period(&self, v: &VarId) -> BigInt {
        lcm_all(self.moduli(v).iter())
    }

    pub fn is_empty(&self) -> bool {
        self.short.is_empty()
    }
}

fn moduli_of(atoms: &[Atom], v: &VarId) -> Vec<BigInt> {
    let mut ks: Vec<BigInt> = atoms
        .iter()
        .filter(|a| a.mentions(v))
        .map(|a| match a {
            Atom::CongUn { k, .. } | Atom::CongBin { k, .. } => k.clone(),
            Atom::Ineq { .. } => unreachable!("only congruences are collected"),
        })
        .collect();
    ks.sort();
    ks.dedup();
    ks
}

/// A maximal consistent subset of the expanded atoms, i.e. one residue
/// class per block variable, and its least witness at or above the bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxConsistentSet {
    pub atoms: Vec<Atom>,
    pub witness: Assignment,
}

impl MaxConsistentSet {
    pub fn to_formula(&self) -> Formula {
        Formula::and(self.atoms.iter().cloned().map(Formula::Atom).collect::<Vec<_>>())
    }
}

/// Number of maximal consistent sets: the product of the per-variable periods.
pub fn count_consistent_sets(divstar: &DivAtomSet) -> BigInt {
    divstar.vars.iter().map(|v| divstar.period(v)).product()
}

/// One set per residue class modulo the period of each block variable.
pub fn maximal_consistent_sets(divstar: &DivAtomSet, bound: &BigInt) -> Vec<MaxConsistentSet> {
    let periods: Vec<BigInt> = divstar.vars.iter().map(|v| divstar.period(v)).collect();
    let mut out = Vec::new();
    let mut residues = vec![BigInt::zero(); periods.len()];
    loop {
        let mut witness = Assignment::new();
        for ((v, r), l) in divstar.vars.iter().zip(&residues).zip(&periods) {
            witness.insert(v.clone(), bound + (r - bound).mod_floor(l));
        }
        let atoms = divstar
            .expanded
            .iter()
            .filter(|a| a.holds(&witness).expect("witness covers the block"))
            .cloned()
            .collect();
        out.push(MaxConsistentSet { atoms, witness });
        // Odometer over the residue vector.
        let mut i = 0;
        loop {
            if i == residues.len() {
                return out;
            }
            residues[i] += 1;
            if residues[i] < periods[i] {
                break;
            }
            residues[i] = BigInt::zero();
            i += 1;
        }
    }
}

pub(crate) fn samediv_between(
    divs: &DivAtomSet,
    left: &BTreeMap<VarId, VarId>,
    right: &BTreeMap<VarId, VarId>,
) -> Formula {
    Formula::and(
        divs.short
            .iter()
            .map(|a| {
                let f = Formula::Atom(a.clone());
                Formula::iff(f.rename(left), f.rename(right))
            })
            .collect::<Vec<_>>(),
    )
}

/// `x1` and `x2` satisfy the same divisibility atoms of `phi` (with every
/// other variable shared).
pub fn samediv_formula(phi: &Formula, x: &VarId, x1: &VarId, x2: &VarId) -> Formula {
    let divs = DivAtomSet::of(phi, x);
    let left = BTreeMap::from([(x.clone(), x1.clone())]);
    let right = BTreeMap::from([(x.clone(), x2.clone())]);
    samediv_between(&divs, &left, &right)
}

/// `samediv ∧ φ(x1, ȳ) ∧ ¬φ(x2, ȳ)`.
pub fn badx_formula(phi: &Formula, x: &VarId, x1: &VarId, x2: &VarId) -> Formula {
    let left = BTreeMap::from([(x.clone(), x1.clone())]);
    let right = BTreeMap::from([(x.clone(), x2.clone())]);
    Formula::and([
        samediv_formula(phi, x, x1, x2),
        phi.rename(&left),
        Formula::not(phi.rename(&right)),
    ])
}

/// The two-copy query for `x` with freshly named copies.
struct BadPair {
    formula: Formula,
    x1: VarId,
    x2: VarId,
}

impl BadPair {
    fn new(phi: &Formula, x: &VarId) -> Self {
        let mut names = FreshNames::avoiding(&phi.free_vars());
        let x1 = names.fresh(x.name());
        let x2 = names.fresh(x.name());
        BadPair {
            formula: badx_formula(phi, x, &x1, &x2),
            x1,
            x2,
        }
    }

    fn above(&self, bound: &BigInt) -> Formula {
        Formula::and([
            self.formula.clone(),
            Formula::ge(LinearTerm::var(self.x1.clone()), bound.clone()),
            Formula::ge(LinearTerm::var(self.x2.clone()), bound.clone()),
        ])
    }

    fn passes(&self, bound: &BigInt, solver: &Solver) -> Result<bool> {
        Ok(!solver.is_sat(&self.above(bound))?)
    }
}

/// Exponent `d·m_eq·n_vars + 3` of the worst-case bound for `x`.
pub fn mondec_bound_exponent(phi: &Formula, x: &VarId) -> u64 {
    let m = size_metrics(&BadPair::new(&phi.normalized(), x).formula);
    m.d * m.m_eq * m.n_vars + 3
}

/// `B′ = 2^(d·m_eq·n_vars + 3)` from the size metrics of the two-copy query.
pub fn mondec_bound(phi: &Formula, x: &VarId) -> BigInt {
    pow2(mondec_bound_exponent(phi, x))
}

/// Checks whether two values of `x` above the bound that agree on every
/// divisibility atom can ever be told apart by `phi`. With the default
/// bound a satisfiable check proves non-decomposability; an unsatisfiable
/// check at any bound proves decomposability.
pub fn check_decomposable_on(
    phi: &Formula,
    x: &VarId,
    bound_override: Option<&BigInt>,
    solver: &Solver,
) -> Result<DecompVerdict> {
    let phi = phi.normalized();
    let bound = match bound_override {
        Some(b) if b < &BigInt::one() => {
            return Err(Error::InvalidInput("bound must be at least 1".into()));
        }
        Some(b) => b.clone(),
        None => mondec_bound(&phi, x),
    };
    let pair = BadPair::new(&phi, x);
    let query = pair.above(&bound);
    let Some(model) = solver.model(&query)? else {
        return Ok(DecompVerdict {
            target: vec![x.clone()],
            decomposable: true,
            bound,
            counterexample: None,
        });
    };
    let mut order = vec![(pair.x1.clone(), bound.clone()), (pair.x2.clone(), bound.clone())];
    let context_vars: Vec<VarId> = phi.free_vars().into_iter().filter(|v| v != x).collect();
    order.extend(
        context_vars
            .iter()
            .filter(|v| model.get(v).is_some())
            .map(|v| (v.clone(), BigInt::zero())),
    );
    let model = minimize_lex(solver, &query, &order, model)?;
    let value = |v: &VarId| model.get(v).cloned().unwrap_or_default();
    let mut left = Assignment::new();
    left.insert(x.clone(), value(&pair.x1));
    let mut right = Assignment::new();
    right.insert(x.clone(), value(&pair.x2));
    let mut context = Assignment::new();
    for v in &context_vars {
        context.insert(v.clone(), value(v));
    }
    Ok(DecompVerdict {
        target: vec![x.clone()],
        decomposable: false,
        bound,
        counterexample: Some(Counterexample {
            left,
            right,
            context,
            partition: None,
        }),
    })
}

/// Smallest power of two (up to the worst-case bound) at which the check
/// on `x` passes.
pub fn minimal_bound_search(phi: &Formula, x: &VarId, solver: &Solver) -> Result<BigInt> {
    let phi = phi.normalized();
    let pair = BadPair::new(&phi, x);
    let k_max = mondec_bound_exponent(&phi, x);
    lattice_search(k_max, |b| pair.passes(b, solver))?
        .ok_or_else(|| Error::not_decomposable(std::slice::from_ref(x)))
}

fn bound_for(phi: &Formula, x: &VarId, solver: &Solver, opts: &DecomposeOptions) -> Result<BigInt> {
    if opts.bound_search {
        return minimal_bound_search(phi, x, solver);
    }
    let b = mondec_bound(phi, x);
    if !BadPair::new(phi, x).passes(&b, solver)? {
        return Err(Error::not_decomposable(std::slice::from_ref(x)));
    }
    Ok(b)
}

/// Case split of `phi` on `x`: one case per value below the bound and one
/// per residue class above it. Every case is checked against `phi`.
pub fn decompose_on_with(
    phi: &Formula,
    x: &VarId,
    solver: &Solver,
    opts: &DecomposeOptions,
) -> Result<Decomposition> {
    let phi = phi.normalized();
    if !phi.free_vars().contains(x) {
        return Ok(Decomposition {
            block: vec![x.clone()],
            bound: BigInt::zero(),
            cases: vec![Case {
                guard: Formula::True,
                witness: Assignment::new(),
                residual: phi,
            }],
        });
    }
    let bound = bound_for(&phi, x, solver, opts)?;
    let divs = DivAtomSet::of(&phi, x);
    check_cap(&(&bound + count_consistent_sets(&divs)), opts.max_disjuncts)?;
    let mut cases = Vec::new();
    let mut v = BigInt::zero();
    while v < bound {
        let mut witness = Assignment::new();
        witness.insert(x.clone(), v.clone());
        cases.push(Case {
            guard: point_guard(&witness),
            residual: phi.substitute(x, &v),
            witness,
        });
        v += 1;
    }
    for d in maximal_consistent_sets(&divs, &bound) {
        let n = d.witness.value(x)?.clone();
        cases.push(Case {
            guard: Formula::and([Formula::ge(LinearTerm::var(x.clone()), bound.clone()), d.to_formula()]),
            residual: phi.substitute(x, &n),
            witness: d.witness,
        });
    }
    let cases = verify_and_prune(&phi, cases, solver)?;
    log::debug!("decomposed on {x} with bound {bound}: {} cases", cases.len());
    Ok(Decomposition {
        block: vec![x.clone()],
        bound,
        cases,
    })
}

/// Equivalent formula in which `x` occurs only in atoms of its own.
pub fn decompose_on(phi: &Formula, x: &VarId, solver: &Solver) -> Result<Formula> {
    Ok(decompose_on_with(phi, x, solver, &DecomposeOptions::default())?.to_formula())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MondecReport {
    pub decomposable: bool,
    pub per_variable: BTreeMap<VarId, DecompVerdict>,
    pub decomposition: Option<Formula>,
}

impl MondecReport {
    /// First variable (in name order) on which the check failed.
    pub fn first_failure(&self) -> Option<&VarId> {
        self.per_variable
            .iter()
            .find(|(_, v)| !v.decomposable)
            .map(|(x, _)| x)
    }
}

/// Runs the check on every free variable; `phi` is monadically
/// decomposable exactly when all of them pass.
pub fn check_monadic(phi: &Formula, solver: &Solver) -> Result<MondecReport> {
    let vars: Vec<VarId> = phi.free_vars().into_iter().collect();
    let results: Vec<Result<DecompVerdict>> = vars
        .par_iter()
        .map(|x| check_decomposable_on(phi, x, None, solver))
        .collect();
    let mut per_variable = BTreeMap::new();
    for (x, r) in vars.into_iter().zip(results) {
        per_variable.insert(x, r?);
    }
    Ok(MondecReport {
        decomposable: per_variable.values().all(|v| v.decomposable),
        per_variable,
        decomposition: None,
    })
}

/// Checks every variable, then decomposes variable by variable.
pub fn check_and_decompose(phi: &Formula, solver: &Solver, opts: &DecomposeOptions) -> Result<MondecReport> {
    let mut report = check_monadic(phi, solver)?;
    if report.decomposable {
        report.decomposition = Some(decompose_monadic(phi, solver, opts)?);
    }
    Ok(report)
}

/// Monadic decomposition of `phi`.
pub fn decompose_full(phi: &Formula, solver: &Solver) -> Result<Formula> {
    decompose_full_with(phi, solver, &DecomposeOptions::default())
}

pub fn decompose_full_with(phi: &Formula, solver: &Solver, opts: &DecomposeOptions) -> Result<Formula> {
    let report = check_monadic(phi, solver)?;
    if let Some(x) = report.first_failure() {
        return Err(Error::not_decomposable(std::slice::from_ref(x)));
    }
    decompose_monadic(phi, solver, opts)
}

fn decompose_monadic(phi: &Formula, solver: &Solver, opts: &DecomposeOptions) -> Result<Formula> {
    let order: Vec<VarId> = phi.free_vars().into_iter().collect();
    let produced = AtomicUsize::new(1);
    split_rec(&phi.normalized(), &order, solver, opts, &produced)
}

fn split_rec(
    phi: &Formula,
    order: &[VarId],
    solver: &Solver,
    opts: &DecomposeOptions,
    produced: &AtomicUsize,
) -> Result<Formula> {
    let free = phi.free_vars();
    if free.len() <= 1 {
        return Ok(phi.clone());
    }
    let x = order.iter().find(|v| free.contains(*v)).expect("a free variable remains");
    let dec = decompose_on_with(phi, x, solver, opts)?;
    let total = produced.fetch_add(dec.len().saturating_sub(1), Ordering::Relaxed) + dec.len();
    check_cap(&BigInt::from(total), opts.max_disjuncts)?;
    let parts: Vec<Result<Formula>> = dec
        .cases
        .par_iter()
        .map(|c| {
            let sub = split_rec(&c.residual, order, solver, opts, produced)?;
            Ok(Formula::and([c.guard.clone(), sub]))
        })
        .collect();
    Ok(Formula::or(parts.into_iter().collect::<Result<Vec<_>>>()?))
}

/// A propositional formula in conjunctive normal form. Literal `i` is
/// variable `i` (1-based), `-i` its negation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

pub const GADGET_LIMIT: usize = 6;

fn first_primes(n: usize) -> Vec<u64> {
    let mut ps: Vec<u64> = Vec::new();
    let mut c = 2u64;
    while ps.len() < n {
        if ps.iter().all(|p| !c.is_multiple_of(*p)) {
            ps.push(c);
        }
        c += 1;
    }
    ps
}

/// `ψ(x) ∧ x = y`, where `ψ` reads variable `i` as `x ≡ 0` modulo the
/// `i`-th prime. Monadically decomposable exactly when `cnf` is
/// unsatisfiable.
pub fn hardness_gadget(cnf: &Cnf) -> Result<Formula> {
    hardness_gadget_with_limit(cnf, GADGET_LIMIT)
}

pub fn hardness_gadget_with_limit(cnf: &Cnf, limit: usize) -> Result<Formula> {
    if cnf.num_vars > limit {
        return Err(Error::TooManyVariables {
            given: cnf.num_vars,
            limit,
        });
    }
    let x = VarId::new("x");
    let y = VarId::new("y");
    let primes = first_primes(cnf.num_vars);
    let mut clauses = Vec::new();
    for clause in &cnf.clauses {
        let mut lits = Vec::new();
        for &l in clause {
            let i = l.unsigned_abs() as usize;
            if i == 0 || i > cnf.num_vars {
                return Err(Error::InvalidInput(format!("literal {l} out of range")));
            }
            let atom = Formula::cong_un(x.clone(), primes[i - 1].into(), BigInt::zero());
            lits.push(if l > 0 { atom } else { Formula::not(atom) });
        }
        clauses.push(Formula::or(lits));
    }
    let diff = LinearTerm::from_pairs([(x, 1), (y, -1)]);
    clauses.push(Formula::eq(diff, 0));
    Ok(Formula::and(clauses))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> VarId {
        VarId::new(s)
    }

    fn t(pairs: &[(&str, i64)]) -> LinearTerm {
        LinearTerm::from_pairs(pairs.iter().map(|(x, c)| (v(x), *c)))
    }

    fn example() -> Formula {
        Formula::and([
            Formula::ge(t(&[("x", 1), ("y", 2)]), 5),
            Formula::le(t(&[("z", 1)]), 4),
            Formula::cong_bin(1.into(), v("x"), 2.into(), 1.into(), v("y")),
        ])
    }

    #[test]
    fn samediv_of_example() {
        let s = samediv_formula(&example(), &v("x"), &v("x1"), &v("x2"));
        let expect = Formula::iff(
            Formula::cong_bin(1.into(), v("x1"), 2.into(), 1.into(), v("y")),
            Formula::cong_bin(1.into(), v("x2"), 2.into(), 1.into(), v("y")),
        );
        assert_eq!(s, expect);
        let plain = Formula::ge(t(&[("x", 1)]), 2);
        assert_eq!(samediv_formula(&plain, &v("x"), &v("a"), &v("b")), Formula::True);
    }

    #[test]
    fn consistent_sets_lift_residues() {
        let phi = Formula::and([
            Formula::cong_un(v("x"), 2.into(), 0.into()),
            Formula::cong_un(v("x"), 3.into(), 1.into()),
        ]);
        let divs = DivAtomSet::of(&phi, &v("x"));
        assert_eq!(divs.expanded.len(), 5);
        let sets = maximal_consistent_sets(&divs, &BigInt::from(8));
        assert_eq!(sets.len(), 6);
        let ws: Vec<BigInt> = sets.iter().map(|d| d.witness.get(&v("x")).unwrap().clone()).collect();
        let mut sorted = ws.clone();
        sorted.sort();
        assert_eq!(sorted, (8..14).map(BigInt::from).collect::<Vec<_>>());
        for d in &sets {
            assert_eq!(d.atoms.len(), 2);
        }
        let none = maximal_consistent_sets(&DivAtomSet::of(&Formula::True, &v("x")), &BigInt::from(8));
        assert_eq!(none.len(), 1);
        assert_eq!(none[0].witness.get(&v("x")), Some(&BigInt::from(8)));
    }

    #[test]
    fn equality_is_not_decomposable() {
        let phi = Formula::eq(t(&[("x", 1), ("y", -1)]), 0);
        let s = Solver::builtin();
        let r = check_decomposable_on(&phi, &v("x"), None, &s).unwrap();
        assert!(!r.decomposable);
        let cx = r.counterexample.unwrap();
        let b = r.bound;
        assert_eq!(cx.left.get(&v("x")), Some(&b));
        assert_eq!(cx.right.get(&v("x")), Some(&(&b + 1)));
        assert_eq!(cx.context.get(&v("y")), Some(&b));
    }

    #[test]
    fn minimal_bounds() {
        let s = Solver::builtin();
        assert_eq!(minimal_bound_search(&example(), &v("x"), &s).unwrap(), BigInt::from(8));
        let sum = Formula::le(t(&[("x", 1), ("y", 1)]), 8);
        assert_eq!(minimal_bound_search(&sum, &v("x"), &s).unwrap(), BigInt::from(16));
        assert_eq!(minimal_bound_search(&Formula::True, &v("x"), &s).unwrap(), BigInt::one());
    }

    #[test]
    fn decomposition_of_sum_bound() {
        let s = Solver::builtin();
        let sum = Formula::le(t(&[("x", 1), ("y", 1)]), 8);
        let d = decompose_on_with(&sum, &v("x"), &s, &DecomposeOptions::default()).unwrap();
        assert_eq!(d.bound, BigInt::from(16));
        assert_eq!(d.len(), 9);
        let f = d.to_formula();
        for x in 0..=10u64 {
            for y in 0..=10u64 {
                let sigma = Assignment::from_pairs([("x", x), ("y", y)]);
                assert_eq!(f.eval(&sigma).unwrap(), sum.eval(&sigma).unwrap());
            }
        }
    }

    #[test]
    fn gadget_shapes() {
        let sat = Cnf {
            num_vars: 1,
            clauses: vec![vec![1]],
        };
        let g = hardness_gadget(&sat).unwrap();
        assert_eq!(g.free_vars().len(), 2);
        let too_many = Cnf {
            num_vars: 7,
            clauses: vec![],
        };
        assert!(matches!(
            hardness_gadget(&too_many),
            Err(Error::TooManyVariables { given: 7, limit: 6 })
        ));
        assert_eq!(first_primes(6), vec![2, 3, 5, 7, 11, 13]);
    }
}
