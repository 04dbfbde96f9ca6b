//! Variadic decomposability on a block of variables, and decomposition
//! along a partition of all variables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::decomposition::{
    check_cap, copies, lattice_search, pow2, verify_and_prune, Case, Counterexample, DecompVerdict, DecomposeOptions,
    Decomposition,
};
use crate::error::{Error, Result};
use crate::formula::{size_metrics, to_pnf, Assignment, Atom, Formula, FreshNames, LinearTerm, VarId};
use crate::lia::Solver;
use crate::mondec::{maximal_consistent_sets, samediv_between, DivAtomSet};

/// Projections onto the block of the inequality atoms, up to sign.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinFunSet {
    pub functions: Vec<LinearTerm>,
}

impl LinFunSet {
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }
}

/// Sign convention: the first (smallest-named) coefficient is positive.
fn canonical_sign(f: LinearTerm) -> LinearTerm {
    if f.iter().next().is_some_and(|(_, c)| c.is_negative()) {
        f.negated()
    } else {
        f
    }
}

pub fn linear_functions(phi: &Formula, xs: &[VarId]) -> LinFunSet {
    let keep: BTreeSet<VarId> = xs.iter().cloned().collect();
    let mut functions: Vec<LinearTerm> = Vec::new();
    for a in to_pnf(phi).atoms() {
        if let Atom::Ineq { term, .. } = a {
            let f = term.project(&keep);
            if f.is_zero() {
                continue;
            }
            let f = canonical_sign(f);
            if !functions.contains(&f) {
                functions.push(f);
            }
        }
    }
    LinFunSet { functions }
}

/// Split of the linear functions into those whose absolute value reaches
/// the bound and those that stay below it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoPartition {
    pub unbounded: Vec<LinearTerm>,
    pub bounded: Vec<LinearTerm>,
}

impl fmt::Display for RhoPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |fs: &[LinearTerm]| fs.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "unbounded {{{}}}, bounded {{{}}}", list(&self.unbounded), list(&self.bounded))
    }
}

/// All `2^n` partitions, refusing more than `limit` functions.
pub fn partitions(fs: &LinFunSet, limit: usize) -> Result<Vec<RhoPartition>> {
    let n = fs.len();
    if n > limit {
        return Err(Error::TooManyFunctions { count: n, limit });
    }
    Ok((0u64..1 << n)
        .map(|mask| {
            let (mut unbounded, mut bounded) = (Vec::new(), Vec::new());
            for (i, f) in fs.functions.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    bounded.push(f.clone());
                } else {
                    unbounded.push(f.clone());
                }
            }
            RhoPartition { unbounded, bounded }
        })
        .collect())
}

/// Bounded functions take equal values on the two copies.
pub fn same_rho_formula(
    rho: &RhoPartition,
    left: &BTreeMap<VarId, VarId>,
    right: &BTreeMap<VarId, VarId>,
) -> Formula {
    Formula::and(
        rho.bounded
            .iter()
            .map(|f| Formula::eq(f.rename(left).minus(&f.rename(right)), 0))
            .collect::<Vec<_>>(),
    )
}

/// `|f| ≥ B` for the unbounded functions and `|f| < B` for the bounded ones.
pub fn reggeq_formula(rho: &RhoPartition, bound: &BigInt) -> Formula {
    let mut parts = Vec::new();
    for f in &rho.unbounded {
        parts.push(Formula::or([
            Formula::ge(f.clone(), bound.clone()),
            Formula::le(f.clone(), -bound),
        ]));
    }
    let below: BigInt = bound - 1;
    for f in &rho.bounded {
        parts.push(Formula::le(f.clone(), below.clone()));
        parts.push(Formula::ge(f.clone(), -&below));
    }
    Formula::and(parts)
}

/// Sign-split trackers: `f = u⁺ ∧ u⁻ = 0` or `f = −u⁻ ∧ u⁺ = 0 ∧ u⁻ ≥ 1`
/// per function, so the tie `f = 0` takes the plus branch.
pub fn auxeq_formula(fs: &[LinearTerm], plus: &[VarId], minus: &[VarId]) -> Formula {
    let var = |v: &VarId| LinearTerm::var(v.clone());
    Formula::and(
        fs.iter()
            .zip(plus.iter().zip(minus))
            .map(|(f, (p, m))| {
                Formula::or([
                    Formula::and([Formula::eq(f.minus(&var(p)), 0), Formula::eq(var(m), 0)]),
                    Formula::and([
                        Formula::eq(f.plus(&var(m)), 0),
                        Formula::eq(var(p), 0),
                        Formula::ge(var(m), 1),
                    ]),
                ])
            })
            .collect::<Vec<_>>(),
    )
}

/// The ingredients of the two-copy query over a block.
struct BlockPair {
    block: Vec<VarId>,
    left: BTreeMap<VarId, VarId>,
    right: BTreeMap<VarId, VarId>,
    /// `samediv ∧ φ(x̄1, ȳ) ∧ ¬φ(x̄2, ȳ)`.
    core: Formula,
    rhos: Vec<RhoPartition>,
    names: FreshNames,
}

impl BlockPair {
    fn new(phi: &Formula, block: &[VarId], limit: usize) -> Result<Self> {
        let mut names = FreshNames::avoiding(&phi.free_vars());
        let left = copies(block, &mut names);
        let right = copies(block, &mut names);
        let divs = DivAtomSet::for_block(phi, block);
        let core = Formula::and([
            samediv_between(&divs, &left, &right),
            phi.rename(&left),
            Formula::not(phi.rename(&right)),
        ]);
        let rhos = partitions(&linear_functions(phi, block), limit)?;
        Ok(BlockPair {
            block: block.to_vec(),
            left,
            right,
            core,
            rhos,
            names,
        })
    }

    fn query(&self, rho: &RhoPartition, bound: &BigInt) -> Formula {
        let reg = reggeq_formula(rho, bound);
        Formula::and([
            reg.rename(&self.left),
            reg.rename(&self.right),
            same_rho_formula(rho, &self.left, &self.right),
            self.core.clone(),
        ])
    }

    fn exponent(&mut self) -> u64 {
        let fs: Vec<LinearTerm> = match self.rhos.first() {
            Some(r) => r.unbounded.iter().chain(&r.bounded).cloned().collect(),
            None => Vec::new(),
        };
        let mut fresh = |tag: &str| -> Vec<VarId> { fs.iter().map(|_| self.names.fresh(tag)).collect() };
        let (p1, m1, p2, m2) = (fresh("u+"), fresh("u-"), fresh("u+"), fresh("u-"));
        let renamed = |m: &BTreeMap<VarId, VarId>| fs.iter().map(|f| f.rename(m)).collect::<Vec<_>>();
        let aux = Formula::and([
            auxeq_formula(&renamed(&self.left), &p1, &m1),
            auxeq_formula(&renamed(&self.right), &p2, &m2),
        ]);
        self.rhos
            .iter()
            .map(|rho| {
                let sys = Formula::and([
                    same_rho_formula(rho, &self.left, &self.right),
                    self.core.clone(),
                    aux.clone(),
                ]);
                let m = size_metrics(&sys);
                m.d * m.m_eq * m.n_vars + 3
            })
            .max()
            .unwrap_or(3)
    }

    /// First partition (in enumeration order) with a witness pair, if any.
    fn find_violation(&self, bound: &BigInt, solver: &Solver) -> Result<Option<(usize, Assignment)>> {
        let found: Vec<Result<Option<Assignment>>> = self
            .rhos
            .par_iter()
            .map(|rho| solver.model(&self.query(rho, bound)))
            .collect();
        for (i, r) in found.into_iter().enumerate() {
            if let Some(m) = r? {
                return Ok(Some((i, m)));
            }
        }
        Ok(None)
    }
}

/// Block variables that occur in `phi`, in the given order.
fn effective_block(phi: &Formula, xs: &[VarId]) -> Vec<VarId> {
    let free = phi.free_vars();
    let mut out: Vec<VarId> = Vec::new();
    for x in xs {
        if free.contains(x) && !out.contains(x) {
            out.push(x.clone());
        }
    }
    out
}

/// Block is absent or covers every variable: nothing to separate.
fn trivially_separated(phi: &Formula, block: &[VarId]) -> bool {
    block.is_empty() || phi.free_vars().iter().all(|v| block.contains(v))
}

/// Exponent of the worst-case bound for the block: the largest over all
/// partitions of the slack-system bound of the query with sign trackers.
pub fn vardec_bound_exponent(phi: &Formula, xs: &[VarId]) -> Result<u64> {
    vardec_bound_exponent_with(phi, xs, &DecomposeOptions::default())
}

fn vardec_bound_exponent_with(phi: &Formula, xs: &[VarId], opts: &DecomposeOptions) -> Result<u64> {
    let phi = phi.normalized();
    let block = effective_block(&phi, xs);
    Ok(BlockPair::new(&phi, &block, opts.max_functions)?.exponent())
}

pub fn vardec_bound(phi: &Formula, xs: &[VarId]) -> Result<BigInt> {
    Ok(pow2(vardec_bound_exponent(phi, xs)?))
}

/// Decides whether `phi` is decomposable on the block `xs` by checking,
/// for every partition of the linear functions, that two regular points
/// of the block with equal bounded values and equal residues cannot be
/// told apart.
pub fn check_variadic_on(phi: &Formula, xs: &[VarId], solver: &Solver) -> Result<DecompVerdict> {
    check_variadic_on_with(phi, xs, None, solver, &DecomposeOptions::default())
}

pub fn check_variadic_on_with(
    phi: &Formula,
    xs: &[VarId],
    bound_override: Option<&BigInt>,
    solver: &Solver,
    opts: &DecomposeOptions,
) -> Result<DecompVerdict> {
    let phi = phi.normalized();
    let block = effective_block(&phi, xs);
    if trivially_separated(&phi, &block) {
        return Ok(DecompVerdict {
            target: xs.to_vec(),
            decomposable: true,
            bound: BigInt::one(),
            counterexample: None,
        });
    }
    let mut pair = BlockPair::new(&phi, &block, opts.max_functions)?;
    let bound = match bound_override {
        Some(b) if b < &BigInt::one() => return Err(Error::InvalidInput("bound must be at least 1".into())),
        Some(b) => b.clone(),
        None => pow2(pair.exponent()),
    };
    let Some((i, model)) = pair.find_violation(&bound, solver)? else {
        return Ok(DecompVerdict {
            target: xs.to_vec(),
            decomposable: true,
            bound,
            counterexample: None,
        });
    };
    let value = |v: &VarId| model.get(v).cloned().unwrap_or_default();
    let side = |m: &BTreeMap<VarId, VarId>| {
        let mut a = Assignment::new();
        for x in &pair.block {
            a.insert(x.clone(), value(&m[x]));
        }
        a
    };
    let mut context = Assignment::new();
    for v in phi.free_vars() {
        if !pair.block.contains(&v) {
            context.insert(v.clone(), value(&v));
        }
    }
    Ok(DecompVerdict {
        target: xs.to_vec(),
        decomposable: false,
        bound,
        counterexample: Some(Counterexample {
            left: side(&pair.left),
            right: side(&pair.right),
            context,
            partition: Some(pair.rhos.swap_remove(i)),
        }),
    })
}

/// Smallest power-of-two bound at which no partition has a witness pair.
pub fn vardec_minimal_bound(phi: &Formula, xs: &[VarId], solver: &Solver) -> Result<BigInt> {
    let phi = phi.normalized();
    let block = effective_block(&phi, xs);
    let opts = DecomposeOptions::default();
    let mut pair = BlockPair::new(&phi, &block, opts.max_functions)?;
    let k_max = pair.exponent();
    lattice_search(k_max, |b| Ok(pair.find_violation(b, solver)?.is_none()))?
        .ok_or_else(|| Error::not_decomposable(xs))
}

fn eval_term(f: &LinearTerm, point: &Assignment) -> BigInt {
    f.eval(point).expect("models cover the block")
}

/// Every realizable vector of bounded-function values under `base`, with
/// one model each. Each function's range is split around the value just
/// found, so only interval constraints are ever added.
#[allow(clippy::too_many_arguments)]
fn enumerate_classes(
    base: &Formula,
    fs: &[LinearTerm],
    bound: &BigInt,
    solver: &Solver,
    cap: usize,
    out: &mut Vec<(Vec<BigInt>, Assignment)>,
    prefix: &mut Vec<BigInt>,
    seed: Option<Assignment>,
) -> Result<()> {
    let Some((f, rest)) = fs.split_first() else {
        let model = match seed {
            Some(m) => m,
            None => match solver.model(base)? {
                Some(m) => m,
                None => return Ok(()),
            },
        };
        out.push((prefix.clone(), model));
        check_cap(&BigInt::from(out.len()), cap)?;
        return Ok(());
    };
    let below: BigInt = bound - 1;
    let mut intervals = vec![(-&below, below)];
    while let Some((lo, hi)) = intervals.pop() {
        if lo > hi {
            continue;
        }
        let q = Formula::and([base.clone(), Formula::ge(f.clone(), lo.clone()), Formula::le(f.clone(), hi.clone())]);
        let Some(m) = solver.model(&q)? else {
            continue;
        };
        let c = eval_term(f, &m);
        let fixed = Formula::and([base.clone(), Formula::eq(f.clone(), c.clone())]);
        prefix.push(c.clone());
        enumerate_classes(&fixed, rest, bound, solver, cap, out, prefix, Some(m))?;
        prefix.pop();
        intervals.push((&c + 1, hi));
        intervals.push((lo, c - 1));
    }
    Ok(())
}

/// Greedy coordinate-wise minimization of a class representative.
fn minimize_point(solver: &Solver, class: &Formula, block: &[VarId], mut point: Assignment) -> Result<Assignment> {
    let mut fixed = class.clone();
    for v in block {
        let mut hi = point.value(v)?.clone();
        let mut lo = BigInt::zero();
        while lo < hi {
            let mid: BigInt = (&lo + &hi) / 2;
            let q = Formula::and([fixed.clone(), Formula::le(LinearTerm::var(v.clone()), mid.clone())]);
            match solver.model(&q)? {
                Some(m) => {
                    hi = m.value(v)?.clone();
                    point = m;
                }
                None => lo = mid + 1,
            }
        }
        fixed = Formula::and([fixed, Formula::eq(LinearTerm::var(v.clone()), hi)]);
    }
    Ok(point)
}

/// Case split of `phi` on the block: for every partition, residue class
/// and realizable vector of bounded values, the points of the block in
/// that class behave like one minimal representative.
pub fn decompose_variadic_on(phi: &Formula, xs: &[VarId], solver: &Solver) -> Result<Formula> {
    Ok(decompose_variadic_on_with(phi, xs, solver, &DecomposeOptions::default())?.to_formula())
}

pub fn decompose_variadic_on_with(
    phi: &Formula,
    xs: &[VarId],
    solver: &Solver,
    opts: &DecomposeOptions,
) -> Result<Decomposition> {
    let phi = phi.normalized();
    let block = effective_block(&phi, xs);
    if block.is_empty() {
        return Ok(single_case(xs, Formula::True, phi));
    }
    if trivially_separated(&phi, &block) {
        return Ok(single_case(xs, phi, Formula::True));
    }
    let mut pair = BlockPair::new(&phi, &block, opts.max_functions)?;
    let k_max = pair.exponent();
    let bound = if opts.bound_search {
        lattice_search(k_max, |b| Ok(pair.find_violation(b, solver)?.is_none()))?
            .ok_or_else(|| Error::not_decomposable(xs))?
    } else {
        let b = pow2(k_max);
        if pair.find_violation(&b, solver)?.is_some() {
            return Err(Error::not_decomposable(xs));
        }
        b
    };
    let divs = DivAtomSet::for_block(&phi, &block);
    let residue_sets = maximal_consistent_sets(&divs, &bound);
    let jobs: Vec<(&RhoPartition, Formula)> = pair
        .rhos
        .iter()
        .flat_map(|rho| {
            let reg = reggeq_formula(rho, &bound);
            residue_sets
                .iter()
                .map(move |d| (rho, Formula::and([reg.clone(), d.to_formula()])))
        })
        .collect();
    check_cap(&BigInt::from(jobs.len()), opts.max_disjuncts)?;
    let per_job: Vec<Result<Vec<Case>>> = jobs
        .par_iter()
        .map(|(rho, base)| {
            let mut classes = Vec::new();
            enumerate_classes(base, &rho.bounded, &bound, solver, opts.max_disjuncts, &mut classes, &mut Vec::new(), None)?;
            classes
                .into_iter()
                .map(|(values, model)| {
                    let mut guard_parts = vec![base.clone()];
                    for (f, c) in rho.bounded.iter().zip(values) {
                        guard_parts.push(Formula::eq(f.clone(), c));
                    }
                    let guard = Formula::and(guard_parts);
                    let rep = minimize_point(solver, &guard, &block, model.restrict(&block))?.restrict(&block);
                    Ok(Case {
                        guard,
                        residual: phi.substitute_all(&rep),
                        witness: rep,
                    })
                })
                .collect()
        })
        .collect();
    let mut cases = Vec::new();
    for r in per_job {
        cases.extend(r?);
        check_cap(&BigInt::from(cases.len()), opts.max_disjuncts)?;
    }
    let cases = verify_and_prune(&phi, cases, solver)?;
    log::debug!("decomposed on {:?} with bound {bound}: {} cases", block, cases.len());
    Ok(Decomposition {
        block: pair.block,
        bound,
        cases,
    })
}

fn single_case(xs: &[VarId], guard: Formula, residual: Formula) -> Decomposition {
    Decomposition {
        block: xs.to_vec(),
        bound: BigInt::zero(),
        cases: vec![Case {
            guard,
            witness: Assignment::new(),
            residual,
        }],
    }
}

/// Parts that mention a free variable of `phi`; rejects overlapping parts,
/// empty parts and uncovered variables.
fn relevant_parts(phi: &Formula, parts: &[Vec<VarId>]) -> Result<Vec<Vec<VarId>>> {
    let mut seen = BTreeSet::new();
    for p in parts {
        if p.is_empty() {
            return Err(Error::InvalidInput("partition has an empty part".into()));
        }
        for v in p {
            if !seen.insert(v.clone()) {
                return Err(Error::InvalidInput(format!("variable `{v}` occurs in two parts")));
            }
        }
    }
    let free = phi.free_vars();
    if let Some(v) = free.iter().find(|v| !seen.contains(*v)) {
        return Err(Error::InvalidInput(format!("variable `{v}` is not covered by the partition")));
    }
    Ok(parts
        .iter()
        .filter(|p| p.iter().any(|v| free.contains(v)))
        .cloned()
        .collect())
}

/// Checks every part of the partition; the formula is decomposable along
/// it exactly when every part passes.
pub fn check_pi(phi: &Formula, parts: &[Vec<VarId>], solver: &Solver) -> Result<Vec<DecompVerdict>> {
    let parts = relevant_parts(phi, parts)?;
    if parts.len() <= 1 {
        return Ok(parts
            .into_iter()
            .map(|p| DecompVerdict {
                target: p,
                decomposable: true,
                bound: BigInt::one(),
                counterexample: None,
            })
            .collect());
    }
    parts.par_iter().map(|p| check_variadic_on(phi, p, solver)).collect()
}

/// Decomposition along the partition: a disjunction of conjunctions whose
/// atoms each stay within one part.
pub fn pi_decompose(phi: &Formula, parts: &[Vec<VarId>], solver: &Solver) -> Result<Formula> {
    pi_decompose_with(phi, parts, solver, &DecomposeOptions::default())
}

pub fn pi_decompose_with(
    phi: &Formula,
    parts: &[Vec<VarId>],
    solver: &Solver,
    opts: &DecomposeOptions,
) -> Result<Formula> {
    let verdicts = check_pi(phi, parts, solver)?;
    if let Some(v) = verdicts.iter().find(|v| !v.decomposable) {
        return Err(Error::not_decomposable(&v.target));
    }
    let parts = relevant_parts(phi, parts)?;
    pi_rec(&phi.normalized(), &parts, solver, opts)
}

fn pi_rec(phi: &Formula, parts: &[Vec<VarId>], solver: &Solver, opts: &DecomposeOptions) -> Result<Formula> {
    let free = phi.free_vars();
    let live: Vec<&Vec<VarId>> = parts.iter().filter(|p| p.iter().any(|v| free.contains(v))).collect();
    if live.len() <= 1 {
        return Ok(phi.clone());
    }
    let dec = decompose_variadic_on_with(phi, live[0], solver, opts)?;
    let rest: Vec<Vec<VarId>> = live[1..].iter().map(|p| (*p).clone()).collect();
    let subs: Vec<Result<Formula>> = dec
        .cases
        .par_iter()
        .map(|c| Ok(Formula::and([c.guard.clone(), pi_rec(&c.residual, &rest, solver, opts)?])))
        .collect();
    Ok(Formula::or(subs.into_iter().collect::<Result<Vec<_>>>()?))
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

    fn shifted_sum() -> Formula {
        Formula::and([
            Formula::eq(t(&[("z", 1), ("x", -1), ("y", -2)]), 0),
            Formula::le(t(&[("z", 1)]), 4),
        ])
    }

    #[test]
    fn functions_are_sign_canonical() {
        let fs = linear_functions(&shifted_sum(), &[v("x"), v("y")]);
        assert_eq!(fs.functions, vec![t(&[("x", 1), ("y", 2)])]);
        assert!(linear_functions(&Formula::cong_un(v("x"), 2.into(), 0.into()), &[v("x")]).is_empty());
    }

    #[test]
    fn partition_count_and_cap() {
        let fs = LinFunSet {
            functions: vec![t(&[("x", 1)]), t(&[("y", 1)]), t(&[("x", 1), ("y", 1)])],
        };
        assert_eq!(partitions(&fs, 8).unwrap().len(), 8);
        assert!(matches!(partitions(&fs, 2), Err(Error::TooManyFunctions { count: 3, limit: 2 })));
    }

    #[test]
    fn regularity_formulas() {
        let rho = RhoPartition {
            unbounded: vec![t(&[("x", 1)])],
            bounded: vec![],
        };
        let r = reggeq_formula(&rho, &BigInt::from(8));
        assert_eq!(r, Formula::ge(t(&[("x", 1)]), 8));
        let same = same_rho_formula(&rho, &BTreeMap::new(), &BTreeMap::new());
        assert_eq!(same, Formula::True);
    }

    #[test]
    fn auxeq_ties_to_plus() {
        let f = t(&[("x", 1), ("y", -1)]);
        let aux = auxeq_formula(std::slice::from_ref(&f), &[v("p")], &[v("m")]);
        let at = |x, y, p, m| aux.eval(&Assignment::from_pairs([("x", x), ("y", y), ("p", p), ("m", m)])).unwrap();
        assert!(at(3, 3, 0, 0));
        assert!(at(5, 3, 2, 0));
        assert!(at(3, 5, 0, 2));
        assert!(!at(3, 5, 2, 0));
    }

    #[test]
    fn block_verdicts() {
        let s = Solver::builtin();
        let eq = Formula::eq(t(&[("x", 1), ("y", -1)]), 0);
        assert!(!check_variadic_on(&eq, &[v("x")], &s).unwrap().decomposable);
        assert!(check_variadic_on(&shifted_sum(), &[v("x"), v("y")], &s).unwrap().decomposable);
        assert!(check_variadic_on(&Formula::True, &[v("x")], &s).unwrap().decomposable);
    }

    #[test]
    fn block_decomposition_matches_on_grid() {
        let s = Solver::builtin();
        let phi = shifted_sum();
        let d = decompose_variadic_on(&phi, &[v("x"), v("y")], &s).unwrap();
        for x in 0..8u64 {
            for y in 0..8u64 {
                for z in 0..8u64 {
                    let sigma = Assignment::from_pairs([("x", x), ("y", y), ("z", z)]);
                    assert_eq!(d.eval(&sigma).unwrap(), phi.eval(&sigma).unwrap());
                }
            }
        }
    }

    #[test]
    fn partition_errors() {
        let s = Solver::builtin();
        let eq = Formula::eq(t(&[("x", 1), ("y", -1)]), 0);
        let err = pi_decompose(&eq, &[vec![v("x")], vec![v("y")]], &s).unwrap_err();
        assert_eq!(err.to_string(), "not decomposable on {x}");
        assert_eq!(pi_decompose(&eq, &[vec![v("x"), v("y")]], &s).unwrap(), eq);
        assert!(matches!(
            pi_decompose(&eq, &[vec![v("x")]], &s),
            Err(Error::InvalidInput(_))
        ));
    }
}
