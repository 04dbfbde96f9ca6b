//! Pieces shared by the monadic and variadic constructions: case splits,
//! the bound lattice search, counterexample minimization and per-case
//! equivalence checks.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::formula::{Assignment, Formula, FreshNames, LinearTerm, VarId};
use crate::lia::Solver;
use crate::vardec::RhoPartition;

/// Knobs for decomposition construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecomposeOptions {
    /// Search for the smallest validated bound instead of using the
    /// worst-case bound directly.
    pub bound_search: bool,
    /// Refuse to build decompositions with more disjuncts than this.
    pub max_disjuncts: usize,
    /// Largest number of linear functions over a block (2^n partitions).
    pub max_functions: usize,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            bound_search: true,
            max_disjuncts: 100_000,
            max_functions: 8,
        }
    }
}

/// One disjunct of a decomposition: `guard` constrains only the block,
/// `residual` is the input with the block fixed to `witness`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub guard: Formula,
    pub witness: Assignment,
    pub residual: Formula,
}

impl Case {
    pub fn to_formula(&self) -> Formula {
        Formula::and([self.guard.clone(), self.residual.clone()])
    }
}

/// A decomposition of a formula on a block of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub block: Vec<VarId>,
    /// Threshold the case split was built with.
    pub bound: BigInt,
    /// Cases whose residual is not unsatisfiable.
    pub cases: Vec<Case>,
}

impl Decomposition {
    pub fn to_formula(&self) -> Formula {
        Formula::or(self.cases.iter().map(Case::to_formula).collect::<Vec<_>>())
    }

    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }
}

/// Two points of the block that agree on every divisibility atom and
/// exceed the bound, but on which the formula differs under `context`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    /// Block values where the formula holds.
    pub left: Assignment,
    /// Block values where it fails.
    pub right: Assignment,
    /// Values of the remaining variables.
    pub context: Assignment,
    /// The split of linear functions the pair was found under (block checks only).
    pub partition: Option<RhoPartition>,
}

/// Outcome of a decomposability check on one variable or block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompVerdict {
    pub target: Vec<VarId>,
    pub decomposable: bool,
    /// Threshold the check was run with.
    pub bound: BigInt,
    /// Present exactly when `decomposable` is false.
    pub counterexample: Option<Counterexample>,
}

/// Fresh copies `v ↦ v'` of the block.
pub(crate) fn copies(block: &[VarId], names: &mut FreshNames) -> BTreeMap<VarId, VarId> {
    block
        .iter()
        .map(|v| (v.clone(), names.fresh(v.name())))
        .collect()
}

pub(crate) fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

/// Smallest `2^k`, `k ≤ k_max`, at which `passes` holds, found by galloping
/// over `k` then bisecting. Assumes monotonicity in `k`; whatever bound is
/// returned has itself been checked.
pub(crate) fn lattice_search(
    k_max: u64,
    mut passes: impl FnMut(&BigInt) -> Result<bool>,
) -> Result<Option<BigInt>> {
    let mut failed: Option<u64> = None;
    let mut k = 0u64;
    let hi = loop {
        if passes(&pow2(k))? {
            break k;
        }
        failed = Some(k);
        if k >= k_max {
            return Ok(None);
        }
        k = if k == 0 { 1 } else { (2 * k).min(k_max) };
    };
    let (mut lo, mut hi) = match failed {
        None => return Ok(Some(pow2(hi))),
        Some(f) => (f, hi),
    };
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if passes(&pow2(mid))? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(pow2(hi)))
}

/// Lexicographically smallest model of `query` in the given variable order,
/// starting from `model`. Each entry carries a known lower bound.
pub(crate) fn minimize_lex(
    solver: &Solver,
    query: &Formula,
    order: &[(VarId, BigInt)],
    mut model: Assignment,
) -> Result<Assignment> {
    let mut fixed = query.clone();
    for (v, lo) in order {
        let cur = model.value(v)?.clone();
        let probe = |m: &BigInt| -> Result<Option<Assignment>> {
            let q = Formula::and([fixed.clone(), Formula::le(LinearTerm::var(v.clone()), m.clone())]);
            solver.model(&q)
        };
        // Gallop up from the lower bound, then bisect.
        let mut fail = lo - 1;
        let mut step = BigInt::one();
        let mut best = (cur.clone(), model.clone());
        loop {
            let m = lo + &step - 1;
            if m >= best.0 {
                break;
            }
            match probe(&m)? {
                Some(found) => {
                    best = (found.value(v)?.clone(), found);
                    break;
                }
                None => fail = m,
            }
            step *= 2;
        }
        while &best.0 - &fail > BigInt::one() {
            let mid: BigInt = (&fail + &best.0) / 2;
            match probe(&mid)? {
                Some(found) => best = (found.value(v)?.clone(), found),
                None => fail = mid,
            }
        }
        model = best.1;
        fixed = Formula::and([fixed, Formula::eq(LinearTerm::var(v.clone()), best.0)]);
    }
    Ok(model)
}

/// Checks every case against `phi`: within its guard, `phi` and the
/// residual agree. Cases whose residual is unsatisfiable are dropped
/// afterwards. Coverage of the guards is the caller's obligation.
pub(crate) fn verify_and_prune(
    phi: &Formula,
    cases: Vec<Case>,
    solver: &Solver,
) -> Result<Vec<Case>> {
    let checked: Vec<Result<Option<Case>>> = cases
        .into_par_iter()
        .map(|case| {
            let diff = Formula::and([
                case.guard.clone(),
                Formula::xor(phi.clone(), case.residual.clone()),
            ]);
            if let Some(m) = solver.model(&diff)? {
                return Err(Error::EquivalenceCheckFailed(format!(
                    "case `{}` disagrees with the input at {m}",
                    case.guard
                )));
            }
            if case.residual.is_false() || !solver.is_sat(&case.residual)? {
                return Ok(None);
            }
            Ok(Some(case))
        })
        .collect();
    let mut kept = Vec::new();
    for c in checked {
        if let Some(c) = c? {
            kept.push(c);
        }
    }
    Ok(kept)
}

pub(crate) fn check_cap(count: &BigInt, cap: usize) -> Result<()> {
    if count > &BigInt::from(cap) {
        return Err(Error::TooLarge {
            estimated: count.to_string(),
            cap,
        });
    }
    Ok(())
}

/// Guard `x̄ = c̄` for a point.
pub(crate) fn point_guard(point: &Assignment) -> Formula {
    Formula::and(
        point
            .iter()
            .map(|(v, c)| Formula::eq(LinearTerm::var(v.clone()), c.clone()))
            .collect::<Vec<_>>(),
    )
}
