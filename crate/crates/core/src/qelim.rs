//! Quantifier elimination for a homogeneous block, via decomposition of
//! the matrix on the bound variables.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::decomposition::DecomposeOptions;
use crate::error::{Error, Result};
use crate::formula::{size_metrics, to_pnf, Assignment, Formula, VarId};
use crate::lia::{largest_constant, SemilinearBound, Solver};
use crate::vardec::decompose_variadic_on_with;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuantKind {
    Exists,
    Forall,
}

/// `∃x̄. ψ` or `∀x̄. ψ` with a quantifier-free matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantBlock {
    pub kind: QuantKind,
    pub vars: Vec<VarId>,
    pub matrix: Formula,
}

impl QuantBlock {
    pub fn exists(vars: Vec<VarId>, matrix: Formula) -> Self {
        QuantBlock {
            kind: QuantKind::Exists,
            vars,
            matrix,
        }
    }

    pub fn forall(vars: Vec<VarId>, matrix: Formula) -> Self {
        QuantBlock {
            kind: QuantKind::Forall,
            vars,
            matrix,
        }
    }

    /// Variables left free by the block.
    pub fn free_vars(&self) -> BTreeSet<VarId> {
        self.matrix
            .free_vars()
            .into_iter()
            .filter(|v| !self.vars.contains(v))
            .collect()
    }
}

/// Quantifier-free equivalent of the block, or `NotDecomposable` when the
/// matrix does not separate the bound variables from the free ones.
pub fn eliminate(block: &QuantBlock, solver: &Solver) -> Result<Formula> {
    eliminate_with(block, solver, &DecomposeOptions::default())
}

pub fn eliminate_with(block: &QuantBlock, solver: &Solver, opts: &DecomposeOptions) -> Result<Formula> {
    match block.kind {
        QuantKind::Exists => eliminate_exists(&block.vars, &block.matrix, solver, opts),
        QuantKind::Forall => {
            let inner = eliminate_exists(&block.vars, &Formula::not(block.matrix.clone()), solver, opts)?;
            Ok(to_pnf(&Formula::not(inner)))
        }
    }
}

fn eliminate_exists(vars: &[VarId], matrix: &Formula, solver: &Solver, opts: &DecomposeOptions) -> Result<Formula> {
    let dec = decompose_variadic_on_with(matrix, vars, solver, opts)?;
    let kept: Vec<Result<Option<Formula>>> = dec
        .cases
        .par_iter()
        .map(|c| {
            if solver.is_sat(&c.guard)? {
                Ok(Some(c.residual.clone()))
            } else {
                log::info!("dropped case with unsatisfiable bound part `{}`", c.guard);
                Ok(None)
            }
        })
        .collect();
    let mut parts = Vec::new();
    for k in kept {
        parts.extend(k?);
    }
    Ok(Formula::or(parts))
}

/// Largest value tried per bound variable when checking by enumeration.
pub const VERIFY_CAP: u64 = 64;
const VERIFY_POINTS: u128 = 50_000_000;

/// Brute-force check of an elimination: for every assignment of the free
/// variables in `[0, radius]`, the quantifier is evaluated by enumerating
/// the bound variables up to the instance's small-model bound (at most
/// [`VERIFY_CAP`]) and compared with `result`.
pub fn verify_elimination(block: &QuantBlock, result: &Formula, radius: u64) -> Result<bool> {
    if radius < 1 {
        return Err(Error::InvalidInput("grid radius must be at least 1".into()));
    }
    let ys: Vec<VarId> = block.free_vars().into_iter().collect();
    if result.free_vars().iter().any(|v| !ys.contains(v)) {
        return Ok(false);
    }
    let xs: Vec<VarId> = block
        .vars
        .iter()
        .filter(|v| block.matrix.free_vars().contains(*v))
        .cloned()
        .collect();
    let limit = enumeration_limit(&block.matrix);
    let points = u128::from(radius + 1).pow(ys.len() as u32) * u128::from(limit + 1).pow(xs.len() as u32);
    if points > VERIFY_POINTS {
        return Err(Error::ResourceLimit(format!(
            "verification would evaluate {points} points"
        )));
    }
    let grid: Vec<Assignment> = box_points(&ys, radius);
    let ok: Vec<Result<bool>> = grid
        .par_iter()
        .map(|sigma| {
            let instance = block.matrix.substitute_all(sigma);
            let mut truth = block.kind == QuantKind::Forall;
            for x in box_points(&xs, limit) {
                let holds = instance.eval(&x)?;
                match block.kind {
                    QuantKind::Exists if holds => {
                        truth = true;
                        break;
                    }
                    QuantKind::Forall if !holds => {
                        truth = false;
                        break;
                    }
                    _ => {}
                }
            }
            Ok(truth == result.eval(sigma)?)
        })
        .collect();
    for r in ok {
        if !r? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn enumeration_limit(matrix: &Formula) -> u64 {
    let m = size_metrics(matrix);
    let b = SemilinearBound::from_parameters(m.m_eq, &largest_constant(matrix), m.n_vars).base_max;
    b.min(BigInt::from(VERIFY_CAP)).to_u64().unwrap_or(VERIFY_CAP)
}

/// All assignments of `vars` into `[0, r]`.
fn box_points(vars: &[VarId], r: u64) -> Vec<Assignment> {
    let mut out = vec![Assignment::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|a| {
                (0..=r).map(move |i| {
                    let mut b = a.clone();
                    b.insert(v.clone(), BigInt::from(i));
                    b
                })
            })
            .collect();
    }
    out
}
