//! Depth-first search over the disjunctive structure of a negation-free
//! formula. Unary atoms are propagated into per-variable domains (bounds
//! plus one residue class); each leaf is an integer program handed to
//! branch and bound.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::equalities::{normalize_to_equalities, small_model_bound};
use super::ilp::{self, ceil_div, floor_div, IntProblem, Row};
use super::Budget;
use crate::error::Result;
use crate::formula::{Atom, Conjunct, Formula, LinearTerm, Rel, VarId};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Dom {
    lo: BigInt,
    hi: Option<BigInt>,
    modulus: BigInt,
    residue: BigInt,
}

impl Dom {
    fn full() -> Self {
        Dom {
            lo: BigInt::zero(),
            hi: None,
            modulus: BigInt::one(),
            residue: BigInt::zero(),
        }
    }

    /// Tightens bounds to the residue class; false when empty.
    fn normalize(&mut self) -> bool {
        if !self.modulus.is_one() {
            self.lo += (&self.residue - &self.lo).mod_floor(&self.modulus);
            if let Some(h) = &mut self.hi {
                *h -= (&*h - &self.residue).mod_floor(&self.modulus);
            }
        }
        self.hi.as_ref().is_none_or(|h| h >= &self.lo)
    }

    fn meet_lower(&mut self, l: BigInt) {
        if l > self.lo {
            self.lo = l;
        }
    }

    fn meet_upper(&mut self, h: BigInt) {
        match &self.hi {
            Some(cur) if cur <= &h => {}
            _ => self.hi = Some(h),
        }
    }

    /// Intersects with `x ≡ c (mod k)`; false when incompatible.
    fn meet_residue(&mut self, k: &BigInt, c: &BigInt) -> bool {
        let m1 = self.modulus.clone();
        let r1 = self.residue.clone();
        let g = m1.gcd(k);
        let diff = c - &r1;
        if !(&diff % &g).is_zero() {
            return false;
        }
        let l = m1.lcm(k);
        // r1 + m1·t ≡ c (mod k)  ⇔  (m1/g)·t ≡ diff/g (mod k/g)
        let kg = k / &g;
        let egcd = (&m1 / &g).extended_gcd(&kg);
        let t = ((&diff / &g) * egcd.x).mod_floor(&kg);
        self.residue = (r1 + m1 * t).mod_floor(&l);
        self.modulus = l;
        true
    }

    #[cfg(test)]
    fn fixed(&self) -> Option<&BigInt> {
        match &self.hi {
            Some(h) if h == &self.lo => Some(h),
            _ => None,
        }
    }
}

#[derive(Clone)]
struct State<'f> {
    doms: Vec<Dom>,
    multi: Vec<Atom>,
    pending: Vec<&'f [Formula]>,
}

pub(crate) struct Search<'b> {
    index: HashMap<VarId, usize>,
    budget: &'b mut Budget,
    unsat_leaves: HashSet<(Vec<Dom>, Vec<Atom>)>,
    /// Partial states already refuted; open disjunctions are identified by address.
    refuted: HashSet<(Vec<Dom>, Vec<Atom>, Vec<usize>)>,
}

impl<'b> Search<'b> {
    pub(crate) fn new(vars: &[VarId], budget: &'b mut Budget) -> Self {
        Search {
            index: vars.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect(),
            budget,
            unsat_leaves: HashSet::new(),
            refuted: HashSet::new(),
        }
    }

    /// A satisfying point for the negation-free, congruence-expanded
    /// formula `phi`, as values in variable order.
    pub(crate) fn run(&mut self, phi: &Formula) -> Result<Option<Vec<BigInt>>> {
        let mut st = State {
            doms: vec![Dom::full(); self.index.len()],
            multi: Vec::new(),
            pending: Vec::new(),
        };
        if !self.add_formula(&mut st, phi) {
            return Ok(None);
        }
        self.dfs(st)
    }

    fn add_formula<'f>(&self, st: &mut State<'f>, f: &'f Formula) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => self.add_atom(st, a),
            Formula::And(cs) => cs.iter().all(|c| self.add_formula(st, c)),
            Formula::Or(cs) => {
                st.pending.push(cs);
                true
            }
            Formula::Not(_) => unreachable!("search input is negation-free"),
        }
    }

    fn add_atom(&self, st: &mut State<'_>, a: &Atom) -> bool {
        match a {
            Atom::Ineq { term, rel, bound } if term.len() == 1 => {
                let (x, c) = term.iter().next().expect("one variable");
                let d = &mut st.doms[self.index[x]];
                apply_unary(d, c, *rel, bound);
                d.normalize()
            }
            Atom::Ineq { .. } => {
                match self.range_verdict(&st.doms, a) {
                    Some(true) => return true,
                    Some(false) => return false,
                    None => {}
                }
                if !st.multi.contains(a) {
                    st.multi.push(a.clone());
                }
                true
            }
            Atom::CongUn { x, k, c } => {
                let d = &mut st.doms[self.index[x]];
                d.meet_residue(k, c) && d.normalize()
            }
            Atom::CongBin { .. } => unreachable!("binary congruences are expanded before search"),
        }
    }

    /// Decides a multi-variable inequality from the domain bounds alone
    /// when possible.
    fn range_verdict(&self, doms: &[Dom], a: &Atom) -> Option<bool> {
        let Atom::Ineq { term, rel, bound } = a else {
            return None;
        };
        let (mut min, mut max) = (Some(BigInt::zero()), Some(BigInt::zero()));
        for (x, c) in term.iter() {
            let d = &doms[self.index[x]];
            let (lo_part, hi_part) = if c.is_positive() {
                (Some(c * &d.lo), d.hi.as_ref().map(|h| c * h))
            } else {
                (d.hi.as_ref().map(|h| c * h), Some(c * &d.lo))
            };
            min = min.zip(lo_part).map(|(a, b)| a + b);
            max = max.zip(hi_part).map(|(a, b)| a + b);
        }
        match rel {
            Rel::Le => {
                if max.as_ref().is_some_and(|m| m <= bound) {
                    Some(true)
                } else if min.as_ref().is_some_and(|m| m > bound) {
                    Some(false)
                } else {
                    None
                }
            }
            Rel::Ge => {
                if min.as_ref().is_some_and(|m| m >= bound) {
                    Some(true)
                } else if max.as_ref().is_some_and(|m| m < bound) {
                    Some(false)
                } else {
                    None
                }
            }
        }
    }

    /// Cheap necessary check: false when `f` certainly conflicts with `st`.
    fn viable(&self, st: &State<'_>, f: &Formula) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => match a {
                Atom::Ineq { term, rel, bound } if term.len() == 1 => {
                    let (x, c) = term.iter().next().expect("one variable");
                    let mut d = st.doms[self.index[x]].clone();
                    apply_unary(&mut d, c, *rel, bound);
                    d.normalize()
                }
                Atom::Ineq { .. } => self.range_verdict(&st.doms, a) != Some(false),
                Atom::CongUn { x, k, c } => {
                    let mut d = st.doms[self.index[x]].clone();
                    d.meet_residue(k, c) && d.normalize()
                }
                Atom::CongBin { .. } => true,
            },
            Formula::And(cs) => cs.iter().all(|c| self.viable(st, c)),
            Formula::Or(cs) => cs.iter().any(|c| self.viable(st, c)),
            Formula::Not(_) => true,
        }
    }

    /// True when every point of the domains satisfies `f`.
    fn entailed(&self, st: &State<'_>, f: &Formula) -> bool {
        match f {
            Formula::True => true,
            Formula::False | Formula::Not(_) => false,
            Formula::Atom(a) => match a {
                Atom::Ineq { .. } => self.range_verdict(&st.doms, a) == Some(true),
                Atom::CongUn { x, k, c } => {
                    let d = &st.doms[self.index[x]];
                    (&d.modulus % k).is_zero() && (&d.residue - c).mod_floor(k).is_zero()
                }
                Atom::CongBin { .. } => false,
            },
            Formula::And(cs) => cs.iter().all(|c| self.entailed(st, c)),
            Formula::Or(cs) => cs.iter().any(|c| self.entailed(st, c)),
        }
    }

    fn dfs(&mut self, mut st: State<'_>) -> Result<Option<Vec<BigInt>>> {
        self.budget.tick()?;
        let open: Vec<bool> = st.pending.iter().map(|cs| !cs.iter().any(|c| self.entailed(&st, c))).collect();
        let mut keep = open.into_iter();
        st.pending.retain(|_| keep.next().unwrap_or(true));
        if st.pending.is_empty() {
            return self.leaf(&st);
        }
        let key = {
            let mut multi = st.multi.clone();
            multi.sort();
            let mut open: Vec<usize> = st.pending.iter().map(|cs| cs.as_ptr() as usize).collect();
            open.sort_unstable();
            (st.doms.clone(), multi, open)
        };
        if self.refuted.contains(&key) {
            return Ok(None);
        }
        let found = self.branch(st)?;
        if found.is_none() {
            self.refuted.insert(key);
        }
        Ok(found)
    }

    fn branch(&mut self, mut st: State<'_>) -> Result<Option<Vec<BigInt>>> {
        // Branch on the disjunction with the fewest viable alternatives.
        let mut best: Option<(usize, Vec<usize>)> = None;
        for (i, cs) in st.pending.iter().enumerate() {
            let alive: Vec<usize> = (0..cs.len()).filter(|&j| self.viable(&st, &cs[j])).collect();
            if alive.is_empty() {
                return Ok(None);
            }
            if best.as_ref().is_none_or(|(_, b)| alive.len() < b.len()) {
                let done = alive.len() == 1;
                best = Some((i, alive));
                if done {
                    break;
                }
            }
        }
        let (i, alive) = best.expect("pending is nonempty");
        let cs = st.pending.swap_remove(i);
        for j in alive {
            let mut next = st.clone();
            if self.add_formula(&mut next, &cs[j]) {
                if let Some(m) = self.dfs(next)? {
                    return Ok(Some(m));
                }
            }
        }
        Ok(None)
    }

    fn leaf(&mut self, st: &State<'_>) -> Result<Option<Vec<BigInt>>> {
        let mut multi = st.multi.clone();
        multi.sort();
        let key = (st.doms.clone(), multi);
        if self.unsat_leaves.contains(&key) {
            return Ok(None);
        }
        let n = st.doms.len();
        let cap = self.column_cap(st);
        // x_i = lo_i + m_i·col_i
        let mut upper = Vec::with_capacity(n);
        for d in &st.doms {
            upper.push(Some(match &d.hi {
                Some(h) => floor_div(&(h - &d.lo), &d.modulus),
                None => cap.clone(),
            }));
        }
        let mut rows = Vec::with_capacity(st.multi.len());
        for a in &st.multi {
            let Atom::Ineq { term, rel, bound } = a else {
                unreachable!("only inequalities are deferred")
            };
            let mut coeffs = vec![BigInt::zero(); n];
            let mut shift = BigInt::zero();
            for (x, c) in term.iter() {
                let i = self.index[x];
                let d = &st.doms[i];
                coeffs[i] = c * &d.modulus;
                shift += c * &d.lo;
            }
            let b = bound - shift;
            let (lo, hi) = match rel {
                Rel::Le => (None, Some(b)),
                Rel::Ge => (Some(b), None),
            };
            rows.push(Row { coeffs, lo, hi });
        }
        let problem = IntProblem {
            lower: vec![BigInt::zero(); n],
            upper,
            rows,
        };
        match ilp::solve(&problem, self.budget)? {
            Some(cols) => Ok(Some(
                cols.iter()
                    .zip(&st.doms)
                    .map(|(c, d)| &d.lo + &d.modulus * c)
                    .collect(),
            )),
            None => {
                self.unsat_leaves.insert(key);
                Ok(None)
            }
        }
    }

    /// Small-model bound of the leaf system: some solution, if any, has
    /// every coordinate below it. Used only to make every column bounded.
    fn column_cap(&self, st: &State<'_>) -> BigInt {
        let mut vars: Vec<(&VarId, usize)> = self.index.iter().map(|(v, &i)| (v, i)).collect();
        vars.sort_by_key(|&(_, i)| i);
        let mut atoms = st.multi.clone();
        for (v, i) in vars {
            let d = &st.doms[i];
            if d.lo.is_positive() {
                atoms.push(Atom::Ineq {
                    term: LinearTerm::var(v.clone()),
                    rel: Rel::Ge,
                    bound: d.lo.clone(),
                });
            }
            if let Some(h) = &d.hi {
                atoms.push(Atom::Ineq {
                    term: LinearTerm::var(v.clone()),
                    rel: Rel::Le,
                    bound: h.clone(),
                });
            }
            if !d.modulus.is_one() {
                atoms.push(Atom::CongUn {
                    x: v.clone(),
                    k: d.modulus.clone(),
                    c: d.residue.clone(),
                });
            }
        }
        small_model_bound(&normalize_to_equalities(&Conjunct { atoms })).base_max
    }
}

fn apply_unary(d: &mut Dom, c: &BigInt, rel: Rel, bound: &BigInt) {
    // c·x ≤ b or c·x ≥ b; dividing by a negative c flips the relation.
    let upper = (rel == Rel::Le) == c.is_positive();
    if upper {
        d.meet_upper(floor_div(bound, c));
    } else {
        d.meet_lower(ceil_div(bound, c));
    }
}
