//! Integer feasibility for bounded linear systems.
//!
//! Equality rows are eliminated exactly by unimodular changes of
//! variables; the remaining inequalities are solved by branch and bound
//! over the rational simplex, branching on the lowest-index fractional
//! variable with the floor branch explored first.

use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::simplex::Simplex;
use super::Budget;
use crate::error::Result;

#[derive(Clone, Debug)]
pub(crate) struct Row {
    pub coeffs: Vec<BigInt>,
    pub lo: Option<BigInt>,
    pub hi: Option<BigInt>,
}

/// Integer columns with bounds and two-sided linear rows.
#[derive(Clone, Debug)]
pub(crate) struct IntProblem {
    pub lower: Vec<BigInt>,
    pub upper: Vec<Option<BigInt>>,
    pub rows: Vec<Row>,
}

pub(crate) fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

pub(crate) fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn gcd_all(cs: &[BigInt]) -> BigInt {
    cs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// `c·z + t ∈ [lo, hi]` as bounds on `z`; `c ≠ 0`.
fn bounds_for_scaled(
    c: &BigInt,
    t: &BigInt,
    lo: &Option<BigInt>,
    hi: &Option<BigInt>,
) -> (Option<BigInt>, Option<BigInt>) {
    let shift = |b: &Option<BigInt>| b.as_ref().map(|b| b - t);
    let (lo, hi) = (shift(lo), shift(hi));
    if c.is_positive() {
        (lo.map(|l| ceil_div(&l, c)), hi.map(|h| floor_div(&h, c)))
    } else {
        (hi.map(|h| ceil_div(&h, c)), lo.map(|l| floor_div(&l, c)))
    }
}

fn within(v: &BigInt, lo: &Option<BigInt>, hi: &Option<BigInt>) -> bool {
    lo.as_ref().is_none_or(|l| v >= l) && hi.as_ref().is_none_or(|h| v <= h)
}

fn meet(a: Option<BigInt>, b: Option<BigInt>, take_max: bool) -> Option<BigInt> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(if take_max { a.max(b) } else { a.min(b) }),
    }
}

/// Affine map from the reduced variables `z` back to the columns.
struct ColumnMap {
    coeffs: Vec<Vec<BigInt>>,
    offset: Vec<BigInt>,
    alive: Vec<bool>,
}

impl ColumnMap {
    fn identity(n: usize) -> Self {
        let coeffs = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        ColumnMap {
            coeffs,
            offset: vec![BigInt::zero(); n],
            alive: vec![true; n],
        }
    }

    /// Row `Σ a_i col_i` expressed over `z`: coefficients and constant.
    fn express(&self, a: &[BigInt]) -> (Vec<BigInt>, BigInt) {
        let nz = self.alive.len();
        let mut e = vec![BigInt::zero(); nz];
        let mut k = BigInt::zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, ej) in e.iter_mut().enumerate() {
                if !self.coeffs[i][j].is_zero() {
                    *ej += ai * &self.coeffs[i][j];
                }
            }
            k += ai * &self.offset[i];
        }
        (e, k)
    }

    /// Adds the equality `Σ e_j z_j = rhs`; false when it has no integer solution.
    fn eliminate(&mut self, mut e: Vec<BigInt>, mut rhs: BigInt) -> bool {
        loop {
            let g = gcd_all(&e);
            if g.is_zero() {
                return rhs.is_zero();
            }
            if !(&rhs % &g).is_zero() {
                return false;
            }
            if !g.is_one() {
                e.iter_mut().for_each(|c| *c /= &g);
                rhs /= &g;
            }
            if let Some(j) = (0..e.len()).find(|&j| e[j].abs().is_one()) {
                // z_j = e_j·(rhs − Σ_{k≠j} e_k z_k), since 1/e_j = e_j.
                let ej = e[j].clone();
                for i in 0..self.coeffs.len() {
                    let tij = std::mem::take(&mut self.coeffs[i][j]);
                    if tij.is_zero() {
                        continue;
                    }
                    let f = &tij * &ej;
                    self.offset[i] += &f * &rhs;
                    for (k, ek) in e.iter().enumerate() {
                        if k != j && !ek.is_zero() {
                            self.coeffs[i][k] -= &f * ek;
                        }
                    }
                }
                self.alive[j] = false;
                return true;
            }
            // Reduce all coefficients modulo the smallest one through the
            // change z_j = z_j' − Σ_k q_k z_k.
            let j = (0..e.len())
                .filter(|&j| !e[j].is_zero())
                .min_by(|&a, &b| e[a].abs().cmp(&e[b].abs()))
                .expect("nonzero coefficient exists");
            let ej = e[j].clone();
            for k in 0..e.len() {
                if k == j || e[k].is_zero() {
                    continue;
                }
                let q = e[k].div_floor(&ej);
                if q.is_zero() {
                    continue;
                }
                e[k] -= &q * &ej;
                for row in self.coeffs.iter_mut() {
                    if !row[j].is_zero() {
                        let d = &q * &row[j];
                        row[k] -= d;
                    }
                }
            }
        }
    }
}

/// Canonical row: gcd-reduced with tightened bounds. `None` when the
/// row is trivially satisfied, `Err(())` when it is infeasible.
fn tighten(mut coeffs: Vec<BigInt>, lo: Option<BigInt>, hi: Option<BigInt>) -> std::result::Result<Option<Row>, ()> {
    let g = gcd_all(&coeffs);
    if g.is_zero() {
        let zero = BigInt::zero();
        return if within(&zero, &lo, &hi) { Ok(None) } else { Err(()) };
    }
    coeffs.iter_mut().for_each(|c| *c /= &g);
    let lo = lo.map(|l| ceil_div(&l, &g));
    let hi = hi.map(|h| floor_div(&h, &g));
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l > h {
            return Err(());
        }
    }
    if lo.is_none() && hi.is_none() {
        return Ok(None);
    }
    Ok(Some(Row { coeffs, lo, hi }))
}

/// Integer point satisfying every bound and row, if one exists.
pub(crate) fn solve(p: &IntProblem, budget: &mut Budget) -> Result<Option<Vec<BigInt>>> {
    let n = p.lower.len();
    let mut lower: Vec<Option<BigInt>> = p.lower.iter().cloned().map(Some).collect();
    let mut upper = p.upper.clone();

    // Canonicalize rows; single-column rows become column bounds and
    // rows with the same coefficient vector are intersected.
    let mut merged: HashMap<Vec<BigInt>, (Option<BigInt>, Option<BigInt>)> = HashMap::new();
    let mut order: Vec<Vec<BigInt>> = Vec::new();
    for r in &p.rows {
        let Ok(row) = tighten(r.coeffs.clone(), r.lo.clone(), r.hi.clone()) else {
            return Ok(None);
        };
        let Some(mut row) = row else { continue };
        let first = row.coeffs.iter().find(|c| !c.is_zero()).expect("row is nonzero");
        if first.is_negative() {
            row.coeffs.iter_mut().for_each(|c| *c = -&*c);
            let (lo, hi) = (row.hi.map(|h| -h), row.lo.map(|l| -l));
            row.lo = lo;
            row.hi = hi;
        }
        let nonzero: Vec<usize> = (0..n).filter(|&j| !row.coeffs[j].is_zero()).collect();
        if nonzero.len() == 1 {
            let j = nonzero[0];
            let (lo, hi) = bounds_for_scaled(&row.coeffs[j], &BigInt::zero(), &row.lo, &row.hi);
            lower[j] = meet(lower[j].take(), lo, true);
            upper[j] = meet(upper[j].take(), hi, false);
            continue;
        }
        match merged.get_mut(&row.coeffs) {
            Some((lo, hi)) => {
                *lo = meet(lo.take(), row.lo, true);
                *hi = meet(hi.take(), row.hi, false);
            }
            None => {
                order.push(row.coeffs.clone());
                merged.insert(row.coeffs, (row.lo, row.hi));
            }
        }
    }
    for j in 0..n {
        if let (Some(l), Some(h)) = (&lower[j], &upper[j]) {
            if l > h {
                return Ok(None);
            }
        }
    }
    let mut rows: Vec<Row> = Vec::new();
    for coeffs in order {
        let (lo, hi) = merged.remove(&coeffs).expect("row recorded");
        if let (Some(l), Some(h)) = (&lo, &hi) {
            if l > h {
                return Ok(None);
            }
        }
        rows.push(Row { coeffs, lo, hi });
    }

    // Exact elimination of equality rows, including fixed columns.
    let mut map = ColumnMap::identity(n);
    let mut inequalities = Vec::new();
    for r in rows {
        match (&r.lo, &r.hi) {
            (Some(l), Some(h)) if l == h => {
                let (e, k) = map.express(&r.coeffs);
                if !map.eliminate(e, l - k) {
                    return Ok(None);
                }
            }
            _ => inequalities.push(r),
        }
    }
    for j in 0..n {
        if let (Some(l), Some(h)) = (&lower[j], &upper[j]) {
            if l == h {
                let mut a = vec![BigInt::zero(); n];
                a[j] = BigInt::one();
                let (e, k) = map.express(&a);
                if !map.eliminate(e, l - k) {
                    return Ok(None);
                }
            }
        }
    }

    // Remaining constraints over the live reduced variables.
    let live: Vec<usize> = (0..n).filter(|&j| map.alive[j]).collect();
    let mut z_lower: Vec<Option<BigInt>> = vec![None; live.len()];
    let mut z_upper: Vec<Option<BigInt>> = vec![None; live.len()];
    let mut constraint_rows: Vec<Row> = Vec::new();
    let mut add = |e: Vec<BigInt>, k: BigInt, lo: &Option<BigInt>, hi: &Option<BigInt>| -> bool {
        let e: Vec<BigInt> = live.iter().map(|&j| e[j].clone()).collect();
        let lo = lo.as_ref().map(|l| l - &k);
        let hi = hi.as_ref().map(|h| h - &k);
        let nonzero: Vec<usize> = (0..e.len()).filter(|&j| !e[j].is_zero()).collect();
        if nonzero.len() == 1 {
            let j = nonzero[0];
            let (l, h) = bounds_for_scaled(&e[j], &BigInt::zero(), &lo, &hi);
            z_lower[j] = meet(z_lower[j].take(), l, true);
            z_upper[j] = meet(z_upper[j].take(), h, false);
            return true;
        }
        match tighten(e, lo, hi) {
            Err(()) => false,
            Ok(None) => true,
            Ok(Some(row)) => {
                constraint_rows.push(row);
                true
            }
        }
    };
    for r in &inequalities {
        let (e, k) = map.express(&r.coeffs);
        if !add(e, k, &r.lo, &r.hi) {
            return Ok(None);
        }
    }
    for j in 0..n {
        let mut a = vec![BigInt::zero(); n];
        a[j] = BigInt::one();
        let (e, k) = map.express(&a);
        if !add(e, k, &lower[j], &upper[j]) {
            return Ok(None);
        }
    }
    for j in 0..live.len() {
        if let (Some(l), Some(h)) = (&z_lower[j], &z_upper[j]) {
            if l > h {
                return Ok(None);
            }
        }
    }

    let z = branch_and_bound(live.len(), &z_lower, &z_upper, &constraint_rows, budget)?;
    let Some(z) = z else { return Ok(None) };
    let mut full = vec![BigInt::zero(); n];
    for (idx, &j) in live.iter().enumerate() {
        full[j] = z[idx].clone();
    }
    let cols: Vec<BigInt> = (0..n)
        .map(|i| {
            let mut v = map.offset[i].clone();
            for (j, c) in map.coeffs[i].iter().enumerate() {
                if !c.is_zero() {
                    v += c * &full[j];
                }
            }
            v
        })
        .collect();
    Ok(Some(cols))
}

fn branch_and_bound(
    nz: usize,
    lower: &[Option<BigInt>],
    upper: &[Option<BigInt>],
    rows: &[Row],
    budget: &mut Budget,
) -> Result<Option<Vec<BigInt>>> {
    let q = |v: &BigInt| BigRational::from_integer(v.clone());
    let coeffs: Vec<Vec<BigInt>> = rows.iter().map(|r| r.coeffs.clone()).collect();
    let mut root = Simplex::new(nz, &coeffs);
    for j in 0..nz {
        if let Some(l) = &lower[j] {
            root.assert_lower(j, q(l));
        }
        if let Some(h) = &upper[j] {
            if !root.assert_upper(j, q(h)) {
                return Ok(None);
            }
        }
    }
    for (i, r) in rows.iter().enumerate() {
        if let Some(l) = &r.lo {
            if !root.assert_lower(nz + i, q(l)) {
                return Ok(None);
            }
        }
        if let Some(h) = &r.hi {
            if !root.assert_upper(nz + i, q(h)) {
                return Ok(None);
            }
        }
    }
    // Depth-first dive on one tableau; siblings wait as bound paths from
    // the root, so memory stays linear in the number of open nodes.
    let mut stack: Vec<Option<Rc<Decision>>> = vec![None];
    while let Some(mut path) = stack.pop() {
        let mut node = root.clone();
        if !replay(&mut node, &path) {
            continue;
        }
        loop {
            budget.tick()?;
            if !node.check() {
                break;
            }
            let fractional = (0..nz).find(|&j| !node.value(j).is_integer());
            let Some(j) = fractional else {
                return Ok(Some((0..nz).map(|j| node.value(j).to_integer()).collect()));
            };
            let fl = node.value(j).floor();
            stack.push(Some(Rc::new(Decision {
                parent: path.clone(),
                var: j,
                bound: Bound::Lower(fl.clone() + BigRational::one()),
            })));
            path = Some(Rc::new(Decision {
                parent: path,
                var: j,
                bound: Bound::Upper(fl.clone()),
            }));
            if !node.assert_upper(j, fl) {
                break;
            }
        }
    }
    Ok(None)
}

enum Bound {
    Lower(BigRational),
    Upper(BigRational),
}

/// One branching decision, linked to the decisions above it.
struct Decision {
    parent: Option<Rc<Decision>>,
    var: usize,
    bound: Bound,
}

/// Applies the decisions on `path` to a copy of the root; false when a
/// bound is immediately contradictory.
fn replay(node: &mut Simplex, path: &Option<Rc<Decision>>) -> bool {
    let mut chain = Vec::new();
    let mut cur = path.as_deref();
    while let Some(d) = cur {
        chain.push(d);
        cur = d.parent.as_deref();
    }
    chain.into_iter().rev().all(|d| match &d.bound {
        Bound::Lower(l) => node.assert_lower(d.var, l.clone()),
        Bound::Upper(h) => node.assert_upper(d.var, h.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn row(cs: &[i64], lo: Option<i64>, hi: Option<i64>) -> Row {
        Row {
            coeffs: cs.iter().map(|&c| b(c)).collect(),
            lo: lo.map(b),
            hi: hi.map(b),
        }
    }

    fn solve_plain(n: usize, rows: Vec<Row>) -> Option<Vec<BigInt>> {
        let p = IntProblem {
            lower: vec![b(0); n],
            upper: vec![None; n],
            rows,
        };
        solve(&p, &mut Budget::unlimited()).unwrap()
    }

    #[test]
    fn parity_conflict_is_infeasible() {
        // 2x − 2y = 1
        assert!(solve_plain(2, vec![row(&[2, -2], Some(1), Some(1))]).is_none());
    }

    #[test]
    fn equality_with_bounds() {
        // 3x + 5y = 22, x ≤ 4
        let sol = solve_plain(2, vec![row(&[3, 5], Some(22), Some(22)), row(&[1, 0], None, Some(4))]).unwrap();
        assert_eq!(&sol[0] * 3 + &sol[1] * 5, b(22));
        assert!(sol[0] <= b(4) && sol.iter().all(|v| v >= &b(0)));
    }

    #[test]
    fn needs_branching() {
        // 2x + 2y ≥ 3, 2x + 2y ≤ 5, x − y = 0 → x = y = 1
        let sol = solve_plain(
            2,
            vec![row(&[2, 2], Some(3), Some(5)), row(&[1, -1], Some(0), Some(0))],
        )
        .unwrap();
        assert_eq!(sol, vec![b(1), b(1)]);
    }

    #[test]
    fn integer_gap_infeasible() {
        // 1 ≤ 3x − 3y ≤ 2
        assert!(solve_plain(2, vec![row(&[3, -3], Some(1), Some(2))]).is_none());
    }

    #[test]
    fn unimodular_reduction_handles_large_coefficients() {
        // 6x + 10y + 15z = 31, pairwise non-coprime coefficients
        let sol = solve_plain(3, vec![row(&[6, 10, 15], Some(31), Some(31))]).unwrap();
        assert_eq!(&sol[0] * 6 + &sol[1] * 10 + &sol[2] * 15, b(31));
        assert!(sol.iter().all(|v| v >= &b(0)));
    }
}
