//! Bounded general simplex over exact rationals.
//!
//! Rows define basic variables as linear combinations of nonbasic ones;
//! every variable carries optional lower and upper bounds. `check` repairs
//! bound violations with Bland's rule, so it terminates without cycling.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

type Q = BigRational;

#[derive(Clone, Debug)]
pub(crate) struct Simplex {
    /// `rows[r][j]`: coefficient of variable `j` in the row of `basis[r]`.
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    row_of: Vec<Option<usize>>,
    lower: Vec<Option<Q>>,
    upper: Vec<Option<Q>>,
    value: Vec<Q>,
}

impl Simplex {
    /// `num_structural` variables followed by one slack per row of
    /// `constraints`, where slack `i` equals `Σ_j constraints[i][j]·x_j`.
    pub(crate) fn new(num_structural: usize, constraints: &[Vec<BigInt>]) -> Self {
        let m = constraints.len();
        let total = num_structural + m;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut row_of = vec![None; total];
        for (i, c) in constraints.iter().enumerate() {
            let mut row = vec![Q::zero(); total];
            for (j, a) in c.iter().enumerate() {
                row[j] = Q::from_integer(a.clone());
            }
            rows.push(row);
            basis.push(num_structural + i);
            row_of[num_structural + i] = Some(i);
        }
        Simplex {
            rows,
            basis,
            row_of,
            lower: vec![None; total],
            upper: vec![None; total],
            value: vec![Q::zero(); total],
        }
    }

    pub(crate) fn num_vars(&self) -> usize {
        self.value.len()
    }

    pub(crate) fn value(&self, j: usize) -> &Q {
        &self.value[j]
    }

    /// Tightens the lower bound of `j`; false on an immediate conflict.
    pub(crate) fn assert_lower(&mut self, j: usize, c: Q) -> bool {
        if let Some(l) = &self.lower[j] {
            if &c <= l {
                return true;
            }
        }
        if let Some(u) = &self.upper[j] {
            if &c > u {
                return false;
            }
        }
        self.lower[j] = Some(c.clone());
        if self.row_of[j].is_none() && self.value[j] < c {
            self.update(j, c);
        }
        true
    }

    /// Tightens the upper bound of `j`; false on an immediate conflict.
    pub(crate) fn assert_upper(&mut self, j: usize, c: Q) -> bool {
        if let Some(u) = &self.upper[j] {
            if &c >= u {
                return true;
            }
        }
        if let Some(l) = &self.lower[j] {
            if &c < l {
                return false;
            }
        }
        self.upper[j] = Some(c.clone());
        if self.row_of[j].is_none() && self.value[j] > c {
            self.update(j, c);
        }
        true
    }

    fn update(&mut self, j: usize, v: Q) {
        let delta = &v - &self.value[j];
        for (r, row) in self.rows.iter().enumerate() {
            if !row[j].is_zero() {
                let b = self.basis[r];
                self.value[b] += &row[j] * &delta;
            }
        }
        self.value[j] = v;
    }

    fn below_lower(&self, j: usize) -> bool {
        matches!(&self.lower[j], Some(l) if &self.value[j] < l)
    }

    fn above_upper(&self, j: usize) -> bool {
        matches!(&self.upper[j], Some(u) if &self.value[j] > u)
    }

    fn can_increase(&self, j: usize) -> bool {
        match &self.upper[j] {
            Some(u) => &self.value[j] < u,
            None => true,
        }
    }

    fn can_decrease(&self, j: usize) -> bool {
        match &self.lower[j] {
            Some(l) => &self.value[j] > l,
            None => true,
        }
    }

    /// Finds an assignment within all bounds; false when none exists.
    pub(crate) fn check(&mut self) -> bool {
        loop {
            let violated = (0..self.num_vars())
                .find(|&j| self.row_of[j].is_some() && (self.below_lower(j) || self.above_upper(j)));
            let Some(i) = violated else {
                return true;
            };
            let r = self.row_of[i].expect("basic variable has a row");
            let raise = self.below_lower(i);
            let entering = (0..self.num_vars()).find(|&j| {
                if self.row_of[j].is_some() {
                    return false;
                }
                let a = &self.rows[r][j];
                if a.is_zero() {
                    return false;
                }
                let up = a.is_positive() == raise;
                if up {
                    self.can_increase(j)
                } else {
                    self.can_decrease(j)
                }
            });
            let Some(j) = entering else {
                return false;
            };
            let target = if raise {
                self.lower[i].clone().expect("violated lower bound exists")
            } else {
                self.upper[i].clone().expect("violated upper bound exists")
            };
            self.pivot_and_update(i, j, target);
        }
    }

    fn pivot_and_update(&mut self, i: usize, j: usize, v: Q) {
        let r = self.row_of[i].expect("leaving variable is basic");
        let theta = (&v - &self.value[i]) / &self.rows[r][j];
        self.value[i] = v;
        self.value[j] += &theta;
        for (s, row) in self.rows.iter().enumerate() {
            if s != r && !row[j].is_zero() {
                let b = self.basis[s];
                self.value[b] += &row[j] * &theta;
            }
        }
        self.pivot(r, j);
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let leaving = self.basis[r];
        let a = self.rows[r][j].clone();
        // Solve row r for x_j: x_j = (x_leaving − Σ_{k≠j} a_k x_k) / a_j.
        let mut new_row: Vec<Q> = self.rows[r].iter().map(|c| -c / &a).collect();
        new_row[j] = Q::zero();
        new_row[leaving] = Q::from_integer(BigInt::from(1)) / &a;
        for s in 0..self.rows.len() {
            if s == r {
                continue;
            }
            let c = self.rows[s][j].clone();
            if c.is_zero() {
                continue;
            }
            let row = &mut self.rows[s];
            row[j] = Q::zero();
            for (k, nk) in new_row.iter().enumerate() {
                if !nk.is_zero() {
                    row[k] += &c * nk;
                }
            }
        }
        self.rows[r] = new_row;
        self.basis[r] = j;
        self.row_of[j] = Some(r);
        self.row_of[leaving] = None;
    }
}
