use num_bigint::BigInt;
use num_traits::{One, Pow, Signed};

use crate::formula::{Atom, Conjunct, FreshNames, LinearTerm, Rel, VarId};

/// A conjunction of linear equalities `term = rhs` over natural variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualitySystem {
    pub equations: Vec<(LinearTerm, BigInt)>,
    /// Variables of the source conjunct.
    pub original: Vec<VarId>,
    /// Slack and auxiliary variables introduced by the conversion.
    pub fresh: Vec<VarId>,
}

impl EqualitySystem {
    pub fn num_vars(&self) -> usize {
        self.original.len() + self.fresh.len()
    }

    /// Largest absolute coefficient or right-hand side.
    pub fn largest_constant(&self) -> BigInt {
        self.equations
            .iter()
            .map(|(t, b)| t.max_abs_coeff().max(b.abs()))
            .max()
            .unwrap_or_default()
    }
}

/// Converts a conjunct to equalities over naturals: `t ≤ b` becomes
/// `t + s = b`, `t ≥ b` becomes `t − s = b`, `x ≡_k c` becomes
/// `x − k·x' = c` and `a·x ≡_k b·y` becomes `a·x − z − k·x' = 0`,
/// `b·y − z − k·y' = 0`. Solutions restricted to the original variables
/// are exactly the solutions of the conjunct.
pub fn normalize_to_equalities(c: &Conjunct) -> EqualitySystem {
    let mut original: Vec<VarId> = c.atoms.iter().flat_map(Atom::vars).collect();
    original.sort();
    original.dedup();
    let mut names = FreshNames::avoiding(original.iter());
    let mut fresh = Vec::new();
    let mut equations = Vec::new();
    for atom in &c.atoms {
        match atom {
            Atom::Ineq { term, rel, bound } => {
                let s = names.fresh("s");
                let sign = match rel {
                    Rel::Le => BigInt::one(),
                    Rel::Ge => -BigInt::one(),
                };
                let mut t = term.clone();
                t.add_coeff(s.clone(), sign);
                equations.push((t, bound.clone()));
                fresh.push(s);
            }
            Atom::CongUn { x, k, c } => {
                let q = names.fresh("q");
                let mut t = LinearTerm::var(x.clone());
                t.add_coeff(q.clone(), -k.clone());
                equations.push((t, c.clone()));
                fresh.push(q);
            }
            Atom::CongBin { a, x, k, b, y } => {
                let z = names.fresh("z");
                let qx = names.fresh("q");
                let qy = names.fresh("q");
                let mut l = LinearTerm::scaled(a.clone(), x.clone());
                l.add_coeff(z.clone(), -BigInt::one());
                l.add_coeff(qx.clone(), -k.clone());
                let mut r = LinearTerm::scaled(b.clone(), y.clone());
                r.add_coeff(z.clone(), -BigInt::one());
                r.add_coeff(qy.clone(), -k.clone());
                equations.push((l, BigInt::from(0)));
                equations.push((r, BigInt::from(0)));
                fresh.extend([z, qx, qy]);
            }
        }
    }
    EqualitySystem {
        equations,
        original,
        fresh,
    }
}

/// Bounds on base and period vectors of the solution set of an
/// equality system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearBound {
    pub base_max: BigInt,
    pub period_max: BigInt,
}

impl SemilinearBound {
    /// `((m+2)a+1)^n` and `(m·a+1)^n`, with `a` floored at 1.
    pub fn from_parameters(m_eq: u64, a: &BigInt, n_vars: u64) -> Self {
        let a = a.abs().max(BigInt::one());
        let m = BigInt::from(m_eq);
        let n = n_vars as u32;
        let base: BigInt = (&m + 2u32) * &a + 1u32;
        let period: BigInt = &m * &a + 1u32;
        SemilinearBound {
            base_max: Pow::pow(base, n),
            period_max: Pow::pow(period, n),
        }
    }
}

pub fn small_model_bound(sys: &EqualitySystem) -> SemilinearBound {
    SemilinearBound::from_parameters(
        sys.equations.len() as u64,
        &sys.largest_constant(),
        sys.num_vars() as u64,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;

    fn conj(f: Formula) -> Conjunct {
        let mut d = crate::formula::to_dnf(&f);
        assert_eq!(d.len(), 1);
        d.pop().unwrap()
    }

    #[test]
    fn slack_for_lower_bound() {
        let x = VarId::new("x");
        let sys = normalize_to_equalities(&conj(Formula::ge(LinearTerm::var(x.clone()), 1)));
        assert_eq!(sys.equations.len(), 1);
        assert_eq!(sys.num_vars(), 2);
        let (t, b) = &sys.equations[0];
        assert_eq!(b, &BigInt::from(1));
        assert_eq!(t.coeff(&x), BigInt::from(1));
        assert_eq!(t.coeff(&sys.fresh[0]), BigInt::from(-1));
    }

    #[test]
    fn residue_becomes_offset_multiple() {
        let x = VarId::new("x");
        let sys = normalize_to_equalities(&conj(Formula::cong_un(x.clone(), 3.into(), 2.into())));
        let (t, b) = &sys.equations[0];
        assert_eq!(b, &BigInt::from(2));
        assert_eq!(t.coeff(&sys.fresh[0]), BigInt::from(-3));
    }

    #[test]
    fn bound_formula_examples() {
        let b = SemilinearBound::from_parameters(1, &2.into(), 3);
        assert_eq!(b.base_max, BigInt::from(343));
        assert_eq!(b.period_max, BigInt::from(27));
        let empty = EqualitySystem {
            equations: vec![],
            original: vec![],
            fresh: vec![],
        };
        let b = small_model_bound(&empty);
        assert_eq!(b.base_max, BigInt::from(1));
        assert_eq!(b.period_max, BigInt::from(1));
        let b = SemilinearBound::from_parameters(2, &1.into(), 2);
        assert_eq!(b.base_max, BigInt::from(25));
    }
}
