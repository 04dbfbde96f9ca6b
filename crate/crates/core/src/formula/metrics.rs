use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{to_pnf, Atom, Formula};

/// Size parameters of the equality system a formula converts to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SizeMetrics {
    /// Bit length of the largest absolute constant, at least 1.
    pub d: u64,
    /// Largest number of equalities in any DNF disjunct.
    pub m_eq: u64,
    /// Free variables plus the largest number of fresh variables in any disjunct.
    pub n_vars: u64,
}

/// Metrics of the slack/fresh-variable equality system of `phi`.
///
/// Computed on the positive normal form without materializing the DNF:
/// conjunctions add up equality and fresh-variable counts, disjunctions
/// take the maximum. Per atom: an inequality is one equality with one
/// slack; `x ≡_k c` is `x = c + k·x'`; `a·x ≡_k b·y` is two equalities
/// `a·x = z + k·x'`, `b·y = z + k·y'` over three fresh variables.
pub fn size_metrics(phi: &Formula) -> SizeMetrics {
    let pnf = to_pnf(phi);
    let (m_eq, fresh, largest) = walk(&pnf);
    let d = largest.bits().max(1);
    SizeMetrics {
        d,
        m_eq,
        n_vars: pnf.free_vars().len() as u64 + fresh,
    }
}

fn walk(phi: &Formula) -> (u64, u64, BigInt) {
    match phi {
        Formula::True | Formula::False => (0, 0, BigInt::one()),
        Formula::Atom(a) => atom_metrics(a),
        Formula::Not(_) => unreachable!("input is in positive normal form"),
        Formula::And(cs) => cs.iter().map(walk).fold((0, 0, BigInt::one()), |acc, c| {
            (acc.0 + c.0, acc.1 + c.1, acc.2.max(c.2))
        }),
        Formula::Or(cs) => cs.iter().map(walk).fold((0, 0, BigInt::one()), |acc, c| {
            (acc.0.max(c.0), acc.1.max(c.1), acc.2.max(c.2))
        }),
    }
}

fn atom_metrics(a: &Atom) -> (u64, u64, BigInt) {
    match a {
        Atom::Ineq { term, bound, .. } => (1, 1, term.max_abs_coeff().max(bound.abs()).max(BigInt::one())),
        Atom::CongUn { k, c, .. } => (1, 1, k.abs().max(c.abs())),
        Atom::CongBin { a, k, b, .. } => (2, 3, a.abs().max(b.abs()).max(k.abs())),
    }
}
