use num_bigint::BigInt;

use crate::formula::residue_pairs;
use crate::formula::{Atom, Formula};

/// Rewrites `a·x ≡_k b·y` as a disjunction of residue-class pairs.
/// Other atoms are returned unchanged.
pub fn expand_congruence(atom: &Atom) -> Formula {
    let Atom::CongBin { a, x, k, b, y } = atom else {
        return Formula::atom(atom.clone());
    };
    if x == y {
        return Formula::atom(atom.clone());
    }
    Formula::or(residue_pairs(a, k, b).into_iter().map(|(c1, c2)| {
        Formula::and([
            Formula::cong_un(x.clone(), k.clone(), c1),
            Formula::cong_un(y.clone(), k.clone(), c2),
        ])
    }))
}

/// Replaces every binary congruence in `phi` by its expansion.
pub fn expand_all(phi: &Formula) -> Formula {
    match phi {
        Formula::Atom(a @ Atom::CongBin { .. }) => expand_congruence(a),
        Formula::Atom(_) | Formula::True | Formula::False => phi.clone(),
        Formula::Not(g) => Formula::not(expand_all(g)),
        Formula::And(cs) => Formula::and(cs.iter().map(expand_all).collect::<Vec<_>>()),
        Formula::Or(cs) => Formula::or(cs.iter().map(expand_all).collect::<Vec<_>>()),
    }
}

pub(crate) fn lcm_all<'a>(ks: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    use num_integer::Integer;
    ks.into_iter().fold(BigInt::from(1), |l, k| l.lcm(k))
}
