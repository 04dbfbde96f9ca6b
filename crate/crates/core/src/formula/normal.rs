use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{Atom, Formula, Rel};

/// One disjunct of a DNF: a conjunction of atoms. Empty means `True`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Conjunct {
    pub atoms: Vec<Atom>,
}

impl Conjunct {
    pub fn to_formula(&self) -> Formula {
        Formula::and(self.atoms.iter().cloned().map(Formula::atom))
    }
}

/// Residue pairs `(c1, c2) ∈ [0,k)²` with `a·c1 ≡ b·c2 (mod k)`.
pub(crate) fn residue_pairs(a: &BigInt, k: &BigInt, b: &BigInt) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    let mut c1 = BigInt::zero();
    while &c1 < k {
        let mut c2 = BigInt::zero();
        while &c2 < k {
            if (a * &c1 - b * &c2).mod_floor(k).is_zero() {
                out.push((c1.clone(), c2.clone()));
            }
            c2 += 1;
        }
        c1 += 1;
    }
    out
}

/// Pushes negations into the atoms. The result contains no `Not`.
pub fn to_pnf(phi: &Formula) -> Formula {
    pnf(phi, true)
}

fn pnf(phi: &Formula, positive: bool) -> Formula {
    match phi {
        Formula::True if positive => Formula::True,
        Formula::True => Formula::False,
        Formula::False if positive => Formula::False,
        Formula::False => Formula::True,
        Formula::Atom(a) if positive => Formula::atom(a.clone()),
        Formula::Atom(a) => negate_atom(a),
        Formula::Not(g) => pnf(g, !positive),
        Formula::And(cs) => {
            let parts = cs.iter().map(|c| pnf(c, positive)).collect::<Vec<_>>();
            if positive {
                Formula::and(parts)
            } else {
                Formula::or(parts)
            }
        }
        Formula::Or(cs) => {
            let parts = cs.iter().map(|c| pnf(c, positive)).collect::<Vec<_>>();
            if positive {
                Formula::or(parts)
            } else {
                Formula::and(parts)
            }
        }
    }
}

fn negate_atom(a: &Atom) -> Formula {
    match a {
        Atom::Ineq { term, rel, bound } => match rel {
            Rel::Le => Formula::ineq(term.clone(), Rel::Ge, bound + 1),
            Rel::Ge => Formula::ineq(term.clone(), Rel::Le, bound - 1),
        },
        Atom::CongUn { x, k, c } => {
            let c = c.mod_floor(k);
            let mut others = Vec::new();
            let mut r = BigInt::zero();
            while &r < k {
                if r != c {
                    others.push(Formula::cong_un(x.clone(), k.clone(), r.clone()));
                }
                r += 1;
            }
            Formula::or(others)
        }
        Atom::CongBin { .. } => {
            let Formula::Atom(Atom::CongBin { a, x, k, b, y }) = Formula::atom(a.clone()) else {
                // Degenerate shapes normalize to unary congruences or constants.
                return pnf(&Formula::atom(a.clone()), false);
            };
            let good: HashSet<(BigInt, BigInt)> = residue_pairs(&a, &k, &b).into_iter().collect();
            let mut bad = Vec::new();
            let mut c1 = BigInt::zero();
            while c1 < k {
                let mut c2 = BigInt::zero();
                while c2 < k {
                    if !good.contains(&(c1.clone(), c2.clone())) {
                        bad.push(Formula::and([
                            Formula::cong_un(x.clone(), k.clone(), c1.clone()),
                            Formula::cong_un(y.clone(), k.clone(), c2.clone()),
                        ]));
                    }
                    c2 += 1;
                }
                c1 += 1;
            }
            Formula::or(bad)
        }
    }
}

/// Disjunctive normal form of a negation-free formula. Formulas that
/// still contain negations are converted with [`to_pnf`] first. The
/// output can be exponentially larger than the input.
pub fn to_dnf(phi: &Formula) -> Vec<Conjunct> {
    let owned;
    let phi = if has_negation(phi) {
        owned = to_pnf(phi);
        &owned
    } else {
        phi
    };
    let mut memo = HashMap::new();
    dnf(phi, &mut memo).as_ref().clone()
}

fn has_negation(phi: &Formula) -> bool {
    match phi {
        Formula::Not(_) => true,
        Formula::And(cs) | Formula::Or(cs) => cs.iter().any(has_negation),
        _ => false,
    }
}

fn dnf<'a>(phi: &'a Formula, memo: &mut HashMap<&'a Formula, Rc<Vec<Conjunct>>>) -> Rc<Vec<Conjunct>> {
    if let Some(hit) = memo.get(phi) {
        return hit.clone();
    }
    let out = match phi {
        Formula::True => vec![Conjunct { atoms: vec![] }],
        Formula::False => vec![],
        Formula::Atom(a) => vec![Conjunct { atoms: vec![a.clone()] }],
        Formula::Not(_) => unreachable!("negations are removed before conversion"),
        Formula::Or(cs) => {
            let mut out = Vec::new();
            for c in cs {
                out.extend(dnf(c, memo).iter().cloned());
            }
            dedup(out)
        }
        Formula::And(cs) => {
            let mut acc = vec![Conjunct { atoms: vec![] }];
            for c in cs {
                let part = dnf(c, memo);
                let mut next = Vec::with_capacity(acc.len() * part.len());
                for l in &acc {
                    for r in part.iter() {
                        let mut atoms = l.atoms.clone();
                        atoms.extend(r.atoms.iter().cloned());
                        atoms.sort();
                        atoms.dedup();
                        next.push(Conjunct { atoms });
                    }
                }
                acc = dedup(next);
                if acc.is_empty() {
                    break;
                }
            }
            acc
        }
    };
    let out = Rc::new(out);
    memo.insert(phi, out.clone());
    out
}

fn dedup(cs: Vec<Conjunct>) -> Vec<Conjunct> {
    let mut seen = HashSet::new();
    cs.into_iter().filter(|c| seen.insert(c.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Assignment, LinearTerm, VarId};

    fn v(s: &str) -> VarId {
        VarId::new(s)
    }

    fn x_ge(b: i64) -> Formula {
        Formula::ge(LinearTerm::var(v("x")), b)
    }

    #[test]
    fn pnf_examples() {
        let f = Formula::Not(Box::new(Formula::le(LinearTerm::var(v("x")), 3)));
        assert_eq!(to_pnf(&f), x_ge(4));
        let g = Formula::Not(Box::new(Formula::Not(Box::new(x_ge(1)))));
        assert_eq!(to_pnf(&g), x_ge(1));
        let h = Formula::Not(Box::new(Formula::cong_un(v("x"), 2.into(), 0.into())));
        assert_eq!(to_pnf(&h), Formula::cong_un(v("x"), 2.into(), 1.into()));
    }

    #[test]
    fn negated_congbin_matches_semantics() {
        let f = Formula::cong_bin(2.into(), v("x"), 4.into(), 3.into(), v("y"));
        let n = to_pnf(&Formula::not(f.clone()));
        for x in 0..8u64 {
            for y in 0..8u64 {
                let s = Assignment::from_pairs([("x", x), ("y", y)]);
                assert_eq!(n.eval(&s).unwrap(), !f.eval(&s).unwrap());
            }
        }
    }

    #[test]
    fn dnf_distributes() {
        let a = Formula::ge(LinearTerm::var(v("a")), 1);
        let b = Formula::ge(LinearTerm::var(v("b")), 1);
        let c = Formula::ge(LinearTerm::var(v("c")), 1);
        let f = Formula::and([Formula::or([a.clone(), b.clone()]), c.clone()]);
        let d = to_dnf(&f);
        assert_eq!(d.len(), 2);
        assert_eq!(to_dnf(&x_ge(1)).len(), 1);
        assert_eq!(to_dnf(&Formula::True), vec![Conjunct { atoms: vec![] }]);
        assert!(to_dnf(&Formula::False).is_empty());
    }

    #[test]
    fn residue_pairs_count() {
        assert_eq!(residue_pairs(&2.into(), &4.into(), &2.into()).len(), 8);
        assert_eq!(residue_pairs(&1.into(), &2.into(), &1.into()).len(), 2);
    }
}
