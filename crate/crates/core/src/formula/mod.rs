//! Quantifier-free Presburger formulas over natural-valued variables.
//!
//! Formulas are immutable trees. The smart constructors on [`Formula`]
//! fold constants and keep every atom within its invariants; the raw enum
//! variants stay public so tests can build unnormalized shapes.

mod metrics;
mod normal;

pub use metrics::{size_metrics, SizeMetrics};
pub use normal::{to_dnf, to_pnf, Conjunct};
pub(crate) use normal::residue_pairs;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A variable name. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(Arc<str>);

impl VarId {
    /// Panics on an empty name.
    pub fn new(name: impl AsRef<str>) -> Self {
        let name = name.as_ref();
        assert!(!name.is_empty(), "variable names must be nonempty");
        VarId(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VarId {
    fn from(s: &str) -> Self {
        VarId::new(s)
    }
}

/// `Σ a_i x_i` with no zero coefficients stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearTerm {
    coeffs: BTreeMap<VarId, BigInt>,
}

impl LinearTerm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn var(x: VarId) -> Self {
        Self::scaled(BigInt::one(), x)
    }

    pub fn scaled(c: BigInt, x: VarId) -> Self {
        let mut t = Self::zero();
        t.add_coeff(x, c);
        t
    }

    pub fn from_pairs<I, C>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (VarId, C)>,
        C: Into<BigInt>,
    {
        let mut t = Self::zero();
        for (x, c) in pairs {
            t.add_coeff(x, c.into());
        }
        t
    }

    pub fn add_coeff(&mut self, x: VarId, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(x.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&x);
        }
    }

    pub fn coeff(&self, x: &VarId) -> BigInt {
        self.coeffs.get(x).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarId, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn vars(&self) -> impl Iterator<Item = &VarId> {
        self.coeffs.keys()
    }

    pub fn contains(&self, x: &VarId) -> bool {
        self.coeffs.contains_key(x)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn plus(&self, other: &LinearTerm) -> LinearTerm {
        let mut t = self.clone();
        for (x, c) in other.iter() {
            t.add_coeff(x.clone(), c.clone());
        }
        t
    }

    pub fn minus(&self, other: &LinearTerm) -> LinearTerm {
        self.plus(&other.negated())
    }

    pub fn scale(&self, c: &BigInt) -> LinearTerm {
        if c.is_zero() {
            return Self::zero();
        }
        LinearTerm {
            coeffs: self.coeffs.iter().map(|(x, a)| (x.clone(), a * c)).collect(),
        }
    }

    pub fn negated(&self) -> LinearTerm {
        self.scale(&BigInt::from(-1))
    }

    /// Coefficients restricted to `keep`.
    pub fn project(&self, keep: &BTreeSet<VarId>) -> LinearTerm {
        LinearTerm {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(x, _)| keep.contains(*x))
                .map(|(x, c)| (x.clone(), c.clone()))
                .collect(),
        }
    }

    /// Gcd of all coefficients; zero for the zero term.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .values()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    pub fn eval(&self, sigma: &Assignment) -> Result<BigInt> {
        let mut acc = BigInt::zero();
        for (x, c) in &self.coeffs {
            acc += c * sigma.value(x)?;
        }
        Ok(acc)
    }

    /// Splits off `x`: returns the coefficient of `x` and the remaining term.
    pub fn split(&self, x: &VarId) -> (BigInt, LinearTerm) {
        let mut rest = self.clone();
        let c = rest.coeffs.remove(x).unwrap_or_default();
        (c, rest)
    }

    pub fn rename(&self, map: &BTreeMap<VarId, VarId>) -> LinearTerm {
        let mut t = Self::zero();
        for (x, c) in &self.coeffs {
            t.add_coeff(map.get(x).unwrap_or(x).clone(), c.clone());
        }
        t
    }
}

impl fmt::Debug for LinearTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LinearTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (x, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if mag.is_one() {
                write!(f, "{x}")?;
            } else {
                write!(f, "{mag}*{x}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Le,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// `term rel bound`
    Ineq {
        term: LinearTerm,
        rel: Rel,
        bound: BigInt,
    },
    /// `a·x ≡ b·y (mod k)`
    CongBin {
        a: BigInt,
        x: VarId,
        k: BigInt,
        b: BigInt,
        y: VarId,
    },
    /// `x ≡ c (mod k)`
    CongUn { x: VarId, k: BigInt, c: BigInt },
}

impl Atom {
    /// Checks `k ≥ 1` and `0 ≤ c < k`.
    pub fn is_well_formed(&self) -> bool {
        match self {
            Atom::Ineq { .. } => true,
            Atom::CongBin { k, .. } => k.is_positive(),
            Atom::CongUn { k, c, .. } => k.is_positive() && !c.is_negative() && c < k,
        }
    }

    pub fn vars(&self) -> Vec<VarId> {
        match self {
            Atom::Ineq { term, .. } => term.vars().cloned().collect(),
            Atom::CongBin { x, y, .. } if x == y => vec![x.clone()],
            Atom::CongBin { x, y, .. } => vec![x.clone(), y.clone()],
            Atom::CongUn { x, .. } => vec![x.clone()],
        }
    }

    pub fn mentions(&self, v: &VarId) -> bool {
        match self {
            Atom::Ineq { term, .. } => term.contains(v),
            Atom::CongBin { x, y, .. } => x == v || y == v,
            Atom::CongUn { x, .. } => x == v,
        }
    }

    pub fn holds(&self, sigma: &Assignment) -> Result<bool> {
        Ok(match self {
            Atom::Ineq { term, rel, bound } => {
                let v = term.eval(sigma)?;
                match rel {
                    Rel::Le => v <= *bound,
                    Rel::Ge => v >= *bound,
                }
            }
            Atom::CongBin { a, x, k, b, y } => {
                let l = a * sigma.value(x)?;
                let r = b * sigma.value(y)?;
                (l - r).mod_floor(k).is_zero()
            }
            Atom::CongUn { x, k, c } => sigma.value(x)?.mod_floor(k) == *c,
        })
    }

    fn rename(&self, map: &BTreeMap<VarId, VarId>) -> Atom {
        let r = |v: &VarId| map.get(v).unwrap_or(v).clone();
        match self {
            Atom::Ineq { term, rel, bound } => Atom::Ineq {
                term: term.rename(map),
                rel: *rel,
                bound: bound.clone(),
            },
            Atom::CongBin { a, x, k, b, y } => Atom::CongBin {
                a: a.clone(),
                x: r(x),
                k: k.clone(),
                b: b.clone(),
                y: r(y),
            },
            Atom::CongUn { x, k, c } => Atom::CongUn {
                x: r(x),
                k: k.clone(),
                c: c.clone(),
            },
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Ineq { term, rel, bound } => {
                let op = match rel {
                    Rel::Le => "<=",
                    Rel::Ge => ">=",
                };
                write!(f, "{term} {op} {bound}")
            }
            Atom::CongBin { a, x, k, b, y } => write!(f, "{a}*{x} = {b}*{y} (mod {k})"),
            Atom::CongUn { x, k, c } => write!(f, "{x} = {c} (mod {k})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    /// Normalizing atom constructor.
    pub fn atom(a: Atom) -> Formula {
        match a {
            Atom::Ineq { term, rel, bound } => Formula::ineq(term, rel, bound),
            Atom::CongBin { a, x, k, b, y } => Formula::cong_bin(a, x, k, b, y),
            Atom::CongUn { x, k, c } => Formula::cong_un(x, k, c),
        }
    }

    /// `term rel bound`, folded when the truth value is fixed over ℕ.
    pub fn ineq(term: LinearTerm, rel: Rel, bound: BigInt) -> Formula {
        let nonneg = term.iter().all(|(_, c)| c.is_positive());
        let nonpos = term.iter().all(|(_, c)| c.is_negative());
        // term ≥ 0 on ℕ when every coefficient is positive, ≤ 0 when negative.
        let decided = match rel {
            Rel::Le if nonneg && bound.is_negative() => Some(false),
            Rel::Ge if nonneg && !bound.is_positive() => Some(true),
            Rel::Ge if nonpos && bound.is_positive() => Some(false),
            Rel::Le if nonpos && !bound.is_negative() => Some(true),
            _ => None,
        };
        match decided {
            Some(true) => Formula::True,
            Some(false) => Formula::False,
            None => Formula::Atom(Atom::Ineq { term, rel, bound }),
        }
    }

    pub fn le(term: LinearTerm, bound: impl Into<BigInt>) -> Formula {
        Formula::ineq(term, Rel::Le, bound.into())
    }

    pub fn ge(term: LinearTerm, bound: impl Into<BigInt>) -> Formula {
        Formula::ineq(term, Rel::Ge, bound.into())
    }

    /// `term = bound` as a pair of inequalities.
    pub fn eq(term: LinearTerm, bound: impl Into<BigInt>) -> Formula {
        let bound = bound.into();
        Formula::and([
            Formula::le(term.clone(), bound.clone()),
            Formula::ge(term, bound),
        ])
    }

    /// `x ≡ c (mod k)`; reduces `c` modulo `k`. Panics when `k < 1`.
    pub fn cong_un(x: VarId, k: BigInt, c: BigInt) -> Formula {
        assert!(k.is_positive(), "modulus must be positive");
        if k.is_one() {
            return Formula::True;
        }
        let c = c.mod_floor(&k);
        Formula::Atom(Atom::CongUn { x, k, c })
    }

    /// `a·x ≡ c (mod k)` as a disjunction of residue classes of `x`.
    pub fn cong_scaled(a: BigInt, x: VarId, k: BigInt, c: BigInt) -> Formula {
        assert!(k.is_positive(), "modulus must be positive");
        let a = a.mod_floor(&k);
        let c = c.mod_floor(&k);
        if a.is_one() {
            return Formula::cong_un(x, k, c);
        }
        let mut classes = Vec::new();
        let mut r = BigInt::zero();
        while r < k {
            if (&a * &r - &c).mod_floor(&k).is_zero() {
                classes.push(Formula::cong_un(x.clone(), k.clone(), r.clone()));
            }
            r += 1;
        }
        Formula::or(classes)
    }

    /// `a·x ≡ b·y (mod k)`; coefficients reduced modulo `k`, degenerate
    /// shapes rewritten to unary congruences.
    pub fn cong_bin(a: BigInt, x: VarId, k: BigInt, b: BigInt, y: VarId) -> Formula {
        assert!(k.is_positive(), "modulus must be positive");
        if k.is_one() {
            return Formula::True;
        }
        let a = a.mod_floor(&k);
        let b = b.mod_floor(&k);
        if x == y {
            return Formula::cong_scaled(a - b, x, k, BigInt::zero());
        }
        match (a.is_zero(), b.is_zero()) {
            (true, true) => Formula::True,
            (true, false) => Formula::cong_scaled(b, y, k, BigInt::zero()),
            (false, true) => Formula::cong_scaled(a, x, k, BigInt::zero()),
            (false, false) => Formula::Atom(Atom::CongBin { a, x, k, b, y }),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        match f {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(g) => *g,
            g => Formula::Not(Box::new(g)),
        }
    }

    /// Flattening conjunction; drops `True`, short-circuits `False`, dedups.
    pub fn and(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out: Vec<Formula> = Vec::new();
        let push = |g: Formula, out: &mut Vec<Formula>| {
            if !out.contains(&g) {
                out.push(g);
            }
        };
        for p in parts {
            match p {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(cs) => {
                    for c in cs {
                        push(c, &mut out);
                    }
                }
                g => push(g, &mut out),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    /// Flattening disjunction; drops `False`, short-circuits `True`, dedups.
    pub fn or(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out: Vec<Formula> = Vec::new();
        for p in parts {
            match p {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(cs) => {
                    for c in cs {
                        if !out.contains(&c) {
                            out.push(c);
                        }
                    }
                }
                g => {
                    if !out.contains(&g) {
                        out.push(g);
                    }
                }
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or([Formula::not(a), b])
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::or([
            Formula::and([a.clone(), b.clone()]),
            Formula::and([Formula::not(a), Formula::not(b)]),
        ])
    }

    pub fn xor(a: Formula, b: Formula) -> Formula {
        Formula::or([
            Formula::and([a.clone(), Formula::not(b.clone())]),
            Formula::and([Formula::not(a), b]),
        ])
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Formula::True)
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Formula::False)
    }

    pub fn eval(&self, sigma: &Assignment) -> Result<bool> {
        Ok(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => a.holds(sigma)?,
            Formula::Not(g) => !g.eval(sigma)?,
            Formula::And(cs) => {
                for c in cs {
                    if !c.eval(sigma)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(cs) => {
                for c in cs {
                    if c.eval(sigma)? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    pub fn free_vars(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<VarId>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => out.extend(a.vars()),
            Formula::Not(g) => g.collect_vars(out),
            Formula::And(cs) | Formula::Or(cs) => cs.iter().for_each(|c| c.collect_vars(out)),
        }
    }

    /// All atoms in tree order, duplicates included.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => out.push(a),
            Formula::Not(g) => g.collect_atoms(out),
            Formula::And(cs) | Formula::Or(cs) => cs.iter().for_each(|c| c.collect_atoms(out)),
        }
    }

    /// Number of tree nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 1,
            Formula::Not(g) => 1 + g.size(),
            Formula::And(cs) | Formula::Or(cs) => 1 + cs.iter().map(Formula::size).sum::<usize>(),
        }
    }

    /// Replaces `var` by the natural `value` and folds the affected atoms.
    pub fn substitute(&self, var: &VarId, value: &BigInt) -> Formula {
        assert!(!value.is_negative(), "substituted values must be natural");
        self.map_atoms(&mut |a| {
            if !a.mentions(var) {
                return Formula::Atom(a.clone());
            }
            substitute_atom(a, var, value)
        })
    }

    pub fn substitute_all(&self, sigma: &Assignment) -> Formula {
        self.map_atoms(&mut |a| {
            let mut f = Formula::Atom(a.clone());
            for v in a.vars() {
                if let Some(val) = sigma.get(&v) {
                    f = f.substitute(&v, val);
                }
            }
            f
        })
    }

    /// Renames variables; names missing from `map` are kept.
    pub fn rename(&self, map: &BTreeMap<VarId, VarId>) -> Formula {
        self.map_atoms(&mut |a| Formula::atom(a.rename(map)))
    }

    /// Rebuilds the tree through the smart constructors.
    pub fn normalized(&self) -> Formula {
        self.map_atoms(&mut |a| Formula::atom(a.clone()))
    }

    fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Formula) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => f(a),
            Formula::Not(g) => Formula::not(g.map_atoms(f)),
            Formula::And(cs) => Formula::and(cs.iter().map(|c| c.map_atoms(f)).collect::<Vec<_>>()),
            Formula::Or(cs) => Formula::or(cs.iter().map(|c| c.map_atoms(f)).collect::<Vec<_>>()),
        }
    }
}

fn substitute_atom(a: &Atom, var: &VarId, value: &BigInt) -> Formula {
    match a {
        Atom::Ineq { term, rel, bound } => {
            let (c, rest) = term.split(var);
            let bound = bound - c * value;
            if rest.is_zero() {
                let holds = match rel {
                    Rel::Le => !bound.is_negative(),
                    Rel::Ge => !bound.is_positive(),
                };
                return if holds { Formula::True } else { Formula::False };
            }
            Formula::ineq(rest, *rel, bound)
        }
        Atom::CongBin { a: ca, x, k, b: cb, y } => {
            if x == var && y == var {
                let ok = ((ca - cb) * value).mod_floor(k).is_zero();
                return if ok { Formula::True } else { Formula::False };
            }
            if x == var {
                Formula::cong_scaled(cb.clone(), y.clone(), k.clone(), ca * value)
            } else {
                Formula::cong_scaled(ca.clone(), x.clone(), k.clone(), cb * value)
            }
        }
        Atom::CongUn { k, c, .. } => {
            if &value.mod_floor(k) == c {
                Formula::True
            } else {
                Formula::False
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(g) => write!(f, "!({g})"),
            Formula::And(cs) | Formula::Or(cs) => {
                let sep = if matches!(self, Formula::And(_)) { " & " } else { " | " };
                f.write_str("(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Natural-number values for variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: BTreeMap<VarId, BigInt>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Convenience constructor for tests and examples.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, u64)>) -> Self {
        let mut a = Self::new();
        for (x, v) in pairs {
            a.insert(VarId::new(x), BigInt::from(v));
        }
        a
    }

    /// Panics on a negative value.
    pub fn insert(&mut self, x: VarId, v: BigInt) {
        assert!(!v.is_negative(), "assignments hold natural numbers");
        self.values.insert(x, v);
    }

    pub fn get(&self, x: &VarId) -> Option<&BigInt> {
        self.values.get(x)
    }

    pub fn value(&self, x: &VarId) -> Result<&BigInt> {
        self.values
            .get(x)
            .ok_or_else(|| Error::UnboundVariable(x.clone()))
    }

    pub fn remove(&mut self, x: &VarId) -> Option<BigInt> {
        self.values.remove(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarId, &BigInt)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Copy restricted to `keep`.
    pub fn restrict<'a>(&self, keep: impl IntoIterator<Item = &'a VarId>) -> Assignment {
        let mut out = Assignment::new();
        for x in keep {
            if let Some(v) = self.values.get(x) {
                out.values.insert(x.clone(), v.clone());
            }
        }
        out
    }

    pub fn extend(&mut self, other: &Assignment) {
        for (x, v) in other.iter() {
            self.values.insert(x.clone(), v.clone());
        }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, v)) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}: {v}")?;
        }
        f.write_str("}")
    }
}

/// Generates variable names that do not clash with a given set.
#[derive(Clone, Debug, Default)]
pub struct FreshNames {
    used: BTreeSet<String>,
    counter: usize,
}

impl FreshNames {
    pub fn avoiding<'a>(vars: impl IntoIterator<Item = &'a VarId>) -> Self {
        FreshNames {
            used: vars.into_iter().map(|v| v.name().to_string()).collect(),
            counter: 0,
        }
    }

    pub fn fresh(&mut self, stem: &str) -> VarId {
        loop {
            let name = format!("{stem}!{}", self.counter);
            self.counter += 1;
            if self.used.insert(name.clone()) {
                return VarId::new(name);
            }
        }
    }
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

    #[test]
    fn eval_examples() {
        let f = Formula::ge(t(&[("x", 1), ("y", 1)]), 2);
        assert!(f.eval(&Assignment::from_pairs([("x", 1), ("y", 1)])).unwrap());
        let g = Formula::cong_un(v("x"), 2.into(), 0.into());
        assert!(g.eval(&Assignment::from_pairs([("x", 0)])).unwrap());
        let h = Formula::and([
            Formula::eq(t(&[("z", 1), ("x", -1), ("y", -2)]), 0),
            Formula::le(t(&[("z", 1)]), 4),
        ]);
        assert!(h
            .eval(&Assignment::from_pairs([("x", 1), ("y", 1), ("z", 3)]))
            .unwrap());
    }

    #[test]
    fn eval_reports_unbound() {
        let f = Formula::ge(t(&[("x", 1)]), 1);
        assert!(matches!(
            f.eval(&Assignment::new()),
            Err(Error::UnboundVariable(_))
        ));
    }

    #[test]
    fn free_vars_examples() {
        let eq = Formula::eq(t(&[("x", 1), ("y", -1)]), 0);
        assert_eq!(eq.free_vars(), [v("x"), v("y")].into_iter().collect());
        assert!(Formula::True.free_vars().is_empty());
    }

    #[test]
    fn substitute_examples() {
        let f = Formula::cong_bin(1.into(), v("x"), 2.into(), 1.into(), v("y"));
        assert_eq!(
            f.substitute(&v("x"), &4.into()),
            Formula::cong_un(v("y"), 2.into(), 0.into())
        );
        let g = Formula::ge(t(&[("x", 1), ("y", 2)]), 5);
        assert_eq!(
            g.substitute(&v("x"), &0.into()),
            Formula::ge(t(&[("y", 2)]), 5)
        );
        let h = Formula::le(t(&[("y", 1)]), 3);
        assert_eq!(h.substitute(&v("x"), &7.into()), h);
    }

    #[test]
    fn constructors_fold_trivial_atoms() {
        assert_eq!(Formula::ge(t(&[("x", 1)]), 0), Formula::True);
        assert_eq!(Formula::le(t(&[("x", 2)]), -1), Formula::False);
        assert_eq!(Formula::ge(t(&[("x", -1)]), 1), Formula::False);
        assert_eq!(Formula::cong_un(v("x"), 1.into(), 0.into()), Formula::True);
        assert_eq!(
            Formula::cong_un(v("x"), 3.into(), 7.into()),
            Formula::Atom(Atom::CongUn { x: v("x"), k: 3.into(), c: 1.into() })
        );
        // x ≡_4 3x, i.e. 2x ≡_4 0: x even.
        let f = Formula::cong_bin(1.into(), v("x"), 4.into(), 3.into(), v("x"));
        for x in 0..12u64 {
            let s = Assignment::from_pairs([("x", x)]);
            assert_eq!(f.eval(&s).unwrap(), x % 2 == 0, "x = {x}");
        }
    }

    #[test]
    fn and_or_flatten_and_dedup() {
        let a = Formula::ge(t(&[("x", 1)]), 1);
        let b = Formula::le(t(&[("y", 1)]), 3);
        let f = Formula::and([a.clone(), Formula::and([b.clone(), a.clone()]), Formula::True]);
        assert_eq!(f, Formula::And(vec![a.clone(), b.clone()]));
        assert_eq!(Formula::or([a.clone(), Formula::True]), Formula::True);
        assert_eq!(Formula::or([Formula::False, b.clone()]), b);
    }

    #[test]
    fn fresh_names_avoid_existing() {
        let used = [v("s!0"), v("x")];
        let mut fresh = FreshNames::avoiding(used.iter());
        assert_eq!(fresh.fresh("s"), v("s!1"));
        assert_eq!(fresh.fresh("s"), v("s!2"));
    }
}
