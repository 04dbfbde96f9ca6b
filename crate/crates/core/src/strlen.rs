//! Length constraints of string benchmarks: monadic length predicates
//! become semilinear sets and then regular membership constraints.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::decomposition::DecomposeOptions;
use crate::error::{Error, Result};
use crate::formula::{to_dnf, to_pnf, Assignment, Formula, VarId};
use crate::lia::Solver;
use crate::mondec::{check_monadic, decompose_full_with, minimal_bound_search, DivAtomSet};
use crate::smtlib::{length_abstraction, print_expr, SExp, SourceSpan};

/// Finite union of progressions `{base + j·period | j ≥ 0}`; period 0 is
/// the singleton `{base}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SemilinearSet {
    pub progressions: Vec<(u64, u64)>,
}

impl SemilinearSet {
    pub fn all() -> Self {
        SemilinearSet {
            progressions: vec![(0, 1)],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.progressions.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.progressions.iter().any(|&(a, b)| match b {
            0 => n == a,
            _ => n >= a && (n - a).is_multiple_of(b),
        })
    }

    pub fn max_base(&self) -> u64 {
        self.progressions.iter().map(|p| p.0).max().unwrap_or(0)
    }

    /// `x` lies in the set.
    pub fn to_formula(&self, x: &VarId) -> Formula {
        Formula::or(self.progressions.iter().map(|&(a, b)| {
            let t = crate::formula::LinearTerm::var(x.clone());
            match b {
                0 => Formula::eq(t, a),
                _ => Formula::and([
                    Formula::ge(t, a),
                    Formula::cong_un(x.clone(), b.into(), a.into()),
                ]),
            }
        }))
    }

    pub fn max_period(&self) -> u64 {
        self.progressions.iter().map(|p| p.1).max().unwrap_or(0)
    }
}

impl fmt::Display for SemilinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .progressions
            .iter()
            .map(|&(a, b)| if b == 0 { a.to_string() } else { format!("{a}+{b}j") })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Largest threshold enumerated point by point.
pub const MAX_THRESHOLD: u64 = 1 << 20;

/// Solution set of a one-variable formula. Below the validated bound the
/// points are enumerated; above it the set repeats with the lcm of the
/// moduli as period.
pub fn monadic_to_semilinear(delta: &Formula, solver: &Solver) -> Result<SemilinearSet> {
    let delta = delta.normalized();
    let vars: Vec<VarId> = delta.free_vars().into_iter().collect();
    let x = match vars.as_slice() {
        [] => {
            return Ok(if delta.eval(&Assignment::new())? {
                SemilinearSet::all()
            } else {
                SemilinearSet::default()
            });
        }
        [x] => x.clone(),
        _ => return Err(Error::NotMonadic(vars.iter().map(|v| v.name().to_string()).collect())),
    };
    let threshold = minimal_bound_search(&delta, &x, solver)?;
    let t = threshold
        .to_u64()
        .filter(|t| *t <= MAX_THRESHOLD)
        .ok_or_else(|| Error::TooLarge {
            estimated: threshold.to_string(),
            cap: MAX_THRESHOLD as usize,
        })?;
    let period = DivAtomSet::of(&delta, &x)
        .period(&x)
        .to_u64()
        .filter(|l| *l <= MAX_THRESHOLD)
        .ok_or_else(|| Error::TooLarge {
            estimated: "period".into(),
            cap: MAX_THRESHOLD as usize,
        })?;
    let holds = |n: u64| -> Result<bool> {
        let mut s = Assignment::new();
        s.insert(x.clone(), BigInt::from(n));
        delta.eval(&s)
    };
    let mut singles: BTreeSet<u64> = BTreeSet::new();
    for n in 0..t {
        if holds(n)? {
            singles.insert(n);
        }
    }
    let mut progs: Vec<(u64, u64)> = Vec::new();
    for r in 0..period {
        let first = t + (r + period - t % period) % period;
        if holds(first)? {
            let mut base = first;
            // Absorb singletons that continue the progression downwards.
            while base >= period && singles.remove(&(base - period)) {
                base -= period;
            }
            progs.push((base, period));
        }
    }
    progs.extend(singles.into_iter().map(|n| (n, 0)));
    progs.sort();
    let set = SemilinearSet { progressions: progs };
    for n in 0..t + 2 * period {
        if set.contains(n) != holds(n)? {
            return Err(Error::EquivalenceCheckFailed(format!(
                "semilinear set {set} disagrees with `{delta}` at {n}"
            )));
        }
    }
    Ok(set)
}

/// Regular expressions over an unspecified alphabet, as far as lengths go.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regex {
    /// The empty language.
    None,
    /// All words of exactly this length; `Sigma(0)` is the empty word.
    Sigma(u64),
    Concat(Vec<Regex>),
    Union(Vec<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    /// SMT-LIB 2 string-theory syntax.
    pub fn to_smtlib(&self) -> String {
        match self {
            Regex::None => "re.none".into(),
            Regex::Sigma(0) => "(str.to_re \"\")".into(),
            Regex::Sigma(1) => "re.allchar".into(),
            Regex::Sigma(n) => format!("((_ re.loop {n} {n}) re.allchar)"),
            Regex::Concat(rs) => format!("(re.++ {})", join(rs)),
            Regex::Union(rs) => format!("(re.union {})", join(rs)),
            Regex::Star(r) => format!("(re.* {})", r.to_smtlib()),
        }
    }

    /// `out[n]` tells whether some word of length `n ≤ max` is accepted.
    pub fn lengths(&self, max: usize) -> Vec<bool> {
        let mut out = vec![false; max + 1];
        match self {
            Regex::None => {}
            Regex::Sigma(n) => {
                if let Some(slot) = out.get_mut(*n as usize) {
                    *slot = true;
                }
            }
            Regex::Union(rs) => {
                for r in rs {
                    for (o, l) in out.iter_mut().zip(r.lengths(max)) {
                        *o |= l;
                    }
                }
            }
            Regex::Concat(rs) => {
                out[0] = true;
                for r in rs {
                    out = sum_lengths(&out, &r.lengths(max));
                }
            }
            Regex::Star(r) => {
                let step = r.lengths(max);
                out[0] = true;
                loop {
                    let next = sum_lengths(&out, &step);
                    let merged: Vec<bool> = out.iter().zip(&next).map(|(a, b)| *a || *b).collect();
                    if merged == out {
                        break;
                    }
                    out = merged;
                }
            }
        }
        out
    }
}

fn join(rs: &[Regex]) -> String {
    rs.iter().map(Regex::to_smtlib).collect::<Vec<_>>().join(" ")
}

fn sum_lengths(a: &[bool], b: &[bool]) -> Vec<bool> {
    let mut out = vec![false; a.len()];
    for (i, _) in a.iter().enumerate().filter(|(_, x)| **x) {
        for (j, _) in b.iter().enumerate().filter(|(_, y)| **y) {
            if let Some(o) = out.get_mut(i + j) {
                *o = true;
            }
        }
    }
    out
}

fn numeral_arg(e: &SExp) -> Result<u64> {
    e.as_numeral()
        .and_then(|n| n.to_u64())
        .ok_or_else(|| Error::InvalidInput(format!("expected a small numeral, found {}", e.describe())))
}

/// Length shape of an SMT-LIB regular expression: string literals and
/// character ranges keep only their length. Intersection and complement
/// are rejected.
pub fn regex_from_sexp(e: &SExp) -> Result<Regex> {
    let unsupported = || Error::InvalidInput(format!("unsupported regular expression {}", e.describe()));
    if let Some(s) = e.as_symbol() {
        return match s {
            "re.none" => Ok(Regex::None),
            "re.allchar" => Ok(Regex::Sigma(1)),
            "re.all" => Ok(Regex::Star(Box::new(Regex::Sigma(1)))),
            _ => Err(unsupported()),
        };
    }
    let items = e.as_list().ok_or_else(unsupported)?;
    if let Some(op) = items.first().and_then(SExp::as_list) {
        if op.len() == 4 && op[0].as_symbol() == Some("_") && op[1].as_symbol() == Some("re.loop") && items.len() == 2 {
            let (lo, hi) = (numeral_arg(&op[2])?, numeral_arg(&op[3])?);
            let r = regex_from_sexp(&items[1])?;
            let reps = (lo..=hi).map(|n| Regex::Concat(vec![r.clone(); n as usize])).collect();
            return Ok(Regex::Union(reps));
        }
        return Err(unsupported());
    }
    let args = &items[1..];
    let subs = || args.iter().map(regex_from_sexp).collect::<Result<Vec<_>>>();
    match e.head() {
        Some("str.to_re") if args.len() == 1 => match &args[0] {
            SExp::Str(s, _) => Ok(Regex::Sigma(s.chars().count() as u64)),
            _ => Err(unsupported()),
        },
        Some("re.range") => Ok(Regex::Sigma(1)),
        Some("re.++") => Ok(Regex::Concat(subs()?)),
        Some("re.union") => Ok(Regex::Union(subs()?)),
        Some("re.*") if args.len() == 1 => Ok(Regex::Star(Box::new(regex_from_sexp(&args[0])?))),
        Some("re.+") if args.len() == 1 => {
            let r = regex_from_sexp(&args[0])?;
            Ok(Regex::Concat(vec![r.clone(), Regex::Star(Box::new(r))]))
        }
        Some("re.opt") if args.len() == 1 => Ok(Regex::Union(vec![Regex::Sigma(0), regex_from_sexp(&args[0])?])),
        _ => Err(unsupported()),
    }
}

/// `w ∈ pattern`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegexConstraint {
    pub var: String,
    pub pattern: Regex,
    /// The lengths the pattern was built from.
    pub lengths: SemilinearSet,
}

impl RegexConstraint {
    pub fn to_smtlib(&self) -> String {
        format!("(str.in_re {} {})", crate::smtlib::symbol(&self.var), self.pattern.to_smtlib())
    }
}

/// `Σ^a (Σ^b)*` per progression (just `Σ^a` when `b = 0`), united.
pub fn semilinear_to_regex(s: &SemilinearSet, w: &str) -> RegexConstraint {
    let mut parts: Vec<Regex> = s
        .progressions
        .iter()
        .map(|&(a, b)| match (a, b) {
            (a, 0) => Regex::Sigma(a),
            (0, b) => Regex::Star(Box::new(Regex::Sigma(b))),
            (a, b) => Regex::Concat(vec![Regex::Sigma(a), Regex::Star(Box::new(Regex::Sigma(b)))]),
        })
        .collect();
    let pattern = match parts.len() {
        0 => Regex::None,
        1 => parts.pop().expect("one part"),
        _ => Regex::Union(parts),
    };
    RegexConstraint {
        var: w.to_string(),
        pattern,
        lengths: s.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FileStatus {
    NoLength,
    TriviallyUnsat,
    Decomposable,
    NonDecomposable,
    Failed,
}

impl fmt::Display for FileStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FileStatus::NoLength => "no-length",
            FileStatus::TriviallyUnsat => "trivially-unsat",
            FileStatus::Decomposable => "decomposable",
            FileStatus::NonDecomposable => "non-decomposable",
            FileStatus::Failed => "failed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FileReport {
    pub path: PathBuf,
    pub status: FileStatus,
    /// Length variables of the abstraction.
    pub length_vars: usize,
    /// Variable on which the check failed, or the failure message.
    pub detail: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanCounts {
    pub total: usize,
    pub with_len: usize,
    pub checked: usize,
    pub decomposable: usize,
    pub non_decomposable: usize,
    pub trivially_unsat: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub counts: ScanCounts,
    pub files: Vec<FileReport>,
}

impl ScanReport {
    pub fn push(&mut self, f: FileReport) {
        let c = &mut self.counts;
        c.total += 1;
        if f.status != FileStatus::NoLength {
            c.with_len += 1;
        }
        match f.status {
            FileStatus::Decomposable => {
                c.checked += 1;
                c.decomposable += 1;
            }
            FileStatus::NonDecomposable => {
                c.checked += 1;
                c.non_decomposable += 1;
            }
            FileStatus::TriviallyUnsat => c.trivially_unsat += 1,
            FileStatus::Failed => c.failed += 1,
            FileStatus::NoLength => {}
        }
        self.files.push(f);
    }

    pub fn merge(mut self, other: ScanReport) -> ScanReport {
        for f in other.files {
            self.push(f);
        }
        self
    }

    /// Aligned summary table.
    pub fn table(&self) -> String {
        let c = &self.counts;
        let header = [
            "Benchmarks",
            "With str.len",
            "Checked",
            "Decomposable",
            "Not decomposable",
            "Trivially unsat",
        ];
        let values = [c.total, c.with_len, c.checked, c.decomposable, c.non_decomposable, c.trivially_unsat];
        let mut top = String::new();
        let mut bottom = String::new();
        for (h, v) in header.iter().zip(values) {
            let w = h.len();
            if !top.is_empty() {
                top.push_str("  ");
                bottom.push_str("  ");
            }
            top.push_str(h);
            bottom.push_str(&format!("{v:>w$}"));
        }
        let mut out = format!("{top}\n{bottom}\n");
        if c.failed > 0 {
            out.push_str(&format!("({} files failed)\n", c.failed));
        }
        out
    }
}

/// Classifies the length abstraction of one benchmark.
pub fn scan_text(text: &str, solver: &Solver) -> Result<(FileStatus, usize, Option<String>)> {
    let abs = length_abstraction(text)?;
    let n = abs.length_vars.len();
    if !abs.has_length {
        return Ok((FileStatus::NoLength, n, None));
    }
    if !solver.is_sat(&abs.formula)? {
        return Ok((FileStatus::TriviallyUnsat, n, None));
    }
    let report = check_monadic(&abs.formula, solver)?;
    Ok(match report.first_failure() {
        None => (FileStatus::Decomposable, n, None),
        Some(v) => (FileStatus::NonDecomposable, n, Some(v.to_string())),
    })
}

pub fn scan_file(path: &Path, solver: &Solver) -> FileReport {
    let outcome = std::fs::read_to_string(path)
        .map_err(Error::from)
        .and_then(|t| scan_text(&t, solver));
    let (status, length_vars, detail) = match outcome {
        Ok(r) => r,
        Err(e) => (FileStatus::Failed, 0, Some(e.to_string())),
    };
    FileReport {
        path: path.to_path_buf(),
        status,
        length_vars,
        detail,
    }
}

/// `.smt2` files under the given paths (directories are walked), sorted.
pub fn collect_benchmarks(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            for entry in walkdir::WalkDir::new(p) {
                let entry = entry.map_err(|e| Error::InvalidInput(e.to_string()))?;
                if entry.file_type().is_file() && entry.path().extension().is_some_and(|x| x == "smt2") {
                    out.push(entry.into_path());
                }
            }
        } else if p.exists() {
            out.push(p.clone());
        } else {
            return Err(Error::InvalidInput(format!("no such file or directory: {}", p.display())));
        }
    }
    out.sort();
    Ok(out)
}

pub fn scan_paths(paths: &[PathBuf], solver: &Solver) -> Result<ScanReport> {
    let files = collect_benchmarks(paths)?;
    let reports: Vec<FileReport> = files.par_iter().map(|p| scan_file(p, solver)).collect();
    let mut out = ScanReport::default();
    for r in reports {
        out.push(r);
    }
    Ok(out)
}

/// One conjunct of a rewritten length constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Membership of a string whose length is `length`.
    Regex { length: VarId, constraint: RegexConstraint },
    /// Atoms over a variable that is not a string length.
    Arith(Formula),
}

impl Membership {
    pub fn to_smtlib(&self) -> String {
        match self {
            Membership::Regex { constraint, .. } => constraint.to_smtlib(),
            Membership::Arith(f) => print_expr(f),
        }
    }

    /// The constraint on lengths this conjunct expresses.
    pub fn to_formula(&self) -> Formula {
        match self {
            Membership::Regex { length, constraint } => constraint.lengths.to_formula(length),
            Membership::Arith(f) => f.clone(),
        }
    }
}

/// A length assertion replaced by a disjunction of membership conjunctions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewrittenAssertion {
    pub span: SourceSpan,
    /// The assertion's length formula.
    pub original: Formula,
    pub disjuncts: Vec<Vec<Membership>>,
}

impl RewrittenAssertion {
    pub fn to_formula(&self) -> Formula {
        Formula::or(
            self.disjuncts
                .iter()
                .map(|d| Formula::and(d.iter().map(Membership::to_formula))),
        )
    }

    pub fn to_smtlib(&self) -> String {
        let conj = |ms: &[Membership]| match ms {
            [] => "true".to_string(),
            [m] => m.to_smtlib(),
            _ => format!("(and {})", ms.iter().map(Membership::to_smtlib).collect::<Vec<_>>().join(" ")),
        };
        let body = match self.disjuncts.as_slice() {
            [] => "false".into(),
            [d] => conj(d),
            ds => format!("(or {})", ds.iter().map(|d| conj(d)).collect::<Vec<_>>().join(" ")),
        };
        format!("(assert {body})")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rewrite {
    pub text: String,
    pub rewritten: Vec<RewrittenAssertion>,
    /// Length assertions kept as they were, with the reason.
    pub kept: Vec<(SourceSpan, String)>,
}

/// Replaces each purely arithmetic length assertion of a benchmark by
/// regular membership constraints when it is monadically decomposable.
/// Other assertions, and non-decomposable ones, are left untouched.
pub fn rewrite_text(text: &str, solver: &Solver, opts: &DecomposeOptions) -> Result<Rewrite> {
    let abs = length_abstraction(text)?;
    let strings: BTreeMap<&VarId, &str> = abs.length_vars.iter().map(|(w, v)| (v, w.as_str())).collect();
    let mut rewritten = Vec::new();
    let mut kept = Vec::new();
    for a in &abs.assertions {
        let ints: Vec<VarId> = a.formula.free_vars().into_iter().filter(|v| !strings.contains_key(v)).collect();
        if !forces_naturals(&a.formula, &ints, solver)? {
            log::info!("{}: length assertion kept: integer variables may be negative", a.span);
            kept.push((a.span, "integer variables may be negative".to_string()));
            continue;
        }
        match rewrite_assertion(&a.formula, &strings, solver, opts) {
            Ok(disjuncts) => rewritten.push(RewrittenAssertion {
                span: a.span,
                original: a.formula.clone(),
                disjuncts,
            }),
            Err(e @ Error::NotDecomposable { .. }) => {
                log::info!("{}: length assertion kept: {e}", a.span);
                kept.push((a.span, e.to_string()));
            }
            Err(e) => return Err(e),
        }
    }
    let mut out = text.to_string();
    let mut order: Vec<&RewrittenAssertion> = rewritten.iter().collect();
    order.sort_by_key(|r| std::cmp::Reverse(r.span.start));
    for r in order {
        out.replace_range(r.span.start..r.span.end, &r.to_smtlib());
    }
    Ok(Rewrite { text: out, rewritten, kept })
}

fn rewrite_assertion(
    psi: &Formula,
    strings: &BTreeMap<&VarId, &str>,
    solver: &Solver,
    opts: &DecomposeOptions,
) -> Result<Vec<Vec<Membership>>> {
    let decomposition = decompose_full_with(psi, solver, opts)?;
    let mut disjuncts = Vec::new();
    for conj in to_dnf(&to_pnf(&decomposition)) {
        let mut by_var: BTreeMap<VarId, Vec<Formula>> = BTreeMap::new();
        for a in &conj.atoms {
            let Some(v) = a.vars().into_iter().next() else {
                continue;
            };
            by_var.entry(v).or_default().push(Formula::Atom(a.clone()));
        }
        let mut ms = Vec::new();
        let mut empty = false;
        for (v, atoms) in by_var {
            let f = Formula::and(atoms);
            match strings.get(&v) {
                Some(w) => {
                    let s = monadic_to_semilinear(&f, solver)?;
                    empty |= s.is_empty();
                    if s != SemilinearSet::all() {
                        ms.push(Membership::Regex {
                            length: v,
                            constraint: semilinear_to_regex(&s, w),
                        });
                    }
                }
                // Kept explicit: the output is read over the integers.
                None => ms.push(Membership::Arith(Formula::And(vec![
                    Formula::Atom(crate::formula::Atom::Ineq {
                        term: crate::formula::LinearTerm::var(v),
                        rel: crate::formula::Rel::Ge,
                        bound: BigInt::from(0),
                    }),
                    f,
                ]))),
            }
        }
        if !empty && !disjuncts.contains(&ms) {
            disjuncts.push(ms);
        }
    }
    Ok(disjuncts)
}

/// Largest number of integer variables per assertion considered for
/// rewriting; the sign check is exponential in it.
const MAX_INT_VARS: usize = 4;

/// Whether `psi`, read over the integers, admits no negative value for any
/// of `ints`. Formulas here range over naturals, so each sign pattern is
/// checked by reflecting the negative variables: `v ↦ −1 − v`.
fn forces_naturals(psi: &Formula, ints: &[VarId], solver: &Solver) -> Result<bool> {
    if ints.len() > MAX_INT_VARS {
        return Ok(false);
    }
    for mask in 1u32..(1 << ints.len()) {
        let mut f = psi.clone();
        for (i, v) in ints.iter().enumerate() {
            if mask & (1 << i) != 0 {
                match reflect(&f, v) {
                    Some(g) => f = g,
                    None => return Ok(false),
                }
            }
        }
        if solver.is_sat(&f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `phi[v ↦ −1 − v]`, or `None` for two-variable congruences over `v`.
fn reflect(phi: &Formula, v: &VarId) -> Option<Formula> {
    use crate::formula::Atom;
    Some(match phi {
        Formula::True | Formula::False => phi.clone(),
        Formula::Not(g) => Formula::Not(Box::new(reflect(g, v)?)),
        Formula::And(cs) => Formula::And(cs.iter().map(|c| reflect(c, v)).collect::<Option<_>>()?),
        Formula::Or(cs) => Formula::Or(cs.iter().map(|c| reflect(c, v)).collect::<Option<_>>()?),
        Formula::Atom(Atom::Ineq { term, rel, bound }) if term.contains(v) => {
            let c = term.coeff(v);
            let mut t = term.clone();
            t.add_coeff(v.clone(), -(&c * BigInt::from(2)));
            Formula::Atom(Atom::Ineq {
                term: t,
                rel: *rel,
                bound: bound + c,
            })
        }
        Formula::Atom(Atom::CongUn { x, k, c }) if x == v => Formula::cong_un(x.clone(), k.clone(), -(c + BigInt::from(1))),
        Formula::Atom(a @ Atom::CongBin { .. }) if a.mentions(v) => return None,
        Formula::Atom(_) => phi.clone(),
    })
}

pub fn rewrite_file(path: &Path, solver: &Solver, opts: &DecomposeOptions) -> Result<Rewrite> {
    rewrite_text(&std::fs::read_to_string(path)?, solver, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::LinearTerm;
    use crate::smtlib::parse_sexps;

    fn x() -> VarId {
        VarId::new("x")
    }

    #[test]
    fn semilinear_shapes() {
        let s = Solver::builtin();
        let ge2 = Formula::ge(LinearTerm::var(x()), 2);
        assert_eq!(monadic_to_semilinear(&ge2, &s).unwrap().progressions, vec![(2, 1)]);
        let even = Formula::cong_un(x(), 2.into(), 0.into());
        assert_eq!(monadic_to_semilinear(&even, &s).unwrap().progressions, vec![(0, 2)]);
        let f = Formula::and([Formula::cong_un(x(), 3.into(), 1.into()), Formula::le(LinearTerm::var(x()), 10)]);
        assert_eq!(
            monadic_to_semilinear(&f, &s).unwrap().progressions,
            vec![(1, 0), (4, 0), (7, 0), (10, 0)]
        );
        let two = Formula::ge(LinearTerm::from_pairs([(x(), 1), (VarId::new("y"), 1)]), 1);
        assert!(matches!(monadic_to_semilinear(&two, &s), Err(Error::NotMonadic(_))));
    }

    #[test]
    fn regex_shapes() {
        let r = semilinear_to_regex(&SemilinearSet { progressions: vec![(2, 1)] }, "w");
        assert_eq!(r.to_smtlib(), "(str.in_re w (re.++ ((_ re.loop 2 2) re.allchar) (re.* re.allchar)))");
        let even = semilinear_to_regex(&SemilinearSet { progressions: vec![(0, 2)] }, "w");
        assert_eq!(even.pattern.to_smtlib(), "(re.* ((_ re.loop 2 2) re.allchar))");
        let fin = semilinear_to_regex(&SemilinearSet { progressions: vec![(1, 0), (4, 0)] }, "w");
        assert_eq!(fin.pattern.to_smtlib(), "(re.union re.allchar ((_ re.loop 4 4) re.allchar))");
        let ls = fin.pattern.lengths(6);
        assert_eq!(ls, vec![false, true, false, false, true, false, false]);
    }

    #[test]
    fn printed_regex_reads_back() {
        let set = SemilinearSet { progressions: vec![(0, 0), (3, 2), (5, 0)] };
        let r = semilinear_to_regex(&set, "w");
        let e = parse_sexps(&r.pattern.to_smtlib()).unwrap();
        let back = regex_from_sexp(&e[0]).unwrap();
        let ls = back.lengths(20);
        for (n, l) in ls.iter().enumerate() {
            assert_eq!(*l, set.contains(n as u64), "length {n}");
        }
    }

    #[test]
    fn integer_variables_must_be_forced_nonnegative() {
        let s = Solver::builtin();
        let opts = DecomposeOptions::default();
        let head = "(declare-fun w () String)(declare-fun i () Int)";
        let alias = rewrite_text(&format!("{head}(assert (and (= i (str.len w)) (< i 2)))"), &s, &opts).unwrap();
        assert_eq!(alias.rewritten.len(), 1);
        assert!(alias.text.contains("(>= i 0)"));
        let free = rewrite_text(&format!("{head}(assert (and (< i 2) (< (str.len w) 2)))"), &s, &opts).unwrap();
        assert!(free.rewritten.is_empty());
        assert_eq!(free.kept.len(), 1);
    }

    #[test]
    fn reflection_maps_negative_values() {
        let i = VarId::new("i");
        let f = Formula::and([
            Formula::ge(LinearTerm::from_pairs([(i.clone(), 2), (x(), 1)]), 3),
            Formula::cong_un(i.clone(), 3.into(), 1.into()),
        ]);
        let g = reflect(&f, &i).unwrap();
        for iv in 0..6u64 {
            for xv in 0..6u64 {
                let mut a = Assignment::new();
                a.insert(i.clone(), BigInt::from(iv));
                a.insert(x(), BigInt::from(xv));
                let neg: i64 = -1 - iv as i64;
                let direct = 2 * neg + xv as i64 >= 3 && neg.rem_euclid(3) == 1;
                assert_eq!(g.eval(&a).unwrap(), direct);
            }
        }
    }

    #[test]
    fn table_layout() {
        let mut r = ScanReport::default();
        r.push(FileReport {
            path: "a.smt2".into(),
            status: FileStatus::Decomposable,
            length_vars: 1,
            detail: None,
        });
        let t = r.table();
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0].len(), lines[1].len());
        assert!(lines[0].starts_with("Benchmarks"));
    }
}
