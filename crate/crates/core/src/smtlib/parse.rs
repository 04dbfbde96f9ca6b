use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::sexp::{parse_sexps, SExp, SourceSpan};
use crate::error::{Error, Result};
use crate::formula::{Formula, LinearTerm, VarId};
use crate::qelim::{QuantBlock, QuantKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dialect {
    Core,
    Strings,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Warning {
    pub span: SourceSpan,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseReport {
    pub formula: Formula,
    pub warnings: Vec<Warning>,
    pub dialect: Dialect,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Sort {
    Int,
    Bool,
    Str,
    Other(String),
}

fn sort_of(e: &SExp) -> Sort {
    match e.as_symbol() {
        Some("Int") => Sort::Int,
        Some("Bool") => Sort::Bool,
        Some("String") => Sort::Str,
        _ => Sort::Other(render(e)),
    }
}

fn render(e: &SExp) -> String {
    match e {
        SExp::Symbol(s, _) | SExp::Other(s, _) => s.clone(),
        SExp::Numeral(n, _) => n.to_string(),
        SExp::Str(s, _) => format!("{s:?}"),
        SExp::Keyword(k, _) => format!(":{k}"),
        SExp::List(items, _) => {
            let parts: Vec<String> = items.iter().map(render).collect();
            format!("({})", parts.join(" "))
        }
    }
}

pub(crate) fn syntax(e: &SExp, expected: &str) -> Error {
    Error::Syntax {
        span: e.span(),
        expected: expected.to_string(),
        found: e.describe(),
    }
}

pub(crate) fn unsupported(e: &SExp, message: impl Into<String>) -> Error {
    Error::Unsupported {
        span: e.span(),
        message: message.into(),
    }
}

/// `term + constant`
#[derive(Clone, Debug, Default)]
struct Lin {
    term: LinearTerm,
    constant: BigInt,
}

impl Lin {
    fn constant(c: BigInt) -> Self {
        Lin {
            term: LinearTerm::zero(),
            constant: c,
        }
    }

    fn plus(&self, o: &Lin) -> Lin {
        Lin {
            term: self.term.plus(&o.term),
            constant: &self.constant + &o.constant,
        }
    }

    fn scale(&self, c: &BigInt) -> Lin {
        Lin {
            term: self.term.scale(c),
            constant: &self.constant * c,
        }
    }

    fn minus(&self, o: &Lin) -> Lin {
        self.plus(&o.scale(&BigInt::from(-1)))
    }
}

/// Translates SMT-LIB terms into formulas, tracking declarations.
pub(crate) struct Translator {
    dialect: Dialect,
    sorts: HashMap<String, Sort>,
    implicit: HashSet<String>,
    bound: Vec<HashSet<String>>,
    pub(crate) warnings: Vec<Warning>,
    /// String variable → its length variable.
    pub(crate) length_vars: BTreeMap<String, VarId>,
    pub(crate) saw_length: bool,
}

impl Translator {
    pub(crate) fn new(dialect: Dialect) -> Self {
        Translator {
            dialect,
            sorts: HashMap::new(),
            implicit: HashSet::new(),
            bound: Vec::new(),
            warnings: Vec::new(),
            length_vars: BTreeMap::new(),
            saw_length: false,
        }
    }

    fn warn(&mut self, span: SourceSpan, message: impl Into<String>) {
        self.warnings.push(Warning {
            span,
            message: message.into(),
        });
    }

    /// Handles a declaration command; false when `cmd` is not one.
    pub(crate) fn declare(&mut self, cmd: &SExp) -> Result<bool> {
        let items = cmd.as_list().unwrap_or(&[]);
        let (name, sort) = match cmd.head() {
            Some("declare-const") | Some("declare-variable") if items.len() == 3 => (&items[1], &items[2]),
            Some("declare-fun") if items.len() == 4 => {
                if items[2].as_list().is_none_or(|a| !a.is_empty()) {
                    return Err(unsupported(cmd, "functions with arguments"));
                }
                (&items[1], &items[3])
            }
            Some("declare-const" | "declare-variable" | "declare-fun") => {
                return Err(syntax(cmd, "a well-formed declaration"));
            }
            _ => return Ok(false),
        };
        let name = name.as_symbol().ok_or_else(|| syntax(name, "a symbol"))?;
        let s = sort_of(sort);
        if self.dialect == Dialect::Core && s != Sort::Int {
            return Err(Error::UnsupportedSort {
                span: sort.span(),
                sort: render(sort),
            });
        }
        self.sorts.insert(name.to_string(), s);
        Ok(true)
    }

    fn is_bound(&self, name: &str) -> bool {
        self.bound.iter().any(|b| b.contains(name))
    }

    fn int_var(&mut self, e: &SExp, name: &str) -> Result<VarId> {
        if self.is_bound(name) {
            return Ok(VarId::new(name));
        }
        match self.sorts.get(name) {
            Some(Sort::Int) => Ok(VarId::new(name)),
            Some(Sort::Bool) => Err(unsupported(e, format!("Boolean variable `{name}` in arithmetic"))),
            Some(Sort::Str) => Err(unsupported(e, format!("string variable `{name}` in arithmetic"))),
            Some(Sort::Other(s)) => Err(Error::UnsupportedSort {
                span: e.span(),
                sort: s.clone(),
            }),
            None => {
                if self.implicit.insert(name.to_string()) {
                    self.warn(e.span(), format!("undeclared symbol `{name}` read as a natural-valued variable"));
                }
                Ok(VarId::new(name))
            }
        }
    }

    fn length_var(&mut self, w: &str) -> VarId {
        if let Some(v) = self.length_vars.get(w) {
            return v.clone();
        }
        let taken: HashSet<String> = self
            .sorts
            .keys()
            .cloned()
            .chain(self.length_vars.values().map(|v| v.name().to_string()))
            .collect();
        let mut name = format!("len_{w}");
        while taken.contains(&name) {
            name.push('_');
        }
        let v = VarId::new(name);
        self.length_vars.insert(w.to_string(), v.clone());
        v
    }

    fn string_length(&mut self, e: &SExp) -> Result<Lin> {
        match e {
            SExp::Str(s, _) => Ok(Lin::constant(BigInt::from(s.chars().count()))),
            SExp::Symbol(name, _) => match self.sorts.get(name) {
                Some(Sort::Str) | None => Ok(Lin {
                    term: LinearTerm::var(self.length_var(name)),
                    constant: BigInt::zero(),
                }),
                Some(_) => Err(unsupported(e, format!("`{name}` is not a string"))),
            },
            SExp::List(items, _) if e.head() == Some("str.++") => {
                let mut acc = Lin::default();
                for a in &items[1..] {
                    acc = acc.plus(&self.string_length(a)?);
                }
                Ok(acc)
            }
            _ => Err(unsupported(e, "length of a compound string term")),
        }
    }

    fn term(&mut self, e: &SExp) -> Result<Lin> {
        match e {
            SExp::Numeral(n, _) => Ok(Lin::constant(n.clone())),
            SExp::Symbol(name, _) => {
                let x = self.int_var(e, name)?;
                Ok(Lin {
                    term: LinearTerm::var(x),
                    constant: BigInt::zero(),
                })
            }
            SExp::List(items, _) => {
                let Some(head) = e.head() else {
                    return Err(syntax(e, "a term"));
                };
                let args = &items[1..];
                match head {
                    "+" if !args.is_empty() => {
                        let mut acc = Lin::default();
                        for a in args {
                            acc = acc.plus(&self.term(a)?);
                        }
                        Ok(acc)
                    }
                    "-" if args.len() == 1 => Ok(self.term(&args[0])?.scale(&BigInt::from(-1))),
                    "-" if args.len() >= 2 => {
                        let mut acc = self.term(&args[0])?;
                        for a in &args[1..] {
                            acc = acc.minus(&self.term(a)?);
                        }
                        Ok(acc)
                    }
                    "*" if !args.is_empty() => {
                        let mut acc = Lin::constant(BigInt::one());
                        for a in args {
                            let t = self.term(a)?;
                            if acc.term.is_zero() {
                                acc = t.scale(&acc.constant);
                            } else if t.term.is_zero() {
                                acc = acc.scale(&t.constant);
                            } else {
                                return Err(Error::NonlinearTerm { span: e.span() });
                            }
                        }
                        Ok(acc)
                    }
                    "str.len" if self.dialect == Dialect::Strings && args.len() == 1 => {
                        self.saw_length = true;
                        self.string_length(&args[0])
                    }
                    "mod" => Err(unsupported(
                        e,
                        "`mod` is only supported as `(= (mod t k) c)` or `(= (mod t k) (mod u k))`",
                    )),
                    "+" | "-" | "*" => Err(syntax(e, "at least one argument")),
                    other => Err(unsupported(e, format!("function `{other}` in an integer term"))),
                }
            }
            SExp::Str(..) => Err(unsupported(e, "string literal in an integer term")),
            _ => Err(unsupported(e, format!("{} in an integer term", e.describe()))),
        }
    }

    fn is_boolean(&self, e: &SExp) -> bool {
        match e {
            SExp::Symbol(s, _) => s == "true" || s == "false" || self.sorts.get(s) == Some(&Sort::Bool),
            SExp::List(items, _) => match e.head() {
                Some(h) => matches!(
                    h,
                    "and" | "or" | "not" | "=>" | "=" | "<=" | ">=" | "<" | ">" | "distinct" | "xor" | "exists" | "forall"
                ) || h.starts_with("str.in") || h.starts_with("str.prefix") || h.starts_with("str.suffix")
                    || h == "str.contains",
                None => items.first().and_then(|f| f.as_list()).is_some_and(|l| {
                    l.len() == 3 && l[0].as_symbol() == Some("_") && l[1].as_symbol() == Some("divisible")
                }),
            },
            _ => false,
        }
    }

    /// `(mod t k)` → `(t, k)`.
    fn mod_parts<'e>(&self, e: &'e SExp) -> Result<Option<(&'e SExp, BigInt)>> {
        if e.head() != Some("mod") {
            return Ok(None);
        }
        let items = e.as_list().expect("list");
        if items.len() != 3 {
            return Err(syntax(e, "`(mod t k)`"));
        }
        match items[2].as_numeral() {
            Some(k) if k.is_positive() => Ok(Some((&items[1], k.clone()))),
            _ => Err(unsupported(&items[2], "`mod` needs a constant modulus k ≥ 1")),
        }
    }

    /// `l ≡ 0 (mod k)` for a linear `l` over at most two variables.
    fn divisible(&self, e: &SExp, l: Lin, k: BigInt) -> Result<Formula> {
        let vars: Vec<(VarId, BigInt)> = l.term.iter().map(|(x, c)| (x.clone(), c.clone())).collect();
        match vars.as_slice() {
            [] => Ok(if l.constant.mod_floor(&k).is_zero() {
                Formula::True
            } else {
                Formula::False
            }),
            [(x, a)] => Ok(Formula::cong_scaled(a.clone(), x.clone(), k, -l.constant)),
            [(x, a), (y, b)] if l.constant.mod_floor(&k).is_zero() => {
                Ok(Formula::cong_bin(a.clone(), x.clone(), k, -b, y.clone()))
            }
            [(x, a), (y, b)] => {
                let mut cases = Vec::new();
                let mut c1 = BigInt::zero();
                while c1 < k {
                    let mut c2 = BigInt::zero();
                    while c2 < k {
                        if (a * &c1 + b * &c2 + &l.constant).mod_floor(&k).is_zero() {
                            cases.push(Formula::and([
                                Formula::cong_un(x.clone(), k.clone(), c1.clone()),
                                Formula::cong_un(y.clone(), k.clone(), c2.clone()),
                            ]));
                        }
                        c2 += 1;
                    }
                    c1 += 1;
                }
                Ok(Formula::or(cases))
            }
            _ => Err(unsupported(e, "congruences over more than two variables")),
        }
    }

    /// `a·x` with no constant, as `(a, x)`.
    fn scaled_var(l: &Lin) -> Option<(BigInt, VarId)> {
        if !l.constant.is_zero() || l.term.len() != 1 {
            return None;
        }
        let (x, a) = l.term.iter().next()?;
        Some((a.clone(), x.clone()))
    }

    fn mod_equality(&mut self, e: &SExp, lhs: &SExp, rhs: &SExp) -> Result<Option<Formula>> {
        let (l, r) = (self.mod_parts(lhs)?, self.mod_parts(rhs)?);
        match (l, r) {
            (None, None) => Ok(None),
            (Some((t1, k1)), Some((t2, k2))) => {
                if k1 != k2 {
                    return Err(unsupported(e, "`mod` equality with different moduli"));
                }
                let (l1, l2) = (self.term(t1)?, self.term(t2)?);
                if let (Some((a, x)), Some((b, y))) = (Self::scaled_var(&l1), Self::scaled_var(&l2)) {
                    return Ok(Some(Formula::cong_bin(a, x, k1, b, y)));
                }
                self.divisible(e, l1.minus(&l2), k1).map(Some)
            }
            (Some((t, k)), None) => self.mod_against(e, t, k, rhs).map(Some),
            (None, Some((t, k))) => self.mod_against(e, t, k, lhs).map(Some),
        }
    }

    fn mod_against(&mut self, e: &SExp, t: &SExp, k: BigInt, other: &SExp) -> Result<Formula> {
        let c = self.term(other)?;
        if !c.term.is_zero() {
            return Err(unsupported(e, "`mod` compared with a non-constant term"));
        }
        if c.constant.is_negative() || c.constant >= k {
            return Ok(Formula::False);
        }
        let l = self.term(t)?;
        self.divisible(e, l.minus(&c), k)
    }

    fn compare(&mut self, op: &str, a: &SExp, b: &SExp) -> Result<Formula> {
        let mut d = self.term(a)?.minus(&self.term(b)?);
        let mut op = op;
        // Keep the leading coefficient positive: `1 < x` reads as `x ≥ 2`.
        if d.term.iter().next().is_some_and(|(_, c)| c.is_negative()) {
            d.term = d.term.negated();
            d.constant = -d.constant;
            op = match op {
                "<=" => ">=",
                "<" => ">",
                ">=" => "<=",
                ">" => "<",
                other => other,
            };
        }
        let bound = -d.constant;
        Ok(match op {
            "<=" => Formula::le(d.term, bound),
            "<" => Formula::le(d.term, bound - 1),
            ">=" => Formula::ge(d.term, bound),
            ">" => Formula::ge(d.term, bound + 1),
            "=" => Formula::eq(d.term, bound),
            _ => unreachable!("comparison operator"),
        })
    }

    pub(crate) fn formula(&mut self, e: &SExp) -> Result<Formula> {
        match e {
            SExp::Symbol(s, _) if s == "true" => Ok(Formula::True),
            SExp::Symbol(s, _) if s == "false" => Ok(Formula::False),
            SExp::Symbol(s, _) => match self.sorts.get(s) {
                Some(Sort::Bool) => Err(unsupported(e, format!("Boolean variable `{s}`"))),
                _ => Err(syntax(e, "a formula")),
            },
            SExp::List(items, _) => {
                if let Some(f) = items.first().and_then(|f| f.as_list()) {
                    if f.len() == 3 && f[0].as_symbol() == Some("_") && f[1].as_symbol() == Some("divisible") {
                        let k = match f[2].as_numeral() {
                            Some(k) if k.is_positive() => k.clone(),
                            _ => return Err(unsupported(&f[2], "`divisible` needs a constant k ≥ 1")),
                        };
                        if items.len() != 2 {
                            return Err(syntax(e, "one argument to `divisible`"));
                        }
                        let l = self.term(&items[1])?;
                        return self.divisible(e, l, k);
                    }
                }
                let Some(head) = e.head() else {
                    return Err(syntax(e, "a formula"));
                };
                let args = &items[1..];
                match head {
                    "and" => Ok(Formula::and(self.formulas(args)?)),
                    "or" => Ok(Formula::or(self.formulas(args)?)),
                    "not" if args.len() == 1 => Ok(Formula::not(self.formula(&args[0])?)),
                    "=>" if args.len() >= 2 => {
                        let fs = self.formulas(args)?;
                        let mut it = fs.into_iter().rev();
                        let mut acc = it.next().expect("two arguments");
                        for f in it {
                            acc = Formula::implies(f, acc);
                        }
                        Ok(acc)
                    }
                    "xor" if args.len() >= 2 => {
                        let fs = self.formulas(args)?;
                        let mut it = fs.into_iter();
                        let first = it.next().expect("two arguments");
                        Ok(it.fold(first, Formula::xor))
                    }
                    "ite" if args.len() == 3 => {
                        let c = self.formula(&args[0])?;
                        let (t, f) = (self.formula(&args[1])?, self.formula(&args[2])?);
                        Ok(Formula::or([
                            Formula::and([c.clone(), t]),
                            Formula::and([Formula::not(c), f]),
                        ]))
                    }
                    "=" if args.len() >= 2 => {
                        if args.iter().all(|a| self.is_boolean(a)) {
                            let fs = self.formulas(args)?;
                            return Ok(Formula::and(fs.windows(2).map(|w| Formula::iff(w[0].clone(), w[1].clone()))));
                        }
                        if args.len() == 2 {
                            if let Some(f) = self.mod_equality(e, &args[0], &args[1])? {
                                return Ok(f);
                            }
                        }
                        self.chain("=", args)
                    }
                    "distinct" if args.len() >= 2 => {
                        let mut parts = Vec::new();
                        for i in 0..args.len() {
                            for j in i + 1..args.len() {
                                parts.push(Formula::not(self.compare("=", &args[i], &args[j])?));
                            }
                        }
                        Ok(Formula::and(parts))
                    }
                    "<=" | "<" | ">=" | ">" if args.len() >= 2 => self.chain(head, args),
                    "exists" | "forall" => Err(unsupported(e, "quantifiers are only supported as one top-level block")),
                    "let" => Err(unsupported(e, "`let` bindings")),
                    "not" | "=>" | "xor" | "ite" | "=" | "distinct" | "<=" | "<" | ">=" | ">" => {
                        Err(syntax(e, &format!("more arguments to `{head}`")))
                    }
                    other => Err(unsupported(e, format!("predicate `{other}`"))),
                }
            }
            _ => Err(syntax(e, "a formula")),
        }
    }

    fn formulas(&mut self, es: &[SExp]) -> Result<Vec<Formula>> {
        es.iter().map(|a| self.formula(a)).collect()
    }

    fn chain(&mut self, op: &str, args: &[SExp]) -> Result<Formula> {
        let mut parts = Vec::new();
        for w in args.windows(2) {
            parts.push(self.compare(op, &w[0], &w[1])?);
        }
        Ok(Formula::and(parts))
    }

    /// `(exists ((x Int) ...) body)` with the variables bound while
    /// translating the body.
    fn quantified(&mut self, e: &SExp) -> Result<QuantBlock> {
        let items = e.as_list().expect("list");
        let kind = match e.head() {
            Some("exists") => QuantKind::Exists,
            Some("forall") => QuantKind::Forall,
            _ => unreachable!("caller checks the head"),
        };
        if items.len() != 3 {
            return Err(syntax(e, "`(exists ((x Int) ...) body)`"));
        }
        let binders = items[1].as_list().ok_or_else(|| syntax(&items[1], "a binder list"))?;
        if binders.is_empty() {
            return Err(syntax(&items[1], "at least one bound variable"));
        }
        let mut vars = Vec::new();
        let mut scope = HashSet::new();
        for b in binders {
            let pair = b.as_list().filter(|p| p.len() == 2).ok_or_else(|| syntax(b, "`(name Int)`"))?;
            let name = pair[0].as_symbol().ok_or_else(|| syntax(&pair[0], "a symbol"))?;
            if sort_of(&pair[1]) != Sort::Int {
                return Err(Error::UnsupportedSort {
                    span: pair[1].span(),
                    sort: render(&pair[1]),
                });
            }
            scope.insert(name.to_string());
            vars.push(VarId::new(name));
        }
        self.bound.push(scope);
        let matrix = self.formula(&items[2]);
        self.bound.pop();
        Ok(QuantBlock {
            kind,
            vars,
            matrix: matrix?,
        })
    }
}

fn is_ignored_command(head: &str) -> bool {
    matches!(
        head,
        "set-logic" | "set-info" | "set-option" | "check-sat" | "get-model" | "get-value" | "exit" | "get-info"
    )
}

fn commands(text: &str) -> Result<Vec<SExp>> {
    let es = parse_sexps(text)?;
    for e in &es {
        if e.head().is_none() {
            return Err(syntax(e, "a command"));
        }
    }
    Ok(es)
}

/// Reads the core dialect: integer declarations and assertions, with
/// every variable ranging over the naturals.
pub fn parse_formula(text: &str) -> Result<ParseReport> {
    let mut tr = Translator::new(Dialect::Core);
    let mut parts = Vec::new();
    for cmd in commands(text)? {
        if tr.declare(&cmd)? {
            continue;
        }
        let head = cmd.head().expect("commands are lists");
        match head {
            "assert" => {
                let items = cmd.as_list().expect("list");
                if items.len() != 2 {
                    return Err(syntax(&cmd, "`(assert formula)`"));
                }
                parts.push(tr.formula(&items[1])?);
            }
            h if is_ignored_command(h) => {}
            other => return Err(unsupported(&cmd, format!("command `{other}`"))),
        }
    }
    Ok(ParseReport {
        formula: Formula::and(parts),
        warnings: tr.warnings,
        dialect: Dialect::Core,
    })
}

/// Reads a script whose assertion is a single top-level `exists` or
/// `forall` block. Other assertions are conjoined into the matrix; they
/// may not mention the bound variables.
pub fn parse_quantified(text: &str) -> Result<(QuantBlock, Vec<Warning>)> {
    let mut tr = Translator::new(Dialect::Core);
    let mut block: Option<QuantBlock> = None;
    let mut rest = Vec::new();
    for cmd in commands(text)? {
        if tr.declare(&cmd)? {
            continue;
        }
        let head = cmd.head().expect("commands are lists");
        match head {
            "assert" => {
                let items = cmd.as_list().expect("list");
                if items.len() != 2 {
                    return Err(syntax(&cmd, "`(assert formula)`"));
                }
                match items[1].head() {
                    Some("exists" | "forall") => {
                        if block.is_some() {
                            return Err(unsupported(&items[1], "more than one quantifier block"));
                        }
                        block = Some(tr.quantified(&items[1])?);
                    }
                    _ => rest.push(tr.formula(&items[1])?),
                }
            }
            h if is_ignored_command(h) => {}
            other => return Err(unsupported(&cmd, format!("command `{other}`"))),
        }
    }
    let Some(mut block) = block else {
        return Err(Error::InvalidInput("no `exists` or `forall` assertion found".into()));
    };
    let extra = Formula::and(rest);
    if block.vars.iter().any(|v| extra.free_vars().contains(v)) {
        return Err(Error::InvalidInput(
            "assertions outside the quantifier reuse a bound variable name".into(),
        ));
    }
    block.matrix = Formula::and([block.matrix, extra]);
    Ok((block, tr.warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Atom, Rel};

    fn v(s: &str) -> VarId {
        VarId::new(s)
    }

    fn parse(s: &str) -> Formula {
        parse_formula(s).unwrap().formula
    }

    #[test]
    fn sum_inequality() {
        let f = parse("(declare-const x Int)(declare-const y Int)(assert (>= (+ x y) 2))");
        assert_eq!(
            f,
            Formula::Atom(Atom::Ineq {
                term: LinearTerm::from_pairs([(v("x"), 1), (v("y"), 1)]),
                rel: Rel::Ge,
                bound: 2.into(),
            })
        );
    }

    #[test]
    fn residue_equality_is_binary_congruence() {
        let f = parse("(declare-fun x () Int)(declare-fun y () Int)(assert (= (mod x 2) (mod y 2)))");
        assert_eq!(
            f,
            Formula::Atom(Atom::CongBin {
                a: 1.into(),
                x: v("x"),
                k: 2.into(),
                b: 1.into(),
                y: v("y"),
            })
        );
    }

    #[test]
    fn true_assertion() {
        assert_eq!(parse("(assert true)"), Formula::True);
    }

    #[test]
    fn strict_and_chained_comparisons() {
        let f = parse("(declare-const x Int)(assert (< 1 x 4))");
        assert_eq!(
            f,
            Formula::and([
                Formula::ge(LinearTerm::var(v("x")), 2),
                Formula::le(LinearTerm::var(v("x")), 3),
            ])
        );
    }

    #[test]
    fn divisible_and_offset_mod() {
        let f = parse("(declare-const x Int)(assert ((_ divisible 3) (+ x 1)))");
        assert_eq!(f, Formula::cong_un(v("x"), 3.into(), 2.into()));
        let g = parse("(declare-const x Int)(assert (= (mod (* 2 x) 4) 3))");
        assert_eq!(g, Formula::False);
        let h = parse("(declare-const x Int)(assert (= (mod x 5) 7))");
        assert_eq!(h, Formula::False);
    }

    #[test]
    fn rejects_nonlinear_and_other_sorts() {
        let e = parse_formula("(declare-const x Int)(assert (>= (* x x) 1))").unwrap_err();
        assert!(matches!(e, Error::NonlinearTerm { .. }));
        let e = parse_formula("(declare-const b Bool)").unwrap_err();
        assert!(matches!(e, Error::UnsupportedSort { .. }));
        let e = parse_formula("(declare-const x Int)(assert (>= (mod x 2) 1))").unwrap_err();
        assert!(matches!(e, Error::Unsupported { .. }));
    }

    #[test]
    fn syntax_error_has_position() {
        let e = parse_formula("(assert\n  (>= x))").unwrap_err();
        assert!(e.to_string().starts_with("2:3"), "{e}");
    }

    #[test]
    fn undeclared_symbols_warn() {
        let r = parse_formula("(assert (>= x 1))").unwrap();
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn quantifier_block() {
        let (b, _) = parse_quantified(
            "(declare-const y Int)(assert (exists ((x Int)) (and (= (mod x 2) 0) (>= y 3))))",
        )
        .unwrap();
        assert_eq!(b.kind, QuantKind::Exists);
        assert_eq!(b.vars, vec![v("x")]);
        assert_eq!(b.matrix.free_vars().len(), 2);
    }
}
