use std::collections::BTreeMap;

use super::parse::{syntax, Dialect, ParseReport, Translator, Warning};
use super::sexp::{parse_sexps, SExp, SourceSpan};
use crate::error::{Error, Result};
use crate::formula::{Formula, VarId};

/// An `assert` command whose body is entirely arithmetic over lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthAssertion {
    /// Span of the whole `(assert …)` command in the source.
    pub span: SourceSpan,
    pub formula: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthAbstraction {
    /// Conjunction of every arithmetic conjunct of every assertion.
    pub formula: Formula,
    /// Assertions that can be replaced wholesale.
    pub assertions: Vec<LengthAssertion>,
    /// String variable name → length variable.
    pub length_vars: BTreeMap<String, VarId>,
    pub has_length: bool,
    pub warnings: Vec<Warning>,
}

impl LengthAbstraction {
    /// String variable whose length `v` denotes.
    pub fn string_of(&self, v: &VarId) -> Option<&str> {
        self.length_vars
            .iter()
            .find(|(_, l)| *l == v)
            .map(|(w, _)| w.as_str())
    }
}

fn droppable(e: &Error) -> bool {
    matches!(
        e,
        Error::Unsupported { .. } | Error::UnsupportedSort { .. } | Error::NonlinearTerm { .. }
    )
}

fn conjuncts(e: &SExp) -> Vec<&SExp> {
    if e.head() == Some("and") {
        e.as_list().expect("list")[1..].iter().flat_map(conjuncts).collect()
    } else {
        vec![e]
    }
}

/// Length abstraction of a string benchmark with per-assertion detail.
pub fn length_abstraction(text: &str) -> Result<LengthAbstraction> {
    let mut tr = Translator::new(Dialect::Strings);
    let mut kept = Vec::new();
    let mut assertions = Vec::new();
    let mut has_length = false;
    for cmd in parse_sexps(text)? {
        let Some(head) = cmd.head() else {
            return Err(syntax(&cmd, "a command"));
        };
        if tr.declare(&cmd)? {
            continue;
        }
        if head != "assert" {
            continue;
        }
        let items = cmd.as_list().expect("list");
        if items.len() != 2 {
            return Err(syntax(&cmd, "`(assert formula)`"));
        }
        let mut whole = Vec::new();
        let mut all_arith = true;
        let mut mentions_length = false;
        for c in conjuncts(&items[1]) {
            tr.saw_length = false;
            match tr.formula(c) {
                Ok(f) => {
                    mentions_length |= tr.saw_length;
                    whole.push(f.clone());
                    kept.push(f);
                }
                Err(e) if droppable(&e) => {
                    mentions_length |= tr.saw_length;
                    all_arith = false;
                    tr.warnings.push(Warning {
                        span: c.span(),
                        message: format!("dropped non-arithmetic assertion: {e}"),
                    });
                }
                Err(e) => return Err(e),
            }
        }
        has_length |= mentions_length;
        if all_arith && mentions_length {
            assertions.push(LengthAssertion {
                span: cmd.span(),
                formula: Formula::and(whole),
            });
        }
    }
    let formula = if has_length {
        Formula::and(kept)
    } else {
        tr.warnings.push(Warning {
            span: SourceSpan::default(),
            message: "no length constraints".into(),
        });
        Formula::True
    };
    Ok(LengthAbstraction {
        formula,
        assertions,
        length_vars: tr.length_vars,
        has_length,
        warnings: tr.warnings,
    })
}

/// Every `(str.len w)` becomes a natural variable; the result is the
/// conjunction of the arithmetic assertions. String-only assertions are
/// dropped with a warning.
pub fn extract_length_abstraction(text: &str) -> Result<ParseReport> {
    let a = length_abstraction(text)?;
    Ok(ParseReport {
        formula: a.formula,
        warnings: a.warnings,
        dialect: Dialect::Strings,
    })
}
