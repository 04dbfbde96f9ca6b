use std::io::Write;
use std::process::{Command, Stdio};

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::formula::{Assignment, Formula, LinearTerm, VarId};
use crate::smtlib::{self, SExp};

/// A solver process speaking SMT-LIB over standard input and output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExternalSolver {
    pub program: String,
    pub args: Vec<String>,
}

impl ExternalSolver {
    /// Splits a command line on whitespace, e.g. `"z3 -in"`.
    pub fn parse(cmd: &str) -> Option<Self> {
        let mut parts = cmd.split_whitespace().map(str::to_string);
        let program = parts.next()?;
        Some(ExternalSolver {
            program,
            args: parts.collect(),
        })
    }

    /// The query script sent to the process.
    pub fn script(phi: &Formula, vars: &[VarId]) -> String {
        let naturals = Formula::and(
            vars.iter()
                .map(|x| Formula::Atom(crate::formula::Atom::Ineq {
                    term: LinearTerm::var(x.clone()),
                    rel: crate::formula::Rel::Ge,
                    bound: BigInt::from(0),
                }))
                .chain(std::iter::once(phi.clone())),
        );
        let mut out = String::from("(set-logic QF_LIA)\n");
        for x in vars {
            out.push_str(&format!("(declare-const {} Int)\n", smtlib::symbol(x.name())));
        }
        out.push_str(&smtlib::print_formula(&naturals));
        out.push_str("\n(check-sat)\n(get-model)\n");
        out
    }

    pub(crate) fn solve(&self, phi: &Formula, vars: &[VarId]) -> Result<Option<Assignment>> {
        let script = Self::script(phi, vars);
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| Error::BackendFailure(format!("cannot start `{}`: {e}", self.program)))?;
        child
            .stdin
            .take()
            .expect("stdin is piped")
            .write_all(script.as_bytes())
            .map_err(|e| Error::BackendFailure(format!("writing query: {e}")))?;
        let out = child
            .wait_with_output()
            .map_err(|e| Error::BackendFailure(format!("waiting for solver: {e}")))?;
        let text = String::from_utf8_lossy(&out.stdout);
        parse_response(&text, vars)
    }
}

/// Reads `sat`/`unsat` and, after `sat`, a model of `define-fun` entries.
pub(crate) fn parse_response(text: &str, vars: &[VarId]) -> Result<Option<Assignment>> {
    let garbage = |msg: &str| Error::BackendFailure(format!("{msg}: {}", text.trim()));
    let exprs = smtlib::parse_sexps(text).map_err(|_| garbage("unreadable solver output"))?;
    let mut it = exprs.iter();
    let status = it.next().and_then(SExp::as_symbol).ok_or_else(|| garbage("missing verdict"))?;
    match status {
        "unsat" => return Ok(None),
        "sat" => {}
        "unknown" => return Err(Error::BackendFailure("solver answered unknown".into())),
        _ => return Err(garbage("unexpected verdict")),
    }
    let mut model = Assignment::new();
    for e in it {
        let Some(items) = e.as_list() else { continue };
        let defs = match items.first().and_then(SExp::as_symbol) {
            Some("model") => &items[1..],
            _ => items,
        };
        for d in defs {
            let Some(parts) = d.as_list() else { continue };
            if parts.len() != 5 || parts[0].as_symbol() != Some("define-fun") {
                continue;
            }
            let Some(name) = parts[1].as_symbol() else { continue };
            let value = numeral_value(&parts[4]).ok_or_else(|| garbage("non-integer model value"))?;
            if value.is_negative() {
                return Err(Error::NegativeLiteralVariableDomain {
                    var: name.to_string(),
                    value: value.to_string(),
                });
            }
            model.insert(VarId::new(name), value);
        }
    }
    for x in vars {
        if model.get(x).is_none() {
            model.insert(x.clone(), BigInt::from(0));
        }
    }
    Ok(Some(model))
}

fn numeral_value(e: &SExp) -> Option<BigInt> {
    if let Some(n) = e.as_numeral() {
        return Some(n.clone());
    }
    let items = e.as_list()?;
    if items.len() == 2 && items[0].as_symbol() == Some("-") {
        return numeral_value(&items[1]).map(|v| -v);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sat_model() {
        let vars = [VarId::new("x"), VarId::new("y")];
        let m = parse_response("sat\n(\n  (define-fun x () Int 3)\n)\n", &vars)
            .unwrap()
            .unwrap();
        assert_eq!(m.get(&vars[0]), Some(&BigInt::from(3)));
        assert_eq!(m.get(&vars[1]), Some(&BigInt::from(0)));
    }

    #[test]
    fn parses_unsat_and_rejects_garbage() {
        assert!(parse_response("unsat\n", &[]).unwrap().is_none());
        assert!(matches!(parse_response("banana", &[]), Err(Error::BackendFailure(_))));
        assert!(matches!(
            parse_response("sat ((define-fun x () Int (- 2)))", &[VarId::new("x")]),
            Err(Error::NegativeLiteralVariableDomain { .. })
        ));
    }
}
