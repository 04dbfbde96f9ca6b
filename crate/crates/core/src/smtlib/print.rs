use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::formula::{Atom, Formula, LinearTerm, Rel};

const SYMBOL_PUNCT: &str = "~!@$%^&*_-+=<>.?/";

/// A symbol as SMT-LIB text, quoted with `|…|` when needed.
pub fn symbol(name: &str) -> String {
    let simple = !name.is_empty()
        && !name.starts_with(|c: char| c.is_ascii_digit())
        && name.chars().all(|c| c.is_ascii_alphanumeric() || SYMBOL_PUNCT.contains(c));
    if simple {
        name.to_string()
    } else {
        format!("|{name}|")
    }
}

pub fn numeral(n: &BigInt) -> String {
    if n.is_negative() {
        format!("(- {})", n.abs())
    } else {
        n.to_string()
    }
}

fn scaled(c: &BigInt, x: &str) -> String {
    if c.is_one() {
        x.to_string()
    } else if (-c).is_one() {
        format!("(- {x})")
    } else {
        format!("(* {} {x})", numeral(c))
    }
}

pub fn term(t: &LinearTerm) -> String {
    let parts: Vec<String> = t.iter().map(|(x, c)| scaled(c, &symbol(x.name()))).collect();
    match parts.len() {
        0 => "0".to_string(),
        1 => parts.into_iter().next().expect("one part"),
        _ => format!("(+ {})", parts.join(" ")),
    }
}

pub fn atom(a: &Atom) -> String {
    match a {
        Atom::Ineq { term: t, rel, bound } => {
            let op = match rel {
                Rel::Le => "<=",
                Rel::Ge => ">=",
            };
            format!("({op} {} {})", term(t), numeral(bound))
        }
        Atom::CongUn { x, k, c } => format!("(= (mod {} {k}) {c})", symbol(x.name())),
        Atom::CongBin { a, x, k, b, y } => format!(
            "(= (mod {} {k}) (mod {} {k}))",
            scaled(a, &symbol(x.name())),
            scaled(b, &symbol(y.name()))
        ),
    }
}

/// The formula as an SMT-LIB Boolean term.
pub fn expr(phi: &Formula) -> String {
    let mut out = String::new();
    write_expr(phi, &mut out);
    out
}

fn write_expr(phi: &Formula, out: &mut String) {
    match phi {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Atom(a) => out.push_str(&atom(a)),
        Formula::Not(g) => {
            out.push_str("(not ");
            write_expr(g, out);
            out.push(')');
        }
        Formula::And(cs) | Formula::Or(cs) if cs.is_empty() => {
            out.push_str(if matches!(phi, Formula::And(_)) { "true" } else { "false" })
        }
        Formula::And(cs) | Formula::Or(cs) => {
            out.push_str(if matches!(phi, Formula::And(_)) { "(and" } else { "(or" });
            for c in cs {
                out.push(' ');
                write_expr(c, out);
            }
            out.push(')');
        }
    }
}

/// `(assert …)` for the formula.
pub fn print_formula(phi: &Formula) -> String {
    format!("(assert {})", expr(phi))
}

/// A complete script: declarations of the free variables, the assertion
/// and `(check-sat)`.
pub fn print_script(phi: &Formula) -> String {
    let mut out = String::new();
    for x in phi.free_vars() {
        out.push_str(&format!("(declare-const {} Int)\n", symbol(x.name())));
    }
    out.push_str(&print_formula(phi));
    out.push_str("\n(check-sat)\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::VarId;

    #[test]
    fn canonical_atoms() {
        let x = VarId::new("x");
        assert_eq!(print_formula(&Formula::ge(LinearTerm::var(x.clone()), 4)), "(assert (>= x 4))");
        assert_eq!(
            print_formula(&Formula::cong_un(x.clone(), 2.into(), 1.into())),
            "(assert (= (mod x 2) 1))"
        );
        let t = LinearTerm::from_pairs([(x, -1), (VarId::new("y"), 3)]);
        assert_eq!(term(&t), "(+ (- x) (* 3 y))");
        assert_eq!(numeral(&BigInt::from(-7)), "(- 7)");
    }

    #[test]
    fn quotes_unusual_symbols() {
        assert_eq!(symbol("x!1"), "x!1");
        assert_eq!(symbol("a b"), "|a b|");
        assert_eq!(symbol("1x"), "|1x|");
    }
}
