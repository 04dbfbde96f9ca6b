//! The supported SMT-LIB 2 subset: parsing, printing and length
//! abstraction of string benchmarks.

mod length;
mod parse;
mod print;
mod sexp;

pub use length::{extract_length_abstraction, length_abstraction, LengthAbstraction, LengthAssertion};
pub use parse::{parse_formula, parse_quantified, Dialect, ParseReport, Warning};
pub use print::{atom as print_atom, expr as print_expr, numeral, print_formula, print_script, symbol, term as print_term};
pub use sexp::{parse_sexps, SExp, SourceSpan};
