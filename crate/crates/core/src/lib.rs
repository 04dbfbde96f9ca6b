//! Decomposition of quantifier-free Presburger arithmetic over the
//! naturals: monadic and variadic decomposability checks, explicit
//! decompositions, decomposition-based quantifier elimination and the
//! translation of monadic string-length constraints into regular
//! constraints.

pub mod decomposition;
pub mod error;
pub mod formula;
pub mod lia;
pub mod mondec;
pub mod cli;
pub mod qelim;
pub mod smtlib;
pub mod strlen;
pub mod vardec;

pub use decomposition::{Case, Counterexample, DecompVerdict, DecomposeOptions, Decomposition};
pub use error::{Error, Result};
pub use formula::{Assignment, Atom, Formula, LinearTerm, Rel, VarId};
pub use lia::{check_sat, Backend, SatResult, Solver, SolverConfig, Verdict};
