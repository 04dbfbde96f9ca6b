//! Satisfiability of quantifier-free Presburger formulas over ℕ.
//!
//! The builtin backend expands binary congruences, searches the
//! disjunctive structure lazily and solves each leaf with exact branch and
//! bound. An external SMT-LIB solver can be plugged in instead; its
//! models are re-verified before they are accepted.

mod congruence;
mod equalities;
mod external;
mod ilp;
mod search;
mod simplex;

use std::time::{Duration, Instant};

use num_bigint::BigInt;

pub use congruence::{expand_all, expand_congruence};
pub(crate) use congruence::lcm_all;
pub use equalities::{normalize_to_equalities, small_model_bound, EqualitySystem, SemilinearBound};
pub use external::ExternalSolver;

use crate::error::{Error, Result};
use crate::formula::{to_pnf, Assignment, Formula, VarId};

pub use crate::formula::Conjunct;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Backend {
    #[default]
    Builtin,
    External(ExternalSolver),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Search nodes per query (disjunction branches plus branch-and-bound nodes).
    pub max_nodes: u64,
    /// Absolute deadline shared by every query made with this configuration.
    pub deadline: Option<Instant>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_nodes: 2_000_000,
            deadline: None,
        }
    }
}

/// A backend together with its resource limits.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Solver {
    pub backend: Backend,
    pub config: SolverConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Sat,
    Unsat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveStats {
    pub backend: &'static str,
    pub elapsed: Duration,
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatResult {
    pub verdict: Verdict,
    /// Present exactly when the verdict is `Sat`; covers every free variable.
    pub model: Option<Assignment>,
    pub stats: SolveStats,
}

pub(crate) struct Budget {
    nodes: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
}

impl Budget {
    pub(crate) fn new(config: &SolverConfig) -> Self {
        Budget {
            nodes: 0,
            max_nodes: config.max_nodes,
            deadline: config.deadline,
        }
    }

    #[cfg(test)]
    pub(crate) fn unlimited() -> Self {
        Budget {
            nodes: 0,
            max_nodes: u64::MAX,
            deadline: None,
        }
    }

    pub(crate) fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::ResourceLimit(format!(
                "search node budget of {} exhausted",
                self.max_nodes
            )));
        }
        if self.nodes.is_multiple_of(256) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    return Err(Error::ResourceLimit("time budget exhausted".into()));
                }
            }
        }
        Ok(())
    }
}

impl Solver {
    pub fn builtin() -> Self {
        Solver::default()
    }

    pub fn external(solver: ExternalSolver) -> Self {
        Solver {
            backend: Backend::External(solver),
            config: SolverConfig::default(),
        }
    }

    /// Builtin unless `PRESDEC_SOLVER` names an external command.
    pub fn from_env() -> Self {
        match std::env::var("PRESDEC_SOLVER") {
            Ok(cmd) if !cmd.trim().is_empty() => ExternalSolver::parse(&cmd)
                .map(Solver::external)
                .unwrap_or_default(),
            _ => Solver::builtin(),
        }
    }

    pub fn with_config(mut self, config: SolverConfig) -> Self {
        self.config = config;
        self
    }

    pub fn check_sat(&self, phi: &Formula) -> Result<SatResult> {
        check_sat(phi, self)
    }

    pub fn is_sat(&self, phi: &Formula) -> Result<bool> {
        Ok(self.check_sat(phi)?.verdict == Verdict::Sat)
    }

    pub fn model(&self, phi: &Formula) -> Result<Option<Assignment>> {
        Ok(self.check_sat(phi)?.model)
    }
}

/// Decides `phi` over the naturals. A `Sat` model always satisfies `phi`.
pub fn check_sat(phi: &Formula, solver: &Solver) -> Result<SatResult> {
    let start = Instant::now();
    let vars: Vec<VarId> = phi.free_vars().into_iter().collect();
    let (model, backend, nodes) = match &solver.backend {
        Backend::Builtin => {
            let prepared = to_pnf(&expand_all(&to_pnf(phi)));
            let mut budget = Budget::new(&solver.config);
            let point = search::Search::new(&vars, &mut budget).run(&prepared)?;
            let model = point.map(|vals| {
                let mut m = Assignment::new();
                for (x, v) in vars.iter().zip(vals) {
                    m.insert(x.clone(), v);
                }
                m
            });
            (model, "builtin", budget.nodes)
        }
        Backend::External(ext) => (ext.solve(phi, &vars)?, "external", 0),
    };
    if let Some(m) = &model {
        if !phi.eval(m)? {
            return Err(Error::BackendFailure(format!(
                "{backend} backend returned a model that does not satisfy the query: {m}"
            )));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_millis(250) {
        log::debug!("slow {backend} query ({elapsed:.2?}, {nodes} nodes): {phi}");
    }
    Ok(SatResult {
        verdict: if model.is_some() {
            Verdict::Sat
        } else {
            Verdict::Unsat
        },
        model,
        stats: SolveStats {
            backend,
            elapsed,
            nodes,
        },
    })
}

/// Largest absolute constant in `phi`, at least 1.
pub(crate) fn largest_constant(phi: &Formula) -> BigInt {
    use crate::formula::Atom;
    use num_traits::Signed;
    let mut m = BigInt::from(1);
    for a in phi.atoms() {
        let c = match a {
            Atom::Ineq { term, bound, .. } => term.max_abs_coeff().max(bound.abs()),
            Atom::CongUn { k, c, .. } => k.clone().max(c.clone()),
            Atom::CongBin { a, k, b, .. } => a.abs().max(b.abs()).max(k.clone()),
        };
        m = m.max(c);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{LinearTerm, VarId};

    fn v(s: &str) -> VarId {
        VarId::new(s)
    }

    #[test]
    fn empty_interval_is_unsat() {
        let x = LinearTerm::var(v("x"));
        let f = Formula::and([Formula::ge(x.clone(), 1), Formula::le(x, 0)]);
        assert_eq!(check_sat(&f, &Solver::builtin()).unwrap().verdict, Verdict::Unsat);
    }

    #[test]
    fn sum_with_parity() {
        let f = Formula::and([
            Formula::eq(LinearTerm::from_pairs([(v("x"), 1), (v("y"), 1)]), 3),
            Formula::cong_un(v("x"), 2.into(), 1.into()),
        ]);
        let r = check_sat(&f, &Solver::builtin()).unwrap();
        assert_eq!(r.verdict, Verdict::Sat);
        assert!(f.eval(r.model.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn even_multiple_never_odd() {
        let f = Formula::cong_bin(2.into(), v("x"), 4.into(), 3.into(), v("y"));
        let g = Formula::and([f, Formula::eq(LinearTerm::var(v("y")), 1)]);
        assert_eq!(check_sat(&g, &Solver::builtin()).unwrap().verdict, Verdict::Unsat);
        let h = Formula::cong_scaled(2.into(), v("x"), 4.into(), 3.into());
        assert_eq!(check_sat(&h, &Solver::builtin()).unwrap().verdict, Verdict::Unsat);
    }

    #[test]
    fn node_budget_reports_resource_limit() {
        let x = LinearTerm::var(v("x"));
        let y = LinearTerm::var(v("y"));
        let f = Formula::or((0..50).map(|i| Formula::and([Formula::eq(x.clone(), i), Formula::eq(y.clone(), i + 1000)])));
        let solver = Solver::builtin().with_config(SolverConfig {
            max_nodes: 1,
            deadline: None,
        });
        assert!(matches!(check_sat(&f, &solver), Err(Error::ResourceLimit(_))));
    }
}
