use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;

use crate::decomposition::DecompVerdict;
use crate::error::Error;
use crate::formula::{Assignment, Formula};
use crate::smtlib::{print_expr, print_script};
use crate::strlen::ScanReport;

/// JSON Schema every `--format json` report validates against.
pub const SCHEMA: &str = include_str!("../../schema/report.schema.json");

/// Everything a command produces; rendered as JSON, text or SMT-LIB.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposable: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<VerdictReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disjuncts: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rewrites: Vec<RewriteSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
    #[serde(skip)]
    pub text: Option<String>,
    #[serde(skip)]
    pub(crate) result: Option<Formula>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictReport {
    pub target: Vec<String>,
    pub decomposable: bool,
    /// Decimal; the bound can exceed 64 bits.
    pub bound: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub left: BTreeMap<String, Value>,
    pub right: BTreeMap<String, Value>,
    pub context: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RewriteSummary {
    pub path: PathBuf,
    pub output: PathBuf,
    pub replaced: usize,
    pub kept: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorReport {
    pub kind: &'static str,
    pub message: String,
    pub exit_code: i32,
}

fn values(a: &Assignment) -> BTreeMap<String, Value> {
    a.iter()
        .map(|(x, v)| {
            let value = v.to_u64().map(Value::from).unwrap_or_else(|| Value::from(v.to_string()));
            (x.name().to_string(), value)
        })
        .collect()
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::UnboundVariable(_) => "unbound_variable",
        Error::Syntax { .. } => "syntax",
        Error::NonlinearTerm { .. } => "nonlinear_term",
        Error::UnsupportedSort { .. } => "unsupported_sort",
        Error::Unsupported { .. } => "unsupported",
        Error::NegativeLiteralVariableDomain { .. } => "negative_value",
        Error::BackendFailure(_) => "backend_failure",
        Error::ResourceLimit(_) => "resource_limit",
        Error::NotDecomposable { .. } => "not_decomposable",
        Error::EquivalenceCheckFailed(_) => "equivalence_check_failed",
        Error::TooManyVariables { .. } => "too_many_variables",
        Error::NotMonadic(_) => "not_monadic",
        Error::TooManyFunctions { .. } => "too_many_functions",
        Error::TooLarge { .. } => "too_large",
        Error::InvalidInput(_) => "invalid_input",
        Error::Io(_) => "io",
    }
}

impl VerdictReport {
    pub fn of(v: &DecompVerdict) -> Self {
        VerdictReport {
            target: v.target.iter().map(|x| x.name().to_string()).collect(),
            decomposable: v.decomposable,
            bound: v.bound.to_string(),
            counterexample: v.counterexample.as_ref().map(|c| CounterexampleReport {
                left: values(&c.left),
                right: values(&c.right),
                context: values(&c.context),
                partition: c.partition.as_ref().map(ToString::to_string),
            }),
        }
    }

    fn label(&self) -> String {
        format!("{{{}}}", self.target.join(", "))
    }
}

fn show(m: &BTreeMap<String, Value>) -> String {
    let parts: Vec<String> = m
        .iter()
        .map(|(k, v)| match v {
            Value::String(s) => format!("{k} = {s}"),
            other => format!("{k} = {other}"),
        })
        .collect();
    if parts.is_empty() {
        "(none)".into()
    } else {
        parts.join(", ")
    }
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            status: "ok",
            input: None,
            target: None,
            decomposable: None,
            verdicts: Vec::new(),
            formula: None,
            disjuncts: None,
            scan: None,
            rewrites: Vec::new(),
            warnings: Vec::new(),
            error: None,
            text: None,
            result: None,
        }
    }

    pub fn error(command: &'static str, e: &Error, message: String, exit_code: i32) -> Self {
        let mut r = Report::new(command);
        r.status = "error";
        r.error = Some(ErrorReport {
            kind: error_kind(e),
            message,
            exit_code,
        });
        r
    }

    pub fn check(input: &Path, verdicts: &[DecompVerdict]) -> Self {
        let mut r = Report::new("check");
        r.input = Some(input.to_path_buf());
        r.decomposable = Some(verdicts.iter().all(|v| v.decomposable));
        r.verdicts = verdicts.iter().map(VerdictReport::of).collect();
        r
    }

    pub fn formula(
        command: &'static str,
        input: &Path,
        target: Option<String>,
        phi: &Formula,
        disjuncts: Option<u128>,
    ) -> Self {
        let mut r = Report::new(command);
        r.input = Some(input.to_path_buf());
        r.target = target;
        r.formula = Some(print_expr(phi));
        r.disjuncts = disjuncts;
        r.result = Some(phi.clone());
        r
    }

    pub fn strlen(scan: ScanReport, rewrites: Vec<RewriteSummary>) -> Self {
        let mut r = Report::new("strlen");
        r.scan = Some(scan);
        r.rewrites = rewrites;
        r
    }

    /// Human-readable output; stable for golden tests.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        if let Some(t) = &self.text {
            return t.clone();
        }
        for v in &self.verdicts {
            let verdict = if v.decomposable { "decomposable" } else { "non-decomposable" };
            let _ = writeln!(out, "{}: {verdict} (bound {})", v.label(), v.bound);
            if let Some(c) = &v.counterexample {
                let _ = writeln!(out, "  counterexample: {}  vs  {}", show(&c.left), show(&c.right));
                let _ = writeln!(out, "  with: {}", show(&c.context));
                if let Some(p) = &c.partition {
                    let _ = writeln!(out, "  functions: {p}");
                }
            }
        }
        if let Some(d) = self.decomposable {
            let _ = writeln!(out, "verdict: {}", if d { "decomposable" } else { "non-decomposable" });
        }
        if let Some(phi) = &self.result {
            if let Some(n) = self.disjuncts {
                let _ = writeln!(out, "disjuncts: {n}");
            }
            let _ = writeln!(out, "{phi}");
        }
        if let Some(scan) = &self.scan {
            out.push_str(&scan.table());
            for f in &scan.files {
                let detail = f.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default();
                let _ = writeln!(out, "{}: {}{detail}", f.path.display(), f.status);
            }
            for r in &self.rewrites {
                let _ = writeln!(
                    out,
                    "rewrote {} assertion(s): {} -> {}",
                    r.replaced,
                    r.path.display(),
                    r.output.display()
                );
            }
        }
        out
    }

    /// SMT-LIB output: a script for formula results, comments otherwise.
    pub fn render_smt2(&self) -> String {
        if let Some(phi) = &self.result {
            let mut out = String::new();
            if let (Some(t), Some(n)) = (&self.target, self.disjuncts) {
                let _ = writeln!(out, "; decomposition on {t}: {n} disjuncts");
            }
            out.push_str(&print_script(phi));
            return out;
        }
        self.render_text()
            .lines()
            .map(|l| format!("; {l}\n"))
            .collect()
    }
}
