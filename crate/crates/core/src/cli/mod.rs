//! The `presdec` command line: argument parsing, dispatch and report
//! emission. [`run`] is the whole program minus process setup, so it can
//! be driven from tests.

mod report;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::decomposition::{DecomposeOptions, DecompVerdict};
use crate::error::{Error, Result};
use crate::formula::{to_pnf, Formula, VarId};
use crate::lia::{ExternalSolver, Solver, SolverConfig};
use crate::mondec::{check_decomposable_on, check_monadic, decompose_full_with, decompose_on_with};
use crate::qelim::eliminate_with;
use crate::smtlib::{self, parse_formula, parse_quantified};
use crate::strlen::{rewrite_file, scan_paths, FileStatus};
use crate::vardec::{check_pi, check_variadic_on_with, decompose_variadic_on_with, pi_decompose_with};

pub use report::{Report, RewriteSummary, VerdictReport, SCHEMA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_DECOMPOSABLE: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "presdec", version, about = "Decomposition checks for quantifier-free Presburger formulas")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Settings shared by every subcommand.
#[derive(Debug, Args)]
pub struct RunArgs {
    /// External SMT solver command (e.g. "z3 -in"); defaults to $PRESDEC_SOLVER, then the built-in solver.
    #[arg(long, global = true, value_name = "CMD")]
    pub solver: Option<String>,
    /// Wall-clock budget in seconds for the whole command.
    #[arg(long, global = true, value_name = "SECONDS", value_parser = positive_f64)]
    pub timeout: Option<f64>,
    /// Search node budget per solver call.
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    pub max_nodes: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Largest decomposition (in disjuncts) that will be written.
    #[arg(long, global = true, value_name = "N", default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_disjuncts: u64,
    /// Build decompositions with the worst-case bound instead of the smallest validated one.
    #[arg(long, global = true)]
    pub no_bound_search: bool,
    /// Write the report here instead of standard output.
    #[arg(short, long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// More log output (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    /// Only errors on standard error.
    #[arg(short, long, global = true)]
    pub quiet: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Smt2,
}

/// Which variables to separate.
#[derive(Debug, Default, Args)]
#[group(multiple = false)]
pub struct Target {
    /// A single variable.
    #[arg(long, value_name = "VAR")]
    pub var: Option<String>,
    /// A block of variables, comma separated.
    #[arg(long, value_name = "V1,V2,...", value_delimiter = ',')]
    pub block: Option<Vec<String>>,
    /// A partition of all variables, e.g. "{x},{y,z}".
    #[arg(long, value_name = "SPEC")]
    pub pi: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide decomposability (every variable when no target is given).
    Check {
        file: PathBuf,
        #[command(flatten)]
        target: Target,
    },
    /// Build a decomposition (fully monadic when no target is given).
    Decompose {
        file: PathBuf,
        #[command(flatten)]
        target: Target,
    },
    /// Eliminate one quantifier block whose matrix separates the bound variables.
    Qe { file: PathBuf },
    /// Classify the length constraints of string benchmarks.
    Strlen {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Also write benchmarks with decomposable length assertions replaced by regular constraints.
        #[arg(long)]
        rewrite: bool,
        /// Directory for rewritten benchmarks.
        #[arg(long, value_name = "DIR", default_value = "rewritten", requires = "rewrite")]
        out_dir: PathBuf,
    },
    /// Answer an SMT-LIB QF_LIA query from standard input over the naturals.
    #[command(hide = true)]
    Solve,
}

fn positive_f64(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a positive number of seconds")),
    }
}

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotDecomposable { .. } => EXIT_NOT_DECOMPOSABLE,
        Error::ResourceLimit(_) | Error::TooLarge { .. } | Error::TooManyFunctions { .. } | Error::TooManyVariables { .. } => {
            EXIT_RESOURCE
        }
        _ => EXIT_INPUT,
    }
}

/// Parses `{x},{y,z}` into parts.
pub fn parse_pi(spec: &str) -> Result<Vec<Vec<VarId>>> {
    let bad = || Error::InvalidInput(format!("malformed partition `{spec}`; expected e.g. \"{{x}},{{y,z}}\""));
    let mut parts = Vec::new();
    let mut rest = spec.trim();
    while !rest.is_empty() {
        let body = rest.strip_prefix('{').ok_or_else(bad)?;
        let close = body.find('}').ok_or_else(bad)?;
        let names: Vec<VarId> = body[..close]
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(VarId::new)
            .collect();
        parts.push(names);
        rest = body[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
            if rest.is_empty() {
                return Err(bad());
            }
        } else if !rest.is_empty() {
            return Err(bad());
        }
    }
    if parts.is_empty() {
        return Err(bad());
    }
    Ok(parts)
}

struct Context {
    solver: Solver,
    opts: DecomposeOptions,
}

impl RunArgs {
    fn context(&self) -> Result<Context> {
        let mut solver = match &self.solver {
            Some(cmd) => Solver::external(
                ExternalSolver::parse(cmd).ok_or_else(|| Error::InvalidInput("empty --solver command".into()))?,
            ),
            None => Solver::from_env(),
        };
        let mut config = SolverConfig::default();
        if let Some(n) = self.max_nodes {
            config.max_nodes = n;
        }
        config.deadline = self.timeout.map(|s| Instant::now() + Duration::from_secs_f64(s));
        solver.config = config;
        let opts = DecomposeOptions {
            bound_search: !self.no_bound_search,
            max_disjuncts: usize::try_from(self.max_disjuncts).unwrap_or(usize::MAX),
            ..DecomposeOptions::default()
        };
        Ok(Context { solver, opts })
    }
}

/// Log level requested by the verbosity flags of `args`.
pub fn log_level<T: Into<OsString> + Clone>(args: &[T]) -> log::LevelFilter {
    let Ok(cli) = Cli::try_parse_from(args.iter().cloned()) else {
        return log::LevelFilter::Warn;
    };
    match (cli.run.quiet, cli.run.verbose) {
        (true, _) => log::LevelFilter::Error,
        (false, 0) => log::LevelFilter::Warn,
        (false, 1) => log::LevelFilter::Info,
        (false, 2) => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    }
}

/// Runs the program on `args` (including the program name) and returns
/// the exit status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let format = cli.run.format.unwrap_or(match cli.command {
        Command::Decompose { .. } | Command::Qe { .. } => Format::Smt2,
        _ => Format::Text,
    });
    let name = command_name(&cli.command);
    let outcome = cli
        .run
        .context()
        .and_then(|ctx| dispatch(&cli.command, &ctx, stdin));
    let (report, code) = match outcome {
        Ok(r) => {
            if !cli.run.quiet {
                for w in &r.warnings {
                    let _ = writeln!(stderr, "presdec: warning: {w}");
                }
            }
            (r, EXIT_OK)
        }
        Err(e) => {
            let code = exit_code(&e);
            let message = match (&cli.command, &e) {
                (Command::Qe { .. }, Error::NotDecomposable { target }) => {
                    format!("not decomposable: fast path inapplicable for {target}")
                }
                _ => e.to_string(),
            };
            let _ = writeln!(stderr, "presdec: {message}");
            (Report::error(name, &e, message, code), code)
        }
    };
    if matches!(cli.command, Command::Solve) && code == EXIT_OK {
        let _ = stdout.write_all(report.text.as_deref().unwrap_or("").as_bytes());
        return code;
    }
    let rendered = match format {
        Format::Json => serde_json::to_string_pretty(&report).expect("reports serialize") + "\n",
        Format::Text if code == EXIT_OK => report.render_text(),
        Format::Smt2 if code == EXIT_OK => report.render_smt2(),
        _ => String::new(),
    };
    if rendered.is_empty() {
        return code;
    }
    let written = match &cli.run.output {
        Some(path) => std::fs::write(path, rendered.as_bytes()),
        None => stdout.write_all(rendered.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "presdec: cannot write output: {e}");
        return EXIT_INPUT;
    }
    code
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Decompose { .. } => "decompose",
        Command::Qe { .. } => "qe",
        Command::Strlen { .. } => "strlen",
        Command::Solve => "solve",
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn load_formula(path: &Path, stderr_warnings: &mut Vec<String>) -> Result<Formula> {
    let report = parse_formula(&read(path)?)?;
    stderr_warnings.extend(report.warnings.iter().map(|w| format!("{}: {}", w.span, w.message)));
    Ok(report.formula)
}

/// Resolves a target against the formula's variables.
fn resolve_target(phi: &Formula, t: &Target) -> Result<Option<TargetKind>> {
    let free = phi.free_vars();
    let known = |name: &str| -> Result<VarId> {
        let v = VarId::new(name);
        if free.contains(&v) {
            Ok(v)
        } else {
            Err(Error::InvalidInput(format!("unknown variable `{name}`")))
        }
    };
    if let Some(v) = &t.var {
        return Ok(Some(TargetKind::Var(known(v)?)));
    }
    if let Some(b) = &t.block {
        let vars = b.iter().map(|s| known(s.trim())).collect::<Result<Vec<_>>>()?;
        if vars.is_empty() {
            return Err(Error::InvalidInput("empty --block".into()));
        }
        return Ok(Some(TargetKind::Block(vars)));
    }
    if let Some(spec) = &t.pi {
        let parts = parse_pi(spec)?;
        for v in parts.iter().flatten() {
            known(v.name())?;
        }
        return Ok(Some(TargetKind::Pi(parts)));
    }
    Ok(None)
}

enum TargetKind {
    Var(VarId),
    Block(Vec<VarId>),
    Pi(Vec<Vec<VarId>>),
}

fn dispatch(cmd: &Command, ctx: &Context, stdin: &mut dyn Read) -> Result<Report> {
    let mut warnings = Vec::new();
    let mut report = match cmd {
        Command::Check { file, target } => {
            let phi = load_formula(file, &mut warnings)?;
            let verdicts: Vec<DecompVerdict> = match resolve_target(&phi, target)? {
                Some(TargetKind::Var(x)) => vec![check_decomposable_on(&phi, &x, None, &ctx.solver)?],
                Some(TargetKind::Block(xs)) => vec![check_variadic_on_with(&phi, &xs, None, &ctx.solver, &ctx.opts)?],
                Some(TargetKind::Pi(parts)) => check_pi(&phi, &parts, &ctx.solver)?,
                None => check_monadic(&phi, &ctx.solver)?.per_variable.into_values().collect(),
            };
            Report::check(file, &verdicts)
        }
        Command::Decompose { file, target } => {
            let phi = load_formula(file, &mut warnings)?;
            let (label, out) = match resolve_target(&phi, target)? {
                Some(TargetKind::Var(x)) => (
                    format!("{{{x}}}"),
                    decompose_on_with(&phi, &x, &ctx.solver, &ctx.opts)?.to_formula(),
                ),
                Some(TargetKind::Block(xs)) => (
                    format!("{{{}}}", join(&xs)),
                    decompose_variadic_on_with(&phi, &xs, &ctx.solver, &ctx.opts)?.to_formula(),
                ),
                Some(TargetKind::Pi(parts)) => (
                    parts.iter().map(|p| format!("{{{}}}", join(p))).collect::<Vec<_>>().join(","),
                    pi_decompose_with(&phi, &parts, &ctx.solver, &ctx.opts)?,
                ),
                None => ("monadic".into(), decompose_full_with(&phi, &ctx.solver, &ctx.opts)?),
            };
            let out = to_pnf(&out);
            let n = count_disjuncts(&out);
            if n > ctx.opts.max_disjuncts as u128 {
                return Err(Error::TooLarge {
                    estimated: n.to_string(),
                    cap: ctx.opts.max_disjuncts,
                });
            }
            Report::formula("decompose", file, Some(label), &out, Some(n))
        }
        Command::Qe { file } => {
            let (block, ws) = parse_quantified(&read(file)?)?;
            warnings.extend(ws.iter().map(|w| format!("{}: {}", w.span, w.message)));
            let out = eliminate_with(&block, &ctx.solver, &ctx.opts)?;
            Report::formula("qe", file, None, &out, None)
        }
        Command::Strlen { paths, rewrite, out_dir } => strlen(paths, rewrite.then_some(out_dir.as_path()), ctx)?,
        Command::Solve => {
            let mut text = String::new();
            stdin.read_to_string(&mut text)?;
            solve(&text, &ctx.solver)?
        }
    };
    report.warnings = warnings;
    Ok(report)
}

fn join(vs: &[VarId]) -> String {
    vs.iter().map(VarId::name).collect::<Vec<_>>().join(",")
}

/// Number of terms in the disjunctive normal form, without building it.
pub fn count_disjuncts(phi: &Formula) -> u128 {
    match phi {
        Formula::False => 0,
        Formula::True | Formula::Atom(_) | Formula::Not(_) => 1,
        Formula::Or(cs) => cs.iter().map(count_disjuncts).fold(0u128, u128::saturating_add),
        Formula::And(cs) => cs.iter().map(count_disjuncts).fold(1u128, u128::saturating_mul),
    }
}

fn strlen(paths: &[PathBuf], out_dir: Option<&Path>, ctx: &Context) -> Result<Report> {
    let scan = scan_paths(paths, &ctx.solver)?;
    let mut rewrites = Vec::new();
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        for f in &scan.files {
            if f.status != FileStatus::Decomposable {
                continue;
            }
            let r = rewrite_file(&f.path, &ctx.solver, &ctx.opts)?;
            let target = dir.join(relative_name(paths, &f.path));
            if let Some(parent) = target.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(&target, &r.text)?;
            rewrites.push(RewriteSummary {
                path: f.path.clone(),
                output: target,
                replaced: r.rewritten.len(),
                kept: r.kept.iter().map(|(s, m)| format!("{s}: {m}")).collect(),
            });
        }
    }
    Ok(Report::strlen(scan, rewrites))
}

/// Path of `file` below whichever input root contains it.
fn relative_name(roots: &[PathBuf], file: &Path) -> PathBuf {
    for r in roots {
        if r.is_dir() {
            if let Ok(rel) = file.strip_prefix(r) {
                return rel.to_path_buf();
            }
        }
    }
    file.file_name().map(PathBuf::from).unwrap_or_else(|| file.to_path_buf())
}

fn solve(text: &str, solver: &Solver) -> Result<Report> {
    let phi = parse_formula(text)?.formula;
    let result = solver.check_sat(&phi)?;
    let mut out = String::new();
    match result.model {
        None => out.push_str("unsat\n"),
        Some(m) => {
            out.push_str("sat\n(\n");
            for (x, v) in m.iter() {
                out.push_str(&format!(
                    "  (define-fun {} () Int {})\n",
                    smtlib::symbol(x.name()),
                    smtlib::numeral(v)
                ));
            }
            out.push_str(")\n");
        }
    }
    let mut r = Report::new("solve");
    r.text = Some(out);
    Ok(r)
}
