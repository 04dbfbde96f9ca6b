mod common;

use std::path::Path;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

use presdec::cli::{run, EXIT_INPUT, EXIT_NOT_DECOMPOSABLE, EXIT_OK, EXIT_RESOURCE, SCHEMA};

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn presdec(dir: &Path, args: &[&str]) -> Outcome {
    let mut full = vec!["presdec".to_string()];
    full.extend(args.iter().map(|a| {
        if a.ends_with(".smt2") { dir.join(a).to_string_lossy().into_owned() } else { a.to_string() }
    }));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(full, &mut std::io::empty(), &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn inputs() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let files = [
        ("eq.smt2", "(declare-fun x () Int)\n(declare-fun y () Int)\n(assert (= x y))\n"),
        ("sum.smt2", "(declare-fun x () Int)\n(declare-fun y () Int)\n(assert (>= (+ x y) 2))\n"),
        ("bound.smt2", "(declare-fun x () Int)\n(declare-fun y () Int)\n(assert (<= (+ x y) 8))\n"),
        ("qe_eq.smt2", "(declare-fun y () Int)\n(assert (exists ((x Int)) (= x y)))\n"),
        ("qe_ok.smt2", "(declare-fun y () Int)\n(assert (exists ((x Int)) (and (<= x 3) (>= (+ x y) 5))))\n"),
        ("broken.smt2", "(assert (<= x\n"),
        ("cubic.smt2", "(declare-fun x () Int)\n(assert (<= (* x x) 4))\n"),
    ];
    for (name, text) in files {
        std::fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

fn validate(json: &str) -> Value {
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    let report: Value = serde_json::from_str(json).unwrap();
    assert!(jsonschema::is_valid(&schema, &report), "{json}");
    report
}

#[test]
fn golden_check_text() {
    let d = inputs();
    let o = presdec(d.path(), &["check", "eq.smt2"]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(
        o.stdout,
        "{x}: non-decomposable (bound 2097152)\n\
         \x20 counterexample: x = 2097152  vs  x = 2097153\n\
         \x20 with: y = 2097152\n\
         {y}: non-decomposable (bound 2097152)\n\
         \x20 counterexample: y = 2097152  vs  y = 2097153\n\
         \x20 with: x = 2097152\n\
         verdict: non-decomposable\n"
    );
}

#[test]
fn golden_decompose_smt2() {
    let d = inputs();
    let o = presdec(d.path(), &["decompose", "--var", "x", "sum.smt2"]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(
        o.stdout,
        "; decomposition on {x}: 3 disjuncts\n\
         (declare-const x Int)\n\
         (declare-const y Int)\n\
         (assert (or (and (<= x 0) (>= y 2)) (and (<= x 1) (>= x 1) (>= y 1)) (>= x 2)))\n\
         (check-sat)\n"
    );
}

#[test]
fn decomposition_output_reads_back_equivalent() {
    let d = inputs();
    let o = presdec(d.path(), &["decompose", "bound.smt2"]);
    assert_eq!(o.code, EXIT_OK);
    let s = presdec::Solver::builtin();
    let back = common::parse(&o.stdout);
    assert!(common::is_monadic(&back));
    assert!(common::equivalent(&s, &back, &common::parse("(<= (+ x y) 8)")));
}

#[test]
fn json_reports_follow_the_schema() {
    let d = inputs();
    let runs: [&[&str]; 6] = [
        &["--format", "json", "check", "eq.smt2"],
        &["--format", "json", "check", "--block", "x,y", "sum.smt2"],
        &["--format", "json", "check", "--pi", "{x},{y}", "sum.smt2"],
        &["--format", "json", "decompose", "sum.smt2"],
        &["--format", "json", "qe", "qe_ok.smt2"],
        &["--format", "json", "qe", "qe_eq.smt2"],
    ];
    for args in runs {
        let o = presdec(d.path(), args);
        let report = validate(&o.stdout);
        assert!(report["command"].is_string());
        assert_eq!(report["status"] == "error", o.code != EXIT_OK, "{args:?}");
    }
    let o = presdec(d.path(), &["--format", "json", "check", "sum.smt2"]);
    assert_eq!(validate(&o.stdout)["decomposable"], Value::Bool(true));
    let o = presdec(d.path(), &["--format", "json", "check", "--pi", "{x},{y}", "eq.smt2"]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(validate(&o.stdout)["decomposable"], Value::Bool(false));
    let o = presdec(d.path(), &["--format", "json", "check", "--pi", "x|y", "sum.smt2"]);
    assert_eq!(o.code, EXIT_INPUT);
    assert_eq!(validate(&o.stdout)["error"]["exit_code"], EXIT_INPUT);
}

#[test]
fn strlen_json_and_rewrite() {
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/strlen_corpus");
    let out = tempfile::tempdir().unwrap();
    let out_dir = out.path().join("rw");
    let o = presdec(
        Path::new("."),
        &[
            "--format",
            "json",
            "strlen",
            corpus.to_str().unwrap(),
            "--rewrite",
            "--out-dir",
            out_dir.to_str().unwrap(),
        ],
    );
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let report = validate(&o.stdout);
    assert_eq!(report["scan"]["counts"]["total"], 12);
    let written = std::fs::read_dir(&out_dir).unwrap().count();
    assert_eq!(written, report["rewrites"].as_array().unwrap().len());
    assert!(written >= 6);
}

#[test]
fn exit_codes() {
    let d = inputs();
    let cases: [(&[&str], i32); 9] = [
        (&["check", "sum.smt2"], EXIT_OK),
        (&["check", "missing.smt2"], EXIT_INPUT),
        (&["check", "broken.smt2"], EXIT_INPUT),
        (&["check", "cubic.smt2"], EXIT_INPUT),
        (&["frobnicate"], EXIT_INPUT),
        (&["--solver", "/nonexistent/solver", "check", "sum.smt2"], EXIT_INPUT),
        (&["qe", "qe_eq.smt2"], EXIT_NOT_DECOMPOSABLE),
        (&["decompose", "eq.smt2"], EXIT_NOT_DECOMPOSABLE),
        (&["--max-disjuncts", "4", "decompose", "--var", "x", "bound.smt2"], EXIT_RESOURCE),
    ];
    for (args, want) in cases {
        let o = presdec(d.path(), args);
        assert_eq!(o.code, want, "{args:?}: {}", o.stderr);
        if want != EXIT_OK {
            assert!(!o.stderr.is_empty(), "{args:?}");
        }
    }
}

#[test]
fn qe_refusal_names_the_variable() {
    let d = inputs();
    let o = presdec(d.path(), &["qe", "qe_eq.smt2"]);
    assert_eq!(o.stderr.trim_end(), "presdec: not decomposable: fast path inapplicable for {x}");
}

#[test]
fn binary_uses_the_same_exit_codes() {
    let d = inputs();
    let bin = env!("CARGO_BIN_EXE_presdec");
    let status = |args: &[&str]| {
        Command::new(bin).args(args).current_dir(d.path()).output().unwrap().status.code().unwrap()
    };
    assert_eq!(status(&["check", "sum.smt2"]), EXIT_OK);
    assert_eq!(status(&["qe", "qe_eq.smt2"]), EXIT_NOT_DECOMPOSABLE);
    assert_eq!(status(&["-q", "--max-disjuncts", "4", "decompose", "--var", "x", "bound.smt2"]), EXIT_RESOURCE);

    let solve = Command::new(bin)
        .arg("solve")
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .and_then(|mut child| {
            use std::io::Write;
            child
                .stdin
                .take()
                .unwrap()
                .write_all(b"(declare-const x Int)\n(assert (= (* 2 x) 6))\n(check-sat)\n(get-model)\n")?;
            child.wait_with_output()
        })
        .unwrap();
    let text = String::from_utf8(solve.stdout).unwrap();
    assert!(text.starts_with("sat\n") && text.contains("(define-fun x () Int 3)"), "{text}");
}

#[test]
fn verbose_logging_from_worker_threads_does_not_block() {
    let d = inputs();
    let mut child = Command::new(env!("CARGO_BIN_EXE_presdec"))
        .args(["-vvv", "qe", "qe_ok.smt2"])
        .current_dir(d.path())
        .stdout(std::process::Stdio::null())
        .stderr(std::process::Stdio::null())
        .spawn()
        .unwrap();
    let start = std::time::Instant::now();
    loop {
        if let Some(status) = child.try_wait().unwrap() {
            assert_eq!(status.code(), Some(EXIT_OK));
            break;
        }
        if start.elapsed() > std::time::Duration::from_secs(60) {
            child.kill().unwrap();
            panic!("presdec -vvv qe did not finish");
        }
        std::thread::sleep(std::time::Duration::from_millis(20));
    }
}
