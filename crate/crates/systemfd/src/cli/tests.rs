use super::*;

fn corpus(name: &str) -> String {
    format!("{}/corpus/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn fdc(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (vec![], vec![]);
    let code = run(std::iter::once("fdc").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn check_accepts_the_corpus() {
    let (code, out, _) = fdc(&["check", &corpus("superclasses.hsk"), &corpus("h98.fd")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 2);
}

#[test]
fn check_reports_the_failing_declaration_line() {
    let (code, _, err) = fdc(&["check", &corpus("broken.fd")]);
    assert_eq!(code, EXIT_DIAGNOSTICS);
    assert!(err.contains("broken.fd:4:"), "{err}");
    assert!(err.contains("type-mismatch"), "{err}");
}

#[test]
fn eval_det_and_all() {
    let file = corpus("superclasses.fd");
    let (code, out, _) = fdc(&["eval", &file, "-e", "lte [Bool] dOrdBool False True"]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "True\n"));
    let (code, out, _) = fdc(&["eval", &file, "--all", "-e", "(True <+> False) <+> True"]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "True\nFalse\n"));
}

#[test]
fn eval_out_of_fuel() {
    let (code, _, err) = fdc(&["eval", &corpus("fundeps_polymorphic.fd"), "--fuel", "3", "-e", "f [Bool] dFIB True"]);
    assert_eq!(code, EXIT_DIAGNOSTICS);
    assert!(err.contains("out-of-fuel"), "{err}");
}

#[test]
fn json_records() {
    let (code, out, _) = fdc(&["--json", "eval", &corpus("superclasses.fd"), "-e", "lte [Bool] dOrdBool True False"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["term"], "False");
    assert_eq!(v["type"], "Bool");
    let (code, out, _) = fdc(&["check", "--json", &corpus("broken.fd")]);
    assert_eq!(code, EXIT_DIAGNOSTICS);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["code"], "type-mismatch");
}

#[test]
fn analyze_and_absurd_mode() {
    let (code, out, _) = fdc(&["analyze", &corpus("unsaturated.fd")]);
    assert_eq!(code, EXIT_DIAGNOSTICS);
    assert!(out.contains("(FIB, FMM)"), "{out}");
    let (code, _, _) = fdc(&["analyze", "--absurd=omit", &corpus("unsaturated.fd")]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn elab_reports_fundep_violations() {
    let (code, _, err) = fdc(&["elab", &corpus("fundeps_erroneous.hsk")]);
    assert_eq!(code, EXIT_DIAGNOSTICS);
    assert!(err.contains("fundep-violation"), "{err}");
}

#[test]
fn specialize_removes_open_calls() {
    let (code, out, _) = fdc(&["specialize", &corpus("superclasses.fd"), "-e", "lte [Bool] dOrdBool False True"]);
    assert_eq!(code, EXIT_OK);
    assert!(!out.contains("lte") && !out.contains("guard") && !out.contains('0'), "{out}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(fdc(&["bogus"]).0, EXIT_USAGE);
    assert_eq!(fdc(&["eval", "x.fd"]).0, EXIT_USAGE);
    assert_eq!(fdc(&["eval", "--all", "--det", "x.fd", "-e", "True"]).0, EXIT_USAGE);
    assert_eq!(fdc(&["check", "/nonexistent.fd"]).0, EXIT_USAGE);
    assert_eq!(fdc(&["fuzz", "--prop", "nope"]).0, EXIT_USAGE);
    assert_eq!(fdc(&["fuzz", "--prelude", "nope"]).0, EXIT_USAGE);
    assert_eq!(fdc(&["--help"]).0, EXIT_OK);
}

#[test]
fn fuzz_runs_briefly() {
    let (code, out, _) = fdc(&["fuzz", "--prop", "progress", "--prelude", "maybe", "--count", "10", "--seed", "3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("passed 10"), "{out}");
}
