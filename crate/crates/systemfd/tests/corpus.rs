//! The bundled corpus: elaborated `.fd` files match the elaborator byte for
//! byte, and each mutant fails at its documented stage.

use std::path::PathBuf;

use systemfd::analysis::check_hssdi;
use systemfd::elab::{elaborate_program, Options};
use systemfd::surface::parse_surface;
use systemfd::syntax::{parse_core, print_core};
use systemfd::typing::check_program;

fn read(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "corpus", name].iter().collect();
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn golden_elaborations_are_byte_identical() {
    for name in ["superclasses", "fundeps", "fundeps_polymorphic", "h98"] {
        let sp = parse_surface(&read(&format!("{name}.hsk"))).unwrap();
        let (p, _) = elaborate_program(&sp, &systemfd::prelude::env(), &Options::default()).unwrap();
        assert_eq!(print_core(&p), read(&format!("{name}.fd")), "{name}");
    }
}

#[test]
fn golden_core_files_check_and_round_trip() {
    for name in ["superclasses", "fundeps", "fundeps_polymorphic", "h98"] {
        let text = read(&format!("{name}.fd"));
        let p = parse_core(&text).unwrap();
        assert_eq!(print_core(&p), text, "{name}");
        let (env, diags) = check_program(&systemfd::prelude::env(), &p);
        assert!(diags.is_empty(), "{name}: {diags:?}");
        assert!(check_hssdi(&env).ok(), "{name}");
    }
}

#[test]
fn broken_fails_typechecking() {
    let p = parse_core(&read("broken.fd")).unwrap();
    let (_, diags) = check_program(&systemfd::prelude::env(), &p);
    assert_eq!(diags.len(), 1);
    assert_eq!(diags[0].code, "type-mismatch");
    assert_eq!(diags[0].decl.as_deref(), Some("bad"));
}

#[test]
fn erroneous_fundeps_fail_elaboration() {
    let sp = parse_surface(&read("fundeps_erroneous.hsk")).unwrap();
    let errs = elaborate_program(&sp, &systemfd::prelude::env(), &Options::default()).unwrap_err();
    assert!(errs.iter().any(|d| d.code == "fundep-violation"), "{errs:?}");
}

#[test]
fn unsaturated_fails_analysis() {
    let p = parse_core(&read("unsaturated.fd")).unwrap();
    let (env, diags) = check_program(&systemfd::prelude::env(), &p);
    assert!(diags.is_empty(), "{diags:?}");
    let report = check_hssdi(&env);
    assert!(!report.ok());
    let fwd = report.functions.iter().find(|f| f.name == "fdFwd").unwrap();
    assert_eq!(fwd.missing, vec![vec!["FIB".to_string(), "FMM".to_string()]]);
}
