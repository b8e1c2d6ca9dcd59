use super::*;
use crate::prelude;
use crate::surface::parse_surface;
use crate::syntax::print_core;

fn elab(src: &str) -> Result<String, Vec<Diagnostic>> {
    let p = parse_surface(src).unwrap();
    elaborate_program(&p, &prelude::env(), &Options::default()).map(|(p, _)| print_core(&p))
}

fn corpus(name: &str) -> String {
    std::fs::read_to_string(format!("{}/corpus/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn superclasses() {
    let out = elab(&corpus("superclasses.hsk")).unwrap();
    println!("{out}");
    assert!(out.contains("open Eq : * -> *;"));
    assert!(out.contains("method eq : forall a. Eq a -> a -> a -> Bool;"));
    assert!(out.contains("method ordEq"));
    assert!(out.contains("refl(->) @ h @ (refl(->) @ h @ refl(Bool))"));
}

#[test]
fn fundeps() {
    let out = elab(&corpus("fundeps.hsk")).unwrap();
    println!("{out}");
    assert!(out.contains("method fdFwd : forall t u v. F t u -> F t v -> u ~ v;"));
    assert!(out.contains("method fdBwd : forall t u v. F t u -> F v u -> t ~ v;"));
    assert_eq!(out.matches("instance fdFwd =").count(), 4);
}

#[test]
fn fundeps_polymorphic() {
    let out = elab(&corpus("fundeps_polymorphic.hsk")).unwrap();
    println!("{out}");
    assert!(out.contains("fdFwd [Int] [Bool] [t] (FIB [Int] [Bool] refl(Int) refl(Bool)) d"));
}

#[test]
fn fundeps_erroneous() {
    let e = elab(&corpus("fundeps_erroneous.hsk")).unwrap_err();
    assert_eq!(e[0].code, "fundep-violation");
}

#[test]
fn h98() {
    let out = elab(&corpus("h98.hsk")).unwrap();
    println!("{out}");
}

#[test]
fn output_reads_back() {
    for f in ["superclasses.hsk", "fundeps.hsk", "fundeps_polymorphic.hsk", "h98.hsk"] {
        let p = parse_surface(&corpus(f)).unwrap();
        let (core, _) = elaborate_program(&p, &prelude::env(), &Options::default()).unwrap();
        let text = print_core(&core);
        let back = crate::syntax::parse_core(&text).unwrap_or_else(|e| panic!("{f}: {e}\n{text}"));
        assert_eq!(back, core, "{f}");
    }
}

fn eval(file: &str, expr: &str) -> String {
    use crate::reduce::{whnf, Whnf};
    let p = parse_surface(&corpus(file)).unwrap();
    let (_, env) = elaborate_program(&p, &prelude::env(), &Options::default()).unwrap();
    let m = crate::syntax::parse_term(expr).unwrap();
    crate::typing::infer_term(&env, &m).unwrap();
    match whnf(&env, &m, 10_000) {
        Whnf::Value { term, .. } => crate::syntax::print_term(&term),
        other => panic!("{other:?}"),
    }
}

#[test]
fn elaborated_programs_run() {
    assert_eq!(eval("superclasses.hsk", "lte [Bool] dOrdBool False True"), "True");
    assert_eq!(eval("superclasses.hsk", "lte [Bool] dOrdBool True False"), "False");
    assert_eq!(eval("superclasses.hsk", "eq [Bool] dEqBool True True"), "True");
    assert_eq!(eval("fundeps_polymorphic.hsk", "f [Bool] (FIB [Int] [Bool] refl(Int) refl(Bool)) True"), "False");
    assert_eq!(eval("h98.hsk", "test"), "True");
}
