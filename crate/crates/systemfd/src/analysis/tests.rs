use super::*;
use crate::elab::{elaborate_program, Absurd};
use crate::prelude;
use crate::reduce::{choice_leaves, whnf, Whnf};
use crate::surface::parse_surface;
use crate::syntax::{parse_core, parse_term, Decl, Program};
use crate::typing::{check_program, infer_term};

fn corpus(name: &str) -> String {
    std::fs::read_to_string(format!("{}/corpus/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn elaborated(name: &str, opts: &Options) -> (Program, Env) {
    let p = parse_surface(&corpus(name)).unwrap();
    elaborate_program(&p, &prelude::env(), opts).unwrap()
}

fn value(env: &Env, m: &Node) -> Node {
    match whnf(env, m, 100_000) {
        Whnf::Value { term, .. } => {
            let leaves = choice_leaves(&term);
            if leaves.len() == 1 {
                leaves[0].clone()
            } else {
                term
            }
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn elaborated_programs_are_hssdi() {
    for f in ["superclasses.hsk", "fundeps.hsk", "fundeps_polymorphic.hsk", "h98.hsk"] {
        let (_, env) = elaborated(f, &Options::default());
        let r = check_hssdi(&env);
        assert!(r.ok(), "{f}:\n{}", r.render());
    }
}

#[test]
fn omitted_absurd_instances_are_not_required() {
    let opts = Options { absurd: Absurd::Omit, ..Options::default() };
    let (p, env) = elaborated("fundeps.hsk", &opts);
    assert_eq!(p.decls.iter().filter(|d| matches!(d, Decl::Instance(n, _) if n == "fdFwd")).count(), 2);
    assert!(check_saturation_with(&env, true).saturated());
    assert_eq!(check_saturation(&env).missing.len(), 4);
}

#[test]
fn preambles_cover_every_pair() {
    let (p, env) = elaborated("fundeps.hsk", &Options::default());
    let mut tuples: Vec<Vec<String>> = p
        .decls
        .iter()
        .filter_map(|d| match d {
            Decl::Instance(n, m) if n == "fdFwd" => {
                let pre = guard_preamble(m);
                Some(vec![pre[&0].clone(), pre[&1].clone()])
            }
            _ => None,
        })
        .collect();
    tuples.sort();
    assert_eq!(tuples, [["FIB", "FIB"], ["FIB", "FMM"], ["FMM", "FIB"], ["FMM", "FMM"]]);
    assert_eq!(check_hssdi(&env).function("fdFwd").unwrap().evidence, [0, 1]);
}

#[test]
fn deleting_a_cross_instance_is_reported() {
    let (p, _) = elaborated("fundeps.hsk", &Options::default());
    let victim = p
        .decls
        .iter()
        .position(|d| match d {
            Decl::Instance(n, m) if n == "fdFwd" => {
                let pre = guard_preamble(m);
                pre[&0] == "FIB" && pre[&1] == "FMM"
            }
            _ => false,
        })
        .unwrap();
    let mut decls = p.decls.clone();
    decls.remove(victim);
    let (env, diags) = check_program(&prelude::env(), &Program::new(decls));
    assert!(diags.is_empty());
    let s = check_saturation(&env);
    assert_eq!(s.missing, [("fdFwd".to_string(), vec!["FIB".to_string(), "FMM".to_string()])]);
    assert!(check_saturation_with(&env, true).saturated());
}

#[test]
fn deleting_a_consistent_instance_is_reported() {
    let (p, _) = elaborated("fundeps.hsk", &Options::default());
    let victim = p
        .decls
        .iter()
        .position(|d| match d {
            Decl::Instance(n, m) if n == "fdFwd" => {
                let pre = guard_preamble(m);
                pre[&0] == "FMM" && pre[&1] == "FMM"
            }
            _ => false,
        })
        .unwrap();
    let mut decls = p.decls.clone();
    decls.remove(victim);
    let (env, _) = check_program(&prelude::env(), &Program::new(decls));
    let s = check_saturation(&env);
    assert_eq!(s.missing, [("fdFwd".to_string(), vec!["FMM".to_string(), "FMM".to_string()])]);
}

#[test]
fn vacuous_saturation() {
    let p = parse_core("open C : * -> *; method m : forall a. C a -> a -> a;").unwrap();
    let (env, diags) = check_program(&prelude::env(), &p);
    assert!(diags.is_empty());
    assert!(check_saturation(&env).saturated());
    assert!(check_hssdi(&env).ok());
}

#[test]
fn unguarded_instance_violates_coverage() {
    let p = parse_core(
        "open C : * -> *; openctor K : forall a. C a; method m : forall a. C a -> Bool; \
         instance m = /\\a:*. \\d:C a. True;",
    )
    .unwrap();
    let (env, diags) = check_program(&prelude::env(), &p);
    assert!(diags.is_empty(), "{diags:?}");
    let r = check_hssdi(&env);
    assert_eq!(r.function("m").unwrap().missing, [["K"]]);
}

#[test]
fn lambda_bound_evidence_violates_condition_two() {
    let p = parse_core(
        "open C : * -> *; openctor K : forall a. C a; method m : forall a. C a -> Bool; \
         instance m = /\\a:*. \\d:C a. guard d is K [a] then True; \
         method n : forall a. C a -> Bool; \
         instance n = /\\a:*. \\d:C a. guard d is K [a] then m [a] d;",
    )
    .unwrap();
    let (env, diags) = check_program(&prelude::env(), &p);
    assert!(diags.is_empty(), "{diags:?}");
    let r = check_hssdi(&env);
    assert_eq!(r.function("m").unwrap().condition2.len(), 1);
}

#[test]
fn no_zero_syntax() {
    assert!(check_no_zero_syntactic(&parse_term("\\x:Bool. x").unwrap()));
    assert!(!check_no_zero_syntactic(&parse_term("\\d:Bool. guard d is True then False").unwrap()));
    assert!(!check_no_zero_syntactic(&parse_term("not True").unwrap()));
    assert!(!check_no_zero_syntactic(&Node::Zero));
}

fn specialize_agrees(file: &str, expr: &str) -> Node {
    let (_, env) = elaborated(file, &Options::default());
    let m = parse_term(expr).unwrap();
    let ty = infer_term(&env, &m).unwrap();
    let s = specialize(&env, &m).unwrap_or_else(|e| panic!("{expr}: {e}"));
    assert!(check_no_zero_syntactic(&s), "{}", print_term(&s));
    assert_eq!(infer_term(&env, &s).unwrap(), ty);
    assert_eq!(value(&env, &s), value(&env, &m));
    s
}

#[test]
fn specialization() {
    specialize_agrees("superclasses.hsk", "lte [Bool] (OrdBool [Bool] refl(Bool)) False True");
    specialize_agrees("superclasses.hsk", "lte [Bool] dOrdBool True False");
    let s = specialize_agrees("superclasses.hsk", "eq [Bool] (EqBool [Bool] refl(Bool)) True False");
    assert!(print_term(&s).contains("xor") || print_term(&s).contains("if"));
    specialize_agrees("fundeps_polymorphic.hsk", "f [Bool] (FIB [Int] [Bool] refl(Int) refl(Bool)) True");
    specialize_agrees("h98.hsk", "test");
}

#[test]
fn specialization_leaves_clean_terms_alone() {
    let env = prelude::env();
    let m = parse_term("(\\x:Bool. x) True").unwrap();
    assert_eq!(specialize(&env, &m).unwrap(), m);
}
