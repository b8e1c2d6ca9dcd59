use super::*;
use crate::env::Local;
use crate::prelude;
use crate::syntax::{parse_core, parse_term, parse_term_in, parse_type, parse_type_in};

fn extend(text: &str) -> Env {
    let (env, diags) = check_program(&prelude::env(), &parse_core(text).unwrap());
    assert!(diags.is_empty(), "{diags:?}");
    env
}

/// Push binders given as `(name, Some(type))` for term variables and
/// `(name, None)` for type variables of kind `*`.
fn with_locals(mut env: Env, binders: &[(&str, Option<&str>)]) -> (Env, Vec<&'static str>) {
    let mut names: Vec<&'static str> = vec![];
    for (n, t) in binders {
        let l = match t {
            None => Local::TyVar(Hint::new(*n), Node::Star),
            Some(t) => Local::TmVar(Hint::new(*n), parse_type_in(t, &names).unwrap()),
        };
        env.push_local(l);
        names.push(Box::leak(n.to_string().into_boxed_str()));
    }
    (env, names)
}

const FUNDEP: &str = "open F : * -> * -> *;
openctor FIB : forall a b. Int ~ a -> Bool ~ b -> F a b;
openctor FMM : forall a b a' b'. Maybe a' ~ a -> Maybe b' ~ b -> F a' b' -> F a b;";

#[test]
fn kinds() {
    let env = extend("open Eq : * -> *;");
    assert_eq!(kind_of(&env, &parse_type("Eq").unwrap()).unwrap(), parse_kind("* -> *"));
    assert_eq!(kind_of(&env, &parse_type("forall t. t -> t").unwrap()).unwrap(), Node::Star);
    assert_eq!(kind_of(&env, &parse_type("Bool ~ Bool").unwrap()).unwrap(), Node::Star);
    assert_eq!(kind_of(&env, &parse_type("Maybe ~[* -> *] Maybe").unwrap()).unwrap(), Node::Star);
    assert_eq!(kind_of(&env, &parse_type("Maybe Maybe").unwrap()).unwrap_err().code, "kind-mismatch");
    assert_eq!(kind_of(&env, &parse_type("Nope").unwrap()).unwrap_err().code, "unbound");
}

fn parse_kind(s: &str) -> Node {
    crate::syntax::parse_kind(s).unwrap()
}

#[test]
fn inference_basics() {
    let env = prelude::env();
    let id = parse_term("\\x:Bool. x").unwrap();
    assert_eq!(infer_term(&env, &id).unwrap(), TypeResult::Exactly(parse_type("Bool -> Bool").unwrap()));
    let merged = parse_term("0 <+> (\\x:Bool. x)").unwrap();
    assert_eq!(infer_term(&env, &merged).unwrap().exact(), Some(&parse_type("Bool -> Bool").unwrap()));
    check_term(&env, &merged, &parse_type("Bool -> Bool").unwrap()).unwrap();
    assert_eq!(infer_term(&env, &Node::Zero).unwrap(), TypeResult::AnyType);
    check_term(&env, &Node::Zero, &parse_type("forall a. Maybe a").unwrap()).unwrap();
    let poly = parse_term("/\\t. \\x:t. x").unwrap();
    assert_eq!(infer_term(&env, &poly).unwrap().exact(), Some(&parse_type("forall t. t -> t").unwrap()));
    let not_true = parse_term("not True").unwrap();
    assert_eq!(infer_term(&env, &not_true).unwrap().exact(), Some(&Node::tcon("Bool")));
}

#[test]
fn refl_checks() {
    let env = prelude::env();
    let r = parse_term("refl(Bool)").unwrap();
    check_term(&env, &r, &parse_type("Bool ~ Bool").unwrap()).unwrap();
    assert!(check_term(&env, &r, &parse_type("Bool ~ Int").unwrap()).is_err());
}

#[test]
fn application_errors() {
    let env = prelude::env();
    let bad = parse_term("not Nothing").unwrap();
    assert_eq!(infer_term(&env, &bad).unwrap_err().code, "type-mismatch");
    let bad = parse_term("True False").unwrap();
    assert_eq!(infer_term(&env, &bad).unwrap_err().code, "not-function");
    let bad = parse_term("True |> refl(Int)").unwrap();
    assert!(infer_term(&env, &bad).is_err());
}

#[test]
fn coercion_rules() {
    let env = extend("open Eq : * -> *;");
    let (l, r, k) = coerce_type(&env, &parse_term("refl(Eq) @ refl(Bool)").unwrap()).unwrap();
    assert_eq!((l.to_string(), r.to_string(), k), ("Eq Bool".into(), "Eq Bool".into(), Node::Star));

    let (env2, names) = with_locals(
        env.clone(),
        &[("u", None), ("v", None), ("h2", Some("Bool ~ u")), ("k2", Some("Bool ~ v"))],
    );
    let eta = parse_term_in("sym h2 ;; k2", &names).unwrap();
    let (l, r, k) = coerce_type(&env2, &eta).unwrap();
    assert_eq!(l, parse_type_in("u", &names).unwrap());
    assert_eq!(r, parse_type_in("v", &names).unwrap());
    assert_eq!(k, Node::Star);

    let (env3, names) = with_locals(
        env,
        &[("a", None), ("a'", None), ("a''", None), ("h1", Some("Maybe a' ~ a")), ("k1", Some("Maybe a'' ~ a"))],
    );
    let eta = parse_term_in("(h1 ;; sym k1).2", &names).unwrap();
    let (l, r, _) = coerce_type(&env3, &eta).unwrap();
    assert_eq!(l, parse_type_in("a'", &names).unwrap());
    assert_eq!(r, parse_type_in("a''", &names).unwrap());
    let fst = parse_term_in("(h1 ;; sym k1).1", &names).unwrap();
    let (l, r, k) = coerce_type(&env3, &fst).unwrap();
    assert_eq!((l, r, k), (Node::tcon("Maybe"), Node::tcon("Maybe"), parse_kind("* -> *")));
    let bad = parse_term_in("h1 ;; k1", &names).unwrap();
    assert!(coerce_type(&env3, &bad).is_err());
}

#[test]
fn coercion_quantifiers() {
    let env = prelude::env();
    let u = parse_term("forallc t. refl(t -> t)").unwrap();
    let (l, r, _) = coerce_type(&env, &u).unwrap();
    assert_eq!(l, parse_type("forall t. t -> t").unwrap());
    assert_eq!(l, r);
    let inst = parse_term("refl(forall t. t -> t) @[Bool]").unwrap();
    let (l, _, _) = coerce_type(&env, &inst).unwrap();
    assert_eq!(l, parse_type("Bool -> Bool").unwrap());
    let sim = parse_term("sim(refl(Bool), refl(Int))").unwrap();
    let (l, _, _) = coerce_type(&env, &sim).unwrap();
    assert_eq!(l, parse_type("Bool ~ Int").unwrap());
}

#[test]
fn patterns() {
    let env = extend(&format!("open Eq : * -> *; openctor EqBool : forall t. Bool ~ t -> Eq t; {FUNDEP}"));
    let (env1, names) = with_locals(env.clone(), &[("a", None)]);
    let p = Pattern::new("EqBool", vec![parse_type_in("a", &names).unwrap()]);
    let (resid, args) = pattern_type(&env1, &p, &parse_type_in("Eq a", &names).unwrap()).unwrap();
    assert!(resid.is_empty());
    assert_eq!(args, vec![parse_type_in("Bool ~ a", &names).unwrap()]);

    let (env2, names) = with_locals(env.clone(), &[("t", None), ("v", None)]);
    let p = Pattern::new("FMM", vec![parse_type_in("t", &names).unwrap(), parse_type_in("v", &names).unwrap()]);
    let (resid, args) = pattern_type(&env2, &p, &parse_type_in("F t v", &names).unwrap()).unwrap();
    assert_eq!(resid.len(), 2);
    let inner: Vec<&str> = names.iter().copied().chain(["a''", "b''"]).collect();
    let want: Vec<Node> =
        ["Maybe a'' ~ t", "Maybe b'' ~ v", "F a'' b''"].iter().map(|s| parse_type_in(s, &inner).unwrap()).collect();
    assert_eq!(args, want);

    let (env3, names) = with_locals(env, &[("a", None)]);
    let p = Pattern::new("Just", vec![parse_type_in("a", &names).unwrap()]);
    let (resid, args) = pattern_type(&env3, &p, &parse_type_in("Maybe a", &names).unwrap()).unwrap();
    assert!(resid.is_empty());
    assert_eq!(args, vec![parse_type_in("a", &names).unwrap()]);

    let p = Pattern::new("Just", vec![Node::tcon("Bool")]);
    assert!(pattern_type(&env3, &p, &parse_type_in("Maybe a", &names).unwrap()).is_err());
}

#[test]
fn if_and_guard() {
    let env = extend("open Eq : * -> *; openctor EqBool : forall t. Bool ~ t -> Eq t;");
    let m = parse_term("\\m:Maybe Bool. if m is Just [Bool] then \\x:Bool. x else False").unwrap();
    assert_eq!(infer_term(&env, &m).unwrap().exact(), Some(&parse_type("Maybe Bool -> Bool").unwrap()));
    let g = parse_term("/\\a. \\d:Eq a. guard d is EqBool [a] then \\h:Bool ~ a. True |> refl(Bool)").unwrap();
    assert_eq!(infer_term(&env, &g).unwrap().exact(), Some(&parse_type("forall a. Eq a -> Bool").unwrap()));
    let bad = parse_term("/\\a. \\d:Eq a. if d is EqBool [a] then \\h:Bool ~ a. True else False").unwrap();
    assert_eq!(infer_term(&env, &bad).unwrap_err().code, "scrutinee-not-data");
    let bad = parse_term("guard True is True then False").unwrap();
    assert_eq!(infer_term(&env, &bad).unwrap_err().code, "scrutinee-not-open");
}

#[test]
fn heads() {
    let env = extend("open Eq : * -> *;");
    assert!(is_data_head(&env, &parse_type("Maybe Bool").unwrap()));
    assert!(is_open_head(&env, &parse_type("Eq Bool").unwrap()));
    assert!(!is_data_head(&env, &parse_type("Eq Bool").unwrap()));
    let (env, names) = with_locals(env, &[("t", None), ("u", None)]);
    let tu = parse_type_in("t u", &names).unwrap();
    assert!(!is_data_head(&env, &tu) && !is_open_head(&env, &tu));
}

#[test]
fn declarations() {
    let env = prelude::env();
    let env = check_decl(&env, &Decl::OpenType("F".into(), parse_kind("* -> * -> *"))).unwrap();
    let fib = parse_type("forall a b. Int ~ a -> Bool ~ b -> F a b").unwrap();
    let env = check_decl(&env, &Decl::OpenCtor("FIB".into(), fib.clone())).unwrap();
    assert!(check_decl(&env, &Decl::Ctor("K".into(), fib)).is_err());
    let e = check_decl(&env, &Decl::Instance("nope".into(), Node::con("True"))).unwrap_err();
    assert_eq!(e.code, "instance-without-method");
    let dup = check_decl(&env, &Decl::Data("Bool".into(), Node::Star)).unwrap_err();
    assert_eq!(dup.code, "duplicate");
    let env = check_decl(&env, &Decl::Method("m".into(), parse_type("Bool -> Bool").unwrap())).unwrap();
    let bad = check_decl(&env, &Decl::Instance("m".into(), parse_term("\\x:Int. True").unwrap()));
    assert!(bad.is_err());
    check_decl(&env, &Decl::Instance("m".into(), parse_term("\\x:Bool. x").unwrap())).unwrap();
}

#[test]
fn environments() {
    check_env(&Env::new()).unwrap();
    check_env(&extend("open Eq : * -> *; method eq : forall a. Eq a -> a -> a -> Bool;")).unwrap();
}

#[test]
fn meet_patterns() {
    let a = parse_type("_ -> Bool").unwrap();
    let b = parse_type("Int -> _").unwrap();
    assert_eq!(meet(&a, &b), Some(parse_type("Int -> Bool").unwrap()));
    assert_eq!(meet(&a, &parse_type("Int -> Int").unwrap()), None);
}

#[test]
fn classification() {
    let env = prelude::env();
    assert_eq!(classify(&env, &Node::Star), Class::Kind);
    assert_eq!(classify(&env, &Node::tcon("Bool")), Class::Type(Node::Star));
    assert!(matches!(classify(&env, &Node::con("True")), Class::Term(_)));
    assert_eq!(classify(&env, &parse_term("True True").unwrap()), Class::Ill);
}
