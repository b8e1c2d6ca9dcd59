use super::*;
use crate::prelude;
use crate::syntax::{parse_core, parse_term};
use crate::typing::check_program;

fn env_with(text: &str) -> Env {
    let (env, diags) = check_program(&prelude::env(), &parse_core(text).unwrap());
    assert!(diags.is_empty(), "{diags:?}");
    env
}

fn t(s: &str) -> Node {
    parse_term(s).unwrap()
}

const CLASSES: &str = "open Eq : * -> *;
openctor EqBool : forall t. Bool ~ t -> Eq t;
method pick : Bool;
instance pick = True;
instance pick = False;
open F : * -> * -> *;
openctor FIB : forall a b. Int ~ a -> Bool ~ b -> F a b;
openctor FMM : forall a b a' b'. Maybe a' ~ a -> Maybe b' ~ b -> F a' b' -> F a b;";

#[test]
fn values() {
    assert!(is_value(&t("refl(Bool)")));
    assert!(!is_value(&Node::Zero));
    assert!(!is_value(&t("(\\x:Bool. x) True")));
    assert!(is_value(&t("Just [Bool] (not True)")));
    assert!(is_value(&t("True <+> False")));
    assert!(!is_value(&t("True <+> not False")));
}

#[test]
fn matching() {
    let s = t("EqBool [Bool] refl(Bool)");
    let p = Pattern::new("EqBool", vec![Node::tcon("Bool")]);
    assert_eq!(match_pattern(&s, &p), MatchResult::Hit(vec![OwnedArg::Term(t("refl(Bool)"))]));
    let s = t("FIB [Int] [Bool] refl(Int) refl(Bool)");
    let p = Pattern::new("FMM", vec![Node::tcon("Int"), Node::tcon("Bool")]);
    assert_eq!(match_pattern(&s, &p), MatchResult::Miss);
    let p = Pattern::new("FIB", vec![Node::tcon("Bool")]);
    assert_eq!(match_pattern(&s, &p), MatchResult::Miss);
    let p = Pattern::new("FIB", vec![Node::tcon("Int"), Node::tcon("Bool"), Node::tcon("Bool")]);
    assert_eq!(match_pattern(&s, &p), MatchResult::Miss);
    assert_eq!(match_pattern(&t("not True"), &p), MatchResult::NotReady);
}

#[test]
fn open_unfolds_in_order() {
    let env = env_with(CLASSES);
    let steps = step_all(&env, &t("pick"));
    assert_eq!(steps.len(), 1);
    assert_eq!(steps[0].rule, Rule::Open);
    assert_eq!(steps[0].term, t("0 <+> (True <+> False)"));
}

#[test]
fn cast_by_refl() {
    let env = prelude::env();
    let s = step_det(&env, &t("True |> refl(Bool)"));
    assert!(matches!(s, StepOutcome::Stepped(Step { rule: Rule::DeltaCast, ref term, .. }) if *term == t("True")));
}

#[test]
fn zeros_absorb() {
    let env = prelude::env();
    let steps = step_all(&env, &t("0 [Bool]"));
    assert!(steps.iter().any(|s| s.rule == Rule::Zeta && s.term == Node::Zero));
    assert_eq!(step_det(&env, &Node::Zero), StepOutcome::IsZero);
}

#[test]
fn guards() {
    let env = env_with(CLASSES);
    let m = t("guard FIB [Int] [Bool] refl(Int) refl(Bool) is FMM [Int] [Bool] then True");
    match step_det(&env, &m) {
        StepOutcome::Stepped(s) => assert_eq!((s.rule, s.term), (Rule::Guard2, Node::Zero)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn whnf_of_not() {
    let env = prelude::env();
    match whnf(&env, &t("not True"), 100) {
        Whnf::Value { term, .. } => assert_eq!(term, t("False")),
        other => panic!("{other:?}"),
    }
    assert_eq!(whnf(&env, &t("refl(Bool)"), 0), Whnf::Value { term: t("refl(Bool)"), steps: 0 });
    assert!(matches!(whnf(&env, &t("not True"), 1), Whnf::OutOfFuel(_)));
}

#[test]
fn det_step_is_a_successor() {
    let env = env_with(CLASSES);
    for src in ["xor True pick", "(pick <+> 0) |> refl(Bool)", "sym (refl(Bool) ;; refl(Bool))", "if pick is True then False else True"] {
        let m = t(src);
        if let StepOutcome::Stepped(s) = step_det(&env, &m) {
            assert!(step_all(&env, &m).iter().any(|x| x.term == s.term), "{src}");
        }
    }
}

#[test]
fn exploration_collects_both_values() {
    let env = env_with(CLASSES);
    let ex = explore(&env, &t("not pick"), 1000);
    let leaves: Vec<&Node> = ex.values.iter().flat_map(choice_leaves).collect();
    assert!(leaves.contains(&&t("True")));
    assert!(leaves.contains(&&t("False")));
    assert!(ex.stuck.is_empty());
}
