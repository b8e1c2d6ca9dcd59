//! De Bruijn substitution agrees with capture-avoiding substitution on
//! named terms.

use proptest::prelude::*;
use systemfd::subst::{apply, instantiate, Subst};
use systemfd::syntax::{Hint, Node};

#[derive(Clone, Debug)]
enum Named {
    Var(String),
    Lam(String, Box<Named>),
    App(Box<Named>, Box<Named>),
    Con,
}

const NAMES: [&str; 4] = ["x", "y", "z", "w"];

fn named() -> impl Strategy<Value = Named> {
    let leaf = prop_oneof![
        4 => proptest::sample::select(&NAMES[..]).prop_map(|n| Named::Var(n.to_string())),
        1 => Just(Named::Con),
    ];
    leaf.prop_recursive(6, 40, 2, |inner| {
        prop_oneof![
            (proptest::sample::select(&NAMES[..]), inner.clone()).prop_map(|(x, b)| Named::Lam(x.to_string(), Box::new(b))),
            (inner.clone(), inner).prop_map(|(f, a)| Named::App(Box::new(f), Box::new(a))),
        ]
    })
}

fn free_vars(n: &Named, out: &mut Vec<String>) {
    match n {
        Named::Var(x) if !out.contains(x) => out.push(x.clone()),
        Named::Var(_) | Named::Con => {}
        Named::Lam(x, b) => {
            let mut inner = vec![];
            free_vars(b, &mut inner);
            out.extend(inner.into_iter().filter(|y| y != x && !out.contains(y)).collect::<Vec<_>>());
        }
        Named::App(f, a) => {
            free_vars(f, out);
            free_vars(a, out);
        }
    }
}

fn fresh(avoid: &[String]) -> String {
    (0..).map(|i| format!("v{i}")).find(|v| !avoid.contains(v)).unwrap()
}

/// Capture-avoiding `n[x := s]`.
fn subst(n: &Named, x: &str, s: &Named) -> Named {
    match n {
        Named::Var(y) if y == x => s.clone(),
        Named::Var(_) | Named::Con => n.clone(),
        Named::App(f, a) => Named::App(Box::new(subst(f, x, s)), Box::new(subst(a, x, s))),
        Named::Lam(y, _) if y == x => n.clone(),
        Named::Lam(y, b) => {
            let mut fv = vec![];
            free_vars(s, &mut fv);
            if fv.contains(y) {
                let mut avoid = fv;
                free_vars(b, &mut avoid);
                avoid.push(x.to_string());
                let z = fresh(&avoid);
                let b = subst(b, y, &Named::Var(z.clone()));
                Named::Lam(z, Box::new(subst(&b, x, s)))
            } else {
                Named::Lam(y.clone(), Box::new(subst(b, x, s)))
            }
        }
    }
}

/// De Bruijn form; `free[i]` is free variable `i`.
fn to_db(n: &Named, bound: &mut Vec<String>, free: &[String]) -> Node {
    match n {
        Named::Var(x) => match bound.iter().rev().position(|y| y == x) {
            Some(i) => Node::Var(i),
            None => Node::Var(bound.len() + free.iter().position(|y| y == x).expect("declared free")),
        },
        Named::Con => Node::con("True"),
        Named::Lam(x, b) => {
            bound.push(x.clone());
            let body = to_db(b, bound, free);
            bound.pop();
            Node::lam(Hint::new(x.clone()), Node::tcon("Bool"), body)
        }
        Named::App(f, a) => Node::app(to_db(f, bound, free), to_db(a, bound, free)),
    }
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn instantiation_matches_named_substitution(t in named(), s in named()) {
        let outer = names(&["x", "y", "z", "w"]);
        let inner = names(&["y", "z", "w"]);
        let s = subst(&s, "x", &Named::Con);
        let expected = to_db(&subst(&t, "x", &s), &mut vec![], &inner);
        let got = instantiate(&to_db(&t, &mut vec![], &outer), &to_db(&s, &mut vec![], &inner));
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn renaming_matches_named_renaming(t in named()) {
        // Swap x and y simultaneously through a parallel substitution.
        let outer = names(&["x", "y", "z", "w"]);
        let swapped = subst(&subst(&subst(&t, "x", &Named::Var("tmp".into())), "y", &Named::Var("x".into())), "tmp", &Named::Var("y".into()));
        let s = Subst::new(vec![systemfd::subst::Action::Rename(1), systemfd::subst::Action::Rename(0)], 2);
        let db = to_db(&t, &mut vec![], &outer);
        prop_assert_eq!(apply(&s, &db), to_db(&swapped, &mut vec![], &outer));
    }

    #[test]
    fn composition_matches_sequential_named_substitution(t in named(), a in named(), b in named()) {
        let outer = names(&["x", "y", "z", "w"]);
        let mid = names(&["y", "z", "w"]);
        let last = names(&["z", "w"]);
        let a = subst(&a, "x", &Named::Con);
        let b = subst(&subst(&b, "x", &Named::Con), "y", &Named::Con);
        let s1 = Subst::single(to_db(&a, &mut vec![], &mid));
        let s2 = Subst::single(to_db(&b, &mut vec![], &last));
        let expected = to_db(&subst(&subst(&t, "x", &a), "y", &b), &mut vec![], &last);
        let db = to_db(&t, &mut vec![], &outer);
        prop_assert_eq!(apply(&Subst::compose(&s1, &s2), &db), expected.clone());
        prop_assert_eq!(apply(&s2, &apply(&s1, &db)), expected);
    }
}
