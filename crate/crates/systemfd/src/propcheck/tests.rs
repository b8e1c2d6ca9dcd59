use super::*;
use crate::syntax::parse_term;

fn cfg(prelude: PreludeKind, seed: u64) -> GenConfig {
    GenConfig { seed, prelude, ..GenConfig::default() }
}

#[test]
fn generated_terms_typecheck() {
    for p in PreludeKind::ALL {
        for seed in 0..150 {
            let (env, m, ty) = gen_well_typed(&cfg(p, seed)).unwrap();
            if let Err(d) = check_term(&env, &m, &ty) {
                panic!("{p} seed {seed}: {}\n{}\n: {}", d.render(), print_term(&m), print_type(&ty));
            }
        }
    }
}

#[test]
fn generation_replays() {
    let c = cfg(PreludeKind::FundepF, 11);
    assert_eq!(gen_well_typed(&c).unwrap().1, gen_well_typed(&c).unwrap().1);
    let a = run_property("preservation", &c, 20).unwrap();
    assert_eq!(a, run_property("preservation", &c, 20).unwrap());
}

#[test]
fn every_property_passes_briefly() {
    for p in PreludeKind::ALL {
        for prop in PROPERTIES {
            let r = run_property(prop, &cfg(p, 1), 40).unwrap();
            assert!(r.passed(), "{}", r.render());
        }
    }
}

#[test]
fn unknown_property() {
    assert_eq!(
        run_property("nope", &GenConfig::default(), 1),
        Err(PropError::UnknownProperty("nope".into()))
    );
    assert_eq!("eq-ord".parse::<PreludeKind>(), Ok(PreludeKind::EqOrd));
}

#[test]
fn progress_on_a_value() {
    let env = crate::prelude::env();
    assert!(progress(&env, &Node::con("True")).is_none());
    assert_eq!(step_det(&env, &Node::con("True")), StepOutcome::IsValue);
}

#[test]
fn canonicity_of_a_choice_of_refls() {
    let env = crate::prelude::env();
    let m = parse_term("refl(Bool) <+> refl(Bool)").unwrap();
    assert!(canonicity(&env, &m, &is_refl_tree, "refl").is_none());
    assert!(!is_refl_tree(&Node::con("True")));
}

#[test]
fn forms_appear() {
    let mut seen = std::collections::HashSet::new();
    for p in PreludeKind::ALL {
        for seed in 0..200 {
            let (_, m, _) = gen_well_typed(&cfg(p, seed)).unwrap();
            m.visit(&mut |n| {
                seen.insert(std::mem::discriminant(n));
            });
        }
    }
    for probe in [
        "0",
        "if True is True then True else False",
        "\\x:Bool. x",
        "True <+> False",
        "True |> refl(Bool)",
        "sym refl(Bool)",
        "refl(Bool) ;; refl(Bool)",
        "refl(Maybe) @ refl(Bool)",
    ] {
        let n = parse_term(probe).unwrap();
        assert!(seen.contains(&std::mem::discriminant(&n)), "no `{probe}` generated");
    }
}
