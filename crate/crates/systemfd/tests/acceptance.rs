//! Acceptance suite: one pass/fail line per criterion, with timings.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use systemfd::analysis::{check_no_zero_syntactic, check_saturation, guard_preamble, specialize};
use systemfd::corpus;
use systemfd::elab::{elaborate_program, Options};
use systemfd::propcheck::{run_property, GenConfig, PreludeKind};
use systemfd::reduce::{is_value, step_all, whnf, Rule, Whnf};
use systemfd::surface::parse_surface;
use systemfd::syntax::{parse_core, parse_term, print_core, print_decl, print_term, Node, Program};
use systemfd::typing::{check_program, infer_term};
use systemfd::{Decl, Env};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn elaborate(text: &str) -> Result<(Program, Env), String> {
    let sp = parse_surface(text).map_err(|e| e.to_string())?;
    elaborate_program(&sp, &systemfd::prelude::env(), &Options::default())
        .map_err(|ds| ds.iter().map(|d| d.render()).collect::<Vec<_>>().join("; "))
}

/// The elaborated program typechecks again from its printed form.
fn recheck(p: &Program) -> Result<Env, String> {
    let reparsed = parse_core(&print_core(p)).map_err(|e| e.to_string())?;
    let (env, diags) = check_program(&systemfd::prelude::env(), &reparsed);
    ensure(diags.is_empty(), || format!("output does not typecheck: {diags:?}"))?;
    Ok(env)
}

fn decl<'a>(p: &'a Program, name: &str) -> Result<&'a Decl, String> {
    p.decls.iter().find(|d| d.name() == name).ok_or_else(|| format!("no declaration `{name}`"))
}

fn term(s: &str) -> Result<Node, String> {
    parse_term(s).map_err(|e| format!("{s}: {e}"))
}

fn eq_ord() -> Outcome {
    let (p, _) = elaborate(corpus::SUPERCLASSES)?;
    recheck(&p)?;
    let out = print_core(&p);
    for needle in [
        "open Eq : * -> *;",
        "method eq : forall a. Eq a -> a -> a -> Bool;",
        "method ordEq : forall a. Ord a -> Eq a;",
        "refl(->) @ h @ (refl(->) @ h @ refl(Bool))",
    ] {
        ensure(out.contains(needle), || format!("output lacks `{needle}`"))?;
    }
    Ok("Eq/Ord elaborates and typechecks".into())
}

fn fundep_types() -> Outcome {
    let (p, env) = elaborate(corpus::FUNDEPS)?;
    recheck(&p)?;
    for (name, ty) in [
        ("fdFwd", "method fdFwd : forall t u v. F t u -> F t v -> u ~ v;"),
        ("fdBwd", "method fdBwd : forall t u v. F t u -> F v u -> t ~ v;"),
    ] {
        let got = print_decl(decl(&p, name)?);
        ensure(got == ty, || format!("{name}: got `{got}`"))?;
    }
    let tuples: BTreeSet<Vec<String>> = env
        .instances("fdFwd")
        .iter()
        .map(|m| {
            let g = guard_preamble(m);
            vec![g.get(&0).cloned().unwrap_or_default(), g.get(&1).cloned().unwrap_or_default()]
        })
        .collect();
    let all: BTreeSet<Vec<String>> = [["FIB", "FIB"], ["FIB", "FMM"], ["FMM", "FIB"], ["FMM", "FMM"]]
        .iter()
        .map(|t| t.iter().map(|s| s.to_string()).collect())
        .collect();
    ensure(env.instances("fdFwd").len() == 4 && tuples == all, || format!("fdFwd covers {tuples:?}"))?;
    let sat = check_saturation(&env);
    ensure(sat.missing.is_empty(), || format!("saturation reports {:?}", sat.missing))?;
    Ok("fdFwd/fdBwd types exact; fdFwd has 4 instances covering every pair".into())
}

fn erroneous_instance() -> Outcome {
    match elaborate(corpus::FUNDEPS_ERRONEOUS) {
        Ok(_) => Err("erroneous program elaborated".into()),
        Err(msg) if msg.contains("fundep-violation") => Ok("fundep-violation reported, no output".into()),
        Err(msg) => Err(format!("wrong diagnostic: {msg}")),
    }
}

fn improvement() -> Outcome {
    let (p, env) = elaborate(corpus::FUNDEPS_POLYMORPHIC)?;
    recheck(&p)?;
    let f = print_decl(decl(&p, "f")?);
    let improved = "fdFwd [Int] [Bool] [t] (FIB [Int] [Bool] refl(Int) refl(Bool)) d";
    ensure(f.contains(improved), || format!("f elaborates to `{f}`"))?;
    let m = term("f [Bool] (FIB [Int] [Bool] refl(Int) refl(Bool)) True")?;
    match whnf(&env, &m, 10_000) {
        Whnf::Value { term, steps } if term == Node::con("False") => Ok(format!("False after {steps} steps")),
        other => Err(format!("evaluates to {other:?}")),
    }
}

fn metatheory_fuzz() -> Outcome {
    const PROPS: [&str; 7] = [
        "progress",
        "preservation",
        "value_soundness",
        "canonicity_coercion",
        "canonicity_function",
        "uniqueness_mod_zero",
        "types_are_values",
    ];
    let mut cases = 0;
    for prelude in PreludeKind::ALL {
        for prop in PROPS {
            let cfg = GenConfig { seed: 0, size: 30, prelude, ..GenConfig::default() };
            let r = run_property(prop, &cfg, 1000).map_err(|e| e.to_string())?;
            ensure(r.passed(), || r.render())?;
            cases += r.cases;
        }
    }
    Ok(format!("{cases} cases over {} preludes, no counterexamples", PreludeKind::ALL.len()))
}

fn substitution_laws() -> Outcome {
    let cfg = GenConfig { seed: 0, ..GenConfig::default() };
    let r = run_property("subst_laws", &cfg, 10_000).map_err(|e| e.to_string())?;
    ensure(r.passed(), || r.render())?;
    Ok(format!("{} pairs", r.cases))
}

fn specialization() -> Outcome {
    let (_, classes) = elaborate(corpus::SUPERCLASSES)?;
    let (_, fundeps) = elaborate(corpus::FUNDEPS_POLYMORPHIC)?;
    let bools = ["True", "False"];
    let mut sites = vec![];
    for a in bools {
        for b in bools {
            sites.push((&classes, format!("lte [Bool] dOrdBool {a} {b}")));
            sites.push((&classes, format!("eq [Bool] dEqBool {a} {b}")));
            sites.push((&classes, format!("eq [Bool] (ordEq [Bool] dOrdBool) {a} {b}")));
        }
        sites.push((&fundeps, format!("f [Bool] (FIB [Int] [Bool] refl(Int) refl(Bool)) {a}")));
        sites.push((&fundeps, format!("f [Bool] dFIB {a}")));
    }
    for (env, site) in &sites {
        let m = term(site)?;
        let s = specialize(env, &m).map_err(|d| format!("{site}: {}", d.render()))?;
        ensure(check_no_zero_syntactic(&s), || format!("{site}: zero in {}", print_term(&s)))?;
        let before = infer_term(env, &m).map_err(|d| d.render())?.pattern();
        let after = infer_term(env, &s).map_err(|d| format!("{site}: {}", d.render()))?.pattern();
        ensure(before == after, || format!("{site}: type changed"))?;
        let (v1, v2) = (whnf(env, &m, 10_000), whnf(env, &s, 10_000));
        let value = |w: &Whnf| match w {
            Whnf::Value { term, .. } => Some(term.clone()),
            _ => None,
        };
        ensure(value(&v1).is_some() && value(&v1) == value(&v2), || format!("{site}: {v1:?} vs {v2:?}"))?;
    }
    Ok(format!("{} call sites", sites.len()))
}

const RULE_ENV: &str = "open F : * -> *;
openctor FB : forall a. Bool ~ a -> F a;
method pick : Bool;
instance pick = True;
instance pick = False;
let yes : Bool = True;";

fn reduction_fidelity() -> Outcome {
    let (env, diags) = check_program(&systemfd::prelude::env(), &parse_core(RULE_ENV).map_err(|e| e.to_string())?);
    ensure(diags.is_empty(), || format!("{diags:?}"))?;
    let fb = "FB [Bool] refl(Bool)";
    let table: Vec<(Rule, String, String)> = vec![
        (Rule::Beta, "(\\x:Bool. x) True".into(), "True".into()),
        (Rule::BetaTy, "(/\\a:*. \\x:a. x) [Bool]".into(), "\\x:Bool. x".into()),
        (Rule::DeltaRefl, "sym refl(Bool)".into(), "refl(Bool)".into()),
        (Rule::DeltaTrans, "refl(Bool) ;; refl(Bool)".into(), "refl(Bool)".into()),
        (Rule::DeltaApp, "refl(Maybe) @ refl(Bool)".into(), "refl(Maybe Bool)".into()),
        (Rule::DeltaInst, "refl(forall a. a -> a) @[Bool]".into(), "refl(Bool -> Bool)".into()),
        (Rule::DeltaFst, "refl(Maybe Bool).1".into(), "refl(Maybe)".into()),
        (Rule::DeltaSnd, "refl(Maybe Bool).2".into(), "refl(Bool)".into()),
        (Rule::DeltaSim, "sim(refl(Bool), refl(Bool))".into(), "refl(Bool ~ Bool)".into()),
        (Rule::DeltaForall, "forallc a:*. refl(a)".into(), "refl(forall a. a)".into()),
        (Rule::DeltaCast, "True |> refl(Bool)".into(), "True".into()),
        (Rule::Zero1, "0 <+> True".into(), "True".into()),
        (Rule::Zero2, "True <+> 0".into(), "True".into()),
        (Rule::Zeta, "0 True".into(), "0".into()),
        (Rule::If1, "if Just [Bool] True is Just [Bool] then \\x:Bool. x else False".into(), "(\\x:Bool. x) True".into()),
        (Rule::If2, "if Nothing [Bool] is Just [Bool] then \\x:Bool. x else False".into(), "False".into()),
        (Rule::Guard1, format!("guard {fb} is FB [Bool] then \\h:Bool ~ Bool. True"), "(\\h:Bool ~ Bool. True) refl(Bool)".into()),
        (Rule::Guard2, "guard True is False then True".into(), "0".into()),
        (Rule::Open, "pick".into(), "0 <+> (True <+> False)".into()),
        (Rule::Let, "yes".into(), "True".into()),
        (Rule::Kappa, "((\\x:Bool. x) <+> (\\x:Bool. not x)) True".into(), "(\\x:Bool. x) True <+> (\\x:Bool. not x) True".into()),
    ];
    let fires = |m: &Node, rule: Rule, expected: &Node| {
        step_all(&env, m).iter().any(|s| s.rule == rule && !s.congruence && s.term == *expected)
    };
    let mut seen = BTreeSet::new();
    for (rule, from, to) in &table {
        let (m, n) = (term(from)?, term(to)?);
        ensure(fires(&m, *rule, &n), || format!("{rule}: `{from}` does not step to `{to}`"))?;
        seen.insert(rule.tag());
    }
    ensure(Rule::ALL.iter().all(|r| seen.contains(r.tag())), || "a rule has no table row".into())?;

    // ζ through every absorptive frame kind.
    let zero_frames = [
        "0 True",
        "0 [Bool]",
        "if 0 is True then False else True",
        "guard 0 is True then False",
        "sym 0",
        "0.1",
        "0.2",
        "forallc a:*. 0",
        "0 @[Bool]",
        "True |> 0",
        "0 ;; refl(Bool)",
        "refl(Bool) ;; 0",
        "0 @ refl(Bool)",
        "refl(Maybe) @ 0",
        "sim(0, refl(Bool))",
        "sim(refl(Bool), 0)",
    ];
    for f in zero_frames {
        ensure(fires(&term(f)?, Rule::Zeta, &Node::Zero), || format!("ζ does not fire on `{f}`"))?;
    }

    // κ through cast and application frames.
    let kappa = [
        ("(True <+> False) |> refl(Bool)", "(True <+> False) |> refl(Bool)"),
        ("True |> (refl(Bool) <+> sym refl(Bool))", "True |> refl(Bool) <+> True |> sym refl(Bool)"),
        ("((\\x:Bool. x) <+> (\\x:Bool. False)) True", "(\\x:Bool. x) True <+> (\\x:Bool. False) True"),
    ];
    for (from, to) in &kappa[1..] {
        ensure(fires(&term(from)?, Rule::Kappa, &term(to)?), || format!("κ: `{from}` does not step to `{to}`"))?;
    }
    // A cast of a choice is not an absorptive position: only the coercion is.
    let m = term(kappa[0].0)?;
    ensure(!step_all(&env, &m).iter().any(|s| s.rule == Rule::Kappa && !s.congruence), || {
        "κ fired through the cast body".into()
    })?;
    ensure(!is_value(&term("0")?), || "0 is a value".into())?;
    Ok(format!("{} rules, {} ζ frames, κ through cast and application", table.len(), zero_frames.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("golden elaboration: Eq/Ord", eq_ord, Duration::from_secs(1)),
        ("golden elaboration: functional dependencies", fundep_types, Duration::from_secs(1)),
        ("erroneous instance rejected", erroneous_instance, Duration::from_secs(1)),
        ("improvement typing and evaluation", improvement, Duration::from_secs(1)),
        ("metatheory fuzz", metatheory_fuzz, Duration::from_secs(120)),
        ("substitution laws", substitution_laws, Duration::from_secs(10)),
        ("specialization", specialization, Duration::from_secs(5)),
        ("reduction fidelity", reduction_fidelity, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = systemfd::with_big_stack(run);
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget ({budget:?})")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!("criterion {}: {} [{name}] {:.2?}: {detail}", i + 1, if ok { "PASS" } else { "FAIL" }, took);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
