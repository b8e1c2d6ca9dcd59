//! Random well-typed terms and executable metatheory.
//!
//! [`gen_well_typed`] builds a closed term of a chosen type in a λ-free
//! environment (one of four preludes). [`run_property`] checks one property
//! on `cases` consecutive seeds; case `i` uses seed `cfg.seed + i`, so a
//! reported counterexample replays with `--seed <its seed> --count 1`.

mod gen;
mod laws;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;

use crate::env::{Env, Local};
use crate::reduce::{explore, is_type_value, is_value, step_all, step_det, whnf, StepOutcome, Whnf};
use crate::syntax::{print_term, print_type, Hint, Node};
use crate::typing::{check_term, infer_term, kind_of, TypeResult};
use gen::Gen;

/// The environments terms are generated in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PreludeKind {
    /// Booleans and the Boolean operations.
    Bool,
    /// Adds `Maybe` to the type universe.
    Maybe,
    /// The elaborated `Eq`/`Ord` classes with their Boolean instances.
    EqOrd,
    /// The elaborated class `F` with both functional dependencies.
    FundepF,
}

impl PreludeKind {
    pub const ALL: [PreludeKind; 4] = [PreludeKind::Bool, PreludeKind::Maybe, PreludeKind::EqOrd, PreludeKind::FundepF];

    pub fn name(self) -> &'static str {
        match self {
            PreludeKind::Bool => "bool",
            PreludeKind::Maybe => "maybe",
            PreludeKind::EqOrd => "eq-ord",
            PreludeKind::FundepF => "fundep-f",
        }
    }

    /// The checked environment, built once per kind.
    pub fn env(self) -> Env {
        static ENVS: [OnceLock<Env>; 4] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
        let cell = &ENVS[self as usize];
        cell.get_or_init(|| match self {
            PreludeKind::Bool | PreludeKind::Maybe => crate::prelude::env(),
            PreludeKind::EqOrd => crate::corpus::elaborate(crate::corpus::SUPERCLASSES).expect("bundled program elaborates"),
            PreludeKind::FundepF => {
                crate::corpus::elaborate(crate::corpus::FUNDEPS_POLYMORPHIC).expect("bundled program elaborates")
            }
        })
        .clone()
    }

    fn has_maybe(self) -> bool {
        self != PreludeKind::Bool
    }
}

impl fmt::Display for PreludeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PreludeKind {
    type Err = PropError;

    fn from_str(s: &str) -> Result<Self, PropError> {
        PreludeKind::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| PropError::UnknownPrelude(s.to_string()))
    }
}

/// Relative frequencies of the generated term forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Weights {
    pub intro: u32,
    pub head: u32,
    pub beta: u32,
    pub if_: u32,
    pub guard: u32,
    pub choice: u32,
    pub zero: u32,
    pub cast: u32,
    pub coercion: u32,
}

impl Default for Weights {
    fn default() -> Self {
        Weights { intro: 4, head: 5, beta: 2, if_: 2, guard: 2, choice: 2, zero: 1, cast: 2, coercion: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenConfig {
    pub seed: u64,
    /// Budget of term formers per generated term.
    pub size: usize,
    pub prelude: PreludeKind,
    pub weights: Weights,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { seed: 0, size: 30, prelude: PreludeKind::Bool, weights: Weights::default() }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PropError {
    #[error("unknown property `{0}`")]
    UnknownProperty(String),
    #[error("unknown prelude `{0}` (expected bool, maybe, eq-ord or fundep-f)")]
    UnknownPrelude(String),
    #[error("generation gave up after {0} attempts")]
    Exhausted(usize),
}

/// A failing case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub seed: u64,
    pub prelude: PreludeKind,
    pub term: String,
    pub ty: String,
    /// The term or step the check failed on, when different from `term`.
    pub at: Option<String>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropResult {
    pub property: String,
    pub prelude: PreludeKind,
    pub cases: usize,
    pub counterexample: Option<Counterexample>,
}

impl PropResult {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    pub fn render(&self) -> String {
        match &self.counterexample {
            None => format!("{} [{}]: passed {} cases", self.property, self.prelude, self.cases),
            Some(c) => {
                let mut s = format!(
                    "{} [{}]: FAILED after {} cases (seed {})\n  {}\n  term: {}\n  type: {}",
                    self.property, self.prelude, self.cases, c.seed, c.message, c.term, c.ty
                );
                if let Some(at) = &c.at {
                    s.push_str(&format!("\n  at:   {at}"));
                }
                s
            }
        }
    }
}

pub const PROPERTIES: [&str; 8] = [
    "progress",
    "preservation",
    "value_soundness",
    "canonicity_coercion",
    "canonicity_function",
    "uniqueness_mod_zero",
    "types_are_values",
    "subst_laws",
];

/// Steps followed along the deterministic path.
const PATH: usize = 12;
const EVAL_FUEL: usize = 2_000;
const EXPLORE_FUEL: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Any,
    Coercion,
    Function,
}

fn rng_for(cfg: &GenConfig) -> StdRng {
    StdRng::seed_from_u64(cfg.seed)
}

fn generate(cfg: &GenConfig, shape: Shape, zeros: bool) -> Result<(Env, Node, Node), PropError> {
    const ATTEMPTS: usize = 16;
    let env = cfg.prelude.env();
    let mut g = Gen::new(rng_for(cfg), env.clone(), &cfg.weights, cfg.prelude.has_maybe());
    for _ in 0..ATTEMPTS {
        let ty = match shape {
            Shape::Any => g.inhabited_ty(3),
            Shape::Coercion => coercion_ty(&mut g),
            Shape::Function => {
                let t = Node::arrow(g.ty(1), g.ty(2));
                if !g.inhabited(&t) {
                    continue;
                }
                t
            }
        };
        if let Some(m) = g.term(&ty, cfg.size, zeros) {
            return Ok((env, m, ty));
        }
    }
    Err(PropError::Exhausted(ATTEMPTS))
}

fn coercion_ty(g: &mut Gen) -> Node {
    let t = g.ty(2);
    match kind_of(&g.env, &t) {
        Ok(k) => Node::eq_ty(t.clone(), t, k),
        Err(_) => Node::eq_ty(Node::tcon("Bool"), Node::tcon("Bool"), Node::Star),
    }
}

/// A closed term, its type, and the λ-free environment it lives in.
pub fn gen_well_typed(cfg: &GenConfig) -> Result<(Env, Node, Node), PropError> {
    generate(cfg, Shape::Any, cfg.weights.zero > 0)
}

/// Run `property` on `cases` consecutive seeds starting at `cfg.seed`.
pub fn run_property(property: &str, cfg: &GenConfig, cases: usize) -> Result<PropResult, PropError> {
    if !PROPERTIES.contains(&property) {
        return Err(PropError::UnknownProperty(property.to_string()));
    }
    let (property, cfg) = (property.to_string(), cfg.clone());
    crate::with_big_stack(move || {
        let mut result = PropResult { property: property.clone(), prelude: cfg.prelude, cases: 0, counterexample: None };
        for i in 0..cases {
            let case = GenConfig { seed: cfg.seed.wrapping_add(i as u64), ..cfg.clone() };
            result.cases += 1;
            if let Some(c) = run_case(&property, &case)? {
                result.counterexample = Some(c);
                break;
            }
        }
        Ok(result)
    })
}

/// One case of `property` with `cfg.seed`; `None` when it holds.
pub fn run_case(property: &str, cfg: &GenConfig) -> Result<Option<Counterexample>, PropError> {
    if property == "subst_laws" {
        let mut rng = rng_for(cfg);
        return Ok(laws::check(&mut rng, cfg.size).err().map(|(message, n)| Counterexample {
            seed: cfg.seed,
            prelude: cfg.prelude,
            term: format!("{n}"),
            ty: String::new(),
            at: None,
            message,
        }));
    }
    let shape = match property {
        "canonicity_coercion" => Shape::Coercion,
        "canonicity_function" => Shape::Function,
        _ => Shape::Any,
    };
    let zeros = property != "uniqueness_mod_zero" && cfg.weights.zero > 0;
    let (env, m, ty) = generate(cfg, shape, zeros)?;
    let cx = |at: Option<&Node>, message: String| Counterexample {
        seed: cfg.seed,
        prelude: cfg.prelude,
        term: print_term(&m),
        ty: print_type(&ty),
        at: at.map(print_term),
        message,
    };
    if let Err(d) = check_term(&env, &m, &ty) {
        return Ok(Some(cx(None, format!("generated term does not typecheck: {}", d.render()))));
    }
    let failure = match property {
        "progress" => progress(&env, &m),
        "preservation" => preservation(&env, &m, &ty),
        "value_soundness" => value_soundness(&env, &m, &ty),
        "canonicity_coercion" => canonicity(&env, &m, &is_refl_tree, "refl or a choice of refls"),
        "canonicity_function" => canonicity(&env, &m, &is_function_tree, "a lambda, a constant or a choice of those"),
        "uniqueness_mod_zero" => uniqueness(&env, &m, &ty).or_else(|| neutral_uniqueness(cfg)),
        "types_are_values" => types_are_values(&env, &m, &ty).or_else(|| random_types_are_values(cfg)),
        _ => unreachable!(),
    };
    Ok(failure.map(|(at, msg)| cx(at.as_ref(), msg)))
}

type Failure = Option<(Option<Node>, String)>;

/// The deterministic reduction path from `m`, at most `PATH` terms long.
fn det_path(env: &Env, m: &Node) -> Vec<Node> {
    let mut path = vec![m.clone()];
    while path.len() < PATH {
        match step_det(env, path.last().unwrap()) {
            StepOutcome::Stepped(s) => path.push(s.term),
            _ => break,
        }
    }
    path
}

fn progress(env: &Env, m: &Node) -> Failure {
    if !env.is_lambda_free() {
        return Some((None, "environment is not λ-free".into()));
    }
    for cur in det_path(env, m) {
        let v = is_value(&cur);
        let z = cur == Node::Zero;
        let s = step_all(env, &cur).len();
        if [v, z, s > 0].iter().filter(|b| **b).count() != 1 {
            return Some((Some(cur), format!("trichotomy fails: value={v}, zero={z}, successors={s}")));
        }
    }
    None
}

fn preservation(env: &Env, m: &Node, ty: &Node) -> Failure {
    for cur in det_path(env, m) {
        for s in step_all(env, &cur) {
            if let Err(d) = check_term(env, &s.term, ty) {
                return Some((Some(cur), format!("{} step loses the type: {}", s.tag(), d.render())));
            }
        }
    }
    None
}

fn value_soundness(env: &Env, m: &Node, ty: &Node) -> Failure {
    match whnf(env, m, EVAL_FUEL) {
        Whnf::Value { term, .. } => {
            if term == Node::Zero {
                return Some((Some(term), "value is 0".into()));
            }
            if let Some(s) = step_all(env, &term).first() {
                return Some((Some(term), format!("value steps by {}", s.tag())));
            }
            if let Err(d) = check_term(env, &term, ty) {
                return Some((Some(term), format!("value loses the type: {}", d.render())));
            }
            None
        }
        Whnf::Stuck(t) => Some((Some(t), "evaluation is stuck".into())),
        Whnf::ZeroResult { .. } | Whnf::OutOfFuel(_) => None,
    }
}

fn is_refl_tree(v: &Node) -> bool {
    match v {
        Node::Refl(_) => true,
        Node::Choice(a, b) => is_refl_tree(a) && is_refl_tree(b),
        _ => false,
    }
}

fn is_function_tree(v: &Node) -> bool {
    match v {
        Node::Lam(..) => true,
        Node::Choice(a, b) => is_function_tree(a) && is_function_tree(b),
        _ => matches!(v.spine().0, Node::Con(_)),
    }
}

fn canonicity(env: &Env, m: &Node, canonical: &dyn Fn(&Node) -> bool, what: &str) -> Failure {
    let ex = explore(env, m, EXPLORE_FUEL);
    if let Some(s) = ex.stuck.first() {
        return Some((Some(s.clone()), "a reduction path is stuck".into()));
    }
    let mut values = ex.values;
    if let Whnf::Value { term, .. } = whnf(env, m, EVAL_FUEL) {
        values.push(term);
    }
    values
        .into_iter()
        .find(|v| !canonical(v))
        .map(|v| (Some(v), format!("value is not {what}")))
}

fn uniqueness(env: &Env, m: &Node, ty: &Node) -> Failure {
    if m.contains_zero() {
        return Some((None, "generated term contains 0".into()));
    }
    let first = infer_term(env, m);
    if first != infer_term(env, m) {
        return Some((None, "inference is not deterministic".into()));
    }
    match first {
        Ok(TypeResult::Exactly(t)) if t == *ty => None,
        Ok(r) => Some((None, format!("inferred {} instead of exactly the generated type", print_type(&r.pattern())))),
        Err(d) => Some((None, d.render())),
    }
}

/// `x M1 ... Mn` infers exactly the codomain of `x` even when the
/// arguments contain 0.
fn neutral_uniqueness(cfg: &GenConfig) -> Failure {
    let env = cfg.prelude.env();
    let mut g = Gen::new(StdRng::seed_from_u64(cfg.seed ^ 0x9e37_79b9), env, &cfg.weights, cfg.prelude.has_maybe());
    let args: Vec<Node> = (0..3).map(|_| g.inhabited_ty(1)).collect();
    let cod = g.ty(2);
    let fty = args.iter().rev().fold(cod.clone(), |acc, a| Node::arrow(a.clone(), acc));
    g.env.push_local(Local::TmVar(Hint::new("x"), fty));
    let mut m = Node::Var(0);
    for a in &args {
        let arg = g.term(a, cfg.size / 3, true)?;
        let arg = if arg.contains_zero() { arg } else { Node::choice(Node::Zero, arg) };
        m = Node::app(m, arg);
    }
    match infer_term(&g.env, &m) {
        Ok(TypeResult::Exactly(t)) if t == cod => None,
        Ok(r) => Some((Some(m), format!("neutral term inferred {}", print_type(&r.pattern())))),
        Err(d) => Some((Some(m), d.render())),
    }
}

fn type_ok(env: &Env, t: &Node) -> Result<(), String> {
    kind_of(env, t).map_err(|d| format!("`{}` is ill-kinded: {}", print_type(t), d.render()))?;
    if !is_type_value(t) {
        return Err(format!("`{}` is not a type value", print_type(t)));
    }
    Ok(())
}

/// Check every type annotation and argument inside `m`.
fn types_in(env: &mut Env, m: &Node) -> Result<(), String> {
    use Node::*;
    match m {
        Lam(h, t, b) => {
            type_ok(env, t)?;
            env.push_local(Local::TmVar(h.clone(), (**t).clone()));
            let r = types_in(env, b);
            env.pop_local();
            r
        }
        TyLam(h, k, b) | Univ(h, k, b) => {
            env.push_local(Local::TyVar(h.clone(), (**k).clone()));
            let r = types_in(env, b);
            env.pop_local();
            r
        }
        TyApp(a, t) | CInst(a, t) => {
            type_ok(env, t)?;
            types_in(env, a)
        }
        Refl(t) => type_ok(env, t),
        If(s, p, c, a) => {
            p.type_args.iter().try_for_each(|t| type_ok(env, t))?;
            types_in(env, s)?;
            types_in(env, c)?;
            types_in(env, a)
        }
        Guard(s, p, c) => {
            p.type_args.iter().try_for_each(|t| type_ok(env, t))?;
            types_in(env, s)?;
            types_in(env, c)
        }
        App(a, b) | Cast(a, b) | Choice(a, b) | Trans(a, b) | CApp(a, b) | Sim(a, b) => {
            types_in(env, a)?;
            types_in(env, b)
        }
        Sym(a) | Fst(a) | Snd(a) => types_in(env, a),
        _ => Ok(()),
    }
}

fn types_are_values(env: &Env, m: &Node, ty: &Node) -> Failure {
    type_ok(env, ty)
        .and_then(|_| types_in(&mut env.clone(), m))
        .err()
        .map(|e| (None, e))
}

fn random_types_are_values(cfg: &GenConfig) -> Failure {
    let env = cfg.prelude.env();
    let mut g = Gen::new(StdRng::seed_from_u64(cfg.seed ^ 0x5851_f42d), env.clone(), &cfg.weights, cfg.prelude.has_maybe());
    (0..4).find_map(|_| {
        let t = g.ty(4);
        type_ok(&env, &t).err().map(|e| (None, e))
    })
}

#[cfg(test)]
mod tests;
