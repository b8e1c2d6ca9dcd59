//! Values, evaluation contexts and small-step reduction.
//!
//! Absorptive contexts `A` reach the function of an application, the
//! coercion of a cast, the scrutinee of `if`/`guard`, and the operands of
//! every coercion former. Full contexts `E` additionally reach both sides
//! of a choice. `0` is absorbed through any non-empty `A` (ζ) and `A`
//! distributes over a choice in its hole (κ).

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::env::{Env, Local};
use crate::subst::instantiate;
use crate::syntax::{Node, OwnedArg, Pattern};
use crate::typing::kind_of;

/// Reduction rule labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Beta,
    BetaTy,
    DeltaRefl,
    DeltaTrans,
    DeltaApp,
    DeltaInst,
    DeltaFst,
    DeltaSnd,
    DeltaSim,
    DeltaForall,
    DeltaCast,
    Zero1,
    Zero2,
    Zeta,
    If1,
    If2,
    Guard1,
    Guard2,
    Open,
    Let,
    Kappa,
}

impl Rule {
    pub const ALL: [Rule; 21] = [
        Rule::Beta,
        Rule::BetaTy,
        Rule::DeltaRefl,
        Rule::DeltaTrans,
        Rule::DeltaApp,
        Rule::DeltaInst,
        Rule::DeltaFst,
        Rule::DeltaSnd,
        Rule::DeltaSim,
        Rule::DeltaForall,
        Rule::DeltaCast,
        Rule::Zero1,
        Rule::Zero2,
        Rule::Zeta,
        Rule::If1,
        Rule::If2,
        Rule::Guard1,
        Rule::Guard2,
        Rule::Open,
        Rule::Let,
        Rule::Kappa,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Rule::Beta => "β→",
            Rule::BetaTy => "β∀",
            Rule::DeltaRefl => "δ_refl",
            Rule::DeltaTrans => "δ_;",
            Rule::DeltaApp => "δ_@",
            Rule::DeltaInst => "δ_@[]",
            Rule::DeltaFst => "δ_fst",
            Rule::DeltaSnd => "δ_snd",
            Rule::DeltaSim => "δ_~",
            Rule::DeltaForall => "δ_∀",
            Rule::DeltaCast => "δ_▷",
            Rule::Zero1 => "β_0-1",
            Rule::Zero2 => "β_0-2",
            Rule::Zeta => "ζ",
            Rule::If1 => "δ_if-1",
            Rule::If2 => "δ_if-2",
            Rule::Guard1 => "δ_guard-1",
            Rule::Guard2 => "δ_guard-2",
            Rule::Open => "β_open",
            Rule::Let => "β_let",
            Rule::Kappa => "κ",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// One reduction step: the rule fired and whether it fired below the root
/// (through ξ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub congruence: bool,
    pub term: Node,
}

impl Step {
    pub fn tag(&self) -> String {
        if self.congruence {
            format!("ξ/{}", self.rule.tag())
        } else {
            self.rule.tag().to_string()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Stepped(Step),
    IsValue,
    IsZero,
    Stuck(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Whnf {
    Value { term: Node, steps: usize },
    ZeroResult { steps: usize },
    OutOfFuel(Node),
    Stuck(Node),
}

pub const DEFAULT_FUEL: usize = 100_000;

/// Weak-head values: constant-headed spines, abstractions, `refl`, and
/// choices of values.
pub fn is_value(m: &Node) -> bool {
    match m {
        Node::Lam(..) | Node::TyLam(..) | Node::Refl(_) | Node::Con(_) => true,
        Node::Choice(a, b) => is_value(a) && is_value(b),
        Node::App(..) | Node::TyApp(..) => matches!(m.spine().0, Node::Con(_)),
        _ => false,
    }
}

/// Type values: constants, variables, applications of type values,
/// quantified types, and equalities between type values.
pub fn is_type_value(t: &Node) -> bool {
    match t {
        Node::TCon(_) | Node::Var(_) | Node::Forall(..) => true,
        Node::TApp(a, b) => is_type_value(a) && is_type_value(b),
        Node::EqTy(a, b, k) => is_type_value(a) && is_type_value(b) && k.is_kind(),
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchResult {
    /// The spine remainder after the pattern's type arguments.
    Hit(Vec<OwnedArg>),
    Miss,
    NotReady,
}

pub fn match_pattern(scrut: &Node, p: &Pattern) -> MatchResult {
    use crate::syntax::Arg;
    let (head, args) = scrut.spine();
    let Node::Con(k) = head else { return MatchResult::NotReady };
    if k != &p.head || args.len() < p.type_args.len() {
        return MatchResult::Miss;
    }
    for (a, t) in args.iter().zip(&p.type_args) {
        match a {
            Arg::Type(u) if *u == t => {}
            _ => return MatchResult::Miss,
        }
    }
    MatchResult::Hit(
        args[p.type_args.len()..]
            .iter()
            .map(|a| match a {
                Arg::Term(n) => OwnedArg::Term((*n).clone()),
                Arg::Type(t) => OwnedArg::Type((*t).clone()),
            })
            .collect(),
    )
}

// ---- context navigation ----

fn child(m: &Node, i: usize) -> &Node {
    use Node::*;
    match (m, i) {
        (App(a, _) | TyApp(a, _) | Trans(a, _) | CApp(a, _) | Sim(a, _) | Choice(a, _) | CInst(a, _), 0) => a,
        (App(_, b) | Trans(_, b) | CApp(_, b) | Sim(_, b) | Choice(_, b), 1) => b,
        (Cast(_, e), 1) => e,
        (If(s, ..) | Guard(s, ..), 0) => s,
        (Sym(e) | Fst(e) | Snd(e), 0) => e,
        (Univ(_, _, e), 0) => e,
        _ => unreachable!("no child {i}"),
    }
}

fn with_child(m: &Node, i: usize, new: Node) -> Node {
    use Node::*;
    let n = Box::new(new);
    match (m, i) {
        (App(_, b), 0) => App(n, b.clone()),
        (App(a, _), 1) => App(a.clone(), n),
        (TyApp(_, t), 0) => TyApp(n, t.clone()),
        (Cast(t, _), 1) => Cast(t.clone(), n),
        (If(_, p, a, b), 0) => If(n, p.clone(), a.clone(), b.clone()),
        (Guard(_, p, a), 0) => Guard(n, p.clone(), a.clone()),
        (Sym(_), 0) => Sym(n),
        (Fst(_), 0) => Fst(n),
        (Snd(_), 0) => Snd(n),
        (Univ(h, k, _), 0) => Univ(h.clone(), k.clone(), n),
        (CInst(_, t), 0) => CInst(n, t.clone()),
        (Trans(_, b), 0) => Trans(n, b.clone()),
        (Trans(a, _), 1) => Trans(a.clone(), n),
        (CApp(_, b), 0) => CApp(n, b.clone()),
        (CApp(a, _), 1) => CApp(a.clone(), n),
        (Sim(_, b), 0) => Sim(n, b.clone()),
        (Sim(a, _), 1) => Sim(a.clone(), n),
        (Choice(_, b), 0) => Choice(n, b.clone()),
        (Choice(a, _), 1) => Choice(a.clone(), n),
        _ => unreachable!("no child {i}"),
    }
}

/// Child positions that are absorptive-context holes.
pub fn a_positions(m: &Node) -> &'static [usize] {
    use Node::*;
    match m {
        App(..) | TyApp(..) | If(..) | Guard(..) | Sym(_) | Fst(_) | Snd(_) | Univ(..) | CInst(..) => &[0],
        Cast(..) => &[1],
        Trans(..) | CApp(..) | Sim(..) => &[0, 1],
        _ => &[],
    }
}

/// Child positions that are full-context holes.
pub fn e_positions(m: &Node) -> &'static [usize] {
    match m {
        Node::Choice(..) => &[0, 1],
        _ => a_positions(m),
    }
}

fn binder_local(m: &Node) -> Option<Local> {
    match m {
        Node::Univ(h, k, _) => Some(Local::TyVar(h.clone(), (**k).clone())),
        _ => None,
    }
}

pub fn get_at<'a>(m: &'a Node, path: &[usize]) -> &'a Node {
    path.iter().fold(m, |n, &i| child(n, i))
}

pub fn replace_at(m: &Node, path: &[usize], new: Node) -> Node {
    match path.split_first() {
        None => new,
        Some((&i, rest)) => with_child(m, i, replace_at(child(m, i), rest, new)),
    }
}

/// Every non-empty absorptive path from `m` to a node satisfying `pred`,
/// leftmost first.
pub fn a_paths(m: &Node, pred: &dyn Fn(&Node) -> bool) -> Vec<Vec<usize>> {
    fn go(m: &Node, pred: &dyn Fn(&Node) -> bool, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for &i in a_positions(m) {
            let c = child(m, i);
            cur.push(i);
            if pred(c) {
                out.push(cur.clone());
            }
            go(c, pred, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    go(m, pred, &mut vec![], &mut out);
    out
}

fn apply_args(head: Node, args: Vec<OwnedArg>) -> Node {
    Node::apply_args(head, args)
}

/// Unfold an open function: `0 ⊕ (M1 ⊕ (… ⊕ Mk))`, or `0` with no instances.
pub fn open_unfolding(instances: &[Node]) -> Node {
    match instances.split_last() {
        None => Node::Zero,
        Some((last, init)) => {
            let tree = init.iter().rev().fold(last.clone(), |acc, m| Node::choice(m.clone(), acc));
            Node::choice(Node::Zero, tree)
        }
    }
}

/// Redex rules applying at the root of `m`.
pub(crate) fn top_rules(env: &Env, m: &Node) -> Vec<(Rule, Node)> {
    use Node::*;
    let mut out = vec![];
    match m {
        App(f, a) => {
            if let Lam(_, _, body) = &**f {
                out.push((Rule::Beta, instantiate(body, a)));
            }
        }
        TyApp(f, t) => {
            if let TyLam(_, _, body) = &**f {
                out.push((Rule::BetaTy, instantiate(body, t)));
            }
        }
        Sym(e) => {
            if let Refl(t) = &**e {
                out.push((Rule::DeltaRefl, Refl(t.clone())));
            }
        }
        Trans(a, b) => {
            if let (Refl(t), Refl(u)) = (&**a, &**b) {
                if t == u {
                    out.push((Rule::DeltaTrans, Refl(t.clone())));
                }
            }
        }
        CApp(a, b) => {
            if let (Refl(t), Refl(u)) = (&**a, &**b) {
                out.push((Rule::DeltaApp, Node::refl(Node::tapp((**t).clone(), (**u).clone()))));
            }
        }
        CInst(e, t) => {
            if let Refl(f) = &**e {
                if let Forall(_, _, body) = &**f {
                    out.push((Rule::DeltaInst, Node::refl(instantiate(body, t))));
                }
            }
        }
        Fst(e) | Snd(e) => {
            if let Refl(t) = &**e {
                if let TApp(f, a) = &**t {
                    if matches!(m, Fst(_)) {
                        out.push((Rule::DeltaFst, Refl(f.clone())));
                    } else {
                        out.push((Rule::DeltaSnd, Refl(a.clone())));
                    }
                }
            }
        }
        Sim(a, b) => {
            if let (Refl(t), Refl(u)) = (&**a, &**b) {
                if let Ok(k) = kind_of(env, t) {
                    out.push((Rule::DeltaSim, Node::refl(Node::eq_ty((**t).clone(), (**u).clone(), k))));
                }
            }
        }
        Univ(h, k, e) => {
            if let Refl(t) = &**e {
                out.push((Rule::DeltaForall, Node::refl(Node::forall(h.clone(), (**k).clone(), (**t).clone()))));
            }
        }
        Cast(t, e) => {
            if let Refl(_) = &**e {
                out.push((Rule::DeltaCast, (**t).clone()));
            }
        }
        Choice(a, b) => {
            if **a == Zero {
                out.push((Rule::Zero1, (**b).clone()));
            }
            if **b == Zero {
                out.push((Rule::Zero2, (**a).clone()));
            }
        }
        If(s, p, c, alt) => match match_pattern(s, p) {
            MatchResult::Hit(rest) => out.push((Rule::If1, apply_args((**c).clone(), rest))),
            MatchResult::Miss => out.push((Rule::If2, (**alt).clone())),
            MatchResult::NotReady => {}
        },
        Guard(s, p, c) => match match_pattern(s, p) {
            MatchResult::Hit(rest) => out.push((Rule::Guard1, apply_args((**c).clone(), rest))),
            MatchResult::Miss => out.push((Rule::Guard2, Zero)),
            MatchResult::NotReady => {}
        },
        Ref(x) => {
            if env.is_method(x) {
                out.push((Rule::Open, open_unfolding(env.instances(x))));
            } else if let Some(body) = env.let_body(x) {
                out.push((Rule::Let, body.clone()));
            }
        }
        _ => {}
    }
    out
}

fn is_zero(n: &Node) -> bool {
    matches!(n, Node::Zero)
}

fn is_choice(n: &Node) -> bool {
    matches!(n, Node::Choice(..))
}

fn kappa(m: &Node, path: &[usize]) -> Node {
    let Node::Choice(a, b) = get_at(m, path) else { unreachable!() };
    Node::choice(replace_at(m, path, (**a).clone()), replace_at(m, path, (**b).clone()))
}

fn step_all_in(env: &mut Env, m: &Node, congruence: bool, out: &mut Vec<Step>) {
    for (rule, term) in top_rules(env, m) {
        out.push(Step { rule, congruence, term });
    }
    if !a_paths(m, &is_zero).is_empty() {
        out.push(Step { rule: Rule::Zeta, congruence, term: Node::Zero });
    }
    for p in a_paths(m, &is_choice) {
        out.push(Step { rule: Rule::Kappa, congruence, term: kappa(m, &p) });
    }
    for &i in e_positions(m) {
        let c = child(m, i);
        let local = binder_local(m);
        if let Some(l) = local.clone() {
            env.push_local(l);
        }
        let mut inner = vec![];
        step_all_in(env, c, true, &mut inner);
        if local.is_some() {
            env.pop_local();
        }
        out.extend(inner.into_iter().map(|s| Step { rule: s.rule, congruence: true, term: with_child(m, i, s.term) }));
    }
}

/// All one-step successors, deduplicated by resulting term.
pub fn step_all(env: &Env, m: &Node) -> Vec<Step> {
    let mut out = vec![];
    step_all_in(&mut env.clone(), m, false, &mut out);
    let mut seen = HashSet::new();
    out.retain(|s| seen.insert(s.term.clone()));
    out
}

fn step_det_in(env: &mut Env, m: &Node, congruence: bool) -> Option<Step> {
    if let Some((rule, term)) = top_rules(env, m).into_iter().next() {
        return Some(Step { rule, congruence, term });
    }
    if !a_paths(m, &is_zero).is_empty() {
        return Some(Step { rule: Rule::Zeta, congruence, term: Node::Zero });
    }
    let value_choice = |n: &Node| is_choice(n) && is_value(n);
    if let Some(p) = a_paths(m, &value_choice).first() {
        return Some(Step { rule: Rule::Kappa, congruence, term: kappa(m, p) });
    }
    for &i in e_positions(m) {
        let local = binder_local(m);
        if let Some(l) = local.clone() {
            env.push_local(l);
        }
        let r = step_det_in(env, child(m, i), true);
        if local.is_some() {
            env.pop_local();
        }
        if let Some(s) = r {
            return Some(Step { rule: s.rule, congruence: true, term: with_child(m, i, s.term) });
        }
    }
    None
}

/// Deterministic leftmost-outermost step.
pub fn step_det(env: &Env, m: &Node) -> StepOutcome {
    if is_value(m) {
        return StepOutcome::IsValue;
    }
    if is_zero(m) {
        return StepOutcome::IsZero;
    }
    match step_det_in(&mut env.clone(), m, false) {
        Some(s) => StepOutcome::Stepped(s),
        None => StepOutcome::Stuck(format!("no rule applies to `{m}`")),
    }
}

/// Iterate [`step_det`] at most `fuel` times.
pub fn whnf(env: &Env, m: &Node, fuel: usize) -> Whnf {
    whnf_traced(env, m, fuel, &mut |_| {})
}

/// Like [`whnf`], reporting each step.
pub fn whnf_traced(env: &Env, m: &Node, fuel: usize, trace: &mut dyn FnMut(&Step)) -> Whnf {
    let mut cur = m.clone();
    let mut env = env.clone();
    for steps in 0..=fuel {
        if is_value(&cur) {
            return Whnf::Value { term: cur, steps };
        }
        if is_zero(&cur) {
            return Whnf::ZeroResult { steps };
        }
        if steps == fuel {
            break;
        }
        match step_det_in(&mut env, &cur, false) {
            Some(s) => {
                trace(&s);
                cur = s.term;
            }
            None => return Whnf::Stuck(cur),
        }
    }
    Whnf::OutOfFuel(cur)
}

/// Breadth-first exploration of every reduction path. Returns the distinct
/// values and whether `0` was reached, expanding at most `fuel` terms.
pub fn explore(env: &Env, m: &Node, fuel: usize) -> Exploration {
    explore_bounded(env, m, fuel, usize::MAX)
}

/// [`explore`] that also stops once the distinct terms discovered hold
/// `max_nodes` nodes in total, bounding memory when every step branches.
pub fn explore_bounded(env: &Env, m: &Node, fuel: usize, max_nodes: usize) -> Exploration {
    let mut stored = m.size();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([m.clone()]);
    let mut ex = Exploration::default();
    seen.insert(m.clone());
    while let Some(cur) = queue.pop_front() {
        if is_value(&cur) {
            ex.values.push(cur);
            continue;
        }
        if is_zero(&cur) {
            ex.reached_zero = true;
            continue;
        }
        if ex.expanded == fuel {
            ex.exhausted = true;
            break;
        }
        ex.expanded += 1;
        let next = step_all(env, &cur);
        if next.is_empty() {
            ex.stuck.push(cur);
        }
        if stored >= max_nodes {
            ex.exhausted = true;
            break;
        }
        for s in next {
            if seen.insert(s.term.clone()) {
                stored += s.term.size();
                queue.push_back(s.term);
            }
        }
    }
    ex
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Exploration {
    pub values: Vec<Node>,
    pub reached_zero: bool,
    pub stuck: Vec<Node>,
    pub expanded: usize,
    pub exhausted: bool,
}

/// Flatten a choice tree of values into its leaves, dropping zeros.
pub fn choice_leaves(m: &Node) -> Vec<&Node> {
    match m {
        Node::Choice(a, b) => {
            let mut v = choice_leaves(a);
            v.extend(choice_leaves(b));
            v
        }
        Node::Zero => vec![],
        other => vec![other],
    }
}

#[cfg(test)]
mod tests;
