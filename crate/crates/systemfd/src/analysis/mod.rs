//! Statically-determined-instance analysis.
//!
//! An open function's evidence parameters are its term parameters whose
//! type is headed by an open type. A program passes when
//!
//! 1. recursive calls of an open function from its own instances pass
//!    evidence taken apart by the enclosing guards,
//! 2. every call passes evidence that is concrete (constructor-headed) or
//!    bound by a guard pattern, and
//! 3. every tuple of evidence constructors is matched exactly by the guard
//!    preamble of some instance. Tuples whose equality premises contradict
//!    each other can optionally be exempted.
//!
//! Specialization (see [`specialize`]) removes guards, zeroes, open functions
//! and lets from terms whose evidence is concrete.

mod specialize;

use std::collections::HashMap;

use serde::Serialize;

pub use specialize::specialize;

use crate::elab::{Knowledge, Options};
use crate::env::{telescope, Entry, Env, Local, Openness};
use crate::subst::shift;
use crate::syntax::{print_term, Node, Pattern};
use crate::typing::pattern_type;

/// Outcome for one open function.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FunctionReport {
    pub name: String,
    /// Term-parameter positions carrying evidence.
    pub evidence: Vec<usize>,
    pub condition1: Vec<String>,
    pub condition2: Vec<String>,
    /// Constructor tuples no instance preamble covers.
    pub missing: Vec<Vec<String>>,
    /// Tuples covered by more than one instance.
    pub overlapping: Vec<Vec<String>>,
}

impl FunctionReport {
    pub fn ok(&self) -> bool {
        self.condition1.is_empty() && self.condition2.is_empty() && self.missing.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HssdiReport {
    pub functions: Vec<FunctionReport>,
}

impl HssdiReport {
    pub fn ok(&self) -> bool {
        self.functions.iter().all(FunctionReport::ok)
    }

    pub fn function(&self, name: &str) -> Option<&FunctionReport> {
        self.functions.iter().find(|f| f.name == name)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for f in &self.functions {
            let status = if f.ok() { "ok" } else { "FAIL" };
            out.push_str(&format!("{} {status}\n", f.name));
            for v in &f.condition1 {
                out.push_str(&format!("  condition 1: {v}\n"));
            }
            for v in &f.condition2 {
                out.push_str(&format!("  condition 2: {v}\n"));
            }
            for t in &f.missing {
                out.push_str(&format!("  condition 3: no instance for ({})\n", t.join(", ")));
            }
            for t in &f.overlapping {
                out.push_str(&format!("  note: several instances for ({})\n", t.join(", ")));
            }
        }
        out
    }
}

/// Saturation, per open function: the tuples no instance covers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SaturationReport {
    pub missing: Vec<(String, Vec<String>)>,
}

impl SaturationReport {
    pub fn saturated(&self) -> bool {
        self.missing.is_empty()
    }
}

/// Positions of evidence among the term parameters of an open function type.
pub fn evidence_positions(env: &Env, sigma: &Node) -> Vec<usize> {
    let (_, args, _) = telescope(sigma);
    args.iter()
        .enumerate()
        .filter(|(_, a)| is_evidence_type(env, a))
        .map(|(i, _)| i)
        .collect()
}

fn is_evidence_type(env: &Env, t: &Node) -> bool {
    t.type_head().is_some_and(|h| matches!(env.type_const(h), Some((_, Openness::Open))))
}

/// Constructors matched by the leading guards of an instance, by term
/// parameter position. Guards may be separated by binders.
pub fn guard_preamble(m: &Node) -> HashMap<usize, String> {
    // Binder stack, innermost last: the parameter position of top-level
    // term lambdas, `None` for everything else.
    let mut stack: Vec<Option<usize>> = vec![];
    let mut params = 0;
    let mut guarded = false;
    let mut out = HashMap::new();
    let mut cur = m;
    loop {
        match cur {
            Node::TyLam(_, _, b) => {
                stack.push(None);
                cur = b;
            }
            Node::Lam(_, _, b) => {
                if guarded {
                    stack.push(None);
                } else {
                    stack.push(Some(params));
                    params += 1;
                }
                cur = b;
            }
            Node::Guard(s, p, c) => {
                guarded = true;
                if let Node::Var(i) = **s {
                    if let Some(Some(pos)) = stack.len().checked_sub(i + 1).map(|j| stack[j]) {
                        out.insert(pos, p.head.clone());
                    }
                }
                cur = c;
            }
            _ => return out,
        }
    }
}

fn instance_entries(env: &Env) -> Vec<(String, Node)> {
    env.entries()
        .iter()
        .filter_map(|e| match e {
            Entry::InstanceDef(n, m) => Some((n.clone(), m.clone())),
            _ => None,
        })
        .collect()
}

/// Whether matching the evidence parameters of `sigma` against `ctors` gives
/// equality premises that can hold together.
pub fn tuple_consistent(env: &Env, sigma: &Node, evidence: &[usize], ctors: &[String]) -> bool {
    let (binders, args, _) = telescope(sigma);
    let mut scope = env.globals_only();
    for (h, k) in &binders {
        scope.push_local(Local::TyVar(h.clone(), k.clone()));
    }
    let base = scope.depth();
    for (pos, k) in evidence.iter().zip(ctors) {
        let ty = shift(&args[*pos], scope.depth() - base);
        let targs: Vec<Node> = ty.type_spine().1.into_iter().cloned().collect();
        let Ok((resid, fields)) = pattern_type(&scope, &Pattern::new(k.clone(), targs), &ty) else {
            return false;
        };
        for (h, kd) in &resid {
            scope.push_local(Local::TyVar(h.clone(), kd.clone()));
        }
        for (j, f) in fields.iter().enumerate() {
            scope.push_local(Local::TmVar(crate::syntax::Hint::none(), shift(f, j)));
        }
    }
    let classes = HashMap::new();
    let opts = Options::default();
    Knowledge::new(&scope, &classes, &opts, vec![], vec![], false).inconsistency().is_none()
}

fn cartesian(choices: &[Vec<String>]) -> Vec<Vec<String>> {
    let mut out = vec![vec![]];
    for c in choices {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<String>| {
                c.iter().map(move |k| {
                    let mut p = prefix.clone();
                    p.push(k.clone());
                    p
                })
            })
            .collect();
    }
    out
}

/// Condition 3 for one open function: (missing, overlapping) tuples. With
/// `exempt`, tuples whose premises contradict each other need no instance.
fn coverage(env: &Env, sigma: &Node, instances: &[Node], exempt: bool) -> (Vec<Vec<String>>, Vec<Vec<String>>) {
    let evidence = evidence_positions(env, sigma);
    let (_, args, _) = telescope(sigma);
    let choices: Vec<Vec<String>> = evidence
        .iter()
        .map(|&p| args[p].type_head().map(|h| env.ctors_of(h).to_vec()).unwrap_or_default())
        .collect();
    let preambles: Vec<HashMap<usize, String>> = instances.iter().map(guard_preamble).collect();
    let mut missing = vec![];
    let mut overlapping = vec![];
    for tuple in cartesian(&choices) {
        let covers = preambles
            .iter()
            .filter(|pre| {
                pre.len() == evidence.len() && evidence.iter().zip(&tuple).all(|(p, k)| pre.get(p) == Some(k))
            })
            .count();
        if covers > 1 {
            overlapping.push(tuple.clone());
        }
        if covers == 0 && !(exempt && !tuple_consistent(env, sigma, &evidence, &tuple)) {
            missing.push(tuple);
        }
    }
    (missing, overlapping)
}

/// How a binder was introduced, for conditions 1 and 2.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Bound {
    /// A field of a guard pattern.
    Guard,
    /// A leading parameter of a let; concrete once lets are substituted.
    LetParam,
    Other,
}

struct Calls<'a> {
    env: &'a Env,
    evidence: &'a HashMap<String, Vec<usize>>,
    /// `(callee, message)`
    bad: Vec<(String, String)>,
    /// Recursive calls of `owner` with evidence not taken from a guard.
    owner: Option<String>,
    not_smaller: Vec<String>,
}

impl Calls<'_> {
    fn acceptable(&self, arg: &Node, stack: &[Bound], strict: bool) -> bool {
        let (head, args) = arg.spine();
        match head {
            Node::Con(_) => !strict,
            Node::Cast(inner, _) if args.is_empty() => self.acceptable(inner, stack, strict),
            Node::Var(i) if args.is_empty() => match stack.len().checked_sub(i + 1).map(|j| stack[j]) {
                Some(Bound::Guard) => true,
                Some(Bound::LetParam) => !strict,
                _ => false,
            },
            Node::Ref(x) if self.env.is_let(x) => !strict,
            Node::Ref(x) => match self.evidence.get(x) {
                Some(ev) => {
                    let term_args: Vec<&Node> = args
                        .iter()
                        .filter_map(|a| match a {
                            crate::syntax::Arg::Term(t) => Some(*t),
                            _ => None,
                        })
                        .collect();
                    ev.iter().all(|&p| term_args.get(p).is_some_and(|a| self.acceptable(a, stack, strict)))
                }
                None => false,
            },
            _ => false,
        }
    }

    fn visit(&mut self, m: &Node, stack: &mut Vec<Bound>, decl: &str) {
        let (head, args) = m.spine();
        if let Node::Ref(x) = head {
            if let Some(ev) = self.evidence.get(x) {
                let term_args: Vec<&Node> = args
                    .iter()
                    .filter_map(|a| match a {
                        crate::syntax::Arg::Term(t) => Some(*t),
                        _ => None,
                    })
                    .collect();
                for &p in ev {
                    let Some(a) = term_args.get(p) else { continue };
                    if !self.acceptable(a, stack, false) {
                        self.bad.push((
                            x.clone(),
                            format!("in {decl}: evidence `{}` is neither concrete nor guard-bound", print_term(a)),
                        ));
                    }
                    if self.owner.as_deref() == Some(x.as_str()) && !self.acceptable(a, stack, true) {
                        self.not_smaller
                            .push(format!("in {decl}: recursive call with evidence `{}` not taken from a guard", print_term(a)));
                    }
                }
            }
        }
        self.children(m, stack, decl);
    }

    fn children(&mut self, m: &Node, stack: &mut Vec<Bound>, decl: &str) {
        match m {
            Node::Lam(_, _, b) | Node::TyLam(_, _, b) => {
                stack.push(Bound::Other);
                self.visit(b, stack, decl);
                stack.pop();
            }
            Node::Guard(s, _, c) => {
                self.visit(s, stack, decl);
                self.telescope(c, Bound::Guard, stack, decl);
            }
            Node::If(s, _, c, a) => {
                self.visit(s, stack, decl);
                self.visit(c, stack, decl);
                self.visit(a, stack, decl);
            }
            Node::App(f, a) => {
                self.visit(f, stack, decl);
                self.visit(a, stack, decl);
            }
            Node::TyApp(f, _) | Node::Cast(f, _) => self.visit(f, stack, decl),
            Node::Choice(a, b) => {
                self.visit(a, stack, decl);
                self.visit(b, stack, decl);
            }
            _ => {}
        }
    }

    /// Leading binders of `m` are tagged `how`.
    fn telescope(&mut self, m: &Node, how: Bound, stack: &mut Vec<Bound>, decl: &str) {
        let mut cur = m;
        let mut n = 0;
        while let Node::Lam(_, _, b) | Node::TyLam(_, _, b) = cur {
            stack.push(how);
            n += 1;
            cur = b;
        }
        self.visit(cur, stack, decl);
        stack.truncate(stack.len() - n);
    }
}

/// Check every open function of `env` (which includes the program).
pub fn check_hssdi(env: &Env) -> HssdiReport {
    check_hssdi_with(env, false)
}

/// Like [`check_hssdi`]; with `exempt`, evidence tuples with contradictory
/// equality premises need no instance.
pub fn check_hssdi_with(env: &Env, exempt: bool) -> HssdiReport {
    let methods = env.method_names();
    let evidence: HashMap<String, Vec<usize>> =
        methods.iter().map(|m| (m.clone(), evidence_positions(env, env.method(m).unwrap()))).collect();
    let instances = instance_entries(env);
    let mut reports: Vec<FunctionReport> = methods
        .iter()
        .map(|m| {
            let sigma = env.method(m).unwrap();
            let own: Vec<Node> = env.instances(m).to_vec();
            let (missing, overlapping) = coverage(env, sigma, &own, exempt);
            FunctionReport { name: m.clone(), evidence: evidence[m].clone(), missing, overlapping, ..Default::default() }
        })
        .collect();
    let mut c2: Vec<(String, String)> = vec![];
    let mut c1: HashMap<String, Vec<String>> = HashMap::new();
    for (owner, body) in &instances {
        let mut calls =
            Calls { env, evidence: &evidence, bad: vec![], owner: Some(owner.clone()), not_smaller: vec![] };
        calls.visit(body, &mut vec![], &format!("an instance of {owner}"));
        c2.extend(calls.bad);
        if !evidence.get(owner).is_some_and(Vec::is_empty) {
            c1.entry(owner.clone()).or_default().extend(calls.not_smaller);
        }
    }
    for e in env.entries() {
        if let Entry::LetDef(x, body) = e {
            let mut calls = Calls { env, evidence: &evidence, bad: vec![], owner: None, not_smaller: vec![] };
            let mut stack = vec![];
            let mut cur = body;
            while let Node::Lam(_, _, b) | Node::TyLam(_, _, b) = cur {
                stack.push(Bound::LetParam);
                cur = b;
            }
            calls.visit(cur, &mut stack, &format!("let {x}"));
            c2.extend(calls.bad);
        }
    }
    for r in &mut reports {
        r.condition2 = c2.iter().filter(|(c, _)| *c == r.name).map(|(_, m)| m.clone()).collect();
        r.condition1 = c1.remove(&r.name).unwrap_or_default();
    }
    HssdiReport { functions: reports }
}

/// Condition 3 alone, program-wide.
pub fn check_saturation(env: &Env) -> SaturationReport {
    check_saturation_with(env, false)
}

pub fn check_saturation_with(env: &Env, exempt: bool) -> SaturationReport {
    let mut missing = vec![];
    for m in env.method_names() {
        let (miss, _) = coverage(env, env.method(&m).unwrap(), env.instances(&m), exempt);
        missing.extend(miss.into_iter().map(|t| (m.clone(), t)));
    }
    SaturationReport { missing }
}

/// No guards, zeroes, open functions or lets occur in `m`; such a term
/// cannot reduce to zero.
pub fn check_no_zero_syntactic(m: &Node) -> bool {
    // Every `Ref` names an open function or a let.
    !m.any(&mut |n| matches!(n, Node::Guard(..) | Node::Zero | Node::Ref(_)))
}

#[cfg(test)]
mod tests;
