//! Dictionary resolution: local dictionaries, their superclasses, then
//! instances whose head matches the goal.

use std::collections::HashMap;

use super::{ClassTable, Dict, InstanceInfo, Options, Overlap};
use crate::diag::Diagnostic;
use crate::env::{Env, Local};
use crate::subst::{instantiate_all, unshift};
use crate::syntax::{print_type, Node};

/// One-way matching of an instance head argument against a type. Pattern
/// variables are the `nvars` outermost free variables of `pat`.
pub fn match_type(pat: &Node, target: &Node, nvars: usize, depth: usize, out: &mut HashMap<usize, Node>) -> bool {
    match (pat, target) {
        (Node::Var(i), _) if *i >= depth && *i - depth < nvars => {
            let pos = nvars - 1 - (*i - depth);
            let Some(t) = unshift(target, depth) else { return false };
            match out.get(&pos) {
                Some(prev) => *prev == t,
                None => {
                    out.insert(pos, t);
                    true
                }
            }
        }
        (Node::Var(i), Node::Var(j)) => i == j,
        (Node::TCon(a), Node::TCon(b)) => a == b,
        (Node::TApp(f1, a1), Node::TApp(f2, a2)) => {
            match_type(f1, f2, nvars, depth, out) && match_type(a1, a2, nvars, depth, out)
        }
        (Node::EqTy(l1, r1, k1), Node::EqTy(l2, r2, k2)) => {
            k1 == k2 && match_type(l1, l2, nvars, depth, out) && match_type(r1, r2, nvars, depth, out)
        }
        (Node::Forall(_, k1, b1), Node::Forall(_, k2, b2)) => k1 == k2 && match_type(b1, b2, nvars, depth + 1, out),
        _ => false,
    }
}

/// Match the head positions `positions` of an instance against `args`;
/// returns the bindings of the instance variables, outermost first, when
/// every variable is bound.
fn match_head(inst: &InstanceInfo, args: &[Node], positions: &[usize]) -> Option<Vec<Node>> {
    let n = inst.vars.len();
    let mut b = HashMap::new();
    for &p in positions {
        if !match_type(&inst.head[p], &args[p], n, 0, &mut b) {
            return None;
        }
    }
    (0..n).map(|i| b.get(&i).cloned()).collect()
}

impl Dict {
    pub fn new(classes: &ClassTable, term: Node, ty: Node) -> Dict {
        let class = ty.type_head().filter(|c| classes.contains_key(*c)).map(str::to_string);
        Dict { term, ty, class }
    }
}

/// Dictionaries bound by locals, innermost first, closed under superclass
/// projection. Locals at `exclude` levels are skipped.
pub fn local_dicts(env: &Env, classes: &ClassTable, exclude: &[usize]) -> Vec<Dict> {
    let mut out = vec![];
    for i in 0..env.depth() {
        if exclude.contains(&(env.depth() - 1 - i)) {
            continue;
        }
        if let Some(Local::TmVar(_, t)) = env.local(i) {
            let d = Dict::new(classes, Node::Var(i), t);
            if d.class.is_some() {
                out.push(d);
            }
        }
    }
    with_superclasses(classes, out)
}

pub fn with_superclasses(classes: &ClassTable, dicts: Vec<Dict>) -> Vec<Dict> {
    let mut out = dicts;
    let mut i = 0;
    while i < out.len() && out.len() < 256 {
        let d = out[i].clone();
        i += 1;
        let info = &classes[d.class.as_ref().unwrap()];
        let args = d.args();
        for (proj, sup) in info.supers.iter().zip(&info.decl.supers) {
            let ty = instantiate_all(sup, &args);
            if out.iter().any(|x| x.ty == ty) {
                continue;
            }
            let term = Node::app(Node::ty_apps(Node::reference(proj.clone()), args.clone()), d.term.clone());
            out.push(Dict::new(classes, term.clone(), ty));
        }
    }
    out
}

/// A dictionary for the class predicate `goal`.
pub fn resolve(env: &Env, classes: &ClassTable, opts: &Options, goal: &Node, locals: &[Dict]) -> Result<Node, Diagnostic> {
    resolve_depth(env, classes, opts, goal, locals, opts.resolve_depth)
}

fn resolve_depth(
    env: &Env,
    classes: &ClassTable,
    opts: &Options,
    goal: &Node,
    locals: &[Dict],
    depth: usize,
) -> Result<Node, Diagnostic> {
    let no_instance = || Diagnostic::new("no-instance", format!("no instance for `{}`", print_type(goal)));
    if let Some(d) = locals.iter().find(|d| d.ty == *goal) {
        return Ok(d.term.clone());
    }
    let Some(info) = goal.type_head().and_then(|c| classes.get(c)) else {
        return Err(no_instance());
    };
    if depth == 0 {
        return Err(Diagnostic::new("no-instance", format!("resolution depth exhausted for `{}`", print_type(goal))));
    }
    let args: Vec<Node> = goal.type_spine().1.into_iter().cloned().collect();
    let all: Vec<usize> = (0..args.len()).collect();
    let mut candidates: Vec<(usize, Node)> = vec![];
    let mut first_err = None;
    for (idx, inst) in info.instances.iter().enumerate() {
        let Some(vals) = match_head(inst, &args, &all) else { continue };
        match build(env, classes, opts, inst, &args, &vals, locals, depth) {
            Ok(t) => candidates.push((idx, t)),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    match candidates.len() {
        0 => Err(first_err.unwrap_or_else(no_instance)),
        1 => Ok(candidates.pop().unwrap().1),
        _ if opts.overlap == Overlap::First => {
            // Most specific candidate: its head is matched by all others'.
            let specific = candidates.iter().find(|(i, _)| {
                candidates.iter().all(|(j, _)| {
                    let mine = &info.instances[*i];
                    match_head(&info.instances[*j], &mine.head, &all).is_some() || i == j
                })
            });
            Ok(specific.unwrap_or(&candidates[0]).1.clone())
        }
        _ => {
            let names: Vec<&str> = candidates.iter().map(|(i, _)| info.instances[*i].ctor.as_str()).collect();
            Err(Diagnostic::new(
                "ambiguous",
                format!("overlapping instances for `{}`: {}", print_type(goal), names.join(", ")),
            ))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn build(
    env: &Env,
    classes: &ClassTable,
    opts: &Options,
    inst: &InstanceInfo,
    args: &[Node],
    vals: &[Node],
    locals: &[Dict],
    depth: usize,
) -> Result<Node, Diagnostic> {
    let mut t = Node::ty_apps(Node::con(inst.ctor.clone()), args.iter().cloned().chain(vals.iter().cloned()));
    for a in args {
        t = Node::app(t, Node::refl(a.clone()));
    }
    for c in &inst.context {
        let g = instantiate_all(c, vals);
        t = Node::app(t, resolve_depth(env, classes, opts, &g, locals, depth - 1)?);
    }
    Ok(t)
}

/// Dictionaries selected by the determiners of `d` for dependency `fd`:
/// instances whose head matches `d`'s arguments at the determiner positions
/// and whose variables are all fixed by them.
pub fn resolve_by_determiners(
    env: &Env,
    classes: &ClassTable,
    opts: &Options,
    d: &Dict,
    fd: &crate::surface::Fundep,
) -> Vec<Dict> {
    let Some(info) = d.class.as_ref().and_then(|c| classes.get(c)) else { return vec![] };
    let args = d.args();
    let locals = local_dicts(env, classes, &[]);
    let mut out = vec![];
    for inst in &info.instances {
        let Some(vals) = match_head(inst, &args, &fd.from) else { continue };
        let head: Vec<Node> = inst.head.iter().map(|h| instantiate_all(h, &vals)).collect();
        let ty = Node::tapps(Node::tcon(info.decl.name.clone()), head);
        if let Ok(term) = resolve(env, classes, opts, &ty, &locals) {
            out.push(Dict::new(classes, term, ty));
        }
    }
    out
}
