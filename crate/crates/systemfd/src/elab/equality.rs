//! Coercion synthesis.
//!
//! Equalities in scope form a graph over types. Edges carry coercions and
//! are closed under symmetry, decomposition (`η.1`, `η.2` between two
//! applications in one component) and, when enabled, improvement: two
//! dictionaries of a class with a dependency `m̄ -> n` whose determiners
//! are provably equal yield an edge between their determined arguments,
//! witnessed by a call of the dependency's witness function.
//!
//! Queries search paths in the graph, congruence on matching type
//! structure, and paths with a congruence step in the middle.

use std::cell::RefCell;
use std::collections::{HashMap, VecDeque};

use super::resolve::resolve_by_determiners;
use super::{ClassTable, Dict, Options};
use crate::env::{Env, Local};
use crate::subst::shift;
use crate::syntax::{Hint, Node};
use crate::typing::kind_of;

/// `refl τ ;; η = η`, `η ;; refl τ = η`.
pub fn trans(a: Node, b: Node) -> Node {
    match (&a, &b) {
        (Node::Refl(_), _) => b,
        (_, Node::Refl(_)) => a,
        _ => Node::trans(a, b),
    }
}

/// `sym (refl τ) = refl τ`, `sym (sym η) = η`.
pub fn sym(a: Node) -> Node {
    match a {
        Node::Refl(_) => a,
        Node::Sym(inner) => *inner,
        other => Node::sym(other),
    }
}

fn capp(a: Node, b: Node, whole: &Node) -> Node {
    if matches!((&a, &b), (Node::Refl(_), Node::Refl(_))) {
        Node::refl(whole.clone())
    } else {
        Node::capp(a, b)
    }
}

/// The shape a constructor-headed type commits to, if any.
fn rigid_shape(t: &Node) -> Option<String> {
    match t {
        Node::Forall(..) => Some("forall".into()),
        Node::EqTy(..) => Some("~".into()),
        _ => {
            let (h, args) = t.type_spine();
            match h {
                Node::TCon(n) => Some(format!("{n}/{}", args.len())),
                _ => None,
            }
        }
    }
}

pub struct Knowledge<'a> {
    env: Env,
    classes: &'a ClassTable,
    opts: &'a Options,
    hyps: Vec<(Node, Node, Node)>,
    dicts: Vec<Dict>,
    improve: bool,
    nodes: Vec<Node>,
    index: HashMap<Node, usize>,
    adj: Vec<Vec<(usize, Node)>>,
    memo: RefCell<HashMap<(Node, Node), Option<Node>>>,
}

impl<'a> Knowledge<'a> {
    /// Build from the coercion hypotheses among `env`'s locals plus
    /// `extra_hyps` (coercion, lhs, rhs), and the dictionaries `dicts`.
    pub fn new(
        env: &Env,
        classes: &'a ClassTable,
        opts: &'a Options,
        extra_hyps: Vec<(Node, Node, Node)>,
        dicts: Vec<Dict>,
        improve: bool,
    ) -> Knowledge<'a> {
        let mut hyps = vec![];
        for i in (0..env.depth()).rev() {
            if let Some(Local::TmVar(_, Node::EqTy(l, r, _))) = env.local(i) {
                hyps.push((Node::Var(i), *l, *r));
            }
        }
        hyps.extend(extra_hyps);
        let mut k = Knowledge {
            env: env.clone(),
            classes,
            opts,
            hyps,
            dicts,
            improve,
            nodes: vec![],
            index: HashMap::new(),
            adj: vec![],
            memo: RefCell::new(HashMap::new()),
        };
        k.saturate();
        k
    }

    fn node(&mut self, t: &Node) -> usize {
        if let Some(&i) = self.index.get(t) {
            return i;
        }
        self.nodes.push(t.clone());
        self.adj.push(vec![]);
        self.index.insert(t.clone(), self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    fn add_edge(&mut self, a: &Node, b: &Node, eta: Node) -> bool {
        let i = self.node(a);
        let j = self.node(b);
        if i == j || self.path_idx(i, j).is_some() {
            return false;
        }
        self.adj[i].push((j, eta.clone()));
        self.adj[j].push((i, sym(eta)));
        self.memo.borrow_mut().clear();
        true
    }

    /// Breadth-first path; the coercion goes from node `i` to node `j`.
    fn path_idx(&self, i: usize, j: usize) -> Option<Node> {
        if i == j {
            return Some(Node::refl(self.nodes[i].clone()));
        }
        let mut prev: HashMap<usize, (usize, Node)> = HashMap::new();
        let mut q = VecDeque::from([i]);
        while let Some(x) = q.pop_front() {
            for (y, eta) in &self.adj[x] {
                if *y == i || prev.contains_key(y) {
                    continue;
                }
                prev.insert(*y, (x, eta.clone()));
                if *y == j {
                    let mut steps = vec![];
                    let mut cur = j;
                    while cur != i {
                        let (p, e) = prev[&cur].clone();
                        steps.push(e);
                        cur = p;
                    }
                    steps.reverse();
                    let mut it = steps.into_iter();
                    let first = it.next().unwrap();
                    return Some(it.fold(first, trans));
                }
                q.push_back(*y);
            }
        }
        None
    }

    /// Nodes reachable from `i` in breadth-first order, with coercions from
    /// `i` to them.
    fn component(&self, i: usize) -> Vec<(usize, Node)> {
        let mut out = vec![(i, Node::refl(self.nodes[i].clone()))];
        let mut seen = vec![false; self.nodes.len()];
        seen[i] = true;
        let mut q = VecDeque::from([0usize]);
        while let Some(k) = q.pop_front() {
            let (x, px) = out[k].clone();
            for (y, eta) in &self.adj[x] {
                if !seen[*y] {
                    seen[*y] = true;
                    out.push((*y, trans(px.clone(), eta.clone())));
                    q.push_back(out.len() - 1);
                }
            }
        }
        out
    }

    pub fn path(&self, a: &Node, b: &Node) -> Option<Node> {
        match (self.index.get(a), self.index.get(b)) {
            (Some(&i), Some(&j)) => self.path_idx(i, j),
            _ => None,
        }
    }

    fn saturate(&mut self) {
        for (eta, l, r) in self.hyps.clone() {
            self.add_edge(&l, &r, eta);
        }
        for _round in 0..8 {
            let mut changed = self.decompose();
            if self.improve {
                changed |= self.improvement();
                if changed {
                    self.decompose();
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Add `.1`/`.2` edges for every pair of applications in one component.
    fn decompose(&mut self) -> bool {
        let mut any = false;
        loop {
            let mut changed = false;
            let n = self.nodes.len();
            for i in 0..n {
                let Node::TApp(f1, a1) = self.nodes[i].clone() else { continue };
                for (j, eta) in self.component(i) {
                    if j <= i {
                        continue;
                    }
                    let Node::TApp(f2, a2) = self.nodes[j].clone() else { continue };
                    let k1 = kind_of(&self.env, &f1).ok();
                    if k1.is_none() || k1 != kind_of(&self.env, &f2).ok() {
                        continue;
                    }
                    changed |= self.add_edge(&f1, &f2, Node::fst(eta.clone()));
                    changed |= self.add_edge(&a1, &a2, Node::snd(eta));
                }
            }
            any |= changed;
            if !changed {
                return any;
            }
        }
    }

    /// Dictionaries for improvement: the given ones and, for each given one
    /// and dependency, the instance its determiners select.
    fn improvement_dicts(&self) -> Vec<Dict> {
        let mut out = vec![];
        for d in &self.dicts {
            let Some(info) = d.class.as_ref().and_then(|c| self.classes.get(c)) else { continue };
            for fd in &info.fundeps {
                for r in resolve_by_determiners(&self.env, self.classes, self.opts, d, &fd.dep) {
                    if !out.iter().any(|x: &Dict| x.ty == r.ty) && !self.dicts.iter().any(|x| x.ty == r.ty) {
                        out.push(r);
                    }
                }
            }
        }
        // Outermost first, so witnesses take the earlier dictionary first.
        out.extend(self.dicts.iter().rev().cloned());
        out
    }

    fn improvement(&mut self) -> bool {
        let dicts = self.improvement_dicts();
        let mut changed = false;
        for (i, d1) in dicts.iter().enumerate() {
            for (j, d2) in dicts.iter().enumerate() {
                if i == j || d1.class != d2.class || d1.class.is_none() {
                    continue;
                }
                let info = &self.classes[d1.class.as_ref().unwrap()];
                let a1 = d1.args();
                let a2 = d2.args();
                for fd in &info.fundeps {
                    let k = fd.dep.to;
                    if self.connected(&a1[k], &a2[k]) {
                        continue;
                    }
                    // Determiners must agree, possibly after a cast of d1.
                    let mut cast_args = a1.clone();
                    let mut ok = true;
                    for &m in &fd.dep.from {
                        if a1[m] != a2[m] {
                            if self.prove_plain(&a1[m], &a2[m]).is_none() {
                                ok = false;
                                break;
                            }
                            cast_args[m] = a2[m].clone();
                        }
                    }
                    if !ok {
                        continue;
                    }
                    let target = Node::tapps(Node::tcon(info.decl.name.clone()), cast_args.clone());
                    let d1_term = if target == d1.ty {
                        d1.term.clone()
                    } else {
                        match self.prove_plain(&d1.ty, &target) {
                            Some(eta) => Node::cast(d1.term.clone(), eta),
                            None => continue,
                        }
                    };
                    let mut tys = cast_args.clone();
                    tys.push(a2[k].clone());
                    for (m, a) in a2.iter().enumerate() {
                        if m != k && !fd.dep.from.contains(&m) {
                            tys.push(a.clone());
                        }
                    }
                    let call = Node::apps(Node::ty_apps(Node::reference(fd.name.clone()), tys), [d1_term, d2.term.clone()]);
                    changed |= self.add_edge(&a1[k], &a2[k], call);
                }
            }
        }
        changed
    }

    fn connected(&self, a: &Node, b: &Node) -> bool {
        a == b || self.path(a, b).is_some()
    }

    /// Proof without consulting improvement edges added later.
    fn prove_plain(&self, a: &Node, b: &Node) -> Option<Node> {
        self.prove(a, b)
    }

    /// A coercion `a ~ b`, if one can be built.
    pub fn prove(&self, a: &Node, b: &Node) -> Option<Node> {
        self.prove_depth(a, b, self.opts.synth_depth)
    }

    fn prove_depth(&self, a: &Node, b: &Node, depth: usize) -> Option<Node> {
        if a == b {
            return Some(Node::refl(a.clone()));
        }
        if let Some(p) = self.path(a, b) {
            return Some(p);
        }
        if depth == 0 {
            return None;
        }
        let key = (a.clone(), b.clone());
        if let Some(r) = self.memo.borrow().get(&key) {
            return r.clone();
        }
        self.memo.borrow_mut().insert(key.clone(), None);
        let r = self.search(a, b, depth);
        self.memo.borrow_mut().insert(key, r.clone());
        r
    }

    fn search(&self, a: &Node, b: &Node, depth: usize) -> Option<Node> {
        if let Some(c) = self.congruence(a, b, depth - 1) {
            return Some(c);
        }
        let from_a = match self.index.get(a) {
            Some(&i) => self.component(i),
            None => vec![],
        };
        let to_b = match self.index.get(b) {
            Some(&j) => self.component(j),
            None => vec![],
        };
        let mut starts = vec![(a.clone(), Node::refl(a.clone()))];
        starts.extend(from_a.into_iter().skip(1).map(|(i, p)| (self.nodes[i].clone(), p)));
        let mut ends = vec![(b.clone(), Node::refl(b.clone()))];
        ends.extend(to_b.into_iter().skip(1).map(|(j, p)| (self.nodes[j].clone(), sym(p))));
        for (x, px) in &starts {
            for (y, py) in &ends {
                if x == a && y == b {
                    continue;
                }
                if let Some(c) = self.congruence(x, y, depth - 1) {
                    return Some(trans(trans(px.clone(), c), py.clone()));
                }
            }
        }
        None
    }

    fn congruence(&self, a: &Node, b: &Node, depth: usize) -> Option<Node> {
        match (a, b) {
            (Node::TApp(f1, x1), Node::TApp(f2, x2)) => {
                let kx = kind_of(&self.env, x1).ok()?;
                if kind_of(&self.env, x2).ok()? != kx {
                    return None;
                }
                let ef = self.prove_depth(f1, f2, depth)?;
                let ex = self.prove_depth(x1, x2, depth)?;
                Some(capp(ef, ex, a))
            }
            (Node::EqTy(l1, r1, k1), Node::EqTy(l2, r2, k2)) if k1 == k2 => {
                let el = self.prove_depth(l1, l2, depth)?;
                let er = self.prove_depth(r1, r2, depth)?;
                if matches!((&el, &er), (Node::Refl(_), Node::Refl(_))) {
                    return Some(Node::refl(a.clone()));
                }
                Some(Node::sim(el, er))
            }
            (Node::Forall(h, k1, b1), Node::Forall(_, k2, b2)) if k1 == k2 => {
                let inner = self.under_binder(h.clone(), (**k1).clone());
                let eb = inner.prove_depth(b1, b2, depth)?;
                Some(Node::univ(h.clone(), (**k1).clone(), eb))
            }
            _ => None,
        }
    }

    fn under_binder(&self, h: Hint, k: Node) -> Knowledge<'a> {
        let env = self.env.with_local(Local::TyVar(h, k));
        let hyps = self.hyps.iter().map(|(e, l, r)| (shift(e, 1), shift(l, 1), shift(r, 1))).collect();
        let dicts = self.dicts.iter().map(|d| d.shifted(1)).collect();
        // Locals are already in `hyps`; build from the shifted copies only.
        let mut k = Knowledge {
            env,
            classes: self.classes,
            opts: self.opts,
            hyps,
            dicts,
            improve: self.improve,
            nodes: vec![],
            index: HashMap::new(),
            adj: vec![],
            memo: RefCell::new(HashMap::new()),
        };
        k.saturate();
        k
    }

    /// Two types with different rigid shapes that are provably equal.
    pub fn inconsistency(&self) -> Option<(Node, Node)> {
        let mut seen = vec![false; self.nodes.len()];
        for i in 0..self.nodes.len() {
            if seen[i] {
                continue;
            }
            let comp = self.component(i);
            let mut shape: Option<(String, usize)> = None;
            for (j, _) in &comp {
                seen[*j] = true;
                if let Some(s) = rigid_shape(&self.nodes[*j]) {
                    match &shape {
                        None => shape = Some((s, *j)),
                        Some((s0, j0)) if *s0 != s => return Some((self.nodes[*j0].clone(), self.nodes[*j].clone())),
                        _ => {}
                    }
                }
            }
        }
        None
    }
}
