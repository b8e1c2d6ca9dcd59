//! Type-directed generation of well-typed closed terms.
//!
//! Every target type handed to the generator is inhabited: a closed base
//! type, an equality with equal sides, or a type held by a local. Each form
//! inverts one typing rule and falls back to the introduction form of the
//! target, so generation never needs to backtrack past a single node.

use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::RngExt;

use super::Weights;
use crate::elab::match_type;
use crate::env::{Entry, Env, Local};
use crate::subst::{instantiate_all, shift};
use crate::syntax::{Hint, Node, Pattern};
use crate::typing::{kind_of, pattern_type};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Form {
    Intro,
    Head,
    Beta,
    If,
    Guard,
    Choice,
    Zero,
    Cast,
    Coercion,
}

pub(crate) struct Gen<'a> {
    pub rng: StdRng,
    pub env: Env,
    weights: &'a Weights,
    maybe: bool,
    /// Closed open-type types with a let-bound inhabitant.
    dicts: Vec<Node>,
    /// Global heads with their types.
    heads: Vec<(Node, Node)>,
}

fn bool_ty() -> Node {
    Node::tcon("Bool")
}

fn maybe(t: Node) -> Node {
    Node::tapp(Node::tcon("Maybe"), t)
}

fn kstar_star() -> Node {
    Node::karrow(Node::Star, Node::Star)
}

impl<'a> Gen<'a> {
    pub fn new(rng: StdRng, env: Env, weights: &'a Weights, maybe: bool) -> Gen<'a> {
        let mut heads = vec![];
        let mut dicts = vec![];
        for e in env.entries() {
            match e {
                Entry::CtorSig(k, t, _) => heads.push((Node::con(k.clone()), t.clone())),
                Entry::MethodSig(x, t) => heads.push((Node::reference(x.clone()), t.clone())),
                Entry::LetSig(x, t) => {
                    if crate::typing::is_open_head(&env, t) && !dicts.contains(t) {
                        dicts.push(t.clone());
                    }
                    heads.push((Node::reference(x.clone()), t.clone()));
                }
                _ => {}
            }
        }
        Gen { rng, env, weights, maybe, dicts, heads }
    }

    fn pick<T: Clone>(&mut self, xs: &[T]) -> Option<T> {
        xs.choose(&mut self.rng).cloned()
    }

    fn coin(&mut self) -> bool {
        self.rng.random_bool(0.5)
    }

    fn below(&mut self, n: usize) -> usize {
        if n == 0 {
            0
        } else {
            self.rng.random_range(0..n)
        }
    }

    fn push_ty(&mut self, name: &str, k: Node) {
        self.env.push_local(Local::TyVar(Hint::new(name), k));
    }

    fn push_tm(&mut self, name: &str, t: Node) {
        self.env.push_local(Local::TmVar(Hint::new(name), t));
    }

    fn pop(&mut self) {
        self.env.pop_local();
    }

    fn fresh(&self, base: &str) -> String {
        format!("{base}{}", self.env.depth())
    }

    // ---- types ----

    fn ty_vars(&self) -> Vec<Node> {
        (0..self.env.depth())
            .filter(|&i| matches!(self.env.local(i), Some(Local::TyVar(_, Node::Star))))
            .map(Node::Var)
            .collect()
    }

    /// A random type of kind `*`.
    pub fn ty(&mut self, budget: usize) -> Node {
        let vars = self.ty_vars();
        let mut opts: Vec<(u32, u8)> = vec![(4, 0)];
        if self.maybe {
            opts.push((2, 1));
        }
        if !self.dicts.is_empty() {
            opts.push((2, 2));
        }
        if !vars.is_empty() {
            opts.push((2, 3));
        }
        if budget > 0 {
            opts.extend([(3, 4), (1, 5), (1, 6)]);
        }
        let total: u32 = opts.iter().map(|o| o.0).sum();
        let mut r = self.rng.random_range(0..total);
        let choice = opts.iter().find(|(w, _)| r < *w || { r -= w; false }).map(|o| o.1).unwrap_or(0);
        let b = budget.saturating_sub(1);
        match choice {
            1 => {
                let a = self.ty(b);
                maybe(a)
            }
            2 => self.pick(&self.dicts.clone()).unwrap(),
            3 => self.pick(&vars).unwrap(),
            4 => {
                let a = self.ty(b / 2);
                let c = self.ty(b / 2);
                Node::arrow(a, c)
            }
            5 => {
                let name = self.fresh("a");
                self.push_ty(&name, Node::Star);
                let body = self.ty(b);
                self.pop();
                Node::forall(Hint::new(name), Node::Star, body)
            }
            6 => {
                if self.maybe && self.coin() {
                    Node::eq_ty(Node::tcon("Maybe"), Node::tcon("Maybe"), kstar_star())
                } else {
                    let a = self.ty(b);
                    Node::eq_ty(a.clone(), a, Node::Star)
                }
            }
            _ => bool_ty(),
        }
    }

    /// A random type of kind `k`, when the universe has one.
    fn ty_of_kind(&mut self, k: &Node, budget: usize) -> Option<Node> {
        if *k == Node::Star {
            return Some(self.ty(budget));
        }
        if *k == kstar_star() {
            return Some(if self.maybe && self.coin() {
                Node::tcon("Maybe")
            } else {
                let a = self.ty(budget);
                Node::tapp(Node::tcon(crate::syntax::ARROW), a)
            });
        }
        None
    }

    /// A random inhabited type of kind `*`.
    pub fn inhabited_ty(&mut self, budget: usize) -> Node {
        for _ in 0..8 {
            let t = self.ty(budget);
            if self.inhabited(&t) {
                return t;
            }
        }
        bool_ty()
    }

    fn has_local(&self, t: &Node) -> bool {
        (0..self.env.depth()).any(|i| matches!(self.env.local(i), Some(Local::TmVar(_, u)) if u == *t))
    }

    fn locals_of(&self, t: &Node) -> Vec<Node> {
        (0..self.env.depth())
            .filter(|&i| matches!(self.env.local(i), Some(Local::TmVar(_, u)) if u == *t))
            .map(Node::Var)
            .collect()
    }

    /// Does the introduction form of `t` succeed in the current scope?
    pub fn inhabited(&mut self, t: &Node) -> bool {
        if let Node::Forall(h, k, b) = t {
            self.env.push_local(Local::TyVar(h.clone(), (**k).clone()));
            let r = self.inhabited(b);
            self.pop();
            return r;
        }
        if let Some((dom, cod)) = t.as_arrow() {
            let cod = shift(cod, 1);
            self.push_tm("x", dom.clone());
            let r = self.inhabited(&cod);
            self.pop();
            return r;
        }
        if let Node::EqTy(l, r, k) = t {
            if l == r {
                return true;
            }
            return self.has_local(t) || self.has_local(&Node::eq_ty((**r).clone(), (**l).clone(), (**k).clone()));
        }
        if *t == bool_ty() || self.dicts.contains(t) {
            return true;
        }
        if let Node::TApp(f, _) = t {
            if **f == Node::tcon("Maybe") {
                return true;
            }
        }
        self.has_local(t)
    }

    // ---- terms ----

    /// A term of the inhabited type `t`.
    pub fn term(&mut self, t: &Node, size: usize, zeros: bool) -> Option<Node> {
        if size == 0 {
            return self.intro(t, 0, zeros);
        }
        let forms = self.forms(t, zeros);
        for _ in 0..4 {
            let total: u32 = forms.iter().map(|f| f.0).sum();
            let mut r = self.rng.random_range(0..total);
            let form = forms.iter().find(|(w, _)| r < *w || { r -= w; false }).map(|f| f.1).unwrap_or(Form::Intro);
            if let Some(m) = self.form(form, t, size - 1, zeros) {
                return Some(m);
            }
        }
        self.intro(t, size - 1, zeros)
    }

    fn forms(&self, t: &Node, zeros: bool) -> Vec<(u32, Form)> {
        let w = self.weights;
        let mut v = vec![
            (w.intro, Form::Intro),
            (w.head, Form::Head),
            (w.beta, Form::Beta),
            (w.if_, Form::If),
            (w.choice, Form::Choice),
            (w.cast, Form::Cast),
        ];
        if zeros {
            v.push((w.zero, Form::Zero));
        }
        if !self.dicts.is_empty() {
            v.push((w.guard, Form::Guard));
        }
        if matches!(t, Node::EqTy(..)) {
            v.push((w.coercion, Form::Coercion));
        }
        v.retain(|f| f.0 > 0);
        if v.is_empty() {
            v.push((1, Form::Intro));
        }
        v
    }

    fn form(&mut self, form: Form, t: &Node, size: usize, zeros: bool) -> Option<Node> {
        match form {
            Form::Intro => self.intro(t, size, zeros),
            Form::Head => self.head(t, size, zeros),
            Form::Beta => self.beta(t, size, zeros),
            Form::If => self.if_(t, size, zeros),
            Form::Guard => self.guard(t, size, zeros),
            Form::Choice => {
                let a = self.term(t, size / 2, zeros)?;
                let b = self.term(t, size / 2, zeros)?;
                Some(Node::choice(a, b))
            }
            Form::Zero => {
                let a = self.term(t, size, zeros)?;
                Some(if self.coin() { Node::choice(Node::Zero, a) } else { Node::choice(a, Node::Zero) })
            }
            Form::Cast => self.cast(t, size, zeros),
            Form::Coercion => self.coercion(t, size, zeros),
        }
    }

    fn intro(&mut self, t: &Node, size: usize, zeros: bool) -> Option<Node> {
        if let Node::Forall(h, k, b) = t {
            let name = h.as_str().map(str::to_string).unwrap_or_else(|| self.fresh("a"));
            self.push_ty(&name, (**k).clone());
            let body = self.term(b, size, zeros);
            self.pop();
            return Some(Node::ty_lam(Hint::new(name), (**k).clone(), body?));
        }
        if let Some((dom, cod)) = t.as_arrow() {
            let (dom, cod) = (dom.clone(), shift(cod, 1));
            let name = self.fresh("x");
            self.push_tm(&name, dom.clone());
            let body = self.term(&cod, size, zeros);
            self.pop();
            return Some(Node::lam(Hint::new(name), dom, body?));
        }
        let locals = self.locals_of(t);
        if let Node::EqTy(l, r, k) = t {
            if l == r {
                return Some(Node::refl((**l).clone()));
            }
            if let Some(v) = self.pick(&locals) {
                return Some(v);
            }
            let flipped = self.locals_of(&Node::eq_ty((**r).clone(), (**l).clone(), (**k).clone()));
            return self.pick(&flipped).map(Node::sym);
        }
        if !locals.is_empty() && self.below(3) == 0 {
            return self.pick(&locals);
        }
        if *t == bool_ty() {
            return Some(Node::con(if self.coin() { "True" } else { "False" }));
        }
        if let Node::TApp(f, a) = t {
            if **f == Node::tcon("Maybe") {
                let nothing = Node::ty_app(Node::con("Nothing"), (**a).clone());
                if size > 0 && self.inhabited(a) && self.coin() {
                    let x = self.term(a, size - 1, zeros)?;
                    return Some(Node::app(Node::ty_app(Node::con("Just"), (**a).clone()), x));
                }
                return Some(nothing);
            }
        }
        if self.dicts.contains(t) {
            let lets: Vec<Node> = self.heads.iter().filter(|(h, ty)| matches!(h, Node::Ref(_)) && ty == t).map(|(h, _)| h.clone()).collect();
            return self.pick(&lets);
        }
        self.pick(&locals)
    }

    /// A constant, let, open function or local applied to enough arguments
    /// to reach `t`.
    fn head(&mut self, t: &Node, size: usize, zeros: bool) -> Option<Node> {
        let mut cands: Vec<(Node, Node, bool)> = self.heads.iter().map(|(h, ty)| (h.clone(), ty.clone(), true)).collect();
        for i in 0..self.env.depth() {
            if let Some(Local::TmVar(_, ty)) = self.env.local(i) {
                cands.push((Node::Var(i), ty, false));
            }
        }
        for _ in 0..6 {
            let (h, ty, global) = self.pick(&cands)?;
            if let Some(m) = self.spine(h, &ty, global, t, size, zeros) {
                return Some(m);
            }
        }
        None
    }

    fn spine(&mut self, head: Node, ty: &Node, global: bool, t: &Node, size: usize, zeros: bool) -> Option<Node> {
        let mut kinds = vec![];
        let mut body = ty;
        if global {
            while let Node::Forall(_, k, b) = body {
                kinds.push((**k).clone());
                body = b;
            }
        }
        let mut args = vec![];
        let mut results = vec![body.clone()];
        let mut cur = body;
        while let Some((a, b)) = cur.as_arrow() {
            args.push(a.clone());
            results.push(b.clone());
            cur = b;
        }
        let n = kinds.len();
        let mut matching = vec![];
        for (k, r) in results.iter().enumerate() {
            let mut map = std::collections::HashMap::new();
            if match_type(r, t, n, 0, &mut map) {
                matching.push((k, map));
            }
        }
        let (k, map) = self.pick(&matching)?;
        let mut vals = vec![];
        for (i, kind) in kinds.iter().enumerate() {
            match map.get(&i) {
                Some(v) => vals.push(v.clone()),
                None => vals.push(self.ty_of_kind(kind, 1)?),
            }
        }
        if instantiate_all(&results[k], &vals) != *t {
            return None;
        }
        let arg_tys: Vec<Node> = args[..k].iter().map(|a| instantiate_all(a, &vals)).collect();
        if !arg_tys.iter().all(|a| self.inhabited(a)) {
            return None;
        }
        let each = size / arg_tys.len().max(1);
        let mut m = Node::ty_apps(head, vals);
        for a in &arg_tys {
            let x = self.term(a, each, zeros)?;
            m = Node::app(m, x);
        }
        Some(m)
    }

    fn beta(&mut self, t: &Node, size: usize, zeros: bool) -> Option<Node> {
        let body_t = shift(t, 1);
        if self.coin() {
            let dom = self.inhabited_ty(1);
            let name = self.fresh("y");
            self.push_tm(&name, dom.clone());
            let body = self.term(&body_t, size / 2, zeros);
            self.pop();
            let arg = self.term(&dom, size / 2, zeros)?;
            Some(Node::app(Node::lam(Hint::new(name), dom, body?), arg))
        } else {
            let name = self.fresh("b");
            self.push_ty(&name, Node::Star);
            let body = self.term(&body_t, size, zeros);
            self.pop();
            let arg = self.ty(1);
            Some(Node::ty_app(Node::ty_lam(Hint::new(name), Node::Star, body?), arg))
        }
    }

    /// Consequent type for a pattern over a scrutinee type.
    fn consequent_ty(&self, pat: &Pattern, scrut: &Node, t: &Node) -> Option<Node> {
        let (resid, args) = pattern_type(&self.env, pat, scrut).ok()?;
        let mut ct = shift(t, resid.len());
        for a in args.iter().rev() {
            ct = Node::arrow(a.clone(), ct);
        }
        for (h, k) in resid.iter().rev() {
            ct = Node::forall(h.clone(), k.clone(), ct);
        }
        Some(ct)
    }

    fn if_(&mut self, t: &Node, size: usize, zeros: bool) -> Option<Node> {
        let (scrut_ty, pat) = if self.maybe && self.coin() {
            let a = self.ty(1);
            let k = if self.coin() { "Just" } else { "Nothing" };
            (maybe(a.clone()), Pattern::new(k, vec![a]))
        } else {
            (bool_ty(), Pattern::new(if self.coin() { "True" } else { "False" }, vec![]))
        };
        let ct = self.consequent_ty(&pat, &scrut_ty, t)?;
        let s = self.term(&scrut_ty, size / 3, zeros)?;
        let c = self.term(&ct, size / 3, zeros)?;
        let a = self.term(t, size / 3, zeros)?;
        Some(Node::if_(s, pat, c, a))
    }

    fn guard(&mut self, t: &Node, size: usize, zeros: bool) -> Option<Node> {
        let d = self.pick(&self.dicts.clone())?;
        let (head, args) = d.type_spine();
        let ctors = self.env.ctors_of(head.type_head()?.to_string().as_str()).to_vec();
        let k = self.pick(&ctors)?;
        let pat = Pattern::new(k, args.into_iter().cloned().collect());
        let ct = self.consequent_ty(&pat, &d, t)?;
        let s = self.term(&d, size / 2, zeros)?;
        let c = self.term(&ct, size / 2, zeros)?;
        Some(Node::guard(s, pat, c))
    }

    fn cast(&mut self, t: &Node, size: usize, zeros: bool) -> Option<Node> {
        // Source types reachable through a local coercion, else `t` itself.
        let mut sources = vec![t.clone()];
        for i in 0..self.env.depth() {
            if let Some(Local::TmVar(_, Node::EqTy(l, r, k))) = self.env.local(i) {
                if *k == Node::Star && *r == *t {
                    sources.push(*l);
                } else if *k == Node::Star && *l == *t {
                    sources.push(*r);
                }
            }
        }
        let s = self.pick(&sources)?;
        if !self.inhabited(&s) {
            return None;
        }
        let m = self.term(&s, size / 2, zeros)?;
        let eta = self.term(&Node::eq_ty(s, t.clone(), Node::Star), size / 2, zeros)?;
        Some(Node::cast(m, eta))
    }

    fn eq_goal(&mut self, l: Node, r: Node, k: Node, size: usize, zeros: bool) -> Option<Node> {
        let g = Node::eq_ty(l, r, k);
        if !self.inhabited(&g) {
            return None;
        }
        self.term(&g, size, zeros)
    }

    fn coercion(&mut self, t: &Node, size: usize, zeros: bool) -> Option<Node> {
        let Node::EqTy(l, r, k) = t else { return None };
        let (l, r, k) = ((**l).clone(), (**r).clone(), (**k).clone());
        let half = size / 2;
        match self.below(8) {
            0 => Some(Node::sym(self.eq_goal(r, l, k, size, zeros)?)),
            1 => {
                let a = self.eq_goal(l.clone(), l.clone(), k.clone(), half, zeros)?;
                let b = self.eq_goal(l, r, k, half, zeros)?;
                Some(Node::trans(a, b))
            }
            2 => {
                let (Node::TApp(f1, a1), Node::TApp(f2, a2)) = (&l, &r) else { return None };
                let kf = kind_of(&self.env, f1).ok()?;
                let ka = kind_of(&self.env, a1).ok()?;
                let a = self.eq_goal((**f1).clone(), (**f2).clone(), kf, half, zeros)?;
                let b = self.eq_goal((**a1).clone(), (**a2).clone(), ka, half, zeros)?;
                Some(Node::capp(a, b))
            }
            3 => {
                let Node::KArrow(ka, kb) = &k else { return None };
                let a = self.ty_of_kind(ka, 1)?;
                let inner = self.eq_goal(Node::tapp(l, a.clone()), Node::tapp(r, a), (**kb).clone(), size, zeros)?;
                Some(Node::fst(inner))
            }
            4 => {
                if k != Node::Star {
                    return None;
                }
                let f = self.ty_of_kind(&kstar_star(), 1)?;
                let inner = self.eq_goal(Node::tapp(f.clone(), l), Node::tapp(f, r), Node::Star, size, zeros)?;
                Some(Node::snd(inner))
            }
            5 => {
                let (Node::Forall(h, k1, b1), Node::Forall(_, k2, b2)) = (&l, &r) else { return None };
                if k1 != k2 || k != Node::Star {
                    return None;
                }
                self.env.push_local(Local::TyVar(h.clone(), (**k1).clone()));
                let e = self.eq_goal((**b1).clone(), (**b2).clone(), Node::Star, size, zeros);
                self.pop();
                Some(Node::univ(h.clone(), (**k1).clone(), e?))
            }
            6 => {
                if l != r || k != Node::Star {
                    return None;
                }
                let name = self.fresh("c");
                let q = Node::forall(Hint::new(name), Node::Star, shift(&l, 1));
                let sigma = self.ty(1);
                let inner = self.eq_goal(q.clone(), q, Node::Star, size, zeros)?;
                Some(Node::cinst(inner, sigma))
            }
            _ => {
                let (Node::EqTy(t1, u1, k1), Node::EqTy(t2, u2, k2)) = (&l, &r) else { return None };
                if k1 != k2 || k != Node::Star {
                    return None;
                }
                let a = self.eq_goal((**t1).clone(), (**t2).clone(), (**k1).clone(), half, zeros)?;
                let b = self.eq_goal((**u1).clone(), (**u2).clone(), (**k1).clone(), half, zeros)?;
                Some(Node::sim(a, b))
            }
        }
    }
}
