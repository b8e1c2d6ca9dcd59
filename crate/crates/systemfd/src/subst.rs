//! Parallel substitutions over de Bruijn variables.
//!
//! A substitution is a total map from variables to [`Action`]s, stored as a
//! finite prefix of explicit actions followed by a shifted tail: index
//! `i >= prefix.len()` maps to `Rename(i - prefix.len() + shift)`.
//! Values are kept normalized so extensionally equal substitutions compare
//! equal.

use std::fmt;

use crate::syntax::Node;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    Rename(usize),
    Replace(Node),
}

impl Action {
    fn normalize(self) -> Action {
        match self {
            Action::Replace(Node::Var(j)) => Action::Rename(j),
            a => a,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subst {
    prefix: Vec<Action>,
    shift: usize,
}

impl Subst {
    pub fn new(prefix: Vec<Action>, shift: usize) -> Subst {
        let mut s = Subst { prefix: prefix.into_iter().map(Action::normalize).collect(), shift };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        while self.shift > 0 && self.prefix.last() == Some(&Action::Rename(self.shift - 1)) {
            self.prefix.pop();
            self.shift -= 1;
        }
    }

    pub fn id() -> Subst {
        Subst { prefix: vec![], shift: 0 }
    }

    /// `i ↦ i + k`
    pub fn shift(k: usize) -> Subst {
        Subst { prefix: vec![], shift: k }
    }

    /// `0 ↦ arg, i+1 ↦ i`
    pub fn single(arg: Node) -> Subst {
        Subst::new(vec![Action::Replace(arg)], 0)
    }

    /// `0 ↦ a, i+1 ↦ s(i)`
    pub fn cons(a: Action, s: &Subst) -> Subst {
        let mut prefix = vec![a];
        prefix.extend(s.prefix.iter().cloned());
        Subst::new(prefix, s.shift)
    }

    pub fn prefix(&self) -> &[Action] {
        &self.prefix
    }

    pub fn tail_shift(&self) -> usize {
        self.shift
    }

    /// The action assigned to variable `i`.
    pub fn at(&self, i: usize) -> Action {
        match self.prefix.get(i) {
            Some(a) => a.clone(),
            None => Action::Rename(i - self.prefix.len() + self.shift),
        }
    }

    /// `lift(s)(0) = Rename(0)`, `lift(s)(i+1) = shift(s(i))`.
    pub fn lift(&self) -> Subst {
        let mut prefix = Vec::with_capacity(self.prefix.len() + 1);
        prefix.push(Action::Rename(0));
        for a in &self.prefix {
            prefix.push(match a {
                Action::Rename(j) => Action::Rename(j + 1),
                Action::Replace(n) => Action::Replace(shift(n, 1)),
            });
        }
        Subst::new(prefix, self.shift + 1)
    }

    /// `apply(compose(s1, s2), n) = apply(s2, apply(s1, n))`
    pub fn compose(s1: &Subst, s2: &Subst) -> Subst {
        let len1 = s1.prefix.len();
        let len2 = s2.prefix.len();
        let extra = len2.saturating_sub(s1.shift);
        let total = len1 + extra;
        let mut prefix = Vec::with_capacity(total);
        for i in 0..total {
            prefix.push(match s1.at(i) {
                Action::Rename(j) => s2.at(j),
                Action::Replace(n) => Action::Replace(apply(s2, &n)),
            });
        }
        let new_shift = s1.shift + extra + s2.shift - len2;
        Subst::new(prefix, new_shift)
    }
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.prefix.iter().enumerate() {
            match a {
                Action::Rename(j) => write!(f, "{i}->#{j}, ")?,
                Action::Replace(n) => write!(f, "{i}->{n}, ")?,
            }
        }
        write!(f, "^{}]", self.shift)
    }
}

/// Apply `s`; under `depth` binders variables below `depth` are untouched.
fn go(s: &Subst, n: &Node, depth: usize) -> Node {
    use Node::*;
    let b = |x: &Node| Box::new(go(s, x, depth));
    let under = |x: &Node| Box::new(go(s, x, depth + 1));
    match n {
        Var(i) if *i < depth => Var(*i),
        Var(i) => match s.at(i - depth) {
            Action::Rename(j) => Var(j + depth),
            Action::Replace(m) => shift(&m, depth),
        },
        Star | TCon(_) | Wild | Con(_) | Ref(_) | Zero => n.clone(),
        KArrow(x, y) => KArrow(b(x), b(y)),
        TApp(x, y) => TApp(b(x), b(y)),
        EqTy(x, y, k) => EqTy(b(x), b(y), b(k)),
        Forall(h, k, body) => Forall(h.clone(), b(k), under(body)),
        Lam(h, t, body) => Lam(h.clone(), b(t), under(body)),
        TyLam(h, k, body) => TyLam(h.clone(), b(k), under(body)),
        Univ(h, k, body) => Univ(h.clone(), b(k), under(body)),
        App(x, y) => App(b(x), b(y)),
        TyApp(x, y) => TyApp(b(x), b(y)),
        Cast(x, y) => Cast(b(x), b(y)),
        If(sc, p, m, e) => If(b(sc), map_pattern(p, |t| go(s, t, depth)), b(m), b(e)),
        Guard(sc, p, m) => Guard(b(sc), map_pattern(p, |t| go(s, t, depth)), b(m)),
        Choice(x, y) => Choice(b(x), b(y)),
        Refl(x) => Refl(b(x)),
        Sym(x) => Sym(b(x)),
        Trans(x, y) => Trans(b(x), b(y)),
        CApp(x, y) => CApp(b(x), b(y)),
        Fst(x) => Fst(b(x)),
        Snd(x) => Snd(b(x)),
        CInst(x, y) => CInst(b(x), b(y)),
        Sim(x, y) => Sim(b(x), b(y)),
    }
}

fn map_pattern(p: &crate::syntax::Pattern, f: impl Fn(&Node) -> Node) -> crate::syntax::Pattern {
    crate::syntax::Pattern { head: p.head.clone(), type_args: p.type_args.iter().map(f).collect() }
}

pub fn apply(s: &Subst, n: &Node) -> Node {
    if s.prefix.is_empty() && s.shift == 0 {
        return n.clone();
    }
    go(s, n, 0)
}

/// Add `k` to every free variable.
pub fn shift(n: &Node, k: usize) -> Node {
    if k == 0 {
        return n.clone();
    }
    go(&Subst::shift(k), n, 0)
}

/// Replace variable 0 of a binder body by `arg` and lower the rest.
pub fn instantiate(body: &Node, arg: &Node) -> Node {
    go(&Subst::single(arg.clone()), body, 0)
}

/// Instantiate nested binder bodies with `args` (outermost first).
pub fn instantiate_all(body: &Node, args: &[Node]) -> Node {
    // the last argument corresponds to variable 0
    let prefix = args.iter().rev().map(|a| Action::Replace(a.clone())).collect();
    apply(&Subst::new(prefix, 0), body)
}

/// Remove `k` binders that do not occur; `None` when one of them does.
pub fn unshift(n: &Node, k: usize) -> Option<Node> {
    if (0..k).any(|i| n.has_free_var(i)) {
        return None;
    }
    let prefix = (0..k).map(|_| Action::Replace(Node::Wild)).collect();
    Some(apply(&Subst::new(prefix, 0), n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_type_in, Node};

    fn ty(s: &str, names: &[&str]) -> Node {
        parse_type_in(s, names).unwrap()
    }

    #[test]
    fn identity() {
        let n = ty("forall a. a -> t", &["t"]);
        assert_eq!(apply(&Subst::id(), &n), n);
        assert_eq!(Subst::id().lift(), Subst::id());
    }

    #[test]
    fn tail_shift() {
        // [0 ↦ Bool] on `#0 -> #1`
        let n = Node::arrow(Node::Var(0), Node::Var(1));
        let s = Subst::single(Node::tcon("Bool"));
        assert_eq!(apply(&s, &n), Node::arrow(Node::tcon("Bool"), Node::Var(0)));
    }

    #[test]
    fn lift_replaces_with_shifted() {
        let s = Subst::single(Node::Var(3));
        assert_eq!(s.lift().at(1), Action::Rename(4));
        let t = Subst::single(Node::tapp(Node::tcon("Maybe"), Node::Var(0)));
        assert_eq!(t.lift().at(1), Action::Replace(Node::tapp(Node::tcon("Maybe"), Node::Var(1))));
        assert_eq!(t.lift().at(0), Action::Rename(0));
    }

    #[test]
    fn instantiate_basic() {
        assert_eq!(instantiate(&Node::Var(0), &Node::tcon("Bool")), Node::tcon("Bool"));
        let n = Node::arrow(Node::Var(0), Node::Var(1));
        assert_eq!(instantiate(&n, &Node::tcon("Int")), Node::arrow(Node::tcon("Int"), Node::Var(0)));
    }

    #[test]
    fn normalization_makes_equal() {
        assert_eq!(Subst::new(vec![Action::Rename(0), Action::Rename(1)], 2), Subst::id());
        assert_eq!(Subst::new(vec![Action::Replace(Node::Var(0))], 1), Subst::id());
    }

    #[test]
    fn compose_with_id() {
        let s = Subst::new(vec![Action::Replace(Node::tcon("Bool")), Action::Rename(5)], 3);
        assert_eq!(Subst::compose(&Subst::id(), &s), s);
        assert_eq!(Subst::compose(&s, &Subst::id()), s);
    }

    #[test]
    fn unshift_rejects_escape() {
        assert_eq!(unshift(&Node::Var(0), 1), None);
        assert_eq!(unshift(&Node::Var(2), 1), Some(Node::Var(1)));
    }
}
