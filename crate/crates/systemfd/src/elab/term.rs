//! Bidirectional elaboration of class-language terms into core terms.
//!
//! Holes become resolved dictionaries or synthesized coercions, annotations
//! disappear, and a cast is inserted wherever the inferred type differs
//! from the expected one.

use super::equality::Knowledge;
use super::resolve::{local_dicts, resolve};
use super::{ClassTable, Options};
use crate::diag::Diagnostic;
use crate::env::{Env, Local};
use crate::subst::{instantiate, instantiate_all, shift, unshift};
use crate::surface::{SArg, Term};
use crate::syntax::{Hint, Node};
use crate::typing::pattern_type;

type R<T> = Result<T, Diagnostic>;

/// The core scope being built, with the surface-visible binders.
pub struct Scope<'a> {
    pub env: Env,
    pub classes: &'a ClassTable,
    pub opts: &'a Options,
    /// Levels of the binders visible to surface terms, outermost first.
    pub svars: Vec<usize>,
    /// Levels of dictionaries not used for improvement.
    pub exclude: Vec<usize>,
}

impl<'a> Scope<'a> {
    pub fn new(env: &Env, classes: &'a ClassTable, opts: &'a Options) -> Scope<'a> {
        Scope { env: env.globals_only(), classes, opts, svars: vec![], exclude: vec![] }
    }

    pub fn depth(&self) -> usize {
        self.env.depth()
    }

    pub fn var(&self, level: usize) -> Node {
        Node::Var(self.depth() - 1 - level)
    }

    pub fn vars(&self, levels: &[usize]) -> Vec<Node> {
        levels.iter().map(|&l| self.var(l)).collect()
    }

    pub fn push_ty(&mut self, hint: &str, k: Node) -> usize {
        self.env.push_local(Local::TyVar(Hint::new(hint), k));
        self.depth() - 1
    }

    pub fn push_tm(&mut self, hint: &str, ty: Node) -> usize {
        self.env.push_local(Local::TmVar(Hint::new(hint), ty));
        self.depth() - 1
    }

    /// Pop `n` binders, abstracting `body` over them.
    pub fn wrap(&mut self, mut body: Node, n: usize) -> Node {
        for _ in 0..n {
            let lvl = self.depth() - 1;
            self.svars.retain(|&l| l != lvl);
            self.exclude.retain(|&l| l != lvl);
            body = match self.env.pop_local().expect("binder to wrap") {
                Local::TyVar(h, k) => Node::ty_lam(h, k, body),
                Local::TmVar(h, t) => Node::lam(h, t, body),
            };
        }
        body
    }

    /// A surface type in the current scope.
    pub fn to_core(&self, t: &Node) -> Node {
        instantiate_all(t, &self.vars(&self.svars))
    }

    pub fn knowledge(&self, improve: bool) -> Knowledge<'a> {
        let dicts = local_dicts(&self.env, self.classes, &self.exclude);
        Knowledge::new(&self.env, self.classes, self.opts, vec![], dicts, improve)
    }

    pub fn synth(&self, from: &Node, to: &Node) -> R<Node> {
        self.knowledge(true).prove(from, to).ok_or_else(|| {
            Diagnostic::new(
                "no-coercion",
                format!("cannot show `{}` equal to `{}`", self.show(from), self.show(to)),
            )
        })
    }

    pub fn show(&self, t: &Node) -> String {
        let names = self.env.local_names();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        crate::syntax::Printer::for_node(t).with_scope(&names).ty(t)
    }

    /// A term of type `goal`: a dictionary or a coercion.
    pub fn hole(&self, goal: &Node) -> R<Node> {
        match goal {
            Node::EqTy(l, r, _) => self.synth(l, r),
            _ => {
                let locals = local_dicts(&self.env, self.classes, &[]);
                resolve(&self.env, self.classes, self.opts, goal, &locals)
            }
        }
    }

    pub fn coerce(&self, m: Node, from: &Node, to: &Node) -> R<Node> {
        if from == to {
            return Ok(m);
        }
        let eta = self.synth(from, to)?;
        Ok(match eta {
            Node::Refl(_) => m,
            eta => Node::cast(m, eta),
        })
    }

    pub fn check(&mut self, s: &Term, expected: &Node) -> R<Node> {
        match s {
            Term::Lam(h, ann, body) => {
                let Some((dom, cod)) = expected.as_arrow() else { return self.infer_and_cast(s, expected) };
                let dom_ty = match ann {
                    Some(a) => self.to_core(a),
                    None => dom.clone(),
                };
                if dom_ty != *dom {
                    return self.infer_and_cast(s, expected);
                }
                let cod = shift(cod, 1);
                let lvl = self.push_tm(h.as_str().unwrap_or("x"), dom_ty);
                self.svars.push(lvl);
                let b = self.check(body, &cod);
                let b = b.inspect_err(|_| {
                    self.env.pop_local();
                    self.svars.pop();
                })?;
                Ok(self.wrap(b, 1))
            }
            Term::TyLam(h, k, body) => match expected {
                Node::Forall(_, k2, bt) if **k2 == *k => {
                    let lvl = self.push_ty(h.as_str().unwrap_or("t"), k.clone());
                    self.svars.push(lvl);
                    let b = self.check(body, bt).inspect_err(|_| {
                        self.env.pop_local();
                        self.svars.pop();
                    })?;
                    Ok(self.wrap(b, 1))
                }
                _ => self.infer_and_cast(s, expected),
            },
            Term::If(scrut, p, cons, alt) => {
                let (sm, sty) = self.infer(scrut)?;
                let pat = crate::syntax::Pattern::new(p.head.clone(), p.type_args.iter().map(|t| self.to_core(t)).collect());
                let (resid, args) = pattern_type(&self.env, &pat, &sty)?;
                let mut cty = shift(expected, resid.len());
                for a in args.iter().rev() {
                    cty = Node::arrow(a.clone(), cty);
                }
                for (h, k) in resid.iter().rev() {
                    cty = Node::forall(h.clone(), k.clone(), cty);
                }
                let cm = self.check(cons, &cty)?;
                let am = self.check(alt, expected)?;
                Ok(Node::if_(sm, pat, cm, am))
            }
            Term::Hole(t) => {
                let t = self.to_core(t);
                let m = self.hole(&t)?;
                self.coerce(m, &t, expected)
            }
            Term::Annot(m, t) => {
                let t = self.to_core(t);
                let cm = self.check(m, &t)?;
                self.coerce(cm, &t, expected)
            }
            _ => self.infer_and_cast(s, expected),
        }
    }

    fn infer_and_cast(&mut self, s: &Term, expected: &Node) -> R<Node> {
        let (m, t) = self.infer(s)?;
        self.coerce(m, &t, expected)
    }

    pub fn infer(&mut self, s: &Term) -> R<(Node, Node)> {
        match s {
            Term::Var(i) => {
                let lvl = *self
                    .svars
                    .get(self.svars.len().wrapping_sub(1 + i))
                    .ok_or_else(|| Diagnostic::new("unbound", format!("unbound variable #{i}")))?;
                let idx = self.depth() - 1 - lvl;
                match self.env.local(idx) {
                    Some(Local::TmVar(_, t)) => Ok((Node::Var(idx), t)),
                    _ => Err(Diagnostic::new("category", "type variable used as a term")),
                }
            }
            Term::Global(x) => match self.env.ref_type(x) {
                Some(t) => Ok((Node::reference(x.clone()), t.clone())),
                None => Err(Diagnostic::new("unbound", format!("unknown name `{x}`"))),
            },
            Term::Con(k) => match self.env.ctor(k) {
                Some((t, _)) => Ok((Node::con(k.clone()), t.clone())),
                None => Err(Diagnostic::new("unbound", format!("unknown constructor `{k}`"))),
            },
            Term::Annot(m, t) => {
                let t = self.to_core(t);
                Ok((self.check(m, &t)?, t))
            }
            Term::Hole(t) => {
                let t = self.to_core(t);
                Ok((self.hole(&t)?, t))
            }
            Term::Lam(h, Some(a), body) => {
                let dom = self.to_core(a);
                let lvl = self.push_tm(h.as_str().unwrap_or("x"), dom.clone());
                self.svars.push(lvl);
                let r = self.infer(body).inspect_err(|_| {
                    self.env.pop_local();
                    self.svars.pop();
                })?;
                let m = self.wrap(r.0, 1);
                let cod = unshift(&r.1, 1).ok_or_else(|| Diagnostic::new("escape", "result type mentions a term variable"))?;
                Ok((m, Node::arrow(dom, cod)))
            }
            Term::Lam(_, None, _) => Err(Diagnostic::new("annotation", "cannot infer the type of an unannotated lambda")),
            Term::TyLam(h, k, body) => {
                let lvl = self.push_ty(h.as_str().unwrap_or("t"), k.clone());
                self.svars.push(lvl);
                let r = self.infer(body).inspect_err(|_| {
                    self.env.pop_local();
                    self.svars.pop();
                })?;
                let m = self.wrap(r.0, 1);
                Ok((m, Node::forall(h.clone(), k.clone(), r.1)))
            }
            Term::If(_, _, _, alt) => {
                let (_, t) = self.infer(alt)?;
                Ok((self.check(s, &t)?, t))
            }
            Term::App(..) | Term::TyApp(..) => {
                let (head, args) = s.spine();
                let (mut m, mut ty) = self.infer(head)?;
                for a in args {
                    match a {
                        SArg::Type(t) => {
                            let t = self.to_core(t);
                            let Node::Forall(_, _, body) = &ty else {
                                return Err(Diagnostic::new(
                                    "not-polymorphic",
                                    format!("type application of a term of type `{}`", self.show(&ty)),
                                ));
                            };
                            ty = instantiate(body, &t);
                            m = Node::ty_app(m, t);
                        }
                        SArg::Term(a) => {
                            let Some((dom, cod)) = ty.as_arrow() else {
                                return Err(Diagnostic::new(
                                    "not-function",
                                    format!("application of a term of type `{}`", self.show(&ty)),
                                ));
                            };
                            let (dom, cod) = (dom.clone(), cod.clone());
                            let am = self.check(a, &dom)?;
                            m = Node::app(m, am);
                            ty = cod;
                        }
                    }
                }
                Ok((m, ty))
            }
        }
    }
}
