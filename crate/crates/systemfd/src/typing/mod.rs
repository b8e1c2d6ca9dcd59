//! Kinding, typing and declaration checking.
//!
//! Inference works on *type patterns*: ordinary types that may contain
//! [`Node::Wild`] holes. A hole stands for "any type", which is what `0`
//! and anything built around it can be given. Holes are independent, so two
//! patterns can be combined with [`meet`], their most general common
//! instance. Zero-free terms always infer hole-free types.

use crate::diag::Diagnostic;
use crate::env::{codomain, telescope, Entry, Env, Local, Openness};
use crate::subst::{instantiate, unshift};
use crate::syntax::{is_upper_name, Decl, Hint, Node, Pattern, Printer, Program, ARROW};

/// Result of inference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeResult {
    Exactly(Node),
    /// Any type at all, e.g. for `0`.
    AnyType,
    /// A type with holes, e.g. `Bool -> _` for `\x:Bool. 0`.
    Partial(Node),
}

impl TypeResult {
    pub fn from_pattern(p: Node) -> TypeResult {
        if p == Node::Wild {
            TypeResult::AnyType
        } else if p.contains_wild() {
            TypeResult::Partial(p)
        } else {
            TypeResult::Exactly(p)
        }
    }

    pub fn pattern(&self) -> Node {
        match self {
            TypeResult::Exactly(t) | TypeResult::Partial(t) => t.clone(),
            TypeResult::AnyType => Node::Wild,
        }
    }

    pub fn exact(&self) -> Option<&Node> {
        match self {
            TypeResult::Exactly(t) => Some(t),
            _ => None,
        }
    }

    /// Does the type `t` belong to this result?
    pub fn admits(&self, t: &Node) -> bool {
        meet(&self.pattern(), t).is_some()
    }
}

/// Most general common instance of two patterns.
pub fn meet(a: &Node, b: &Node) -> Option<Node> {
    use Node::*;
    let m = |x: &Node, y: &Node| meet(x, y).map(Box::new);
    Some(match (a, b) {
        (Wild, x) | (x, Wild) => x.clone(),
        (Star, Star) => Star,
        (KArrow(a1, a2), KArrow(b1, b2)) => KArrow(m(a1, b1)?, m(a2, b2)?),
        (Var(i), Var(j)) if i == j => Var(*i),
        (TCon(x), TCon(y)) if x == y => TCon(x.clone()),
        (TApp(a1, a2), TApp(b1, b2)) => TApp(m(a1, b1)?, m(a2, b2)?),
        (EqTy(a1, a2, a3), EqTy(b1, b2, b3)) => EqTy(m(a1, b1)?, m(a2, b2)?, m(a3, b3)?),
        (Forall(h, a1, a2), Forall(_, b1, b2)) => Forall(h.clone(), m(a1, b1)?, m(a2, b2)?),
        _ => return None,
    })
}

fn wild() -> Node {
    Node::Wild
}

fn arrow_pat() -> Node {
    Node::arrow(wild(), wild())
}

fn forall_pat() -> Node {
    Node::forall(Hint::none(), wild(), wild())
}

fn eq_pat() -> Node {
    Node::eq_ty(wild(), wild(), wild())
}

fn tapp_pat() -> Node {
    Node::tapp(wild(), wild())
}

fn is_kind_node(n: &Node) -> bool {
    matches!(n, Node::Star | Node::KArrow(..))
}

/// True iff the spine head of `ty` is a closed data type constant.
pub fn is_data_head(env: &Env, ty: &Node) -> bool {
    matches!(ty.type_head().and_then(|h| env.type_const(h)), Some((_, Openness::Closed)))
}

/// True iff the spine head of `ty` is an open type constant.
pub fn is_open_head(env: &Env, ty: &Node) -> bool {
    matches!(ty.type_head().and_then(|h| env.type_const(h)), Some((_, Openness::Open)))
}

struct Checker {
    env: Env,
    path: Vec<&'static str>,
}

type R<T> = Result<T, Diagnostic>;

impl Checker {
    fn new(env: &Env) -> Self {
        Checker { env: env.clone(), path: vec![] }
    }

    fn show(&self, n: &Node) -> String {
        let names = self.env.local_names();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Printer::for_node(n).with_scope(&refs).node(n)
    }

    fn err(&self, code: &str, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::new(code, msg).with_path(self.path.iter().map(|s| s.to_string()).collect())
    }

    fn mismatch(&self, code: &str, msg: &str, expected: &Node, found: &Node) -> Diagnostic {
        Diagnostic::mismatch(code, msg, self.show(expected), self.show(found))
            .with_path(self.path.iter().map(|s| s.to_string()).collect())
    }

    fn at<T>(&mut self, label: &'static str, f: impl FnOnce(&mut Self) -> R<T>) -> R<T> {
        self.path.push(label);
        let r = f(self);
        if r.is_ok() {
            self.path.pop();
        }
        r
    }

    fn under<T>(&mut self, l: Local, f: impl FnOnce(&mut Self) -> R<T>) -> R<T> {
        self.env.push_local(l);
        let r = f(self);
        self.env.pop_local();
        r
    }

    fn meet_or(&self, a: &Node, b: &Node, code: &str, msg: &str) -> R<Node> {
        meet(a, b).ok_or_else(|| self.mismatch(code, msg, a, b))
    }

    // ---- kinds ----

    fn check_kind(&self, k: &Node) -> R<()> {
        if k.is_kind() {
            Ok(())
        } else {
            Err(self.err("not-a-kind", format!("`{}` is not a kind", self.show(k))))
        }
    }

    /// Kind of a type; holes are rejected unless `holes` is set, in which case
    /// unknown kinds come back as `Wild`.
    fn kind(&mut self, t: &Node, holes: bool) -> R<Node> {
        match t {
            Node::Wild if holes => Ok(Node::Wild),
            Node::Wild => Err(self.err("hole", "type holes are not allowed here")),
            Node::Var(i) => match self.env.local(*i) {
                Some(Local::TyVar(_, k)) => Ok(k),
                Some(Local::TmVar(..)) => Err(self.err("category", "term variable used as a type")),
                None => Err(self.err("unbound", format!("unbound type variable #{i}"))),
            },
            Node::TCon(n) => match self.env.type_const(n) {
                Some((k, _)) => Ok(k.clone()),
                None => Err(self.err("unbound", format!("unknown type constant `{n}`"))),
            },
            Node::TApp(f, a) => {
                let kf = self.at("tapp.fn", |c| c.kind(f, holes))?;
                let ka = self.at("tapp.arg", |c| c.kind(a, holes))?;
                match meet(&kf, &Node::karrow(wild(), wild())) {
                    Some(Node::KArrow(k1, k2)) => {
                        self.meet_or(&k1, &ka, "kind-mismatch", "argument kind does not match")?;
                        Ok(*k2)
                    }
                    _ => Err(self.mismatch("kind-mismatch", "type applied to too many arguments", &Node::karrow(wild(), wild()), &kf)),
                }
            }
            Node::EqTy(l, r, k) => {
                self.check_kind(k)?;
                let kl = self.at("eq.lhs", |c| c.kind(l, holes))?;
                let kr = self.at("eq.rhs", |c| c.kind(r, holes))?;
                self.meet_or(k, &kl, "kind-mismatch", "left side of equality has the wrong kind")?;
                self.meet_or(k, &kr, "kind-mismatch", "right side of equality has the wrong kind")?;
                Ok(Node::Star)
            }
            Node::Forall(h, k, body) => {
                self.check_kind(k)?;
                let kb = self.under(Local::TyVar(h.clone(), (**k).clone()), |c| c.at("forall.body", |c| c.kind(body, holes)))?;
                self.meet_or(&Node::Star, &kb, "kind-mismatch", "quantified type must have kind *")?;
                Ok(Node::Star)
            }
            other => Err(self.err("category", format!("`{}` is not a type", self.show(other)))),
        }
    }

    fn kind_of(&mut self, t: &Node) -> R<Node> {
        self.kind(t, false)
    }

    fn expect_star(&mut self, t: &Node) -> R<()> {
        let k = self.kind_of(t)?;
        if k == Node::Star {
            Ok(())
        } else {
            Err(self.mismatch("kind-mismatch", "expected a type of kind *", &Node::Star, &k))
        }
    }

    // ---- terms ----

    fn coercion(&mut self, e: &Node) -> R<(Node, Node, Node)> {
        let p = self.infer(e)?;
        match meet(&p, &eq_pat()) {
            Some(Node::EqTy(l, r, k)) => Ok((*l, *r, *k)),
            _ => Err(self.mismatch("not-coercion", "expected a coercion", &eq_pat(), &p)),
        }
    }

    fn infer(&mut self, m: &Node) -> R<Node> {
        use Node::*;
        match m {
            Var(i) => match self.env.local(*i) {
                Some(Local::TmVar(_, t)) => Ok(t),
                Some(Local::TyVar(..)) => Err(self.err("category", "type variable used as a term")),
                None => Err(self.err("unbound", format!("unbound variable #{i}"))),
            },
            Con(k) => match self.env.ctor(k) {
                Some((t, _)) => Ok(t.clone()),
                None => Err(self.err("unbound", format!("unknown constructor `{k}`"))),
            },
            Ref(x) => match self.env.ref_type(x) {
                Some(t) => Ok(t.clone()),
                None => Err(self.err("unbound", format!("unknown name `{x}`"))),
            },
            Zero => Ok(Wild),
            Lam(h, t, body) => {
                self.at("lam.type", |c| c.expect_star(t))?;
                let p = self.under(Local::TmVar(h.clone(), (**t).clone()), |c| c.at("lam.body", |c| c.infer(body)))?;
                let p = unshift(&p, 1).ok_or_else(|| self.err("escape", "result type mentions a term variable"))?;
                Ok(Node::arrow((**t).clone(), p))
            }
            App(f, a) => {
                let pf = self.at("app.fn", |c| c.infer(f))?;
                let pa = self.at("app.arg", |c| c.infer(a))?;
                match meet(&pf, &arrow_pat()) {
                    Some(fp) => {
                        let (dom, cod) = fp.as_arrow().expect("arrow pattern");
                        self.at("app.arg", |c| c.meet_or(dom, &pa, "type-mismatch", "argument type does not match"))?;
                        Ok(cod.clone())
                    }
                    None => Err(self.mismatch("not-function", "applied term is not a function", &arrow_pat(), &pf)),
                }
            }
            TyLam(h, k, body) => {
                self.check_kind(k)?;
                let p = self.under(Local::TyVar(h.clone(), (**k).clone()), |c| c.at("tylam.body", |c| c.infer(body)))?;
                Ok(Node::forall(h.clone(), (**k).clone(), p))
            }
            TyApp(f, t) => {
                let pf = self.at("tyapp.fn", |c| c.infer(f))?;
                let kt = self.at("tyapp.arg", |c| c.kind_of(t))?;
                match meet(&pf, &forall_pat()) {
                    Some(Forall(_, k, body)) => {
                        self.meet_or(&k, &kt, "kind-mismatch", "type argument has the wrong kind")?;
                        Ok(instantiate(&body, t))
                    }
                    _ => Err(self.mismatch("not-polymorphic", "type-applied term is not polymorphic", &forall_pat(), &pf)),
                }
            }
            Cast(t, e) => {
                let pm = self.at("cast.term", |c| c.infer(t))?;
                let (l, r, k) = self.at("cast.coercion", |c| c.coercion(e))?;
                self.meet_or(&Node::Star, &k, "cast-kind", "cast coercion must be at kind *")?;
                self.meet_or(&l, &pm, "type-mismatch", "coercion source does not match the cast term")?;
                Ok(r)
            }
            If(s, p, cons, alt) => {
                let ps = self.at("if.scrutinee", |c| c.infer(s))?;
                let (resid, args, cod) = self.at("if.pattern", |c| c.pattern_parts(p))?;
                if !is_data_head(&self.env, &cod) {
                    return Err(self.err("scrutinee-not-data", format!("`if` needs a closed data type, found `{}`", self.show(&cod))));
                }
                self.at("if.scrutinee", |c| c.meet_or(&cod, &ps, "type-mismatch", "scrutinee type does not match the pattern"))?;
                let pc = self.at("if.then", |c| c.infer(cons))?;
                let u = self.at("if.then", |c| c.consequent(&pc, &resid, &args))?;
                let pa = self.at("if.else", |c| c.infer(alt))?;
                self.at("if.else", |c| c.meet_or(&u, &pa, "type-mismatch", "branches have different types"))
            }
            Guard(s, p, cons) => {
                let ps = self.at("guard.scrutinee", |c| c.infer(s))?;
                let (resid, args, cod) = self.at("guard.pattern", |c| c.pattern_parts(p))?;
                if !is_open_head(&self.env, &cod) {
                    return Err(self.err("scrutinee-not-open", format!("`guard` needs an open type, found `{}`", self.show(&cod))));
                }
                self.at("guard.scrutinee", |c| c.meet_or(&cod, &ps, "type-mismatch", "scrutinee type does not match the pattern"))?;
                let pc = self.at("guard.then", |c| c.infer(cons))?;
                self.at("guard.then", |c| c.consequent(&pc, &resid, &args))
            }
            Choice(a, b) => {
                let pa = self.at("choice.left", |c| c.infer(a))?;
                let pb = self.at("choice.right", |c| c.infer(b))?;
                self.meet_or(&pa, &pb, "type-mismatch", "choice branches have different types")
            }
            Refl(t) => {
                let k = self.at("refl", |c| c.kind_of(t))?;
                Ok(Node::eq_ty((**t).clone(), (**t).clone(), k))
            }
            Sym(e) => {
                let (l, r, k) = self.at("sym", |c| c.coercion(e))?;
                Ok(Node::eq_ty(r, l, k))
            }
            Trans(a, b) => {
                let (l1, m1, k1) = self.at("trans.left", |c| c.coercion(a))?;
                let (m2, r2, k2) = self.at("trans.right", |c| c.coercion(b))?;
                self.meet_or(&m1, &m2, "type-mismatch", "coercions do not compose")?;
                let k = self.meet_or(&k1, &k2, "kind-mismatch", "composed coercions have different kinds")?;
                Ok(Node::eq_ty(l1, r2, k))
            }
            CApp(a, b) => {
                let (t1, t2, ka) = self.at("capp.left", |c| c.coercion(a))?;
                let (u1, u2, kb) = self.at("capp.right", |c| c.coercion(b))?;
                match meet(&ka, &Node::karrow(wild(), wild())) {
                    Some(Node::KArrow(k1, k2)) => {
                        self.meet_or(&k1, &kb, "kind-mismatch", "coercion argument has the wrong kind")?;
                        Ok(Node::eq_ty(Node::tapp(t1, u1), Node::tapp(t2, u2), *k2))
                    }
                    _ => Err(self.mismatch("kind-mismatch", "left coercion of `@` must be at an arrow kind", &Node::karrow(wild(), wild()), &ka)),
                }
            }
            Fst(e) | Snd(e) => {
                let first = matches!(m, Fst(_));
                let (l, r, _) = self.at(if first { "fst" } else { "snd" }, |c| c.coercion(e))?;
                let part = |c: &Self, side: &Node| match meet(side, &tapp_pat()) {
                    Some(TApp(f, a)) => Ok(if first { *f } else { *a }),
                    _ => Err(c.mismatch("not-application", "projection needs type applications on both sides", &tapp_pat(), side)),
                };
                let pl = part(self, &l)?;
                let pr = part(self, &r)?;
                let kl = self.kind(&pl, true)?;
                let kr = self.kind(&pr, true)?;
                let k = self.meet_or(&kl, &kr, "kind-mismatch", "projected sides have different kinds")?;
                Ok(Node::eq_ty(pl, pr, k))
            }
            Univ(h, k, e) => {
                self.check_kind(k)?;
                let (l, r, kb) = self.under(Local::TyVar(h.clone(), (**k).clone()), |c| c.at("forallc", |c| c.coercion(e)))?;
                self.meet_or(&Node::Star, &kb, "kind-mismatch", "quantified coercion body must be at kind *")?;
                Ok(Node::eq_ty(Node::forall(h.clone(), (**k).clone(), l), Node::forall(h.clone(), (**k).clone(), r), Node::Star))
            }
            CInst(e, t) => {
                let (l, r, k) = self.at("cinst", |c| c.coercion(e))?;
                let kt = self.at("cinst.type", |c| c.kind_of(t))?;
                let inst = |c: &Self, side: &Node| match meet(side, &forall_pat()) {
                    Some(Forall(_, ks, body)) => {
                        c.meet_or(&ks, &kt, "kind-mismatch", "instantiating type has the wrong kind")?;
                        Ok(instantiate(&body, t))
                    }
                    _ => Err(c.mismatch("not-polymorphic", "`@[]` needs quantified types on both sides", &forall_pat(), side)),
                };
                let l2 = inst(self, &l)?;
                let r2 = inst(self, &r)?;
                Ok(Node::eq_ty(l2, r2, k))
            }
            Sim(a, b) => {
                let (t1, t2, ka) = self.at("sim.left", |c| c.coercion(a))?;
                let (u1, u2, kb) = self.at("sim.right", |c| c.coercion(b))?;
                let k = self.meet_or(&ka, &kb, "kind-mismatch", "`sim` coercions must share a kind")?;
                Ok(Node::eq_ty(Node::eq_ty(t1, u1, k.clone()), Node::eq_ty(t2, u2, k), Node::Star))
            }
            other if is_kind_node(other) => Err(self.err("category", "a kind is not a term")),
            other => Err(self.err("category", format!("`{}` is a type, not a term", self.show(other)))),
        }
    }

    /// Instantiate a pattern's constructor: residual binders, argument
    /// types (under the residual binders) and codomain (outside them).
    fn pattern_parts(&mut self, p: &Pattern) -> R<(Vec<(Hint, Node)>, Vec<Node>, Node)> {
        let sigma = match self.env.ctor(&p.head) {
            Some((t, _)) => t.clone(),
            None => return Err(self.err("unbound", format!("unknown constructor `{}` in pattern", p.head))),
        };
        let mut cur = sigma;
        for a in &p.type_args {
            let ka = self.kind_of(a)?;
            match cur {
                Node::Forall(_, k, body) => {
                    self.meet_or(&k, &ka, "kind-mismatch", "pattern type argument has the wrong kind")?;
                    cur = instantiate(&body, a);
                }
                _ => return Err(self.err("pattern", format!("too many type arguments in pattern for `{}`", p.head))),
            }
        }
        let (resid, args, cod) = telescope(&cur);
        let cod = unshift(&cod, resid.len())
            .ok_or_else(|| self.err("pattern", format!("pattern `{}` leaves the scrutinee type undetermined", p.head)))?;
        Ok((resid, args, cod))
    }

    /// Match a consequent's type against `∀resid. args → υ`, returning υ.
    fn consequent(&mut self, pc: &Node, resid: &[(Hint, Node)], args: &[Node]) -> R<Node> {
        let mut cur = pc.clone();
        for (_, k) in resid {
            match meet(&cur, &forall_pat()) {
                Some(Node::Forall(_, kk, body)) => {
                    self.meet_or(k, &kk, "kind-mismatch", "consequent binder has the wrong kind")?;
                    cur = *body;
                }
                _ => return Err(self.mismatch("pattern", "consequent must abstract the pattern's type variables", &forall_pat(), &cur)),
            }
        }
        for a in args {
            match meet(&cur, &arrow_pat()) {
                Some(fp) => {
                    let (dom, cod) = fp.as_arrow().expect("arrow pattern");
                    self.meet_or(a, dom, "type-mismatch", "consequent argument does not match the pattern field")?;
                    cur = cod.clone();
                }
                None => return Err(self.mismatch("pattern", "consequent must abstract the pattern's fields", &arrow_pat(), &cur)),
            }
        }
        unshift(&cur, resid.len()).ok_or_else(|| self.err("escape", "result type mentions a pattern-bound type variable"))
    }

    // ---- declarations ----

    fn fresh_name(&self, name: &str) -> R<()> {
        if self.env.has_global(name) || name == ARROW {
            Err(self.err("duplicate", format!("`{name}` is already declared")))
        } else {
            Ok(())
        }
    }

    fn naming(&self, name: &str, upper: bool) -> R<()> {
        if is_upper_name(name) == upper {
            Ok(())
        } else if upper {
            Err(self.err("naming", format!("`{name}` must start with an upper-case letter")))
        } else {
            Err(self.err("naming", format!("`{name}` must start with a lower-case letter")))
        }
    }

    fn ctor_decl(&mut self, name: &str, sigma: &Node, open: bool) -> R<()> {
        self.fresh_name(name)?;
        self.naming(name, true)?;
        self.expect_star(sigma)?;
        let cod = codomain(sigma);
        let ok = if open { is_open_head(&self.env, cod) } else { is_data_head(&self.env, cod) };
        if !ok {
            let what = if open { "an open type" } else { "a closed data type" };
            return Err(self.err("ctor-codomain", format!("constructor `{name}` must build {what}")));
        }
        Ok(())
    }

    fn decl(&mut self, d: &Decl) -> R<()> {
        match d {
            Decl::Data(n, k) | Decl::OpenType(n, k) => {
                self.fresh_name(n)?;
                self.naming(n, true)?;
                self.check_kind(k)?;
                let e = if matches!(d, Decl::Data(..)) { Entry::DataSig(n.clone(), k.clone()) } else { Entry::OpenSig(n.clone(), k.clone()) };
                self.env.push_global(e);
            }
            Decl::Ctor(n, t) => {
                self.ctor_decl(n, t, false)?;
                self.env.push_global(Entry::CtorSig(n.clone(), t.clone(), Openness::Closed));
            }
            Decl::OpenCtor(n, t) => {
                self.ctor_decl(n, t, true)?;
                self.env.push_global(Entry::CtorSig(n.clone(), t.clone(), Openness::Open));
            }
            Decl::Method(n, t) => {
                self.fresh_name(n)?;
                self.naming(n, false)?;
                self.expect_star(t)?;
                self.env.push_global(Entry::MethodSig(n.clone(), t.clone()));
            }
            Decl::Instance(n, m) => {
                let sigma = match self.env.method(n) {
                    Some(t) => t.clone(),
                    None => return Err(self.err("instance-without-method", format!("no open function `{n}` declared"))),
                };
                self.check(m, &sigma)?;
                self.env.push_global(Entry::InstanceDef(n.clone(), m.clone()));
            }
            Decl::Let(n, t, m) => {
                self.fresh_name(n)?;
                self.naming(n, false)?;
                self.expect_star(t)?;
                self.check(m, t)?;
                self.env.push_global(Entry::LetSig(n.clone(), t.clone()));
                self.env.push_global(Entry::LetDef(n.clone(), m.clone()));
            }
        }
        Ok(())
    }

    fn check(&mut self, m: &Node, expected: &Node) -> R<()> {
        let p = self.infer(m)?;
        if meet(&p, expected).is_some() {
            Ok(())
        } else {
            Err(self.mismatch("type-mismatch", "term does not have the expected type", expected, &p))
        }
    }
}

pub fn kind_of(env: &Env, ty: &Node) -> Result<Node, Diagnostic> {
    Checker::new(env).kind_of(ty)
}

pub fn check_kind(k: &Node) -> Result<(), Diagnostic> {
    Checker::new(&Env::new()).check_kind(k)
}

pub fn infer_term(env: &Env, m: &Node) -> Result<TypeResult, Diagnostic> {
    Checker::new(env).infer(m).map(TypeResult::from_pattern)
}

pub fn check_term(env: &Env, m: &Node, expected: &Node) -> Result<(), Diagnostic> {
    let mut c = Checker::new(env);
    c.expect_star(expected)?;
    c.check(m, expected)
}

/// `(lhs, rhs, kind)` of a coercion.
pub fn coerce_type(env: &Env, eta: &Node) -> Result<(Node, Node, Node), Diagnostic> {
    Checker::new(env).coercion(eta)
}

/// Residual binders and field types of a pattern matched against a
/// scrutinee of type `scrut_ty`. Field types live under the residual binders.
pub fn pattern_type(env: &Env, p: &Pattern, scrut_ty: &Node) -> Result<(Vec<(Hint, Node)>, Vec<Node>), Diagnostic> {
    let mut c = Checker::new(env);
    let (resid, args, cod) = c.pattern_parts(p)?;
    if &cod != scrut_ty {
        return Err(c.mismatch("type-mismatch", "pattern does not match the scrutinee type", scrut_ty, &cod));
    }
    Ok((resid, args))
}

/// Check one declaration and return the extended environment.
pub fn check_decl(env: &Env, d: &Decl) -> Result<Env, Diagnostic> {
    let mut c = Checker::new(&env.globals_only());
    c.decl(d).map_err(|e| e.in_decl(d.name()))?;
    Ok(c.env)
}

/// Check declarations in order; failing declarations are reported and
/// skipped so later ones are still checked.
pub fn check_program(env: &Env, p: &Program) -> (Env, Vec<Diagnostic>) {
    let mut env = env.clone();
    let mut diags = vec![];
    for d in &p.decls {
        match check_decl(&env, d) {
            Ok(e) => env = e,
            Err(e) => diags.push(e),
        }
    }
    (env, diags)
}

/// Re-validate every entry of an environment against its prefix.
pub fn check_env(env: &Env) -> Result<(), Diagnostic> {
    let mut c = Checker::new(&Env::new());
    for e in env.entries().iter().skip(1) {
        match e {
            Entry::DataSig(n, k) | Entry::OpenSig(n, k) => c.check_kind(k).map_err(|d| d.in_decl(n))?,
            Entry::CtorSig(n, t, o) => c.ctor_decl(n, t, *o == Openness::Open).map_err(|d| d.in_decl(n))?,
            Entry::MethodSig(n, t) | Entry::LetSig(n, t) => c.expect_star(t).map_err(|d| d.in_decl(n))?,
            Entry::InstanceDef(n, m) => {
                let sigma = c.env.method(n).cloned().ok_or_else(|| c.err("instance-without-method", format!("no open function `{n}`")))?;
                c.check(m, &sigma).map_err(|d| d.in_decl(n))?;
            }
            Entry::LetDef(n, m) => {
                let sigma = c.env.let_type(n).cloned().ok_or_else(|| c.err("let-without-type", format!("no type for `{n}`")))?;
                c.check(m, &sigma).map_err(|d| d.in_decl(n))?;
            }
        }
        c.env.push_global(e.clone());
    }
    for l in env.locals() {
        match l {
            Local::TyVar(_, k) => c.check_kind(k)?,
            Local::TmVar(_, t) => c.expect_star(t)?,
        }
        c.env.push_local(l.clone());
    }
    Ok(())
}

/// Which judgment accepts a node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Class {
    Kind,
    Type(Node),
    Term(TypeResult),
    Ill,
}

/// Classify a node; at most one of kind formation, kinding and typing may
/// accept it.
pub fn classify(env: &Env, n: &Node) -> Class {
    let is_kind = n.is_kind();
    let kinded = kind_of(env, n).ok();
    let typed = infer_term(env, n).ok();
    debug_assert!(
        [is_kind, kinded.is_some(), typed.is_some()].iter().filter(|b| **b).count() <= 1,
        "node accepted by more than one judgment"
    );
    match (is_kind, kinded, typed) {
        (true, _, _) => Class::Kind,
        (_, Some(k), _) => Class::Type(k),
        (_, _, Some(t)) => Class::Term(t),
        _ => Class::Ill,
    }
}

#[cfg(test)]
mod tests;
