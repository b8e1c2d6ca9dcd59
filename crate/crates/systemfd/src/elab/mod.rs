//! Translation of the class language into core declarations.
//!
//! A class `C p̄` becomes an open type `C` with one open function per
//! method and per superclass, each taking the dictionary first. An instance
//! becomes an open constructor whose fields are equality premises
//! `head_i ~ p_i` followed by context dictionaries, plus one guarded
//! instance per method. A dependency `m̄ -> n` becomes a witness function
//! `C p̄ -> C p̄' -> p_n ~ v` with one instance per pair of constructors.

mod equality;
mod resolve;
mod term;

use std::collections::HashMap;

pub use equality::Knowledge;
pub use resolve::{local_dicts, match_type, resolve};
pub use term::Scope;

use crate::diag::Diagnostic;
use crate::env::Env;
use crate::subst::{instantiate_all, shift};
use crate::surface::{validate_surface, ClassDecl, Fundep, InstanceDecl, SurfaceDecl, SurfaceProgram, Term};
use crate::syntax::{Decl, Hint, Node, Pattern, Program};
use crate::typing::check_decl;

type R<T> = Result<T, Diagnostic>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Overlap {
    /// Several matching instances are an error.
    #[default]
    Reject,
    /// Take the most specific, then the first declared.
    First,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Absurd {
    /// Emit inconsistent witness instances with a diverging body.
    #[default]
    Diverge,
    /// Leave them out.
    Omit,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub overlap: Overlap,
    pub absurd: Absurd,
    pub synth_depth: usize,
    pub resolve_depth: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { overlap: Overlap::Reject, absurd: Absurd::Diverge, synth_depth: 64, resolve_depth: 16 }
    }
}

/// A dictionary term with its type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dict {
    pub term: Node,
    pub ty: Node,
    pub class: Option<String>,
}

impl Dict {
    pub fn args(&self) -> Vec<Node> {
        self.ty.type_spine().1.into_iter().cloned().collect()
    }

    pub fn shifted(&self, k: usize) -> Dict {
        Dict { term: shift(&self.term, k), ty: shift(&self.ty, k), class: self.class.clone() }
    }
}

#[derive(Clone, Debug)]
pub struct FundepInfo {
    pub name: String,
    pub dep: Fundep,
}

#[derive(Clone, Debug)]
pub struct InstanceInfo {
    pub ctor: String,
    /// Instance variables with kinds, outermost first.
    pub vars: Vec<(String, Node)>,
    /// Head and context over the instance variables.
    pub head: Vec<Node>,
    pub context: Vec<Node>,
}

#[derive(Clone, Debug)]
pub struct ClassInfo {
    pub decl: ClassDecl,
    /// Projection names, aligned with `decl.supers`.
    pub supers: Vec<String>,
    pub fundeps: Vec<FundepInfo>,
    pub instances: Vec<InstanceInfo>,
}

pub type ClassTable = HashMap<String, ClassInfo>;

fn lcfirst(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_lowercase().chain(c).collect(),
        None => String::new(),
    }
}

fn numbered(base: &str, n: usize, start: usize, total: usize) -> Vec<String> {
    if total == 1 {
        vec![base.to_string(); n]
    } else {
        (0..n).map(|i| format!("{base}{}", start + i + 1)).collect()
    }
}

/// Kinds of instance variables from their positions in the head.
fn infer_var_kinds(env: &Env, head: &[Node], kinds: &[Node], nvars: usize) -> Vec<Node> {
    fn expect(env: &Env, t: &Node, k: &Node, nvars: usize, out: &mut Vec<Option<Node>>) {
        match t {
            Node::Var(i) if *i < nvars => {
                let pos = nvars - 1 - i;
                out[pos].get_or_insert_with(|| k.clone());
            }
            Node::TApp(..) => {
                let (h, args) = t.type_spine();
                let mut hk = match h {
                    Node::TCon(c) => env.type_const(c).map(|(k, _)| k.clone()),
                    Node::Var(i) if *i < nvars => out[nvars - 1 - i].clone(),
                    _ => None,
                };
                let mut arg_kinds = vec![];
                for a in &args {
                    let dom = match &hk {
                        Some(Node::KArrow(d, r)) => {
                            let d = (**d).clone();
                            hk = Some((**r).clone());
                            d
                        }
                        _ => {
                            hk = None;
                            Node::Star
                        }
                    };
                    expect(env, a, &dom, nvars, out);
                    arg_kinds.push(dom);
                }
                if let Node::Var(i) = h {
                    if *i < nvars {
                        let whole = arg_kinds.into_iter().rev().fold(k.clone(), |acc, d| Node::karrow(d, acc));
                        out[nvars - 1 - i].get_or_insert(whole);
                    }
                }
            }
            _ => {}
        }
    }
    let mut out = vec![None; nvars];
    for (t, k) in head.iter().zip(kinds) {
        expect(env, t, k, nvars, &mut out);
    }
    out.into_iter().map(|k| k.unwrap_or(Node::Star)).collect()
}

struct Elaborator<'a> {
    env: Env,
    classes: ClassTable,
    opts: &'a Options,
    out: Vec<Decl>,
    absurd: HashMap<Node, String>,
    decl: String,
}

impl<'a> Elaborator<'a> {
    fn emit(&mut self, d: Decl) -> R<()> {
        self.env = check_decl(&self.env, &d).map_err(|e| {
            Diagnostic::new("elab-ill-typed", format!("generated declaration does not typecheck: {}", e.message))
                .in_decl(d.name())
        })?;
        self.out.push(d);
        Ok(())
    }

    fn err(&self, code: &str, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::new(code, msg).in_decl(&self.decl)
    }

    fn class_ty(name: &str, args: Vec<Node>) -> Node {
        Node::tapps(Node::tcon(name.to_string()), args)
    }

    fn foralls(binders: &[(String, Node)], body: Node) -> Node {
        binders.iter().rev().fold(body, |acc, (h, k)| Node::forall(Hint::new(h.clone()), k.clone(), acc))
    }

    fn class(&mut self, c: &ClassDecl) -> R<()> {
        if self.classes.contains_key(&c.name) || self.env.has_global(&c.name) {
            return Err(self.err("duplicate", format!("`{}` is already declared", c.name)));
        }
        self.emit(Decl::OpenType(c.name.clone(), c.kind()))?;
        let n = c.params.len();
        let me = Self::class_ty(&c.name, (0..n).map(|j| Node::Var(n - 1 - j)).collect());
        for (m, sigma) in &c.methods {
            self.emit(Decl::Method(m.clone(), Self::foralls(&c.params, Node::arrow(me.clone(), sigma.clone()))))?;
        }
        let mut supers = vec![];
        for s in &c.supers {
            let name = format!("{}{}", lcfirst(&c.name), s.type_head().unwrap_or("Super"));
            self.emit(Decl::Method(name.clone(), Self::foralls(&c.params, Node::arrow(me.clone(), s.clone()))))?;
            supers.push(name);
        }
        let mut fundeps = vec![];
        for (i, fd) in c.fundeps.iter().enumerate() {
            let name = fd.name.clone().unwrap_or_else(|| format!("fd{}{}", c.name, i + 1));
            let copies: Vec<usize> = (0..n).filter(|j| *j != fd.to && !fd.from.contains(j)).collect();
            let nc = copies.len();
            let total = n + 1 + nc;
            let mut binders = c.params.clone();
            binders.push(("v".into(), c.params[fd.to].1.clone()));
            binders.extend(copies.iter().map(|&j| c.params[j].clone()));
            let p = |j: usize| Node::Var(total - 1 - j);
            let first = Self::class_ty(&c.name, (0..n).map(p).collect());
            let second = Self::class_ty(
                &c.name,
                (0..n)
                    .map(|j| {
                        if j == fd.to {
                            Node::Var(nc)
                        } else if let Some(r) = copies.iter().position(|&x| x == j) {
                            Node::Var(nc - 1 - r)
                        } else {
                            p(j)
                        }
                    })
                    .collect(),
            );
            let goal = Node::eq_ty(p(fd.to), Node::Var(nc), c.params[fd.to].1.clone());
            let ty = Self::foralls(&binders, Node::arrow(first, Node::arrow(second, goal)));
            self.emit(Decl::Method(name.clone(), ty))?;
            fundeps.push(FundepInfo { name, dep: fd.clone() });
        }
        self.classes
            .insert(c.name.clone(), ClassInfo { decl: c.clone(), supers, fundeps, instances: vec![] });
        Ok(())
    }

    /// Push an instance's variables, premises and context dictionaries
    /// under a guard on a dictionary of type `C args`. Returns the levels of
    /// the instance variables and the number of binders pushed.
    fn open_instance(
        scope: &mut Scope,
        class: &ClassInfo,
        inst: &InstanceInfo,
        arg_levels: &[usize],
        h_names: &[String],
        e_names: &[String],
    ) -> (Vec<usize>, usize) {
        let vars: Vec<usize> = inst.vars.iter().map(|(n, k)| scope.push_ty(n, k.clone())).collect();
        for (i, h) in inst.head.iter().enumerate() {
            let vals = scope.vars(&vars);
            let ty = Node::eq_ty(instantiate_all(h, &vals), scope.var(arg_levels[i]), class.decl.params[i].1.clone());
            scope.push_tm(&h_names[i], ty);
        }
        for (j, c) in inst.context.iter().enumerate() {
            let vals = scope.vars(&vars);
            scope.push_tm(&e_names[j], instantiate_all(c, &vals));
        }
        (vars.clone(), vars.len() + inst.head.len() + inst.context.len())
    }

    fn instance(&mut self, i: &InstanceDecl) -> R<()> {
        let Some(class) = self.classes.get(&i.class).cloned() else {
            return Err(self.err("unknown-class", format!("no class `{}`", i.class)));
        };
        let n = class.decl.params.len();
        if i.head.len() != n {
            return Err(self.err("arity", format!("class `{}` takes {n} arguments", i.class)));
        }
        for (m, _) in &i.methods {
            if !class.decl.methods.iter().any(|(x, _)| x == m) {
                return Err(self.err("unknown-method", format!("`{m}` is not a method of `{}`", i.class)));
            }
        }
        let kinds: Vec<Node> = class.decl.params.iter().map(|(_, k)| k.clone()).collect();
        let var_kinds = infer_var_kinds(&self.env, &i.head, &kinds, i.vars.len());
        let ctor = i.name.clone().unwrap_or_else(|| format!("K_{}_{}", i.class, class.instances.len() + 1));
        let info = InstanceInfo {
            ctor: ctor.clone(),
            vars: i.vars.iter().cloned().zip(var_kinds).collect(),
            head: i.head.clone(),
            context: i.context.clone(),
        };

        // Constructor.
        let m = info.vars.len();
        let mut ty = Self::class_ty(&i.class, (0..n).map(|j| Node::Var(m + n - 1 - j)).collect());
        for c in i.context.iter().rev() {
            ty = Node::arrow(c.clone(), ty);
        }
        for (j, h) in i.head.iter().enumerate().rev() {
            ty = Node::arrow(Node::eq_ty(h.clone(), Node::Var(m + n - 1 - j), kinds[j].clone()), ty);
        }
        ty = Self::foralls(&info.vars, ty);
        ty = Self::foralls(&class.decl.params, ty);
        self.emit(Decl::OpenCtor(ctor.clone(), ty))?;
        self.classes.get_mut(&i.class).unwrap().instances.push(info.clone());
        let class = self.classes[&i.class].clone();

        let h_names = numbered("h", n, 0, n);
        let e_names = numbered("e", i.context.len(), 0, i.context.len());

        // Methods.
        for (mname, sigma) in &class.decl.methods {
            let Some((_, body)) = i.methods.iter().find(|(x, _)| x == mname) else {
                return Err(self.err("missing-method", format!("no definition of `{mname}`")));
            };
            let def = self.guarded(&class, &info, &h_names, &e_names, |scope, p_vals, head_vals| {
                let at_head = instantiate_all(sigma, head_vals);
                let m = scope.check(body, &at_head)?;
                scope.coerce(m, &at_head, &instantiate_all(sigma, p_vals))
            })?;
            self.emit(Decl::Instance(mname.clone(), def))?;
        }
        // Superclass projections.
        for (proj, sup) in class.supers.iter().zip(&class.decl.supers) {
            let def = self.guarded(&class, &info, &h_names, &e_names, |scope, p_vals, head_vals| {
                let at_head = instantiate_all(sup, head_vals);
                let m = scope.hole(&at_head)?;
                scope.coerce(m, &at_head, &instantiate_all(sup, p_vals))
            })?;
            self.emit(Decl::Instance(proj.clone(), def))?;
        }
        // Dependency witnesses against every instance, this one included.
        let me = class.instances.len() - 1;
        for fd in &class.fundeps {
            let mut pairs: Vec<(usize, usize)> = (0..=me).map(|j| (me, j)).collect();
            pairs.extend((0..me).map(|j| (j, me)));
            for (a, b) in pairs {
                if let Some(def) = self.witness(&class, fd, &class.instances[a], &class.instances[b])? {
                    self.emit(Decl::Instance(fd.name.clone(), def))?;
                }
            }
        }
        Ok(())
    }

    /// `/\p̄. \d. guard d is K [p̄] then /\b̄. \h̄ ē. body`
    fn guarded(
        &self,
        class: &ClassInfo,
        inst: &InstanceInfo,
        h_names: &[String],
        e_names: &[String],
        body: impl FnOnce(&mut Scope, &[Node], &[Node]) -> R<Node>,
    ) -> R<Node> {
        let mut scope = Scope::new(&self.env, &self.classes, self.opts);
        let p: Vec<usize> = class.decl.params.iter().map(|(n, k)| scope.push_ty(n, k.clone())).collect();
        let d = scope.push_tm("d", Self::class_ty(&class.decl.name, scope.vars(&p)));
        let pat = Pattern::new(inst.ctor.clone(), scope.vars(&p));
        let (vars, pushed) = Self::open_instance(&mut scope, class, inst, &p, h_names, e_names);
        scope.svars = vars.clone();
        let p_vals = scope.vars(&p);
        let head_vals: Vec<Node> = inst.head.iter().map(|h| instantiate_all(h, &scope.vars(&vars))).collect();
        let b = body(&mut scope, &p_vals, &head_vals).map_err(|e| e.in_decl(&self.decl))?;
        let cons = scope.wrap(b, pushed);
        let g = Node::guard(scope.var(d), pat, cons);
        Ok(scope.wrap(g, p.len() + 1))
    }

    /// One instance of a dependency witness for constructors `k1`, `k2`.
    fn witness(&mut self, class: &ClassInfo, fd: &FundepInfo, k1: &InstanceInfo, k2: &InstanceInfo) -> R<Option<Node>> {
        let params = &class.decl.params;
        let n = params.len();
        let to = fd.dep.to;
        let kind = params[to].1.clone();
        let classes = self.classes.clone();
        let mut scope = Scope::new(&self.env, &classes, self.opts);
        let p: Vec<usize> = params.iter().map(|(nm, k)| scope.push_ty(nm, k.clone())).collect();
        let v = scope.push_ty("v", kind.clone());
        let mut second = p.clone();
        second[to] = v;
        for (j, (nm, k)) in params.iter().enumerate() {
            if j != to && !fd.dep.from.contains(&j) {
                second[j] = scope.push_ty(nm, k.clone());
            }
        }
        let binders = scope.depth();
        let d1 = scope.push_tm("d1", Self::class_ty(&class.decl.name, scope.vars(&p)));
        let d2 = scope.push_tm("d2", Self::class_ty(&class.decl.name, scope.vars(&second)));
        scope.exclude = vec![d1, d2];

        let (c1, c2) = (k1.context.len(), k2.context.len());
        let e_all = numbered("e", c1 + c2, 0, c1 + c2);
        let pat1 = Pattern::new(k1.ctor.clone(), scope.vars(&p));
        let (_, pushed1) = Self::open_instance(&mut scope, class, k1, &p, &numbered("h", n, 0, n), &e_all[..c1]);
        let pat2 = Pattern::new(k2.ctor.clone(), scope.vars(&second));
        let (_, pushed2) = Self::open_instance(&mut scope, class, k2, &second, &numbered("k", n, 0, n), &e_all[c1..]);

        let lhs = scope.var(p[to]);
        let rhs = scope.var(v);
        let body = if scope.knowledge(false).inconsistency().is_some() {
            if self.opts.absurd == Absurd::Omit {
                return Ok(None);
            }
            let name = self.absurd_for(&kind)?;
            Node::ty_apps(Node::reference(name), [lhs, rhs])
        } else {
            match scope.knowledge(true).prove(&lhs, &rhs) {
                Some(eta) => eta,
                None => {
                    return Err(self.err(
                        "fundep-violation",
                        format!(
                            "instances {} and {} violate the dependency {}: cannot show `{}` equal to `{}`",
                            k1.ctor,
                            k2.ctor,
                            fd.name,
                            scope.show(&lhs),
                            scope.show(&rhs)
                        ),
                    ))
                }
            }
        };
        let inner = scope.wrap(body, pushed2);
        let g2 = Node::guard(scope.var(d2), pat2, inner);
        let outer = scope.wrap(g2, pushed1);
        let g1 = Node::guard(scope.var(d1), pat1, outer);
        Ok(Some(scope.wrap(g1, binders + 2)))
    }

    /// The diverging coercion at kind `k`, declared on first use.
    fn absurd_for(&mut self, k: &Node) -> R<String> {
        if let Some(n) = self.absurd.get(k) {
            return Ok(n.clone());
        }
        let name = if self.absurd.is_empty() { "absurdCo".to_string() } else { format!("absurdCo{}", self.absurd.len()) };
        let ty = Node::forall(
            Hint::new("a"),
            k.clone(),
            Node::forall(Hint::new("b"), k.clone(), Node::eq_ty(Node::Var(1), Node::Var(0), k.clone())),
        );
        let body = Node::ty_lam(
            Hint::new("a"),
            k.clone(),
            Node::ty_lam(
                Hint::new("b"),
                k.clone(),
                Node::ty_apps(Node::reference(name.clone()), [Node::Var(1), Node::Var(0)]),
            ),
        );
        self.emit(Decl::Method(name.clone(), ty))?;
        self.emit(Decl::Instance(name.clone(), body))?;
        self.absurd.insert(k.clone(), name.clone());
        Ok(name)
    }

    fn let_(&mut self, x: &str, sigma: &Node, body: &Term) -> R<()> {
        let mut scope = Scope::new(&self.env, &self.classes, self.opts);
        // Recursive references see the signature.
        let mut with_sig = self.env.clone();
        with_sig.push_global(crate::env::Entry::LetSig(x.to_string(), sigma.clone()));
        scope.env = with_sig.globals_only();
        let m = scope.check(body, sigma).map_err(|e| e.in_decl(x))?;
        self.emit(Decl::Let(x.to_string(), sigma.clone(), m))
    }

    fn decl(&mut self, d: &SurfaceDecl) -> R<()> {
        match d {
            SurfaceDecl::Data(dd) => {
                self.decl = dd.name.clone();
                self.emit(Decl::Data(dd.name.clone(), dd.kind.clone()))?;
                for (k, t) in &dd.ctors {
                    self.emit(Decl::Ctor(k.clone(), t.clone()))?;
                }
                Ok(())
            }
            SurfaceDecl::Class(c) => {
                self.decl = c.name.clone();
                self.class(c)
            }
            SurfaceDecl::Instance(i) => {
                self.decl = format!("instance {}", i.class);
                self.instance(i)
            }
            SurfaceDecl::Let(x, t, m) => {
                self.decl = x.clone();
                self.let_(x, t, m)
            }
        }
    }
}

/// Elaborate a class-language program against `env`. On success returns
/// the core program and the environment extended with it; on failure no
/// declarations are produced.
pub fn elaborate_program(p: &SurfaceProgram, env: &Env, opts: &Options) -> Result<(Program, Env), Vec<Diagnostic>> {
    validate_surface(p)?;
    let mut e = Elaborator {
        env: env.globals_only(),
        classes: HashMap::new(),
        opts,
        out: vec![],
        absurd: HashMap::new(),
        decl: String::new(),
    };
    for d in &p.decls {
        e.decl(d).map_err(|d| vec![d])?;
    }
    Ok((Program::new(e.out), e.env))
}

#[cfg(test)]
mod tests;
