//! Typing environments.
//!
//! Global declarations are name-indexed and kept in declaration order;
//! binder-introduced variables live in a local stack addressed by de Bruijn
//! index (`Var(0)` is the top of the stack). Globals are shared behind an
//! `Arc`, so cloning an environment to push binders is cheap.

use std::collections::HashMap;
use std::sync::Arc;

use crate::subst::shift;
use crate::syntax::{Hint, Node, ARROW};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Openness {
    Closed,
    Open,
}

/// A global scope entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    DataSig(String, Node),
    OpenSig(String, Node),
    CtorSig(String, Node, Openness),
    MethodSig(String, Node),
    InstanceDef(String, Node),
    /// The `x : σ` half of a `let`.
    LetSig(String, Node),
    LetDef(String, Node),
}

/// A binder-introduced entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Local {
    TyVar(Hint, Node),
    TmVar(Hint, Node),
}

#[derive(Clone, Debug, Default)]
pub struct Globals {
    entries: Vec<Entry>,
    types: HashMap<String, (Node, Openness)>,
    ctors: HashMap<String, (Node, Openness)>,
    methods: HashMap<String, Node>,
    lets: HashMap<String, (Node, Option<Node>)>,
    instances: HashMap<String, Vec<Node>>,
    /// Constructors per open/closed type constant, in declaration order.
    ctors_of: HashMap<String, Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct Env {
    globals: Arc<Globals>,
    locals: Vec<Local>,
}

impl Default for Env {
    fn default() -> Self {
        Env::new()
    }
}

impl Env {
    /// The empty environment, seeded with `(->) : * -> * -> *`.
    pub fn new() -> Env {
        let mut e = Env { globals: Arc::new(Globals::default()), locals: vec![] };
        e.push_global(Entry::DataSig(
            ARROW.into(),
            Node::karrow(Node::Star, Node::karrow(Node::Star, Node::Star)),
        ));
        e
    }

    pub fn entries(&self) -> &[Entry] {
        &self.globals.entries
    }

    pub fn locals(&self) -> &[Local] {
        &self.locals
    }

    /// Append a global entry without checking it.
    pub fn push_global(&mut self, e: Entry) {
        let g = Arc::make_mut(&mut self.globals);
        match &e {
            Entry::DataSig(n, k) => {
                g.types.insert(n.clone(), (k.clone(), Openness::Closed));
            }
            Entry::OpenSig(n, k) => {
                g.types.insert(n.clone(), (k.clone(), Openness::Open));
            }
            Entry::CtorSig(n, t, o) => {
                g.ctors.insert(n.clone(), (t.clone(), *o));
                if let Some(h) = codomain(t).type_head() {
                    g.ctors_of.entry(h.to_string()).or_default().push(n.clone());
                }
            }
            Entry::MethodSig(n, t) => {
                g.methods.insert(n.clone(), t.clone());
            }
            Entry::InstanceDef(n, m) => g.instances.entry(n.clone()).or_default().push(m.clone()),
            Entry::LetSig(n, t) => {
                g.lets.insert(n.clone(), (t.clone(), None));
            }
            Entry::LetDef(n, m) => {
                if let Some(slot) = g.lets.get_mut(n) {
                    slot.1 = Some(m.clone());
                }
            }
        }
        g.entries.push(e);
    }

    pub fn push_local(&mut self, l: Local) {
        self.locals.push(l);
    }

    pub fn pop_local(&mut self) -> Option<Local> {
        self.locals.pop()
    }

    pub fn with_local(&self, l: Local) -> Env {
        let mut e = self.clone();
        e.push_local(l);
        e
    }

    /// Drop all locals, keeping the declarations.
    pub fn globals_only(&self) -> Env {
        Env { globals: self.globals.clone(), locals: vec![] }
    }

    pub fn depth(&self) -> usize {
        self.locals.len()
    }

    /// Local `i` with its payload shifted into the current scope.
    pub fn local(&self, i: usize) -> Option<Local> {
        let l = self.locals.len().checked_sub(i + 1).map(|j| &self.locals[j])?;
        Some(match l {
            Local::TyVar(h, k) => Local::TyVar(h.clone(), k.clone()),
            Local::TmVar(h, t) => Local::TmVar(h.clone(), shift(t, i + 1)),
        })
    }

    pub fn local_names(&self) -> Vec<String> {
        self.locals
            .iter()
            .enumerate()
            .map(|(i, l)| match l {
                Local::TyVar(h, _) | Local::TmVar(h, _) => h.as_str().map(str::to_string).unwrap_or(format!("v{i}")),
            })
            .collect()
    }

    pub fn type_const(&self, name: &str) -> Option<(&Node, Openness)> {
        self.globals.types.get(name).map(|(k, o)| (k, *o))
    }

    pub fn ctor(&self, name: &str) -> Option<(&Node, Openness)> {
        self.globals.ctors.get(name).map(|(t, o)| (t, *o))
    }

    pub fn method(&self, name: &str) -> Option<&Node> {
        self.globals.methods.get(name)
    }

    pub fn let_type(&self, name: &str) -> Option<&Node> {
        self.globals.lets.get(name).map(|(t, _)| t)
    }

    pub fn let_body(&self, name: &str) -> Option<&Node> {
        self.globals.lets.get(name).and_then(|(_, b)| b.as_ref())
    }

    pub fn instances(&self, name: &str) -> &[Node] {
        self.globals.instances.get(name).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Constructors whose codomain head is `ty`, in declaration order.
    pub fn ctors_of(&self, ty: &str) -> &[String] {
        self.globals.ctors_of.get(ty).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_method(&self, name: &str) -> bool {
        self.globals.methods.contains_key(name)
    }

    pub fn is_let(&self, name: &str) -> bool {
        self.globals.lets.contains_key(name)
    }

    /// Type of a `Ref`: an open function or a let.
    pub fn ref_type(&self, name: &str) -> Option<&Node> {
        self.method(name).or_else(|| self.let_type(name))
    }

    pub fn method_names(&self) -> Vec<String> {
        self.entries()
            .iter()
            .filter_map(|e| match e {
                Entry::MethodSig(n, _) => Some(n.clone()),
                _ => None,
            })
            .collect()
    }

    /// Every declared global name, any namespace.
    pub fn has_global(&self, name: &str) -> bool {
        let g = &self.globals;
        g.types.contains_key(name) || g.ctors.contains_key(name) || g.methods.contains_key(name) || g.lets.contains_key(name)
    }

    /// λ-free: no term variable is bound by a binder.
    pub fn is_lambda_free(&self) -> bool {
        !self.locals.iter().any(|l| matches!(l, Local::TmVar(..)))
    }
}

/// Codomain after stripping leading quantifiers and arrows.
pub fn codomain(t: &Node) -> &Node {
    let mut cur = t;
    loop {
        match cur {
            Node::Forall(_, _, b) => cur = b,
            _ => match cur.as_arrow() {
                Some((_, b)) => cur = b,
                None => return cur,
            },
        }
    }
}

/// Split `∀t̄:κ̄. τ̄ → υ` into binder kinds, argument types and codomain.
/// Argument types and codomain live under all the binders.
pub fn telescope(t: &Node) -> (Vec<(Hint, Node)>, Vec<Node>, Node) {
    let mut binders = vec![];
    let mut cur = t;
    while let Node::Forall(h, k, b) = cur {
        binders.push((h.clone(), (**k).clone()));
        cur = b;
    }
    let mut args = vec![];
    while let Some((a, b)) = cur.as_arrow() {
        args.push(a.clone());
        cur = b;
    }
    (binders, args, cur.clone())
}
