//! Unified abstract syntax for kinds, types, terms, coercions and patterns.
//!
//! All syntactic categories share one tree type, [`Node`]. Binder-introduced
//! variables are de Bruijn indices (`Var(0)` is the innermost binder), while
//! declared constants are referenced by name:
//!
//! - `TCon` for type constants (closed data types, open types, `->`),
//! - `Con` for term constructors (closed and open),
//! - `Ref` for open functions and `let`-defined names.
//!
//! In the concrete syntax constructors start with an upper-case letter and
//! open functions / lets with a lower-case letter, which is how the parser
//! tells `Con` and `Ref` apart.

mod lexer;
mod parse;
mod print;

use std::fmt;
use std::hash::{Hash, Hasher};

pub use lexer::{Lexer, Tok, Token};
pub use parse::{parse_core, parse_kind, parse_term, parse_term_in, parse_type, parse_type_in, ParseError, Parser, TokenStream};
pub use print::{collect_constants, print_core, print_decl, print_kind, print_term, print_type, Printer};

/// Name of the built-in function type constant.
pub const ARROW: &str = "->";

/// A binder's display name. Ignored by equality and hashing, so
/// alpha-equivalent trees compare equal.
#[derive(Clone, Debug, Default)]
pub struct Hint(pub Option<String>);

impl Hint {
    pub fn new(name: impl Into<String>) -> Self {
        Hint(Some(name.into()))
    }

    pub fn none() -> Self {
        Hint(None)
    }

    pub fn as_str(&self) -> Option<&str> {
        self.0.as_deref()
    }
}

impl PartialEq for Hint {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Hint {}

impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

/// One tree for every syntactic category of the core calculus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    // kinds
    Star,
    KArrow(Box<Node>, Box<Node>),

    // variables, shared by types and terms
    Var(usize),

    // types
    TCon(String),
    TApp(Box<Node>, Box<Node>),
    /// `lhs ~[kind] rhs`
    EqTy(Box<Node>, Box<Node>, Box<Node>),
    /// `forall t:kind. body`
    Forall(Hint, Box<Node>, Box<Node>),
    /// Unknown type; only produced by inference for terms containing `0`.
    Wild,

    // terms
    Con(String),
    Ref(String),
    Lam(Hint, Box<Node>, Box<Node>),
    App(Box<Node>, Box<Node>),
    TyLam(Hint, Box<Node>, Box<Node>),
    TyApp(Box<Node>, Box<Node>),
    Cast(Box<Node>, Box<Node>),
    If(Box<Node>, Pattern, Box<Node>, Box<Node>),
    Guard(Box<Node>, Pattern, Box<Node>),
    Zero,
    Choice(Box<Node>, Box<Node>),

    // coercions
    Refl(Box<Node>),
    Sym(Box<Node>),
    Trans(Box<Node>, Box<Node>),
    CApp(Box<Node>, Box<Node>),
    Fst(Box<Node>),
    Snd(Box<Node>),
    Univ(Hint, Box<Node>, Box<Node>),
    CInst(Box<Node>, Box<Node>),
    Sim(Box<Node>, Box<Node>),
}

/// `K [σ1] ... [σn]`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    pub head: String,
    pub type_args: Vec<Node>,
}

impl Pattern {
    pub fn new(head: impl Into<String>, type_args: Vec<Node>) -> Self {
        Pattern { head: head.into(), type_args }
    }
}

/// An argument in an application spine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arg<'a> {
    Term(&'a Node),
    Type(&'a Node),
}

impl<'a> Arg<'a> {
    pub fn node(self) -> &'a Node {
        match self {
            Arg::Term(n) | Arg::Type(n) => n,
        }
    }
}

/// Owned spine argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OwnedArg {
    Term(Node),
    Type(Node),
}

fn bx(n: Node) -> Box<Node> {
    Box::new(n)
}

impl Node {
    pub fn karrow(a: Node, b: Node) -> Node {
        Node::KArrow(bx(a), bx(b))
    }

    /// `κ1 -> ... -> κn -> *`
    pub fn kind_of_arity(params: &[Node]) -> Node {
        params
            .iter()
            .rev()
            .fold(Node::Star, |acc, k| Node::karrow(k.clone(), acc))
    }

    pub fn tcon(name: impl Into<String>) -> Node {
        Node::TCon(name.into())
    }

    pub fn con(name: impl Into<String>) -> Node {
        Node::Con(name.into())
    }

    pub fn reference(name: impl Into<String>) -> Node {
        Node::Ref(name.into())
    }

    pub fn tapp(f: Node, a: Node) -> Node {
        Node::TApp(bx(f), bx(a))
    }

    /// Type application spine `head a1 ... an`.
    pub fn tapps(head: Node, args: impl IntoIterator<Item = Node>) -> Node {
        args.into_iter().fold(head, Node::tapp)
    }

    pub fn arrow(a: Node, b: Node) -> Node {
        Node::tapp(Node::tapp(Node::TCon(ARROW.into()), a), b)
    }

    pub fn eq_ty(l: Node, r: Node, k: Node) -> Node {
        Node::EqTy(bx(l), bx(r), bx(k))
    }

    pub fn forall(hint: Hint, k: Node, body: Node) -> Node {
        Node::Forall(hint, bx(k), bx(body))
    }

    pub fn lam(hint: Hint, ty: Node, body: Node) -> Node {
        Node::Lam(hint, bx(ty), bx(body))
    }

    pub fn app(f: Node, a: Node) -> Node {
        Node::App(bx(f), bx(a))
    }

    pub fn apps(f: Node, args: impl IntoIterator<Item = Node>) -> Node {
        args.into_iter().fold(f, Node::app)
    }

    pub fn ty_lam(hint: Hint, k: Node, body: Node) -> Node {
        Node::TyLam(hint, bx(k), bx(body))
    }

    pub fn ty_app(m: Node, t: Node) -> Node {
        Node::TyApp(bx(m), bx(t))
    }

    pub fn ty_apps(m: Node, tys: impl IntoIterator<Item = Node>) -> Node {
        tys.into_iter().fold(m, Node::ty_app)
    }

    pub fn cast(m: Node, eta: Node) -> Node {
        Node::Cast(bx(m), bx(eta))
    }

    pub fn if_(scrut: Node, pat: Pattern, cons: Node, alt: Node) -> Node {
        Node::If(bx(scrut), pat, bx(cons), bx(alt))
    }

    pub fn guard(scrut: Node, pat: Pattern, cons: Node) -> Node {
        Node::Guard(bx(scrut), pat, bx(cons))
    }

    pub fn choice(l: Node, r: Node) -> Node {
        Node::Choice(bx(l), bx(r))
    }

    pub fn refl(t: Node) -> Node {
        Node::Refl(bx(t))
    }

    pub fn sym(e: Node) -> Node {
        Node::Sym(bx(e))
    }

    pub fn trans(a: Node, b: Node) -> Node {
        Node::Trans(bx(a), bx(b))
    }

    pub fn capp(a: Node, b: Node) -> Node {
        Node::CApp(bx(a), bx(b))
    }

    pub fn fst(e: Node) -> Node {
        Node::Fst(bx(e))
    }

    pub fn snd(e: Node) -> Node {
        Node::Snd(bx(e))
    }

    pub fn univ(hint: Hint, k: Node, e: Node) -> Node {
        Node::Univ(hint, bx(k), bx(e))
    }

    pub fn cinst(e: Node, t: Node) -> Node {
        Node::CInst(bx(e), bx(t))
    }

    pub fn sim(a: Node, b: Node) -> Node {
        Node::Sim(bx(a), bx(b))
    }

    /// Rebuild a spine from a head and arguments.
    pub fn apply_args(head: Node, args: impl IntoIterator<Item = OwnedArg>) -> Node {
        args.into_iter().fold(head, |acc, a| match a {
            OwnedArg::Term(n) => Node::app(acc, n),
            OwnedArg::Type(t) => Node::ty_app(acc, t),
        })
    }

    /// Decompose a term application spine into head and arguments (both
    /// term and type applications).
    pub fn spine(&self) -> (&Node, Vec<Arg<'_>>) {
        let mut args = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Node::App(f, a) => {
                    args.push(Arg::Term(a));
                    cur = f;
                }
                Node::TyApp(f, t) => {
                    args.push(Arg::Type(t));
                    cur = f;
                }
                _ => break,
            }
        }
        args.reverse();
        (cur, args)
    }

    /// Decompose a type application `head a1 ... an`.
    pub fn type_spine(&self) -> (&Node, Vec<&Node>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Node::TApp(f, a) = cur {
            args.push(&**a);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    /// Name of the constant at the head of a type application spine.
    pub fn type_head(&self) -> Option<&str> {
        match self.type_spine().0 {
            Node::TCon(n) => Some(n),
            _ => None,
        }
    }

    /// `Some((a, b))` when the node is `a -> b`.
    pub fn as_arrow(&self) -> Option<(&Node, &Node)> {
        if let Node::TApp(f, b) = self {
            if let Node::TApp(arr, a) = &**f {
                if matches!(&**arr, Node::TCon(n) if n == ARROW) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_kind(&self) -> bool {
        match self {
            Node::Star => true,
            Node::KArrow(a, b) => a.is_kind() && b.is_kind(),
            _ => false,
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Pre-order traversal over every sub-node (including pattern type
    /// arguments).
    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a Node)) {
        f(self);
        match self {
            Node::Star
            | Node::Var(_)
            | Node::TCon(_)
            | Node::Wild
            | Node::Con(_)
            | Node::Ref(_)
            | Node::Zero => {}
            Node::Refl(a) | Node::Sym(a) | Node::Fst(a) | Node::Snd(a) => a.visit(f),
            Node::KArrow(a, b)
            | Node::TApp(a, b)
            | Node::App(a, b)
            | Node::TyApp(a, b)
            | Node::Cast(a, b)
            | Node::Choice(a, b)
            | Node::Trans(a, b)
            | Node::CApp(a, b)
            | Node::CInst(a, b)
            | Node::Sim(a, b)
            | Node::Forall(_, a, b)
            | Node::Lam(_, a, b)
            | Node::TyLam(_, a, b)
            | Node::Univ(_, a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Node::EqTy(a, b, c) => {
                a.visit(f);
                b.visit(f);
                c.visit(f);
            }
            Node::If(s, p, m, n) => {
                s.visit(f);
                p.type_args.iter().for_each(|t| t.visit(f));
                m.visit(f);
                n.visit(f);
            }
            Node::Guard(s, p, m) => {
                s.visit(f);
                p.type_args.iter().for_each(|t| t.visit(f));
                m.visit(f);
            }
        }
    }

    /// True when any sub-node satisfies `pred`.
    pub fn any(&self, pred: &mut dyn FnMut(&Node) -> bool) -> bool {
        let mut found = false;
        self.visit(&mut |n| {
            if !found && pred(n) {
                found = true;
            }
        });
        found
    }

    pub fn contains_zero(&self) -> bool {
        self.any(&mut |n| matches!(n, Node::Zero))
    }

    pub fn contains_wild(&self) -> bool {
        self.any(&mut |n| matches!(n, Node::Wild))
    }

    /// Does de Bruijn variable `index` (relative to this node) occur free?
    pub fn has_free_var(&self, index: usize) -> bool {
        fn go(n: &Node, idx: usize) -> bool {
            match n {
                Node::Var(i) => *i == idx,
                Node::Forall(_, k, b) | Node::Lam(_, k, b) | Node::TyLam(_, k, b) | Node::Univ(_, k, b) => {
                    go(k, idx) || go(b, idx + 1)
                }
                Node::Star | Node::TCon(_) | Node::Wild | Node::Con(_) | Node::Ref(_) | Node::Zero => false,
                Node::Refl(a) | Node::Sym(a) | Node::Fst(a) | Node::Snd(a) => go(a, idx),
                Node::KArrow(a, b)
                | Node::TApp(a, b)
                | Node::App(a, b)
                | Node::TyApp(a, b)
                | Node::Cast(a, b)
                | Node::Choice(a, b)
                | Node::Trans(a, b)
                | Node::CApp(a, b)
                | Node::CInst(a, b)
                | Node::Sim(a, b) => go(a, idx) || go(b, idx),
                Node::EqTy(a, b, c) => go(a, idx) || go(b, idx) || go(c, idx),
                Node::If(s, p, m, e) => {
                    go(s, idx) || p.type_args.iter().any(|t| go(t, idx)) || go(m, idx) || go(e, idx)
                }
                Node::Guard(s, p, m) => go(s, idx) || p.type_args.iter().any(|t| go(t, idx)) || go(m, idx),
            }
        }
        go(self, index)
    }

    /// Smallest number of enclosing binders needed to close this node.
    pub fn free_var_bound(&self) -> usize {
        fn go(n: &Node, depth: usize, acc: &mut usize) {
            match n {
                Node::Var(i) => {
                    if *i >= depth {
                        *acc = (*acc).max(i - depth + 1);
                    }
                }
                Node::Forall(_, k, b) | Node::Lam(_, k, b) | Node::TyLam(_, k, b) | Node::Univ(_, k, b) => {
                    go(k, depth, acc);
                    go(b, depth + 1, acc);
                }
                Node::Star | Node::TCon(_) | Node::Wild | Node::Con(_) | Node::Ref(_) | Node::Zero => {}
                Node::Refl(a) | Node::Sym(a) | Node::Fst(a) | Node::Snd(a) => go(a, depth, acc),
                Node::KArrow(a, b)
                | Node::TApp(a, b)
                | Node::App(a, b)
                | Node::TyApp(a, b)
                | Node::Cast(a, b)
                | Node::Choice(a, b)
                | Node::Trans(a, b)
                | Node::CApp(a, b)
                | Node::CInst(a, b)
                | Node::Sim(a, b) => {
                    go(a, depth, acc);
                    go(b, depth, acc);
                }
                Node::EqTy(a, b, c) => {
                    go(a, depth, acc);
                    go(b, depth, acc);
                    go(c, depth, acc);
                }
                Node::If(s, p, m, e) => {
                    go(s, depth, acc);
                    p.type_args.iter().for_each(|t| go(t, depth, acc));
                    go(m, depth, acc);
                    go(e, depth, acc);
                }
                Node::Guard(s, p, m) => {
                    go(s, depth, acc);
                    p.type_args.iter().for_each(|t| go(t, depth, acc));
                    go(m, depth, acc);
                }
            }
        }
        let mut acc = 0;
        go(self, 0, &mut acc);
        acc
    }
}

/// Structural equality under de Bruijn representation; the type-equality
/// test used throughout typing.
pub fn node_eq(a: &Node, b: &Node) -> bool {
    a == b
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Printer::for_node(self).node(self))
    }
}

/// Top-level declaration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Data(String, Node),
    Ctor(String, Node),
    OpenType(String, Node),
    OpenCtor(String, Node),
    Method(String, Node),
    Instance(String, Node),
    Let(String, Node, Node),
}

impl Decl {
    pub fn name(&self) -> &str {
        match self {
            Decl::Data(n, _)
            | Decl::Ctor(n, _)
            | Decl::OpenType(n, _)
            | Decl::OpenCtor(n, _)
            | Decl::Method(n, _)
            | Decl::Instance(n, _)
            | Decl::Let(n, _, _) => n,
        }
    }
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_decl(self))
    }
}

/// A core program: an ordered list of declarations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub decls: Vec<Decl>,
}

impl Program {
    pub fn new(decls: Vec<Decl>) -> Self {
        Program { decls }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_core(self))
    }
}

pub(crate) const KEYWORDS: &[&str] = &[
    "data", "ctor", "open", "openctor", "method", "instance", "let", "forall", "forallc", "if", "is",
    "then", "else", "guard", "sym", "refl", "sim", "in", "where", "class", "as",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// Constructors and type constants start upper-case; variables, open
/// functions and lets start lower-case.
pub fn is_upper_name(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}
