//! The class language (`.hsk`): explicitly polymorphic terms with holes and
//! annotations, plus data, class, instance and let declarations.
//!
//! Types reuse the core [`Node`] tree. Variables in terms and types are de
//! Bruijn indices into the enclosing surface scope: class parameters for
//! method signatures, instance variables for instance heads, contexts and
//! method bodies, and term/type binders inside terms.

mod parse;
mod print;
mod validate;

pub use parse::{parse_surface, parse_surface_term};
pub use print::{print_surface, print_surface_term};
pub use validate::validate_surface;

use crate::syntax::{Hint, Node, Pattern};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(usize),
    /// A lower-case global: a let or a method.
    Global(String),
    Con(String),
    Lam(Hint, Option<Node>, Box<Term>),
    App(Box<Term>, Box<Term>),
    TyLam(Hint, Node, Box<Term>),
    TyApp(Box<Term>, Node),
    If(Box<Term>, Pattern, Box<Term>, Box<Term>),
    Hole(Node),
    Annot(Box<Term>, Node),
}

impl Term {
    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn ty_app(f: Term, t: Node) -> Term {
        Term::TyApp(Box::new(f), t)
    }

    pub fn annot(m: Term, t: Node) -> Term {
        Term::Annot(Box::new(m), t)
    }

    /// Head of an application spine and its arguments, outermost last.
    pub fn spine(&self) -> (&Term, Vec<SArg<'_>>) {
        let mut args = vec![];
        let mut cur = self;
        loop {
            match cur {
                Term::App(f, a) => {
                    args.push(SArg::Term(a));
                    cur = f;
                }
                Term::TyApp(f, t) => {
                    args.push(SArg::Type(t));
                    cur = f;
                }
                _ => break,
            }
        }
        args.reverse();
        (cur, args)
    }

    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a Term)) {
        f(self);
        match self {
            Term::Lam(_, _, b) | Term::TyLam(_, _, b) | Term::TyApp(b, _) | Term::Annot(b, _) => b.visit(f),
            Term::App(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Term::If(s, _, c, a) => {
                s.visit(f);
                c.visit(f);
                a.visit(f);
            }
            Term::Var(_) | Term::Global(_) | Term::Con(_) | Term::Hole(_) => {}
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum SArg<'a> {
    Term(&'a Term),
    Type(&'a Node),
}

/// `from -> to`, by parameter index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fundep {
    pub from: Vec<usize>,
    pub to: usize,
    /// Name of the generated witness function.
    pub name: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassDecl {
    pub name: String,
    pub params: Vec<(String, Node)>,
    /// Superclass predicates over the parameters.
    pub supers: Vec<Node>,
    pub fundeps: Vec<Fundep>,
    /// Method signatures over the parameters, without the class predicate.
    pub methods: Vec<(String, Node)>,
}

impl ClassDecl {
    pub fn kind(&self) -> Node {
        let ks: Vec<Node> = self.params.iter().map(|(_, k)| k.clone()).collect();
        Node::kind_of_arity(&ks)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceDecl {
    /// Constructor name, if given.
    pub name: Option<String>,
    /// Instance variables, outermost first. Kinds are inferred from the head.
    pub vars: Vec<String>,
    pub context: Vec<Node>,
    pub class: String,
    pub head: Vec<Node>,
    pub methods: Vec<(String, Term)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataDecl {
    pub name: String,
    pub kind: Node,
    pub ctors: Vec<(String, Node)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceDecl {
    Data(DataDecl),
    Class(ClassDecl),
    Instance(InstanceDecl),
    Let(String, Node, Term),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SurfaceProgram {
    pub decls: Vec<SurfaceDecl>,
}

/// Predicate class names of a type's leading constraint arrows, given the
/// known class names.
pub fn is_constraint(classes: &dyn Fn(&str) -> bool, t: &Node) -> bool {
    t.type_head().is_some_and(classes)
}
