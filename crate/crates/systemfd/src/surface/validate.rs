//! Syntactic preconditions of elaboration: annotation placement, explicit
//! type and dictionary abstraction, fundep indices, and the Paterson
//! conditions on instance contexts.

use std::collections::{HashMap, HashSet};

use super::*;
use crate::diag::Diagnostic;

fn count_vars(t: &Node, depth: usize, out: &mut HashMap<usize, usize>) {
    match t {
        Node::Var(i) if *i >= depth => *out.entry(i - depth).or_default() += 1,
        Node::TApp(f, a) => {
            count_vars(f, depth, out);
            count_vars(a, depth, out);
        }
        Node::EqTy(l, r, _) => {
            count_vars(l, depth, out);
            count_vars(r, depth, out);
        }
        Node::Forall(_, _, b) => count_vars(b, depth + 1, out),
        _ => {}
    }
}

/// Constructor and variable occurrences.
fn type_size(t: &Node) -> usize {
    let mut n = 0;
    t.visit(&mut |m| {
        if matches!(m, Node::Var(_) | Node::TCon(_)) {
            n += 1;
        }
    });
    n
}

/// Paterson conditions for one context predicate against the instance head.
pub fn paterson_ok(context: &Node, head: &[Node]) -> Result<(), String> {
    let mut hv = HashMap::new();
    let mut hsize = 0;
    for h in head {
        count_vars(h, 0, &mut hv);
        hsize += type_size(h);
    }
    let mut cv = HashMap::new();
    count_vars(context, 0, &mut cv);
    for (v, n) in &cv {
        if *n > hv.get(v).copied().unwrap_or(0) {
            return Err("a type variable occurs more often in the context than in the head".into());
        }
    }
    // The class name counts on both sides.
    if type_size(context) >= hsize + 1 {
        return Err("the context predicate is not smaller than the head".into());
    }
    Ok(())
}

struct Validator<'a> {
    classes: HashSet<&'a str>,
    diags: Vec<Diagnostic>,
    decl: String,
}

impl Validator<'_> {
    fn report(&mut self, code: &str, msg: impl Into<String>) {
        self.diags.push(Diagnostic::new(code, msg).in_decl(&self.decl));
    }

    fn term(&mut self, m: &Term) {
        match m {
            Term::App(..) | Term::TyApp(..) => {
                let (head, args) = m.spine();
                if !matches!(head, Term::Var(_) | Term::Global(_) | Term::Con(_) | Term::Hole(_) | Term::Annot(..)) {
                    self.report("annotation", "the head of an application must be a name or carry an annotation");
                }
                self.term(head);
                for a in args {
                    if let SArg::Term(a) = a {
                        self.term(a);
                    }
                }
            }
            Term::If(s, _, c, a) => {
                if !matches!(**s, Term::Annot(..)) {
                    self.report("annotation", "the scrutinee of `if` must carry an annotation");
                }
                if !matches!(**c, Term::Annot(..)) {
                    self.report("annotation", "the consequent of `if` must carry an annotation");
                }
                self.term(s);
                self.term(c);
                self.term(a);
            }
            Term::Lam(_, _, b) | Term::TyLam(_, _, b) | Term::Annot(b, _) => self.term(b),
            Term::Var(_) | Term::Global(_) | Term::Con(_) | Term::Hole(_) => {}
        }
    }

    /// Quantifiers and constraints of `ty` must be abstracted explicitly.
    fn expanded(&mut self, ty: &Node, body: &Term) {
        let mut t = ty;
        let mut m = body;
        loop {
            match t {
                Node::Forall(_, _, tb) => match m {
                    Term::TyLam(_, _, mb) => {
                        t = tb;
                        m = mb;
                    }
                    Term::Annot(inner, _) => m = inner,
                    _ => {
                        self.report("eta", "a polymorphic definition must begin with a type abstraction");
                        return;
                    }
                },
                _ => match t.as_arrow() {
                    Some((dom, cod)) if self.classes.contains(dom.type_head().unwrap_or("")) => match m {
                        Term::Lam(_, _, mb) => {
                            t = cod;
                            m = mb;
                        }
                        Term::Annot(inner, _) => m = inner,
                        _ => {
                            self.report("eta", "each class constraint must be abstracted by a lambda");
                            return;
                        }
                    },
                    _ => return,
                },
            }
        }
    }
}

/// Check elaboration preconditions. `known_classes` are classes declared
/// outside the program (usually none).
pub fn validate_surface(p: &SurfaceProgram) -> Result<(), Vec<Diagnostic>> {
    let mut v = Validator { classes: HashSet::new(), diags: vec![], decl: String::new() };
    let mut methods: HashMap<&str, (&ClassDecl, &Node)> = HashMap::new();
    for d in &p.decls {
        match d {
            SurfaceDecl::Data(dd) => v.decl = dd.name.clone(),
            SurfaceDecl::Class(c) => {
                v.decl = c.name.clone();
                v.classes.insert(&c.name);
                for f in &c.fundeps {
                    if f.to >= c.params.len() || f.from.iter().any(|&i| i >= c.params.len()) {
                        v.report("fundep", "fundep index out of range");
                    }
                    if f.from.contains(&f.to) {
                        v.report("fundep", "a parameter cannot determine itself");
                    }
                }
                for (m, t) in &c.methods {
                    methods.insert(m, (c, t));
                }
            }
            SurfaceDecl::Instance(i) => {
                v.decl = format!("instance {}", i.class);
                for c in &i.context {
                    if let Err(e) = paterson_ok(c, &i.head) {
                        v.report("paterson", e);
                    }
                }
                for (m, body) in &i.methods {
                    v.term(body);
                    if let Some((c, t)) = methods.get(m.as_str()) {
                        // Method types are over class parameters; only their
                        // own quantifiers and constraints matter here.
                        if c.name == i.class {
                            v.expanded(t, body);
                        }
                    }
                }
            }
            SurfaceDecl::Let(n, t, m) => {
                v.decl = n.clone();
                v.term(m);
                v.expanded(t, m);
            }
        }
    }
    if v.diags.is_empty() {
        Ok(())
    } else {
        Err(v.diags)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse_surface;

    fn codes(src: &str) -> Vec<String> {
        match validate_surface(&parse_surface(src).unwrap()) {
            Ok(()) => vec![],
            Err(ds) => ds.into_iter().map(|d| d.code).collect(),
        }
    }

    #[test]
    fn paterson() {
        let cls = "class F t u | t -> u, u -> t;";
        assert!(codes(&format!("{cls} instance F a b => F (Maybe a) (Maybe b);")).is_empty());
        assert_eq!(codes(&format!("{cls} instance F a b => F a b;")), ["paterson"]);
        assert_eq!(codes(&format!("{cls} instance F a a => F (Maybe a) b;")), ["paterson"]);
    }

    #[test]
    fn eta() {
        let cls = "class F t u | t -> u;";
        assert!(codes(&format!("{cls} let f :: forall t. F Int t => t -> t = /\\t. \\d. not;")).is_empty());
        assert_eq!(codes(&format!("{cls} let f :: forall t. F Int t => t -> t = not;")), ["eta"]);
        assert_eq!(codes(&format!("{cls} let f :: forall t. F Int t => t -> t = /\\t. not;")), ["eta"]);
    }

    #[test]
    fn annotations() {
        assert_eq!(codes("let x :: Bool = (\\y :: Bool. y) True;"), ["annotation"]);
        assert!(codes("let x :: Bool = ((\\y :: Bool. y) :: Bool -> Bool) True;").is_empty());
    }
}
