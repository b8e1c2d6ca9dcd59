//! Deterministic printer producing text the reader maps back to the same tree.

use std::collections::HashSet;

use super::{is_keyword, Decl, Node, Pattern, Program, ARROW};

/// Printer state: names of enclosing binders and names binders must avoid.
pub struct Printer {
    scope: Vec<String>,
    avoid: HashSet<String>,
}

fn valid_ident(s: &str) -> bool {
    let mut cs = s.chars();
    match cs.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        Some('_') if s.len() > 1 => {}
        _ => return false,
    }
    s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'') && !is_keyword(s)
}

/// Names of constants mentioned in `n`.
pub fn collect_constants(n: &Node, out: &mut HashSet<String>) {
    n.visit(&mut |m| match m {
        Node::TCon(s) | Node::Con(s) | Node::Ref(s) => {
            out.insert(s.clone());
        }
        Node::If(_, p, _, _) | Node::Guard(_, p, _) => {
            out.insert(p.head.clone());
        }
        _ => {}
    });
}

fn decl_nodes(d: &Decl) -> Vec<&Node> {
    match d {
        Decl::Data(_, k) | Decl::OpenType(_, k) => vec![k],
        Decl::Ctor(_, t) | Decl::OpenCtor(_, t) | Decl::Method(_, t) | Decl::Instance(_, t) => vec![t],
        Decl::Let(_, t, m) => vec![t, m],
    }
}

fn is_type_node(n: &Node) -> bool {
    matches!(n, Node::TCon(_) | Node::TApp(..) | Node::EqTy(..) | Node::Forall(..) | Node::Wild)
}

fn term_prec(n: &Node) -> u8 {
    match n {
        Node::Lam(..) | Node::TyLam(..) | Node::Univ(..) | Node::If(..) | Node::Guard(..) => 0,
        Node::Choice(..) => 1,
        Node::Cast(..) => 2,
        Node::Trans(..) => 3,
        Node::CApp(..) => 4,
        Node::App(..) | Node::TyApp(..) | Node::CInst(..) | Node::Sym(..) => 5,
        Node::Fst(..) | Node::Snd(..) => 6,
        _ if is_type_node(n) => 4,
        _ => 7,
    }
}

fn type_prec(n: &Node) -> u8 {
    match n {
        Node::Forall(..) => 0,
        Node::TApp(..) if n.as_arrow().is_some() => 1,
        Node::EqTy(..) => 2,
        Node::TApp(..) => 3,
        _ => 4,
    }
}

fn paren(s: String, need: bool) -> String {
    if need {
        format!("({s})")
    } else {
        s
    }
}

impl Printer {
    pub fn new() -> Self {
        Printer { scope: vec![], avoid: HashSet::new() }
    }

    pub fn for_node(n: &Node) -> Self {
        let mut p = Printer::new();
        collect_constants(n, &mut p.avoid);
        p
    }

    pub fn for_program(prog: &Program) -> Self {
        let mut p = Printer::new();
        for d in &prog.decls {
            p.avoid.insert(d.name().to_string());
            for n in decl_nodes(d) {
                collect_constants(n, &mut p.avoid);
            }
        }
        p
    }

    /// Printer whose outer scope is `names` (innermost last).
    pub fn with_scope(mut self, names: &[&str]) -> Self {
        self.scope = names.iter().map(|s| s.to_string()).collect();
        self
    }

    /// Extra names binders must not take.
    pub fn avoiding(mut self, names: impl IntoIterator<Item = String>) -> Self {
        self.avoid.extend(names);
        self
    }

    pub fn fresh(&self, hint: Option<&str>, default: &str) -> String {
        let base = match hint {
            Some(h) if valid_ident(h) => h.trim_end_matches(|c: char| c.is_ascii_digit()).to_string(),
            _ => default.to_string(),
        };
        let base = if base.is_empty() || !valid_ident(&base) { default.to_string() } else { base };
        let taken = |s: &str| self.scope.iter().any(|n| n == s) || self.avoid.contains(s) || is_keyword(s);
        if let Some(h) = hint.filter(|h| valid_ident(h)) {
            if !taken(h) {
                return h.to_string();
            }
        }
        if !taken(&base) {
            return base;
        }
        (1..).map(|i| format!("{base}{i}")).find(|s| !taken(s)).unwrap()
    }

    fn var(&self, i: usize) -> String {
        if i < self.scope.len() {
            self.scope[self.scope.len() - 1 - i].clone()
        } else {
            format!("#{}", i - self.scope.len())
        }
    }

    fn bind<R>(&mut self, name: &str, f: impl FnOnce(&mut Self) -> R) -> R {
        self.scope.push(name.to_string());
        let r = f(self);
        self.scope.pop();
        r
    }

    pub fn kind(&self, k: &Node) -> String {
        self.kind_at(k, 0)
    }

    fn kind_at(&self, k: &Node, prec: u8) -> String {
        match k {
            Node::Star => "*".into(),
            Node::KArrow(a, b) => paren(format!("{} -> {}", self.kind_at(a, 1), self.kind_at(b, 0)), prec > 0),
            other => format!("<{}>", self.clone_scope().term(other)),
        }
    }

    fn clone_scope(&self) -> Printer {
        Printer { scope: self.scope.clone(), avoid: self.avoid.clone() }
    }

    pub fn ty(&mut self, t: &Node) -> String {
        self.ty_at(t, 0)
    }

    fn ty_at(&mut self, t: &Node, prec: u8) -> String {
        let mine = type_prec(t);
        let s = match t {
            Node::Var(i) => self.var(*i),
            Node::TCon(n) if n == ARROW => "(->)".into(),
            Node::TCon(n) => n.clone(),
            Node::Wild => "_".into(),
            Node::Forall(..) => {
                let mut parts = vec![];
                let mut cur = t;
                let mut pushed = 0;
                while let Node::Forall(h, k, body) = cur {
                    let name = self.fresh(h.as_str(), "t");
                    parts.push(if **k == Node::Star {
                        name.clone()
                    } else {
                        format!("({name} : {})", self.kind(k))
                    });
                    self.scope.push(name);
                    pushed += 1;
                    cur = body;
                }
                let body = self.ty_at(cur, 0);
                for _ in 0..pushed {
                    self.scope.pop();
                }
                format!("forall {}. {}", parts.join(" "), body)
            }
            Node::TApp(f, b) => {
                if let Some((a, b)) = t.as_arrow() {
                    format!("{} -> {}", self.ty_at(a, 2), self.ty_at(b, 1))
                } else {
                    format!("{} {}", self.ty_at(f, 3), self.ty_at(b, 4))
                }
            }
            Node::EqTy(l, r, k) => {
                let ks = if **k == Node::Star { String::new() } else { format!("[{}]", self.kind(k)) };
                format!("{} ~{} {}", self.ty_at(l, 3), ks, self.ty_at(r, 3))
            }
            Node::Star | Node::KArrow(..) => return self.kind_at(t, 1),
            other => return format!("({})", self.term(other)),
        };
        paren(s, mine < prec)
    }

    fn pattern(&mut self, p: &Pattern) -> String {
        let mut s = p.head.clone();
        for t in &p.type_args {
            s.push_str(&format!(" [{}]", self.ty(t)));
        }
        s
    }

    pub fn term(&mut self, m: &Node) -> String {
        self.term_at(m, 0)
    }

    fn term_at(&mut self, m: &Node, prec: u8) -> String {
        if is_type_node(m) {
            return paren(self.ty_at(m, 4), false);
        }
        let mine = term_prec(m);
        let s = match m {
            Node::Var(i) => self.var(*i),
            Node::Con(n) | Node::Ref(n) => n.clone(),
            Node::Zero => "0".into(),
            Node::Star | Node::KArrow(..) => self.kind_at(m, 1),
            Node::Lam(h, t, body) => {
                let name = self.fresh(h.as_str(), "x");
                let ts = self.ty_at(t, 1);
                let b = self.bind(&name, |p| p.term_at(body, 0));
                format!("\\{name}:{ts}. {b}")
            }
            Node::TyLam(h, k, body) => {
                let name = self.fresh(h.as_str(), "t");
                let ks = self.kind(k);
                let b = self.bind(&name, |p| p.term_at(body, 0));
                format!("/\\{name}:{ks}. {b}")
            }
            Node::Univ(h, k, body) => {
                let name = self.fresh(h.as_str(), "t");
                let ks = self.kind(k);
                let b = self.bind(&name, |p| p.term_at(body, 0));
                format!("forallc {name}:{ks}. {b}")
            }
            Node::If(s, p, a, b) => format!(
                "if {} is {} then {} else {}",
                self.term_at(s, 1),
                self.pattern(p),
                self.term_at(a, 0),
                self.term_at(b, 0)
            ),
            Node::Guard(s, p, a) => {
                format!("guard {} is {} then {}", self.term_at(s, 1), self.pattern(p), self.term_at(a, 0))
            }
            Node::Choice(a, b) => format!("{} <+> {}", self.term_at(a, 2), self.term_at(b, 1)),
            Node::Cast(a, b) => format!("{} |> {}", self.term_at(a, 2), self.term_at(b, 3)),
            Node::Trans(a, b) => format!("{} ;; {}", self.term_at(a, 3), self.term_at(b, 4)),
            Node::CApp(a, b) => format!("{} @ {}", self.term_at(a, 4), self.term_at(b, 5)),
            Node::App(f, a) => format!("{} {}", self.term_at(f, 5), self.term_at(a, 6)),
            Node::TyApp(f, t) => format!("{} [{}]", self.term_at(f, 5), self.ty(t)),
            Node::CInst(f, t) => format!("{} @[{}]", self.term_at(f, 5), self.ty(t)),
            Node::Sym(e) => format!("sym {}", self.term_at(e, 6)),
            Node::Fst(e) => format!("{}.1", self.term_at(e, 6)),
            Node::Snd(e) => format!("{}.2", self.term_at(e, 6)),
            Node::Refl(t) if matches!(&**t, Node::TCon(n) if n == ARROW) => "refl(->)".into(),
            Node::Refl(t) => format!("refl({})", self.ty(t)),
            Node::Sim(a, b) => format!("sim({}, {})", self.term(a), self.term(b)),
            Node::TCon(_) | Node::TApp(..) | Node::EqTy(..) | Node::Forall(..) | Node::Wild => unreachable!(),
        };
        paren(s, mine < prec)
    }

    /// Print any node according to its syntactic category.
    pub fn node(&mut self, n: &Node) -> String {
        match n {
            Node::Star | Node::KArrow(..) => self.kind(n),
            _ if is_type_node(n) => self.ty(n),
            _ => self.term(n),
        }
    }

    pub fn decl(&mut self, d: &Decl) -> String {
        match d {
            Decl::Data(n, k) => format!("data {n} : {};", self.kind(k)),
            Decl::Ctor(n, t) => format!("ctor {n} : {};", self.ty(t)),
            Decl::OpenType(n, k) => format!("open {n} : {};", self.kind(k)),
            Decl::OpenCtor(n, t) => format!("openctor {n} : {};", self.ty(t)),
            Decl::Method(n, t) => format!("method {n} : {};", self.ty(t)),
            Decl::Instance(n, m) => format!("instance {n} = {};", self.term(m)),
            Decl::Let(n, t, m) => format!("let {n} : {} = {};", self.ty(t), self.term(m)),
        }
    }
}

impl Default for Printer {
    fn default() -> Self {
        Printer::new()
    }
}

pub fn print_core(p: &Program) -> String {
    let mut pr = Printer::for_program(p);
    let mut out = String::new();
    for d in &p.decls {
        out.push_str(&pr.decl(d));
        out.push('\n');
    }
    out
}

pub fn print_decl(d: &Decl) -> String {
    Printer::for_program(&Program::new(vec![d.clone()])).decl(d)
}

pub fn print_term(m: &Node) -> String {
    Printer::for_node(m).term(m)
}

pub fn print_type(t: &Node) -> String {
    Printer::for_node(t).ty(t)
}

pub fn print_kind(k: &Node) -> String {
    Printer::new().kind(k)
}
