//! Printer for `.hsk` programs; its output reads back to the same tree.

use std::collections::HashSet;

use super::*;
use crate::syntax::{collect_constants, Printer};

struct SPrinter {
    scope: Vec<String>,
    avoid: HashSet<String>,
}

fn term_constants(m: &Term, out: &mut HashSet<String>) {
    m.visit(&mut |t| match t {
        Term::Global(s) | Term::Con(s) => {
            out.insert(s.clone());
        }
        Term::Lam(_, Some(ty), _) | Term::TyApp(_, ty) | Term::Hole(ty) | Term::Annot(_, ty) => {
            collect_constants(ty, out)
        }
        Term::If(_, p, _, _) => {
            out.insert(p.head.clone());
            for ty in &p.type_args {
                collect_constants(ty, out);
            }
        }
        _ => {}
    });
}

impl SPrinter {
    fn types(&self) -> Printer {
        let names: Vec<&str> = self.scope.iter().map(String::as_str).collect();
        Printer::new().with_scope(&names).avoiding(self.avoid.iter().cloned())
    }

    fn ty(&self, t: &Node) -> String {
        self.types().ty(t)
    }

    fn fresh(&self, hint: &Hint, default: &str) -> String {
        let names: Vec<&str> = self.scope.iter().map(String::as_str).collect();
        Printer::new().with_scope(&names).avoiding(self.avoid.iter().cloned()).fresh(hint.as_str(), default)
    }

    fn with<R>(&mut self, name: &str, f: impl FnOnce(&mut Self) -> R) -> R {
        self.scope.push(name.to_string());
        let r = f(self);
        self.scope.pop();
        r
    }

    /// Precedence: 0 binders and `if`, 1 application, 2 atoms.
    fn term(&mut self, m: &Term, prec: u8) -> String {
        let (s, mine) = match m {
            Term::Var(i) => (
                self.scope.get(self.scope.len().wrapping_sub(1 + i)).cloned().unwrap_or_else(|| format!("#{i}")),
                2,
            ),
            Term::Global(n) | Term::Con(n) => (n.clone(), 2),
            Term::Hole(t) => (format!("(_ :: {})", self.ty(t)), 2),
            Term::Annot(m, t) => {
                let inner = self.term(m, 1);
                (format!("({inner} :: {})", self.ty(t)), 2)
            }
            Term::Lam(h, t, b) => {
                let x = self.fresh(h, "x");
                let head = match t {
                    Some(t) => format!("\\{x} :: {}. ", self.ty(t)),
                    None => format!("\\{x}. "),
                };
                let body = self.with(&x, |p| p.term(b, 0));
                (head + &body, 0)
            }
            Term::TyLam(h, k, b) => {
                let x = self.fresh(h, "t");
                let head = if *k == Node::Star {
                    format!("/\\{x}. ")
                } else {
                    format!("/\\({x} : {}). ", crate::syntax::print_kind(k))
                };
                let body = self.with(&x, |p| p.term(b, 0));
                (head + &body, 0)
            }
            Term::App(f, a) => {
                let fs = self.term(f, 1);
                (format!("{fs} {}", self.term(a, 2)), 1)
            }
            Term::TyApp(f, t) => {
                let fs = self.term(f, 1);
                (format!("{fs} [{}]", self.ty(t)), 1)
            }
            Term::If(s, p, c, a) => {
                let mut pat = p.head.clone();
                for t in &p.type_args {
                    pat.push_str(&format!(" [{}]", self.ty(t)));
                }
                let ss = self.term(s, 1);
                let cs = self.term(c, 0);
                let als = self.term(a, 0);
                (format!("if {ss} is {pat} then {cs} else {als}"), 0)
            }
        };
        if mine < prec {
            format!("({s})")
        } else {
            s
        }
    }

    fn block(items: Vec<String>) -> String {
        if items.is_empty() {
            String::new()
        } else {
            format!(" where {{ {} }}", items.join("; "))
        }
    }

    fn context(&self, ctx: &[Node]) -> String {
        match ctx.len() {
            0 => String::new(),
            1 => format!("{} => ", self.ty(&ctx[0])),
            _ => format!("({}) => ", ctx.iter().map(|c| self.ty(c)).collect::<Vec<_>>().join(", ")),
        }
    }

    fn decl(&mut self, d: &SurfaceDecl) -> String {
        match d {
            SurfaceDecl::Data(dd) => {
                let ctors = dd.ctors.iter().map(|(k, t)| format!("{k} :: {}", self.ty(t))).collect();
                format!("data {} : {}{};", dd.name, crate::syntax::print_kind(&dd.kind), Self::block(ctors))
            }
            SurfaceDecl::Class(c) => {
                let saved = std::mem::take(&mut self.scope);
                self.scope = c.params.iter().map(|(n, _)| n.clone()).collect();
                let ctx = self.context(&c.supers);
                let params: Vec<String> = c
                    .params
                    .iter()
                    .map(|(n, k)| {
                        if *k == Node::Star {
                            n.clone()
                        } else {
                            format!("({n} : {})", crate::syntax::print_kind(k))
                        }
                    })
                    .collect();
                let mut s = format!("class {ctx}{}", c.name);
                for p in params {
                    s.push(' ');
                    s.push_str(&p);
                }
                if !c.fundeps.is_empty() {
                    let fds: Vec<String> = c
                        .fundeps
                        .iter()
                        .map(|f| {
                            let from: Vec<&str> = f.from.iter().map(|&i| c.params[i].0.as_str()).collect();
                            let mut s = format!("{} -> {}", from.join(" "), c.params[f.to].0);
                            if let Some(n) = &f.name {
                                s.push_str(&format!(" as {n}"));
                            }
                            s
                        })
                        .collect();
                    s.push_str(&format!(" | {}", fds.join(", ")));
                }
                let methods = c.methods.iter().map(|(m, t)| format!("{m} :: {}", self.ty(t))).collect();
                s.push_str(&Self::block(methods));
                s.push(';');
                self.scope = saved;
                s
            }
            SurfaceDecl::Instance(i) => {
                let saved = std::mem::take(&mut self.scope);
                self.scope = i.vars.clone();
                let mut s = "instance ".to_string();
                if let Some(n) = &i.name {
                    s.push_str(&format!("{n} :: "));
                }
                s.push_str(&self.context(&i.context));
                s.push_str(&i.class);
                let pr = self.types();
                let mut pr = pr;
                for h in &i.head {
                    s.push(' ');
                    let t = pr.ty(h);
                    let atomic = matches!(h, Node::Var(_) | Node::TCon(_));
                    s.push_str(&if atomic { t } else { format!("({t})") });
                }
                let methods = i.methods.iter().map(|(m, b)| format!("{m} = {}", self.term(b, 0))).collect();
                s.push_str(&Self::block(methods));
                s.push(';');
                self.scope = saved;
                s
            }
            SurfaceDecl::Let(n, t, m) => format!("let {n} :: {} = {};", self.ty(t), self.term(m, 0)),
        }
    }
}

fn program_constants(p: &SurfaceProgram) -> HashSet<String> {
    let mut out = HashSet::new();
    for d in &p.decls {
        match d {
            SurfaceDecl::Data(dd) => {
                out.insert(dd.name.clone());
                for (k, t) in &dd.ctors {
                    out.insert(k.clone());
                    collect_constants(t, &mut out);
                }
            }
            SurfaceDecl::Class(c) => {
                out.insert(c.name.clone());
                for (m, t) in &c.methods {
                    out.insert(m.clone());
                    collect_constants(t, &mut out);
                }
                for s in &c.supers {
                    collect_constants(s, &mut out);
                }
            }
            SurfaceDecl::Instance(i) => {
                for t in i.head.iter().chain(&i.context) {
                    collect_constants(t, &mut out);
                }
                for (_, b) in &i.methods {
                    term_constants(b, &mut out);
                }
            }
            SurfaceDecl::Let(n, t, m) => {
                out.insert(n.clone());
                collect_constants(t, &mut out);
                term_constants(m, &mut out);
            }
        }
    }
    out
}

pub fn print_surface(p: &SurfaceProgram) -> String {
    let mut pr = SPrinter { scope: vec![], avoid: program_constants(p) };
    let mut out = String::new();
    for d in &p.decls {
        out.push_str(&pr.decl(d));
        out.push('\n');
    }
    out
}

pub fn print_surface_term(m: &Term) -> String {
    let mut avoid = HashSet::new();
    term_constants(m, &mut avoid);
    SPrinter { scope: vec![], avoid }.term(m, 0)
}
