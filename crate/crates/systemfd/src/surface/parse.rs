//! Reader for `.hsk` files.

use super::*;
use crate::syntax::{is_upper_name, ParseError, Parser, Tok};

fn p_err<T>(p: &Parser, msg: &str) -> Result<T, ParseError> {
    let t = p.ts.token();
    Err(ParseError::at(t.line, t.col, msg))
}

/// Replace free type constants named in `names` (outermost first) by
/// variables.
pub(crate) fn abstract_names(t: &Node, names: &[String]) -> Node {
    fn go(t: &Node, names: &[String], depth: usize) -> Node {
        match t {
            Node::TCon(n) => match names.iter().position(|m| m == n) {
                Some(j) => Node::Var(depth + names.len() - 1 - j),
                None => t.clone(),
            },
            Node::TApp(f, a) => Node::tapp(go(f, names, depth), go(a, names, depth)),
            Node::EqTy(l, r, k) => Node::eq_ty(go(l, names, depth), go(r, names, depth), (**k).clone()),
            Node::Forall(h, k, b) => Node::forall(h.clone(), (**k).clone(), go(b, names, depth + 1)),
            other => other.clone(),
        }
    }
    go(t, names, 0)
}

fn collect_lower(t: &Node, out: &mut Vec<String>) {
    t.visit(&mut |n| {
        if let Node::TCon(s) = n {
            if !is_upper_name(s) && s != crate::syntax::ARROW && !out.contains(s) {
                out.push(s.clone());
            }
        }
    });
}

struct SParser {
    p: Parser,
}

impl SParser {
    fn ty(&mut self) -> Result<Node, ParseError> {
        self.p.constraints = true;
        let t = self.p.ty();
        self.p.constraints = false;
        t
    }

    /// Does `=>` occur at bracket depth 0 before the end of this
    /// declaration's head?
    fn context_ahead(&self) -> bool {
        let mut depth = 0isize;
        let mut k = 0;
        loop {
            match self.p.ts.peek_at(k) {
                Tok::LParen | Tok::LBracket => depth += 1,
                Tok::RParen | Tok::RBracket => depth -= 1,
                Tok::FatArrow if depth == 0 => return true,
                Tok::Eof | Tok::Semi | Tok::Bar | Tok::LBrace => return false,
                Tok::Ident(s) if s == "where" => return false,
                _ => {}
            }
            k += 1;
        }
    }

    /// `C a =>` or `(C a, D b) =>`, or nothing.
    fn context(&mut self) -> Result<Vec<Node>, ParseError> {
        if !self.context_ahead() {
            return Ok(vec![]);
        }
        let ctx = if self.p.ts.at(&Tok::LParen) && self.paren_context_ahead() {
            self.p.ts.bump();
            let mut ctx = vec![self.p.ty()?];
            while self.p.ts.eat(&Tok::Comma) {
                ctx.push(self.p.ty()?);
            }
            self.p.ts.expect(&Tok::RParen)?;
            ctx
        } else {
            vec![self.p.ty()?]
        };
        self.p.ts.expect(&Tok::FatArrow)?;
        Ok(ctx)
    }

    /// At `(`: does the matching `)` precede `=>`?
    fn paren_context_ahead(&self) -> bool {
        let mut depth = 0usize;
        let mut k = 0;
        loop {
            match self.p.ts.peek_at(k) {
                Tok::LParen => depth += 1,
                Tok::RParen => {
                    depth -= 1;
                    if depth == 0 {
                        return self.p.ts.peek_at(k + 1) == &Tok::FatArrow;
                    }
                }
                Tok::Eof | Tok::Semi => return false,
                _ => {}
            }
            k += 1;
        }
    }

    fn decl(&mut self) -> Result<SurfaceDecl, ParseError> {
        let d = if self.p.ts.eat_kw("data") {
            self.data()?
        } else if self.p.ts.eat_kw("class") {
            self.class()?
        } else if self.p.ts.eat_kw("instance") {
            self.instance()?
        } else if self.p.ts.eat_kw("let") {
            let n = self.p.ts.ident()?;
            self.p.ts.expect_colon()?;
            let t = self.ty()?;
            self.p.ts.expect(&Tok::Equals)?;
            let m = self.term()?;
            SurfaceDecl::Let(n, t, m)
        } else {
            return Err(self.p.ts.error(&["`data`", "`class`", "`instance`", "`let`"]));
        };
        self.p.ts.expect(&Tok::Semi)?;
        Ok(d)
    }

    fn block<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
        let mut out = vec![];
        if !self.p.ts.eat_kw("where") {
            return Ok(out);
        }
        self.p.ts.expect(&Tok::LBrace)?;
        while !self.p.ts.at(&Tok::RBrace) {
            out.push(item(self)?);
            if !self.p.ts.eat(&Tok::Semi) {
                break;
            }
        }
        self.p.ts.expect(&Tok::RBrace)?;
        Ok(out)
    }

    fn data(&mut self) -> Result<SurfaceDecl, ParseError> {
        let name = self.p.ts.ident()?;
        self.p.ts.expect_colon()?;
        let kind = self.p.ts.kind()?;
        let ctors = self.block(|s| {
            let k = s.p.ts.ident()?;
            s.p.ts.expect_colon()?;
            Ok((k, s.ty()?))
        })?;
        Ok(SurfaceDecl::Data(DataDecl { name, kind, ctors }))
    }

    fn class(&mut self) -> Result<SurfaceDecl, ParseError> {
        // Parameters are unknown until the head is read, so the context is
        // read with free names that are bound afterwards.
        let ctx = self.context()?;
        let name = self.p.ts.ident()?;
        let mut params = vec![];
        loop {
            if self.p.ts.eat(&Tok::LParen) {
                let n = self.p.ts.ident()?;
                self.p.ts.expect_colon()?;
                let k = self.p.ts.kind()?;
                self.p.ts.expect(&Tok::RParen)?;
                params.push((n, k));
            } else if self.p.ts.at_ident() && !self.p.ts.at_kw("where") {
                params.push((self.p.ts.ident()?, Node::Star));
            } else {
                break;
            }
        }
        let names: Vec<String> = params.iter().map(|(n, _)| n.clone()).collect();
        let supers = ctx.iter().map(|t| abstract_names(t, &names)).collect();
        let mut fundeps = vec![];
        if self.p.ts.eat(&Tok::Bar) {
            loop {
                fundeps.push(self.fundep(&names)?);
                if !self.p.ts.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        for n in &names {
            self.p.push(n);
        }
        let methods = self.block(|s| {
            let m = s.p.ts.ident()?;
            s.p.ts.expect_colon()?;
            Ok((m, s.ty()?))
        });
        for _ in &names {
            self.p.pop();
        }
        Ok(SurfaceDecl::Class(ClassDecl { name, params, supers, fundeps, methods: methods? }))
    }

    fn fundep(&mut self, names: &[String]) -> Result<Fundep, ParseError> {
        let idx = |s: &mut Self, n: &str| match names.iter().position(|m| m == n) {
            Some(i) => Ok(i),
            None => p_err(&s.p, &format!("`{n}` is not a class parameter")),
        };
        let mut from = vec![];
        while !self.p.ts.at(&Tok::Arrow) {
            let n = self.p.ts.ident()?;
            from.push(idx(self, &n)?);
        }
        self.p.ts.expect(&Tok::Arrow)?;
        let n = self.p.ts.ident()?;
        let to = idx(self, &n)?;
        let name = if self.p.ts.eat_kw("as") { Some(self.p.ts.ident()?) } else { None };
        Ok(Fundep { from, to, name })
    }

    fn instance(&mut self) -> Result<SurfaceDecl, ParseError> {
        let name = if matches!(self.p.ts.peek(), Tok::Ident(_)) && self.p.ts.peek_at(1) == &Tok::DColon {
            let n = self.p.ts.ident()?;
            self.p.ts.bump();
            Some(n)
        } else {
            None
        };
        let ctx = self.context()?;
        let head = self.p.ty()?;
        let (h, args) = head.type_spine();
        let Node::TCon(class) = h else { return p_err(&self.p, "instance head must be a class") };
        let mut vars = vec![];
        for a in &args {
            collect_lower(a, &mut vars);
        }
        for c in &ctx {
            collect_lower(c, &mut vars);
        }
        let head = args.iter().map(|a| abstract_names(a, &vars)).collect();
        let context = ctx.iter().map(|c| abstract_names(c, &vars)).collect();
        for v in &vars {
            self.p.push(v);
        }
        let methods = self.block(|s| {
            let m = s.p.ts.ident()?;
            s.p.ts.expect(&Tok::Equals)?;
            Ok((m, s.term()?))
        });
        for _ in &vars {
            self.p.pop();
        }
        Ok(SurfaceDecl::Instance(InstanceDecl { name, vars, context, class: class.clone(), head, methods: methods? }))
    }

    // ---- terms ----

    fn term(&mut self) -> Result<Term, ParseError> {
        if self.p.ts.eat(&Tok::Backslash) {
            let mut binders = vec![];
            while !self.p.ts.at(&Tok::Dot) {
                if self.p.ts.eat(&Tok::LParen) {
                    let x = self.p.ts.ident()?;
                    self.p.ts.expect_colon()?;
                    let t = self.ty()?;
                    self.p.ts.expect(&Tok::RParen)?;
                    self.p.push(&x);
                    binders.push((x, Some(t)));
                    continue;
                }
                let x = self.p.ts.ident()?;
                let t = if self.p.ts.at_colon() {
                    self.p.ts.bump();
                    Some(self.ty()?)
                } else {
                    None
                };
                self.p.push(&x);
                binders.push((x, t));
            }
            if binders.is_empty() {
                return Err(self.p.ts.error(&["binder"]));
            }
            self.p.ts.expect(&Tok::Dot)?;
            let body = self.term();
            for _ in &binders {
                self.p.pop();
            }
            let mut body = body?;
            for (x, t) in binders.into_iter().rev() {
                body = Term::Lam(Hint::new(x), t, Box::new(body));
            }
            return Ok(body);
        }
        if self.p.ts.eat(&Tok::TyLambda) {
            let mut binders = vec![];
            while !self.p.ts.at(&Tok::Dot) {
                if self.p.ts.eat(&Tok::LParen) {
                    let x = self.p.ts.ident()?;
                    self.p.ts.expect_colon()?;
                    let k = self.p.ts.kind()?;
                    self.p.ts.expect(&Tok::RParen)?;
                    binders.push((x, k));
                    continue;
                }
                let x = self.p.ts.ident()?;
                let k = if self.p.ts.at_colon() {
                    self.p.ts.bump();
                    self.p.ts.kind()?
                } else {
                    Node::Star
                };
                binders.push((x, k));
            }
            if binders.is_empty() {
                return Err(self.p.ts.error(&["binder"]));
            }
            self.p.ts.expect(&Tok::Dot)?;
            for (x, _) in &binders {
                self.p.push(x);
            }
            let body = self.term();
            for _ in &binders {
                self.p.pop();
            }
            let mut body = body?;
            for (x, k) in binders.into_iter().rev() {
                body = Term::TyLam(Hint::new(x), k, Box::new(body));
            }
            return Ok(body);
        }
        if self.p.ts.eat_kw("if") {
            let s = self.annotated()?;
            self.p.ts.expect_kw("is")?;
            let pat = self.p.pattern()?;
            self.p.ts.expect_kw("then")?;
            let c = self.term()?;
            self.p.ts.expect_kw("else")?;
            let a = self.term()?;
            return Ok(Term::If(Box::new(s), pat, Box::new(c), Box::new(a)));
        }
        self.annotated()
    }

    /// An application, optionally followed by `:: σ`.
    fn annotated(&mut self) -> Result<Term, ParseError> {
        let m = self.app()?;
        if self.p.ts.eat(&Tok::DColon) {
            Ok(Term::annot(m, self.ty()?))
        } else {
            Ok(m)
        }
    }

    fn atom_start(&self) -> bool {
        match self.p.ts.peek() {
            Tok::Ident(s) => !crate::syntax::is_keyword(s),
            Tok::LParen | Tok::Underscore => true,
            _ => false,
        }
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        if self.p.ts.eat(&Tok::Underscore) {
            self.p.ts.expect(&Tok::DColon)?;
            return Ok(Term::Hole(self.ty()?));
        }
        let mut m = self.atom()?;
        loop {
            if self.p.ts.eat(&Tok::LBracket) {
                let t = self.ty()?;
                self.p.ts.expect(&Tok::RBracket)?;
                m = Term::ty_app(m, t);
            } else if self.atom_start() {
                let a = self.atom()?;
                m = Term::app(m, a);
            } else {
                return Ok(m);
            }
        }
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.p.ts.peek().clone() {
            Tok::LParen => {
                self.p.ts.bump();
                let m = self.term()?;
                self.p.ts.expect(&Tok::RParen)?;
                Ok(m)
            }
            Tok::Underscore => {
                self.p.ts.bump();
                p_err(&self.p, "a hole needs a type: `(_ :: σ)`")
            }
            Tok::Ident(s) if !crate::syntax::is_keyword(&s) => {
                self.p.ts.bump();
                Ok(match self.p.lookup(&s) {
                    Some(i) => Term::Var(i),
                    None if is_upper_name(&s) => Term::Con(s),
                    None => Term::Global(s),
                })
            }
            _ => Err(self.p.ts.error(&["term"])),
        }
    }
}

/// Read a `.hsk` program.
pub fn parse_surface(text: &str) -> Result<SurfaceProgram, ParseError> {
    let mut s = SParser { p: Parser::new(text)? };
    let mut decls = vec![];
    while !s.p.ts.at_end() {
        decls.push(s.decl()?);
    }
    Ok(SurfaceProgram { decls })
}

/// Read a single surface term with no free variables.
pub fn parse_surface_term(text: &str) -> Result<Term, ParseError> {
    let mut s = SParser { p: Parser::new(text)? };
    let m = s.term()?;
    s.p.finish()?;
    Ok(m)
}
