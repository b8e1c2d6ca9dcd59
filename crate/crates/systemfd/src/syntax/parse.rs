//! Recursive-descent reader for the core format.

use thiserror::Error;

use super::lexer::{Lexer, Tok, Token};
use super::{is_keyword, is_upper_name, Decl, Hint, Node, Pattern, Program, ARROW};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}{}", expected_suffix(.expected))]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
    pub expected: Vec<String>,
}

fn expected_suffix(e: &[String]) -> String {
    if e.is_empty() {
        String::new()
    } else {
        format!(" (expected one of: {})", e.join(", "))
    }
}

impl ParseError {
    pub fn at(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into(), expected: vec![] }
    }
}

/// Token cursor with the helpers both readers need.
pub struct TokenStream {
    toks: Vec<Token>,
    pos: usize,
}

impl TokenStream {
    pub fn new(text: &str) -> Result<Self, ParseError> {
        Ok(TokenStream { toks: Lexer::tokenize(text)?, pos: 0 })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    pub fn token(&self) -> &Token {
        &self.toks[self.pos]
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn at(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    pub fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn eat_kw(&mut self, kw: &str) -> bool {
        if self.at_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn error(&self, expected: &[&str]) -> ParseError {
        let t = self.token();
        ParseError {
            line: t.line,
            col: t.col,
            message: format!("unexpected {}", t.tok.describe()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn expect(&mut self, t: &Tok) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error(&[&format!("`{}`", t.text())]))
        }
    }

    pub fn expect_kw(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            Err(self.error(&[&format!("`{kw}`")]))
        }
    }

    /// `:` or `::`
    pub fn expect_colon(&mut self) -> Result<(), ParseError> {
        if self.eat(&Tok::Colon) || self.eat(&Tok::DColon) {
            Ok(())
        } else {
            Err(self.error(&["`:`"]))
        }
    }

    pub fn at_colon(&self) -> bool {
        matches!(self.peek(), Tok::Colon | Tok::DColon)
    }

    /// A non-keyword identifier.
    pub fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Ident(s) if !is_keyword(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    pub fn at_ident(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if !is_keyword(s))
    }

    /// Kinds: `*`, `κ -> κ`, `(κ)`.
    pub fn kind(&mut self) -> Result<Node, ParseError> {
        let lhs = if self.eat(&Tok::Star) {
            Node::Star
        } else if self.eat(&Tok::LParen) {
            let k = self.kind()?;
            self.expect(&Tok::RParen)?;
            k
        } else {
            return Err(self.error(&["`*`", "`(`"]));
        };
        if self.eat(&Tok::Arrow) {
            Ok(Node::karrow(lhs, self.kind()?))
        } else {
            Ok(lhs)
        }
    }

    pub fn at_end(&self) -> bool {
        self.at(&Tok::Eof)
    }
}

/// Core reader: resolves binder names to de Bruijn indices.
pub struct Parser {
    pub ts: TokenStream,
    scope: Vec<String>,
    /// Read `C => τ` as `C -> τ`.
    pub constraints: bool,
}

fn atom_start(t: &Tok) -> bool {
    match t {
        Tok::Ident(s) => !is_keyword(s) || matches!(s.as_str(), "refl" | "sim"),
        Tok::Int(0) | Tok::Free(_) | Tok::LParen => true,
        _ => false,
    }
}

impl Parser {
    pub fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { ts: TokenStream::new(text)?, scope: vec![], constraints: false })
    }

    /// Reader whose outermost scope already holds `names` (last = index 0).
    pub fn with_scope(text: &str, names: &[&str]) -> Result<Self, ParseError> {
        Ok(Parser { ts: TokenStream::new(text)?, scope: names.iter().map(|s| s.to_string()).collect(), constraints: false })
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.scope.iter().rev().position(|n| n == name)
    }

    pub fn push(&mut self, name: &str) {
        self.scope.push(name.to_string());
    }

    pub fn pop(&mut self) {
        self.scope.pop();
    }

    fn free(&mut self, n: usize) -> Node {
        Node::Var(n + self.scope.len())
    }

    // ---- types ----

    pub fn ty(&mut self) -> Result<Node, ParseError> {
        if self.ts.eat_kw("forall") {
            let binders = self.forall_binders()?;
            self.ts.expect(&Tok::Dot)?;
            for (n, _) in &binders {
                self.push(n);
            }
            let mut body = self.ty()?;
            for (n, k) in binders.into_iter().rev() {
                self.pop();
                body = Node::forall(Hint::new(n), k, body);
            }
            return Ok(body);
        }
        let lhs = self.ty_eq()?;
        if self.ts.eat(&Tok::Arrow) || (self.constraints && self.ts.eat(&Tok::FatArrow)) {
            let rhs = self.ty()?;
            Ok(Node::arrow(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn forall_binders(&mut self) -> Result<Vec<(String, Node)>, ParseError> {
        let mut out = vec![];
        loop {
            if self.ts.eat(&Tok::LParen) {
                let mut names = vec![self.ts.ident()?];
                while self.ts.at_ident() {
                    names.push(self.ts.ident()?);
                }
                self.ts.expect_colon()?;
                let k = self.ts.kind()?;
                self.ts.expect(&Tok::RParen)?;
                out.extend(names.into_iter().map(|n| (n, k.clone())));
            } else if self.ts.at_ident() {
                let n = self.ts.ident()?;
                let k = if self.ts.at_colon() {
                    self.ts.bump();
                    self.ts.kind()?
                } else {
                    Node::Star
                };
                out.push((n, k));
            } else {
                break;
            }
        }
        if out.is_empty() {
            return Err(self.ts.error(&["binder"]));
        }
        Ok(out)
    }

    fn ty_eq(&mut self) -> Result<Node, ParseError> {
        let lhs = self.ty_app()?;
        if self.ts.eat(&Tok::Tilde) {
            let k = if self.ts.eat(&Tok::LBracket) {
                let k = self.ts.kind()?;
                self.ts.expect(&Tok::RBracket)?;
                k
            } else {
                Node::Star
            };
            let rhs = self.ty_app()?;
            Ok(Node::eq_ty(lhs, rhs, k))
        } else {
            Ok(lhs)
        }
    }

    fn ty_atom_start(&self) -> bool {
        match self.ts.peek() {
            Tok::Ident(s) => !is_keyword(s),
            Tok::LParen | Tok::Underscore | Tok::Free(_) => true,
            _ => false,
        }
    }

    fn ty_app(&mut self) -> Result<Node, ParseError> {
        let mut t = self.ty_atom()?;
        while self.ty_atom_start() {
            let a = self.ty_atom()?;
            t = Node::tapp(t, a);
        }
        Ok(t)
    }

    fn ty_atom(&mut self) -> Result<Node, ParseError> {
        match self.ts.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.ts.bump();
                Ok(match self.lookup(&s) {
                    Some(i) => Node::Var(i),
                    None => Node::TCon(s),
                })
            }
            Tok::Free(n) => {
                self.ts.bump();
                Ok(self.free(n))
            }
            Tok::Underscore => {
                self.ts.bump();
                Ok(Node::Wild)
            }
            Tok::LParen => {
                self.ts.bump();
                if self.ts.at(&Tok::Arrow) && self.ts.peek_at(1) == &Tok::RParen {
                    self.ts.bump();
                    self.ts.bump();
                    return Ok(Node::TCon(ARROW.into()));
                }
                let t = self.ty()?;
                self.ts.expect(&Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.ts.error(&["type"])),
        }
    }

    // ---- terms ----

    pub fn term(&mut self) -> Result<Node, ParseError> {
        if self.ts.eat(&Tok::Backslash) {
            let x = self.ts.ident()?;
            self.ts.expect_colon()?;
            let t = self.ty()?;
            self.ts.expect(&Tok::Dot)?;
            self.push(&x);
            let body = self.term();
            self.pop();
            return Ok(Node::lam(Hint::new(x), t, body?));
        }
        if self.ts.eat(&Tok::TyLambda) {
            let (x, k) = self.kinded_binder()?;
            self.push(&x);
            let body = self.term();
            self.pop();
            return Ok(Node::ty_lam(Hint::new(x), k, body?));
        }
        if self.ts.eat_kw("forallc") {
            let (x, k) = self.kinded_binder()?;
            self.push(&x);
            let body = self.term();
            self.pop();
            return Ok(Node::univ(Hint::new(x), k, body?));
        }
        if self.ts.eat_kw("if") {
            let s = self.term_choice()?;
            self.ts.expect_kw("is")?;
            let p = self.pattern()?;
            self.ts.expect_kw("then")?;
            let m = self.term()?;
            self.ts.expect_kw("else")?;
            let n = self.term()?;
            return Ok(Node::if_(s, p, m, n));
        }
        if self.ts.eat_kw("guard") {
            let s = self.term_choice()?;
            self.ts.expect_kw("is")?;
            let p = self.pattern()?;
            self.ts.expect_kw("then")?;
            let m = self.term()?;
            return Ok(Node::guard(s, p, m));
        }
        self.term_choice()
    }

    fn kinded_binder(&mut self) -> Result<(String, Node), ParseError> {
        let x = self.ts.ident()?;
        let k = if self.ts.at_colon() {
            self.ts.bump();
            self.ts.kind()?
        } else {
            Node::Star
        };
        self.ts.expect(&Tok::Dot)?;
        Ok((x, k))
    }

    pub fn pattern(&mut self) -> Result<Pattern, ParseError> {
        let head = self.ts.ident()?;
        let mut args = vec![];
        while self.ts.eat(&Tok::LBracket) {
            args.push(self.ty()?);
            self.ts.expect(&Tok::RBracket)?;
        }
        Ok(Pattern::new(head, args))
    }

    /// A term at a position that may start with a binder.
    fn term_or_binder(&mut self, f: fn(&mut Self) -> Result<Node, ParseError>) -> Result<Node, ParseError> {
        if matches!(self.ts.peek(), Tok::Backslash | Tok::TyLambda)
            || self.ts.at_kw("forallc")
            || self.ts.at_kw("if")
            || self.ts.at_kw("guard")
        {
            self.term()
        } else {
            f(self)
        }
    }

    fn term_choice(&mut self) -> Result<Node, ParseError> {
        let l = self.term_cast()?;
        if self.ts.eat(&Tok::ChoiceOp) {
            let r = self.term_or_binder(Self::term_choice)?;
            Ok(Node::choice(l, r))
        } else {
            Ok(l)
        }
    }

    fn term_cast(&mut self) -> Result<Node, ParseError> {
        let mut m = self.term_trans()?;
        while self.ts.eat(&Tok::CastOp) {
            let e = self.term_trans()?;
            m = Node::cast(m, e);
        }
        Ok(m)
    }

    fn term_trans(&mut self) -> Result<Node, ParseError> {
        let mut m = self.term_capp()?;
        while self.ts.eat(&Tok::TransOp) {
            let e = self.term_capp()?;
            m = Node::trans(m, e);
        }
        Ok(m)
    }

    fn term_capp(&mut self) -> Result<Node, ParseError> {
        let mut m = self.term_spine()?;
        while self.ts.eat(&Tok::At) {
            let e = self.term_spine()?;
            m = Node::capp(m, e);
        }
        Ok(m)
    }

    fn term_spine(&mut self) -> Result<Node, ParseError> {
        let mut m = if self.ts.eat_kw("sym") {
            Node::sym(self.term_postfix()?)
        } else {
            self.term_postfix()?
        };
        loop {
            if self.ts.eat(&Tok::LBracket) {
                let t = self.ty()?;
                self.ts.expect(&Tok::RBracket)?;
                m = Node::ty_app(m, t);
            } else if self.ts.eat(&Tok::AtBracket) {
                let t = self.ty()?;
                self.ts.expect(&Tok::RBracket)?;
                m = Node::cinst(m, t);
            } else if atom_start(self.ts.peek()) {
                let a = self.term_postfix()?;
                m = Node::app(m, a);
            } else {
                return Ok(m);
            }
        }
    }

    fn term_postfix(&mut self) -> Result<Node, ParseError> {
        let mut m = self.term_atom()?;
        while let Tok::Proj(n) = self.ts.peek().clone() {
            self.ts.bump();
            m = if n == 1 { Node::fst(m) } else { Node::snd(m) };
        }
        Ok(m)
    }

    fn term_atom(&mut self) -> Result<Node, ParseError> {
        match self.ts.peek().clone() {
            Tok::Int(0) => {
                self.ts.bump();
                Ok(Node::Zero)
            }
            Tok::Free(n) => {
                self.ts.bump();
                Ok(self.free(n))
            }
            Tok::LParen => {
                self.ts.bump();
                let m = self.term()?;
                self.ts.expect(&Tok::RParen)?;
                Ok(m)
            }
            Tok::Ident(s) if s == "refl" => {
                self.ts.bump();
                self.ts.expect(&Tok::LParen)?;
                if self.ts.at(&Tok::Arrow) && self.ts.peek_at(1) == &Tok::RParen {
                    self.ts.bump();
                    self.ts.bump();
                    return Ok(Node::refl(Node::TCon(ARROW.into())));
                }
                let t = self.ty()?;
                self.ts.expect(&Tok::RParen)?;
                Ok(Node::refl(t))
            }
            Tok::Ident(s) if s == "sim" => {
                self.ts.bump();
                self.ts.expect(&Tok::LParen)?;
                let a = self.term()?;
                self.ts.expect(&Tok::Comma)?;
                let b = self.term()?;
                self.ts.expect(&Tok::RParen)?;
                Ok(Node::sim(a, b))
            }
            Tok::Ident(s) if !is_keyword(&s) => {
                self.ts.bump();
                Ok(match self.lookup(&s) {
                    Some(i) => Node::Var(i),
                    None if is_upper_name(&s) => Node::Con(s),
                    None => Node::Ref(s),
                })
            }
            _ => Err(self.ts.error(&["term"])),
        }
    }

    // ---- declarations ----

    pub fn decl(&mut self) -> Result<Decl, ParseError> {
        let d = if self.ts.eat_kw("data") {
            let n = self.ts.ident()?;
            self.ts.expect_colon()?;
            Decl::Data(n, self.ts.kind()?)
        } else if self.ts.eat_kw("ctor") {
            let n = self.ts.ident()?;
            self.ts.expect_colon()?;
            Decl::Ctor(n, self.ty()?)
        } else if self.ts.eat_kw("open") {
            let n = self.ts.ident()?;
            self.ts.expect_colon()?;
            if is_upper_name(&n) {
                Decl::OpenType(n, self.ts.kind()?)
            } else {
                Decl::Method(n, self.ty()?)
            }
        } else if self.ts.eat_kw("openctor") {
            let n = self.ts.ident()?;
            self.ts.expect_colon()?;
            Decl::OpenCtor(n, self.ty()?)
        } else if self.ts.eat_kw("method") {
            let n = self.ts.ident()?;
            self.ts.expect_colon()?;
            Decl::Method(n, self.ty()?)
        } else if self.ts.eat_kw("instance") {
            let n = self.ts.ident()?;
            if self.ts.at_colon() {
                self.ts.bump();
                Decl::OpenCtor(n, self.ty()?)
            } else {
                self.ts.expect(&Tok::Equals)?;
                Decl::Instance(n, self.term()?)
            }
        } else if self.ts.eat_kw("let") {
            let n = self.ts.ident()?;
            self.ts.expect_colon()?;
            let t = self.ty()?;
            self.ts.expect(&Tok::Equals)?;
            Decl::Let(n, t, self.term()?)
        } else {
            return Err(self.ts.error(&["`data`", "`ctor`", "`open`", "`openctor`", "`method`", "`instance`", "`let`"]));
        };
        self.ts.expect(&Tok::Semi)?;
        Ok(d)
    }

    pub fn program(&mut self) -> Result<Program, ParseError> {
        let mut decls = vec![];
        while !self.ts.at_end() {
            decls.push(self.decl()?);
        }
        Ok(Program::new(decls))
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if self.ts.at_end() {
            Ok(())
        } else {
            Err(self.ts.error(&["end of input"]))
        }
    }
}

pub fn parse_core(text: &str) -> Result<Program, ParseError> {
    Parser::new(text)?.program()
}

pub fn parse_term(text: &str) -> Result<Node, ParseError> {
    parse_term_in(text, &[])
}

/// Parse a term whose free variables `names` (innermost last) are bound
/// by an enclosing context.
pub fn parse_term_in(text: &str, names: &[&str]) -> Result<Node, ParseError> {
    let mut p = Parser::with_scope(text, names)?;
    let m = p.term()?;
    p.finish()?;
    Ok(m)
}

pub fn parse_type(text: &str) -> Result<Node, ParseError> {
    parse_type_in(text, &[])
}

pub fn parse_type_in(text: &str, names: &[&str]) -> Result<Node, ParseError> {
    let mut p = Parser::with_scope(text, names)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_kind(text: &str) -> Result<Node, ParseError> {
    let mut p = Parser::new(text)?;
    let k = p.ts.kind()?;
    p.finish()?;
    Ok(k)
}
