//! Tokenizer shared by the core (`.fd`) and surface (`.hsk`) readers.

use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(usize),
    /// `#n`, a free de Bruijn index
    Free(usize),
    /// `.1` / `.2`
    Proj(u8),
    Colon,
    DColon,
    Semi,
    Dot,
    Comma,
    Backslash,
    TyLambda,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Arrow,
    FatArrow,
    Tilde,
    CastOp,
    TransOp,
    At,
    AtBracket,
    ChoiceOp,
    Star,
    Underscore,
    Equals,
    Bar,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Free(n) => format!("`#{n}`"),
            Tok::Proj(n) => format!("`.{n}`"),
            Tok::Eof => "end of input".into(),
            t => format!("`{}`", t.text()),
        }
    }

    pub fn text(&self) -> &'static str {
        match self {
            Tok::Colon => ":",
            Tok::DColon => "::",
            Tok::Semi => ";",
            Tok::Dot => ".",
            Tok::Comma => ",",
            Tok::Backslash => "\\",
            Tok::TyLambda => "/\\",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Arrow => "->",
            Tok::FatArrow => "=>",
            Tok::Tilde => "~",
            Tok::CastOp => "|>",
            Tok::TransOp => ";;",
            Tok::At => "@",
            Tok::AtBracket => "@[",
            Tok::ChoiceOp => "<+>",
            Tok::Star => "*",
            Tok::Underscore => "_",
            Tok::Equals => "=",
            Tok::Bar => "|",
            _ => "",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub struct Lexer;

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

impl Lexer {
    pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
        let chars: Vec<char> = text.chars().collect();
        let mut out = Vec::new();
        let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
        while i < chars.len() {
            let c = chars[i];
            let peek = chars.get(i + 1).copied();
            if c == '\n' {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            if c.is_whitespace() {
                i += 1;
                col += 1;
                continue;
            }
            if c == '-' && peek == Some('-') {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            let start_col = col;
            let mut adv = 1;
            let tok = if c.is_ascii_alphabetic() || (c == '_' && peek.is_some_and(ident_char)) {
                let mut j = i;
                while j < chars.len() && ident_char(chars[j]) {
                    j += 1;
                }
                adv = j - i;
                Tok::Ident(chars[i..j].iter().collect())
            } else if c.is_ascii_digit() || (c == '#' && peek.is_some_and(|d| d.is_ascii_digit())) {
                let s = if c == '#' { i + 1 } else { i };
                let mut j = s;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                adv = j - i;
                let digits: String = chars[s..j].iter().collect();
                let n = digits.parse::<usize>().map_err(|_| ParseError::at(line, col, "number too large"))?;
                if c == '#' {
                    Tok::Free(n)
                } else {
                    Tok::Int(n)
                }
            } else {
                let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
                let three: String = chars[i..(i + 3).min(chars.len())].iter().collect();
                if three == "<+>" {
                    adv = 3;
                    Tok::ChoiceOp
                } else {
                    match two.as_str() {
                        "::" => {
                            adv = 2;
                            Tok::DColon
                        }
                        ";;" => {
                            adv = 2;
                            Tok::TransOp
                        }
                        "->" => {
                            adv = 2;
                            Tok::Arrow
                        }
                        "=>" => {
                            adv = 2;
                            Tok::FatArrow
                        }
                        "|>" => {
                            adv = 2;
                            Tok::CastOp
                        }
                        "/\\" => {
                            adv = 2;
                            Tok::TyLambda
                        }
                        "@[" => {
                            adv = 2;
                            Tok::AtBracket
                        }
                        ".1" | ".2" => {
                            adv = 2;
                            Tok::Proj(if two == ".1" { 1 } else { 2 })
                        }
                        _ => match c {
                            ':' => Tok::Colon,
                            ';' => Tok::Semi,
                            '.' => Tok::Dot,
                            ',' => Tok::Comma,
                            '\\' => Tok::Backslash,
                            '(' => Tok::LParen,
                            ')' => Tok::RParen,
                            '[' => Tok::LBracket,
                            ']' => Tok::RBracket,
                            '{' => Tok::LBrace,
                            '}' => Tok::RBrace,
                            '~' => Tok::Tilde,
                            '@' => Tok::At,
                            '*' => Tok::Star,
                            '_' => Tok::Underscore,
                            '=' => Tok::Equals,
                            '|' => Tok::Bar,
                            other => {
                                return Err(ParseError::at(line, col, format!("unexpected character `{other}`")))
                            }
                        },
                    }
                }
            };
            out.push(Token { tok, line, col: start_col });
            i += adv;
            col += adv;
        }
        out.push(Token { tok: Tok::Eof, line, col });
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        Lexer::tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn projections_and_operators() {
        assert_eq!(
            toks("(h;;sym k).2 @[Bool] <+> 0"),
            vec![
                Tok::LParen,
                Tok::Ident("h".into()),
                Tok::TransOp,
                Tok::Ident("sym".into()),
                Tok::Ident("k".into()),
                Tok::RParen,
                Tok::Proj(2),
                Tok::AtBracket,
                Tok::Ident("Bool".into()),
                Tok::RBracket,
                Tok::ChoiceOp,
                Tok::Int(0),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn comments_and_positions() {
        let ts = Lexer::tokenize("-- hi\n  data").unwrap();
        assert_eq!((ts[0].line, ts[0].col), (2, 3));
    }

    #[test]
    fn primes_and_underscores() {
        assert_eq!(toks("a'' d_1 _"), vec![
            Tok::Ident("a''".into()),
            Tok::Ident("d_1".into()),
            Tok::Underscore,
            Tok::Eof
        ]);
    }
}
