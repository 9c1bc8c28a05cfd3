//! Text front end for observable expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)*
//! atom   := 'Q' | 'P' | integer ('/' integer)? | '(' expr ')'
//! ```
//!
//! `*` keeps factor order. A `/` is only accepted inside a rational literal.

use std::fmt;

use semiclassical_core::Expr;
use semiclassical_core::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Zero-based character offset.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at column {}: {}", self.position + 1, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Q,
    P,
    Int(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Q => "`Q`".into(),
        Tok::P => "`P`".into(),
        Tok::Int(s) => format!("`{}`", s),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Caret => "`^`".into(),
        Tok::Slash => "`/`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        position,
        message: message.into(),
    })
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && chars[i] == '.' {
                    return err(i, "decimal literals are not supported; write a ratio such as 1/2");
                }
                out.push((Tok::Int(chars[start..i].iter().collect()), start));
                continue;
            }
            'Q' => Tok::Q,
            'P' => Tok::P,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_alphanumeric() {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                return err(start, format!("unknown identifier `{}` (only Q and P are allowed)", word));
            }
            c => return err(i, format!("unexpected character `{}`", c)),
        };
        out.push((tok, i));
        i += 1;
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = lhs + self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    lhs = lhs - self.term()?;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = lhs * self.unary()?;
                }
                Tok::Slash => return err(self.pos(), "division is not supported"),
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.atom()?;
        while *self.peek() == Tok::Caret {
            self.bump();
            let pos = self.pos();
            match self.bump().0 {
                Tok::Int(digits) => {
                    let k: u32 = digits
                        .parse()
                        .map_err(|_| ParseError {
                            position: pos,
                            message: format!("exponent {} is too large", digits),
                        })?;
                    base = base.pow(k);
                }
                _ => return err(pos, "exponent must be a nonnegative integer literal"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Q => Ok(Expr::x()),
            Tok::P => Ok(Expr::y()),
            Tok::Int(numer) => {
                if *self.peek() != Tok::Slash {
                    return Ok(Expr::constant(numer.parse().expect("digits")));
                }
                let slash = self.pos();
                self.bump();
                let (next, dpos) = self.bump();
                match next {
                    Tok::Int(denom) if denom.trim_start_matches('0').is_empty() => err(dpos, "zero denominator"),
                    Tok::Int(denom) => {
                        let r: Rational = format!("{}/{}", numer, denom).parse().expect("digits");
                        Ok(Expr::constant(r))
                    }
                    _ => err(slash, "division is not supported"),
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                match self.bump() {
                    (Tok::RParen, _) => Ok(inner),
                    (t, p) => err(p, format!("expected `)`, found {}", describe(&t))),
                }
            }
            t => err(pos, format!("expected an operand, found {}", describe(&t))),
        }
    }
}

/// Parses an observable expression.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        at: 0,
    };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        t => err(p.pos(), format!("unexpected {}", describe(t))),
    }
}
