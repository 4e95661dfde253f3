//! Recursive-descent parser for the polynomial text grammar.
//!
//! Grammar (whitespace separates tokens, multiplication is explicit):
//!
//! ```text
//! expr    := ['-'] term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := atom ['^' INT]
//! atom    := NUMBER | jetvar | '(' expr ')'
//! jetvar  := ('d' INT ['^' INT])* 'x' INT
//! NUMBER  := INT ['/' INT]
//! ```
//!
//! Derivation prefixes are written 1-based (`d1` is the first derivation);
//! the printed form of any polynomial re-parses to a structurally equal value.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Ctx, DiffPoly, JetVar, Monomial, MultiIndex};
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {position}: {message}")]
pub struct PolyParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Int(BigInt),
    D(u32),
    X(usize),
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self, pos: usize, message: impl Into<String>) -> PolyParseError {
        PolyParseError {
            position: pos,
            message: message.into(),
        }
    }

    fn tokens(mut self) -> Result<Vec<(usize, Tok)>, PolyParseError> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let start = self.pos;
            let c = self.src[self.pos];
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    self.pos += 1;
                }
                b'+' => {
                    out.push((start, Tok::Plus));
                    self.pos += 1;
                }
                b'-' => {
                    out.push((start, Tok::Minus));
                    self.pos += 1;
                }
                b'*' => {
                    out.push((start, Tok::Star));
                    self.pos += 1;
                }
                b'^' => {
                    out.push((start, Tok::Caret));
                    self.pos += 1;
                }
                b'/' => {
                    out.push((start, Tok::Slash));
                    self.pos += 1;
                }
                b'(' => {
                    out.push((start, Tok::LParen));
                    self.pos += 1;
                }
                b')' => {
                    out.push((start, Tok::RParen));
                    self.pos += 1;
                }
                b'0'..=b'9' => {
                    let n = self.read_digits()?;
                    out.push((start, Tok::Int(n)));
                }
                b'd' => {
                    self.pos += 1;
                    let n = self.read_digits().map_err(|_| {
                        self.err(start, "expected derivation index after `d`")
                    })?;
                    let i: u32 = n
                        .try_into()
                        .map_err(|_| self.err(start, "derivation index too large"))?;
                    out.push((start, Tok::D(i)));
                }
                b'x' => {
                    self.pos += 1;
                    let n = self
                        .read_digits()
                        .map_err(|_| self.err(start, "expected variable index after `x`"))?;
                    let k: usize = n
                        .try_into()
                        .map_err(|_| self.err(start, "variable index too large"))?;
                    out.push((start, Tok::X(k)));
                }
                other => {
                    return Err(self.err(start, format!("unexpected character `{}`", other as char)))
                }
            }
        }
        Ok(out)
    }

    fn read_digits(&mut self) -> Result<BigInt, PolyParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err(start, "expected digits"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }
}

struct Parser {
    ctx: Ctx,
    toks: Vec<(usize, Tok)>,
    idx: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(_, t)| t.clone());
        self.idx += 1;
        t
    }

    fn err(&self, message: impl Into<String>) -> PolyParseError {
        PolyParseError {
            position: self.pos(),
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), PolyParseError> {
        if self.peek() == Some(&tok) {
            self.idx += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn parse_expr(&mut self) -> Result<DiffPoly, PolyParseError> {
        let mut negate = false;
        if self.peek() == Some(&Tok::Minus) {
            self.idx += 1;
            negate = true;
        }
        let mut acc = self.parse_term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.idx += 1;
                    let t = self.parse_term()?;
                    acc = acc.add(&t).unwrap();
                }
                Some(Tok::Minus) => {
                    self.idx += 1;
                    let t = self.parse_term()?;
                    acc = acc.sub(&t).unwrap();
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<DiffPoly, PolyParseError> {
        let mut acc = self.parse_factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.idx += 1;
            let f = self.parse_factor()?;
            acc = acc.mul(&f).unwrap();
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<DiffPoly, PolyParseError> {
        let base = self.parse_atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.idx += 1;
            let e = self.parse_exponent()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn parse_exponent(&mut self) -> Result<u32, PolyParseError> {
        match self.bump() {
            Some(Tok::Int(n)) => n
                .try_into()
                .map_err(|_| self.err("exponent out of range")),
            _ => Err(self.err("expected integer exponent")),
        }
    }

    fn parse_atom(&mut self) -> Result<DiffPoly, PolyParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.idx += 1;
                let c = if self.peek() == Some(&Tok::Slash) {
                    self.idx += 1;
                    match self.bump() {
                        Some(Tok::Int(d)) if !d.is_zero() => Rat::new(n, d),
                        Some(Tok::Int(_)) => return Err(self.err("zero denominator")),
                        _ => return Err(self.err("expected denominator")),
                    }
                } else {
                    Rat::from_integer(n)
                };
                Ok(DiffPoly::constant(self.ctx, c))
            }
            Some(Tok::D(_)) | Some(Tok::X(_)) => self.parse_jetvar(),
            Some(Tok::LParen) => {
                self.idx += 1;
                let inner = self.parse_expr()?;
                self.expect(Tok::RParen, "closing `)`")?;
                Ok(inner)
            }
            _ => Err(self.err("expected number, variable, or `(`")),
        }
    }

    fn parse_jetvar(&mut self) -> Result<DiffPoly, PolyParseError> {
        let mut alpha = MultiIndex::zero(self.ctx.ders);
        loop {
            match self.peek().cloned() {
                Some(Tok::D(i)) => {
                    self.idx += 1;
                    if i == 0 || i as usize > self.ctx.ders {
                        return Err(self.err(format!(
                            "derivation d{} out of range (ring has {} derivations, named d1..d{})",
                            i, self.ctx.ders, self.ctx.ders
                        )));
                    }
                    let mut e = 1u32;
                    if self.peek() == Some(&Tok::Caret) {
                        self.idx += 1;
                        e = self.parse_exponent()?;
                    }
                    alpha.0[(i - 1) as usize] += e;
                }
                Some(Tok::X(k)) => {
                    self.idx += 1;
                    if k >= self.ctx.vars {
                        return Err(self.err(format!(
                            "variable x{} out of range (ring has {} variables)",
                            k, self.ctx.vars
                        )));
                    }
                    let m = Monomial::var(JetVar {
                        base: k,
                        index: alpha,
                    });
                    return Ok(DiffPoly::from_terms(
                        self.ctx,
                        [(m, Rat::from_integer(1.into()))],
                    ));
                }
                _ => return Err(self.err("expected variable after derivative prefix")),
            }
        }
    }
}

pub fn parse_poly(ctx: Ctx, input: &str) -> Result<DiffPoly, PolyParseError> {
    let toks = Lexer {
        src: input.as_bytes(),
        pos: 0,
    }
    .tokens()?;
    let mut parser = Parser {
        ctx,
        toks,
        idx: 0,
        len: input.len(),
    };
    let poly = parser.parse_expr()?;
    if parser.idx != parser.toks.len() {
        return Err(parser.err("unexpected trailing input"));
    }
    Ok(poly)
}
