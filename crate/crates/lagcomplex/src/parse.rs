//! Text grammar for expressions.
//!
//! Rational literals `p/q`; even coordinates `x1..xn`, odd coordinates
//! `th1..thm`; jet suffix `[F1 F2 ...]` with time indices `1..r+s` (indices
//! above `r` are odd); even times `t1..tr`, odd times `tau1..taus`; operators
//! `+ - * ^` and parentheses. Printing (`Display` on `Expression`) emits
//! canonical order deterministically and parses back to the same value.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::expr::Expression;
use crate::jet::{JetVariable, MultiIndex};
use crate::signature::Signature;
use crate::Rat;

/// A syntax or symbol error with its 1-based column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn new(col: usize, message: impl Into<String>) -> ParseError {
        ParseError { col, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at column {}: {}", self.col, self.message)
    }
}

impl core::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(Rat),
    Name(NameKind, u16),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Caret,
    Eof,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NameKind {
    X,
    Th,
    T,
    Tau,
}

fn lex(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0usize;
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        match c {
            ' ' | '\t' => {
                i += 1;
            }
            '+' => {
                out.push((Token::Plus, col));
                i += 1;
            }
            '-' => {
                out.push((Token::Minus, col));
                i += 1;
            }
            '*' => {
                out.push((Token::Star, col));
                i += 1;
            }
            '^' => {
                out.push((Token::Caret, col));
                i += 1;
            }
            '(' => {
                out.push((Token::LParen, col));
                i += 1;
            }
            ')' => {
                out.push((Token::RParen, col));
                i += 1;
            }
            '[' => {
                out.push((Token::LBracket, col));
                i += 1;
            }
            ']' => {
                out.push((Token::RBracket, col));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let numer: String = chars[start..i].iter().collect();
                let numer: num_bigint::BigInt = numer.parse().expect("digits");
                if i < chars.len() && chars[i] == '/' {
                    i += 1;
                    let dstart = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if dstart == i {
                        return Err(ParseError::new(i + 1, "expected denominator digits"));
                    }
                    let denom: String = chars[dstart..i].iter().collect();
                    let denom: num_bigint::BigInt = denom.parse().expect("digits");
                    if denom.is_zero() {
                        return Err(ParseError::new(col, "zero denominator"));
                    }
                    out.push((Token::Num(Rat::new(numer, denom)), col));
                } else {
                    out.push((Token::Num(Rat::from_integer(numer)), col));
                }
            }
            'a'..='z' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_lowercase() {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let kind = match word.as_str() {
                    "x" => NameKind::X,
                    "th" => NameKind::Th,
                    "t" => NameKind::T,
                    "tau" => NameKind::Tau,
                    _ => {
                        return Err(ParseError::new(col, alloc::format!("unknown symbol `{word}`")))
                    }
                };
                let dstart = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if dstart == i {
                    return Err(ParseError::new(
                        col,
                        alloc::format!("symbol `{word}` needs an index"),
                    ));
                }
                let digits: String = chars[dstart..i].iter().collect();
                let index: u16 = digits
                    .parse()
                    .map_err(|_| ParseError::new(dstart + 1, "index too large"))?;
                out.push((Token::Name(kind, index), col));
            }
            _ => {
                return Err(ParseError::new(col, alloc::format!("unexpected character `{c}`")));
            }
        }
    }
    out.push((Token::Eof, chars.len() + 1));
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn col(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expression, ParseError> {
        let mut negate = false;
        if *self.peek() == Token::Minus {
            self.advance();
            negate = true;
        } else if *self.peek() == Token::Plus {
            self.advance();
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Token::Plus => {
                    self.advance();
                    let t = self.term()?;
                    acc = acc.add(&t).expect("same signature");
                }
                Token::Minus => {
                    self.advance();
                    let t = self.term()?;
                    acc = acc.sub(&t).expect("same signature");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expression, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Token::Star {
            self.advance();
            let rhs = self.factor()?;
            acc = acc.mul(&rhs).expect("same signature");
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expression, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Token::Caret {
            self.advance();
            let col = self.col();
            match self.advance() {
                Token::Num(q) if q.is_integer() => {
                    let exp: u32 = q
                        .to_integer()
                        .try_into()
                        .map_err(|_| ParseError::new(col, "exponent too large"))?;
                    Ok(base.pow(exp))
                }
                _ => Err(ParseError::new(col, "expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expression, ParseError> {
        let col = self.col();
        match self.advance() {
            Token::Num(q) => Ok(Expression::constant(*self.sig, q)),
            Token::LParen => {
                let inner = self.expr()?;
                let col = self.col();
                match self.advance() {
                    Token::RParen => Ok(inner),
                    _ => Err(ParseError::new(col, "expected `)`")),
                }
            }
            Token::Name(kind, index) => self.symbol(kind, index, col),
            other => Err(ParseError::new(col, alloc::format!("unexpected token {other:?}"))),
        }
    }

    fn symbol(
        &mut self,
        kind: NameKind,
        index: u16,
        col: usize,
    ) -> Result<Expression, ParseError> {
        let sig = self.sig;
        let unknown = |name: &str, idx: u16| {
            ParseError::new(col, alloc::format!("unknown symbol `{name}{idx}`"))
        };
        match kind {
            NameKind::T => {
                if index == 0 || index > sig.r {
                    return Err(unknown("t", index));
                }
                Ok(Expression::time(*sig, index).expect("validated"))
            }
            NameKind::Tau => {
                if index == 0 || index > sig.s {
                    return Err(unknown("tau", index));
                }
                Ok(Expression::time(*sig, sig.r + index).expect("validated"))
            }
            NameKind::X | NameKind::Th => {
                let coord = match kind {
                    NameKind::X => {
                        if index == 0 || index > sig.n {
                            return Err(unknown("x", index));
                        }
                        index
                    }
                    _ => {
                        if index == 0 || index > sig.m {
                            return Err(unknown("th", index));
                        }
                        sig.n + index
                    }
                };
                if *self.peek() == Token::LBracket {
                    self.advance();
                    let mut indices = Vec::new();
                    loop {
                        let icol = self.col();
                        match self.advance() {
                            Token::RBracket => break,
                            Token::Num(q) if q.is_integer() => {
                                let idx: u16 = q
                                    .to_integer()
                                    .try_into()
                                    .map_err(|_| ParseError::new(icol, "index too large"))?;
                                if idx == 0 || idx > sig.times() {
                                    return Err(ParseError::new(
                                        icol,
                                        alloc::format!("time index {idx} out of range"),
                                    ));
                                }
                                indices.push(idx);
                            }
                            _ => {
                                return Err(ParseError::new(icol, "expected a time index or `]`"))
                            }
                        }
                    }
                    match MultiIndex::from_indices(&indices, sig) {
                        None => Ok(Expression::zero(*sig)),
                        Some((mindex, neg)) => {
                            let e = Expression::jet(*sig, JetVariable::new(coord, mindex))
                                .expect("validated");
                            Ok(if neg { e.neg() } else { e })
                        }
                    }
                } else {
                    Ok(Expression::jet(*sig, JetVariable::coordinate(coord)).expect("validated"))
                }
            }
        }
    }
}

/// Parses one expression under the given signature.
pub fn parse(text: &str, sig: &Signature) -> Result<Expression, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0, sig };
    if *parser.peek() == Token::Eof {
        return Err(ParseError::new(1, "empty expression"));
    }
    let e = parser.expr()?;
    match parser.peek() {
        Token::Eof => Ok(e),
        other => {
            Err(ParseError::new(parser.col(), alloc::format!("unexpected token {other:?}")))
        }
    }
}
