//! Recursive-descent parser for congruence statements.
//!
//! ```text
//! congruence := id '|' 'p' '>' int '|' body '(' 'mod' 'p' ['^' int] ')'
//! body       := 'forall' '(' var '=' iexpr '..' iexpr ',' expr '===' expr ')'
//!             | expr '===' expr
//! expr       := term (('+' | '-') term)*
//! term       := unary (('*' | '/') unary)*
//! unary      := ['-'] power
//! power      := atom ['^' exponent]
//! exponent   := ['-'] ipower
//! atom       := int | literal | 'p' | 'q2' | var
//!             | 'B' '(' iexpr ')' | 'H' '(' iexpr [',' int] ')'
//!             | 'binom' '(' iexpr ',' iexpr ')'
//!             | 'sum' '(' var '=' iexpr '..' iexpr ',' expr ')'
//!             | '(' expr ')'
//! literal    := '(' ['-'] int ['/' int] ')'
//! iexpr      := iterm (('+' | '-') iterm)*
//! iterm      := iunary (('*' | '/') iunary)*
//! iunary     := ['-'] ipower
//! ipower     := iatom ['^' exponent]
//! iatom      := int | '(' '-' int ')' | 'p' | var | '(' iexpr ')'
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::ast::{CongruenceSpec, Expr, IndexExpr, Precondition, Quantifier};
use super::lexer::{tokenize, Token, TokenKind};
use crate::exactnum::Rational;

const KEYWORDS: [&str; 8] = ["p", "q2", "B", "H", "binom", "sum", "forall", "mod"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, expected: Vec<String>, found: String) -> Self {
        Self {
            line,
            column,
            expected,
            found,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: expected ", self.line, self.column)?;
        match self.expected.as_slice() {
            [] => write!(f, "something else")?,
            [one] => write!(f, "{one}")?,
            many => write!(f, "one of {}", many.join(", "))?,
        }
        write!(f, ", found {}", self.found)
    }
}

/// Parses one congruence statement.
pub fn parse_congruence(text: &str) -> Result<CongruenceSpec, ParseError> {
    parse_congruence_at(text, 1)
}

/// Parses a congruence that sits on line `line` of a larger file.
pub fn parse_congruence_at(text: &str, line: usize) -> Result<CongruenceSpec, ParseError> {
    let (id, rest_start) = split_id(text, line)?;
    let column0 = text[..rest_start].chars().count() + 1;
    let tokens = tokenize(&text[rest_start..], line, column0)?;
    let mut parser = Parser { tokens, pos: 0 };
    let spec = parser.congruence(id)?;
    parser.expect_eof()?;
    Ok(spec)
}

/// Parses a standalone value expression.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let tokens = tokenize(text, 1, 1)?;
    let mut parser = Parser { tokens, pos: 0 };
    let e = parser.expr()?;
    parser.expect_eof()?;
    Ok(e)
}

/// Parses a standalone index expression.
pub fn parse_index_expr(text: &str) -> Result<IndexExpr, ParseError> {
    let tokens = tokenize(text, 1, 1)?;
    let mut parser = Parser { tokens, pos: 0 };
    let e = parser.iexpr()?;
    parser.expect_eof()?;
    Ok(e)
}

fn split_id(text: &str, line: usize) -> Result<(String, usize), ParseError> {
    let Some(bar) = text.find('|') else {
        let column = text.chars().count() + 1;
        return Err(ParseError::new(line, column, vec!["`|`".into()], "end of input".into()));
    };
    let raw = &text[..bar];
    let lead = raw.len() - raw.trim_start().len();
    let id = raw.trim();
    if id.is_empty() {
        let column = text[..bar].chars().count() + 1;
        return Err(ParseError::new(line, column, vec!["congruence id".into()], "`|`".into()));
    }
    for (offset, c) in id.char_indices() {
        if !(c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-')) {
            let column = text[..lead + offset].chars().count() + 1;
            return Err(ParseError::new(
                line,
                column,
                vec!["identifier character".into()],
                format!("`{c}`"),
            ));
        }
    }
    Ok((id.to_string(), bar))
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &TokenKind {
        &self.tokens[self.pos].kind
    }

    fn peek_at(&self, offset: usize) -> &TokenKind {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].kind
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let t = &self.tokens[self.pos];
        ParseError::new(
            t.line,
            t.column,
            expected.iter().map(|s| s.to_string()).collect(),
            t.kind.describe(),
        )
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == kind {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<(), ParseError> {
        if self.eat(&kind) {
            Ok(())
        } else {
            Err(self.error(&[&kind.describe()]))
        }
    }

    fn is_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), TokenKind::Ident(s) if s == word)
    }

    fn expect_keyword(&mut self, word: &str) -> Result<(), ParseError> {
        if self.is_keyword(word) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[&format!("`{word}`")]))
        }
    }

    fn expect_eof(&mut self) -> Result<(), ParseError> {
        if *self.peek() == TokenKind::Eof {
            Ok(())
        } else {
            Err(self.error(&["end of input"]))
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        match self.peek().clone() {
            TokenKind::Int(s) => {
                self.bump();
                Ok(s.parse().expect("lexer yields digits"))
            }
            _ => Err(self.error(&["integer"])),
        }
    }

    fn small_integer<T: TryFrom<BigInt>>(&mut self, what: &str) -> Result<T, ParseError> {
        let err = self.error(&[what]);
        let n = self.integer()?;
        T::try_from(n).map_err(|_| err)
    }

    fn variable(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            TokenKind::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(&["variable name"])),
        }
    }

    fn congruence(&mut self, id: String) -> Result<CongruenceSpec, ParseError> {
        self.expect(TokenKind::Pipe)?;
        self.expect_keyword("p")?;
        self.expect(TokenKind::Gt)?;
        let greater_than: u64 = self.small_integer("prime bound")?;
        self.expect(TokenKind::Pipe)?;

        let (quantifier, lhs, rhs) = if self.is_keyword("forall") {
            self.bump();
            self.expect(TokenKind::LParen)?;
            let (var, lo, hi) = self.binder()?;
            let lhs = self.expr()?;
            self.expect(TokenKind::Equiv)?;
            let rhs = self.expr()?;
            self.expect(TokenKind::RParen)?;
            (Some(Quantifier { var, lo, hi }), lhs, rhs)
        } else {
            let lhs = self.expr()?;
            self.expect(TokenKind::Equiv)?;
            let rhs = self.expr()?;
            (None, lhs, rhs)
        };

        self.expect(TokenKind::LParen)?;
        self.expect_keyword("mod")?;
        self.expect_keyword("p")?;
        let mod_exponent = if self.eat(&TokenKind::Caret) {
            let err = self.error(&["modulus exponent 1, 2 or 3"]);
            let e: u32 = self.small_integer("modulus exponent 1, 2 or 3")?;
            if !(1..=3).contains(&e) {
                return Err(err);
            }
            e
        } else {
            1
        };
        self.expect(TokenKind::RParen)?;
        Ok(CongruenceSpec {
            id,
            precondition: Precondition { greater_than },
            quantifier,
            lhs,
            rhs,
            mod_exponent,
        })
    }

    /// `var '=' iexpr '..' iexpr ','`
    fn binder(&mut self) -> Result<(String, IndexExpr, IndexExpr), ParseError> {
        let var = self.variable()?;
        self.expect(TokenKind::Assign)?;
        let lo = self.iexpr()?;
        self.expect(TokenKind::DotDot)?;
        let hi = self.iexpr()?;
        self.expect(TokenKind::Comma)?;
        Ok((var, lo, hi))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&TokenKind::Plus) {
                acc = acc + self.term()?;
            } else if self.eat(&TokenKind::Minus) {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(&TokenKind::Star) {
                acc = acc * self.unary()?;
            } else if self.eat(&TokenKind::Slash) {
                acc = acc / self.unary()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(&TokenKind::Minus) {
            Ok(-self.power()?)
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat(&TokenKind::Caret) {
            Ok(base.pow(self.exponent()?))
        } else {
            Ok(base)
        }
    }

    fn exponent(&mut self) -> Result<IndexExpr, ParseError> {
        if self.eat(&TokenKind::Minus) {
            Ok(-self.ipower()?)
        } else {
            self.ipower()
        }
    }

    /// Recognizes `( [-] int [/ int] )` without consuming anything else.
    fn literal_len(&self) -> Option<usize> {
        if *self.peek() != TokenKind::LParen {
            return None;
        }
        let mut i = 1;
        if *self.peek_at(i) == TokenKind::Minus {
            i += 1;
        }
        if !matches!(self.peek_at(i), TokenKind::Int(_)) {
            return None;
        }
        i += 1;
        if *self.peek_at(i) == TokenKind::Slash {
            if !matches!(self.peek_at(i + 1), TokenKind::Int(_)) {
                return None;
            }
            i += 2;
        }
        (*self.peek_at(i) == TokenKind::RParen).then_some(i + 1)
    }

    fn rational_literal(&mut self) -> Result<Rational, ParseError> {
        self.expect(TokenKind::LParen)?;
        let negative = self.eat(&TokenKind::Minus);
        let mut num = self.integer()?;
        if negative {
            num = -num;
        }
        let den = if self.eat(&TokenKind::Slash) {
            let err = self.error(&["nonzero denominator"]);
            let d = self.integer()?;
            if d.is_zero() {
                return Err(err);
            }
            d
        } else {
            BigInt::from(1)
        };
        self.expect(TokenKind::RParen)?;
        Ok(Rational::new(num, den))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            TokenKind::Int(_) => Ok(Expr::Const(Rational::from_integer(self.integer()?))),
            TokenKind::LParen => {
                if self.literal_len().is_some() {
                    return Ok(Expr::Const(self.rational_literal()?));
                }
                self.bump();
                let e = self.expr()?;
                self.expect(TokenKind::RParen)?;
                Ok(e)
            }
            TokenKind::Ident(word) => match word.as_str() {
                "p" => {
                    self.bump();
                    Ok(Expr::Prime)
                }
                "q2" => {
                    self.bump();
                    Ok(Expr::FermatQuotient)
                }
                "B" => {
                    self.bump();
                    self.expect(TokenKind::LParen)?;
                    let n = self.iexpr()?;
                    self.expect(TokenKind::RParen)?;
                    Ok(Expr::Bernoulli(n))
                }
                "H" => {
                    self.bump();
                    self.expect(TokenKind::LParen)?;
                    let n = self.iexpr()?;
                    let order = if self.eat(&TokenKind::Comma) {
                        let err = self.error(&["positive harmonic order"]);
                        let m: u32 = self.small_integer("positive harmonic order")?;
                        if m == 0 {
                            return Err(err);
                        }
                        m
                    } else {
                        1
                    };
                    self.expect(TokenKind::RParen)?;
                    Ok(Expr::Harmonic(n, order))
                }
                "binom" => {
                    self.bump();
                    self.expect(TokenKind::LParen)?;
                    let top = self.iexpr()?;
                    self.expect(TokenKind::Comma)?;
                    let bottom = self.iexpr()?;
                    self.expect(TokenKind::RParen)?;
                    Ok(Expr::Binomial(top, bottom))
                }
                "sum" => {
                    self.bump();
                    self.expect(TokenKind::LParen)?;
                    let (var, lo, hi) = self.binder()?;
                    let body = self.expr()?;
                    self.expect(TokenKind::RParen)?;
                    Ok(Expr::Sum {
                        var,
                        lo,
                        hi,
                        body: Box::new(body),
                    })
                }
                "forall" | "mod" => Err(self.error(&["expression"])),
                _ => Ok(Expr::Var(self.variable()?)),
            },
            _ => Err(self.error(&["expression"])),
        }
    }

    fn iexpr(&mut self) -> Result<IndexExpr, ParseError> {
        let mut acc = self.iterm()?;
        loop {
            if self.eat(&TokenKind::Plus) {
                acc = acc + self.iterm()?;
            } else if self.eat(&TokenKind::Minus) {
                acc = acc - self.iterm()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn iterm(&mut self) -> Result<IndexExpr, ParseError> {
        let mut acc = self.iunary()?;
        loop {
            if self.eat(&TokenKind::Star) {
                acc = acc * self.iunary()?;
            } else if self.eat(&TokenKind::Slash) {
                acc = acc / self.iunary()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn iunary(&mut self) -> Result<IndexExpr, ParseError> {
        if self.eat(&TokenKind::Minus) {
            Ok(-self.ipower()?)
        } else {
            self.ipower()
        }
    }

    fn ipower(&mut self) -> Result<IndexExpr, ParseError> {
        let base = self.iatom()?;
        if self.eat(&TokenKind::Caret) {
            Ok(IndexExpr::Pow(Box::new(base), Box::new(self.exponent()?)))
        } else {
            Ok(base)
        }
    }

    fn index_int(&mut self, negative: bool) -> Result<IndexExpr, ParseError> {
        let err = self.error(&["integer that fits in 127 bits"]);
        let mut n = self.integer()?;
        if negative {
            n = -n;
        }
        i128::try_from(n).map(IndexExpr::Int).map_err(|_| err)
    }

    fn iatom(&mut self) -> Result<IndexExpr, ParseError> {
        match self.peek().clone() {
            TokenKind::Int(_) => self.index_int(false),
            TokenKind::LParen => {
                let negative_literal = *self.peek_at(1) == TokenKind::Minus
                    && matches!(self.peek_at(2), TokenKind::Int(_))
                    && *self.peek_at(3) == TokenKind::RParen;
                self.bump();
                if negative_literal {
                    self.bump();
                    let n = self.index_int(true)?;
                    self.expect(TokenKind::RParen)?;
                    return Ok(n);
                }
                let e = self.iexpr()?;
                self.expect(TokenKind::RParen)?;
                Ok(e)
            }
            TokenKind::Ident(word) if word == "p" => {
                self.bump();
                Ok(IndexExpr::Prime)
            }
            TokenKind::Ident(word) if !KEYWORDS.contains(&word.as_str()) => {
                self.bump();
                Ok(IndexExpr::Var(word))
            }
            _ => Err(self.error(&["index expression"])),
        }
    }
}
