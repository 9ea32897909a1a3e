//! Canonical text form. `parse(print(x)) == x` for every tree.

use std::fmt::{self, Write as _};

use num_traits::{One, Signed};

use super::ast::{CongruenceSpec, Expr, IndexExpr};

const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const NEG: u8 = 3;
const POWER: u8 = 4;
const ATOM: u8 = 5;

fn index_prec(e: &IndexExpr) -> u8 {
    match e {
        IndexExpr::Add(..) | IndexExpr::Sub(..) => SUM,
        IndexExpr::Mul(..) | IndexExpr::Div(..) => PRODUCT,
        IndexExpr::Neg(_) => NEG,
        IndexExpr::Pow(..) => POWER,
        _ => ATOM,
    }
}

fn expr_prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => SUM,
        Expr::Mul(..) | Expr::Div(..) => PRODUCT,
        Expr::Neg(_) => NEG,
        Expr::Pow(..) => POWER,
        _ => ATOM,
    }
}

fn write_index(out: &mut String, e: &IndexExpr) {
    match e {
        IndexExpr::Int(n) if *n < 0 => write!(out, "({n})").unwrap(),
        IndexExpr::Int(n) => write!(out, "{n}").unwrap(),
        IndexExpr::Prime => out.push('p'),
        IndexExpr::Var(v) => out.push_str(v),
        IndexExpr::Neg(x) => {
            out.push('-');
            index_operand(out, x, POWER);
        }
        IndexExpr::Add(a, b) => index_binary(out, a, '+', b, SUM),
        IndexExpr::Sub(a, b) => index_binary(out, a, '-', b, SUM),
        IndexExpr::Mul(a, b) => index_binary(out, a, '*', b, PRODUCT),
        IndexExpr::Div(a, b) => index_binary(out, a, '/', b, PRODUCT),
        IndexExpr::Pow(a, b) => {
            index_operand(out, a, ATOM);
            out.push('^');
            write_exponent(out, b);
        }
    }
}

fn index_binary(out: &mut String, a: &IndexExpr, op: char, b: &IndexExpr, prec: u8) {
    index_operand(out, a, prec);
    out.push(op);
    index_operand(out, b, prec + 1);
}

fn index_operand(out: &mut String, e: &IndexExpr, min: u8) {
    if index_prec(e) >= min {
        return write_index(out, e);
    }
    // `(-3)` would read back as the literal -3.
    if let IndexExpr::Neg(x) = e {
        if let IndexExpr::Int(n @ 0..) = **x {
            write!(out, "(-({n}))").unwrap();
            return;
        }
    }
    out.push('(');
    write_index(out, e);
    out.push(')');
}

/// Exponents accept one leading minus before a power-level operand.
fn write_exponent(out: &mut String, e: &IndexExpr) {
    match e {
        IndexExpr::Neg(x) if index_prec(x) >= POWER => {
            out.push('-');
            write_index(out, x);
        }
        _ => index_operand(out, e, POWER),
    }
}

fn is_plain_uint(e: &Expr) -> bool {
    matches!(e, Expr::Const(c) if c.is_integer() && !c.is_negative())
}

/// Trees whose parenthesized form would collide with `( [-] int [/ int] )`.
fn literal_shaped(e: &Expr) -> bool {
    let signed = |x: &Expr| is_plain_uint(x) || matches!(x, Expr::Neg(y) if is_plain_uint(y));
    match e {
        Expr::Neg(x) => is_plain_uint(x),
        Expr::Div(a, b) => signed(a) && is_plain_uint(b),
        _ => false,
    }
}

struct ExprWriter {
    out: String,
    /// Print the next non-negative integer constant as `(n)`.
    boxed_ints: bool,
}

impl ExprWriter {
    fn expr(&mut self, e: &Expr) {
        match e {
            Expr::Const(c) => {
                if c.denom().is_one() && !c.is_negative() {
                    if self.boxed_ints {
                        write!(self.out, "({})", c.numer()).unwrap();
                    } else {
                        write!(self.out, "{}", c.numer()).unwrap();
                    }
                } else if c.denom().is_one() {
                    write!(self.out, "({})", c.numer()).unwrap();
                } else {
                    write!(self.out, "({}/{})", c.numer(), c.denom()).unwrap();
                }
            }
            Expr::Prime => self.out.push('p'),
            Expr::FermatQuotient => self.out.push_str("q2"),
            Expr::Var(v) => self.out.push_str(v),
            Expr::Bernoulli(n) => {
                self.out.push_str("B(");
                write_index(&mut self.out, n);
                self.out.push(')');
            }
            Expr::Harmonic(n, order) => {
                self.out.push_str("H(");
                write_index(&mut self.out, n);
                if *order != 1 {
                    write!(self.out, ", {order}").unwrap();
                }
                self.out.push(')');
            }
            Expr::Binomial(n, k) => {
                self.out.push_str("binom(");
                write_index(&mut self.out, n);
                self.out.push_str(", ");
                write_index(&mut self.out, k);
                self.out.push(')');
            }
            Expr::Sum { var, lo, hi, body } => {
                write!(self.out, "sum({var}=").unwrap();
                write_index(&mut self.out, lo);
                self.out.push_str("..");
                write_index(&mut self.out, hi);
                self.out.push_str(", ");
                let saved = std::mem::replace(&mut self.boxed_ints, false);
                self.expr(body);
                self.boxed_ints = saved;
                self.out.push(')');
            }
            Expr::Pow(base, exp) => {
                self.operand(base, ATOM);
                self.out.push('^');
                write_exponent(&mut self.out, exp);
            }
            Expr::Neg(x) => {
                self.out.push('-');
                self.operand(x, POWER);
            }
            Expr::Add(a, b) => self.binary(a, " + ", b, SUM),
            Expr::Sub(a, b) => self.binary(a, " - ", b, SUM),
            Expr::Mul(a, b) => self.binary(a, " * ", b, PRODUCT),
            Expr::Div(a, b) => self.binary(a, " / ", b, PRODUCT),
        }
    }

    fn binary(&mut self, a: &Expr, op: &str, b: &Expr, prec: u8) {
        self.operand(a, prec);
        // Only the leading constant of a wrapped literal-shaped tree is boxed.
        let saved = std::mem::replace(&mut self.boxed_ints, false);
        self.out.push_str(op);
        self.operand(b, prec + 1);
        self.boxed_ints = saved;
    }

    fn operand(&mut self, e: &Expr, min: u8) {
        if expr_prec(e) >= min {
            return self.expr(e);
        }
        self.out.push('(');
        let saved = std::mem::replace(&mut self.boxed_ints, literal_shaped(e));
        self.expr(e);
        self.boxed_ints = saved;
        self.out.push(')');
    }
}

impl fmt::Display for IndexExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_index(&mut s, self);
        f.write_str(&s)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut w = ExprWriter {
            out: String::new(),
            boxed_ints: false,
        };
        w.expr(self);
        f.write_str(&w.out)
    }
}

impl fmt::Display for CongruenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | p>{} | ", self.id, self.precondition.greater_than)?;
        match &self.quantifier {
            Some(q) => write!(
                f,
                "forall({}={}..{}, {} === {})",
                q.var, q.lo, q.hi, self.lhs, self.rhs
            )?,
            None => write!(f, "{} === {}", self.lhs, self.rhs)?,
        }
        match self.mod_exponent {
            1 => write!(f, " (mod p)"),
            e => write!(f, " (mod p^{e})"),
        }
    }
}
