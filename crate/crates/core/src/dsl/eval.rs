//! Modular evaluation of expressions at a fixed prime.
//!
//! An `Expr` is first compiled against a modulus: constants are reduced,
//! variables become slots and `2^k`, `(-1)^k` get table-driven fast paths.
//! Sums over `k = 1..p-1` then cost O(p) with no allocation per term.

use std::collections::BTreeMap;

use num_traits::One;
use thiserror::Error;

use super::ast::{Expr, IndexExpr};
use crate::bernoulli::{bernoulli_table, BernoulliTable};
use crate::context::PrimeContext;
use crate::exactnum::Rational;
use crate::residue::{reduce_rational, PrimePowerModulus, Residue, ResidueError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("division by {value}, not a unit modulo {modulus}")]
    NotInvertible { value: u128, modulus: u128 },
    #[error("constant {0} is not p-integral")]
    NotPIntegral(String),
    #[error("index {num}/{den} is not an integer")]
    NonIntegerIndex { num: i128, den: i128 },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("{what}({n}) is out of range at p = {p}")]
    IndexOutOfRange { what: &'static str, n: i128, p: u64 },
    #[error("index arithmetic overflowed")]
    Overflow,
    #[error("evaluation exponent {requested} exceeds context exponent {available}")]
    ExponentTooLarge { requested: u32, available: u32 },
    #[error(transparent)]
    Residue(ResidueError),
}

impl From<ResidueError> for EvalError {
    fn from(e: ResidueError) -> Self {
        match e {
            ResidueError::NotInvertible { value, p, e } => EvalError::NotInvertible {
                value,
                modulus: (p as u128).pow(e),
            },
            ResidueError::NotPIntegral(q, _) => EvalError::NotPIntegral(q),
            other => EvalError::Residue(other),
        }
    }
}

/// Evaluates `e` modulo `p^mod_exponent`; free variables come from `bindings`.
pub fn evaluate_expr(
    e: &Expr,
    ctx: &PrimeContext,
    mod_exponent: u32,
    bindings: &BTreeMap<String, i128>,
) -> Result<Residue, EvalError> {
    let mut compiler = Compiler::new(ctx, mod_exponent)?;
    let mut slots = Vec::with_capacity(bindings.len());
    for (name, &value) in bindings {
        let slot = compiler.bind(name);
        debug_assert_eq!(slot, slots.len());
        slots.push(value);
    }
    let node = compiler.expr(e)?;
    let mut ev = Evaluator::new(ctx, compiler.m, compiler.n_slots);
    ev.slots[..slots.len()].copy_from_slice(&slots);
    Ok(compiler.m.residue(ev.eval(&node)?))
}

#[derive(Debug, Clone)]
pub(crate) enum Idx {
    Int(i128),
    Slot(usize),
    Neg(Box<Idx>),
    Add(Box<Idx>, Box<Idx>),
    Sub(Box<Idx>, Box<Idx>),
    Mul(Box<Idx>, Box<Idx>),
    Div(Box<Idx>, Box<Idx>),
    Pow(Box<Idx>, Box<Idx>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Base {
    Two,
    MinusOne,
    Other,
}

#[derive(Debug, Clone)]
pub(crate) enum Node {
    Const(u128),
    Slot(usize),
    Bernoulli(Idx),
    Harmonic(Idx, u32),
    Binomial(Idx, Idx),
    Sum {
        slot: usize,
        lo: Idx,
        hi: Idx,
        body: Box<Node>,
    },
    Pow(Box<Node>, Idx, Base),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
}

pub(crate) struct Compiler {
    m: PrimePowerModulus,
    p: i128,
    q2: u128,
    scope: Vec<(String, usize)>,
    n_slots: usize,
}

impl Compiler {
    pub(crate) fn new(ctx: &PrimeContext, mod_exponent: u32) -> Result<Self, EvalError> {
        let m = ctx
            .modulus_at(mod_exponent)
            .ok_or(EvalError::ExponentTooLarge {
                requested: mod_exponent,
                available: ctx.e_max(),
            })?;
        Ok(Self {
            m,
            p: ctx.p() as i128,
            q2: ctx.q2().value() % m.value(),
            scope: Vec::new(),
            n_slots: 0,
        })
    }

    pub(crate) fn modulus(&self) -> PrimePowerModulus {
        self.m
    }

    pub(crate) fn slot_count(&self) -> usize {
        self.n_slots
    }

    /// Opens a new slot for `name`, shadowing any earlier binding.
    pub(crate) fn bind(&mut self, name: &str) -> usize {
        let slot = self.n_slots;
        self.n_slots += 1;
        self.scope.push((name.to_string(), slot));
        slot
    }

    fn lookup(&self, name: &str) -> Result<usize, EvalError> {
        self.scope
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|&(_, s)| s)
            .ok_or_else(|| EvalError::UnboundVariable(name.to_string()))
    }

    pub(crate) fn index(&self, e: &IndexExpr) -> Result<Idx, EvalError> {
        let b = |x: &IndexExpr| self.index(x).map(Box::new);
        Ok(match e {
            IndexExpr::Int(n) => Idx::Int(*n),
            IndexExpr::Prime => Idx::Int(self.p),
            IndexExpr::Var(v) => Idx::Slot(self.lookup(v)?),
            IndexExpr::Neg(x) => Idx::Neg(b(x)?),
            IndexExpr::Add(x, y) => Idx::Add(b(x)?, b(y)?),
            IndexExpr::Sub(x, y) => Idx::Sub(b(x)?, b(y)?),
            IndexExpr::Mul(x, y) => Idx::Mul(b(x)?, b(y)?),
            IndexExpr::Div(x, y) => Idx::Div(b(x)?, b(y)?),
            IndexExpr::Pow(x, y) => Idx::Pow(b(x)?, b(y)?),
        })
    }

    fn constant(&self, q: &Rational) -> Result<u128, EvalError> {
        Ok(reduce_rational(q, self.m)?.value())
    }

    pub(crate) fn expr(&mut self, e: &Expr) -> Result<Node, EvalError> {
        Ok(match e {
            Expr::Const(q) => Node::Const(self.constant(q)?),
            Expr::Prime => Node::Const(self.p as u128 % self.m.value()),
            Expr::FermatQuotient => Node::Const(self.q2),
            Expr::Var(v) => Node::Slot(self.lookup(v)?),
            Expr::Bernoulli(n) => Node::Bernoulli(self.index(n)?),
            Expr::Harmonic(n, order) => Node::Harmonic(self.index(n)?, *order),
            Expr::Binomial(n, k) => Node::Binomial(self.index(n)?, self.index(k)?),
            Expr::Sum { var, lo, hi, body } => {
                let lo = self.index(lo)?;
                let hi = self.index(hi)?;
                let slot = self.bind(var);
                let body = self.expr(body);
                self.scope.pop();
                Node::Sum {
                    slot,
                    lo,
                    hi,
                    body: Box::new(body?),
                }
            }
            Expr::Pow(base, exp) => {
                let kind = match &**base {
                    Expr::Const(q) if *q == Rational::from_integer(2.into()) => Base::Two,
                    Expr::Const(q) if *q == -Rational::one() => Base::MinusOne,
                    _ => Base::Other,
                };
                Node::Pow(Box::new(self.expr(base)?), self.index(exp)?, kind)
            }
            Expr::Neg(x) => Node::Neg(Box::new(self.expr(x)?)),
            Expr::Add(x, y) => Node::Add(Box::new(self.expr(x)?), Box::new(self.expr(y)?)),
            Expr::Sub(x, y) => Node::Sub(Box::new(self.expr(x)?), Box::new(self.expr(y)?)),
            Expr::Mul(x, y) => Node::Mul(Box::new(self.expr(x)?), Box::new(self.expr(y)?)),
            Expr::Div(x, y) => Node::Div(Box::new(self.expr(x)?), Box::new(self.expr(y)?)),
        })
    }
}

/// Above this multiple of `p`, binomial rows are not cached.
const ROW_FACTOR: i128 = 4;

pub(crate) struct Evaluator<'c> {
    ctx: &'c PrimeContext,
    m: PrimePowerModulus,
    p: u64,
    pub(crate) slots: Vec<i128>,
    bernoulli: Option<BernoulliTable>,
    /// `(n, [(unit, valuation) of C(n, k)])` for the most recent top index.
    binom_row: Option<(i128, Vec<(u128, u32)>)>,
}

impl<'c> Evaluator<'c> {
    pub(crate) fn new(ctx: &'c PrimeContext, m: PrimePowerModulus, n_slots: usize) -> Self {
        Self {
            ctx,
            m,
            p: ctx.p(),
            slots: vec![0; n_slots],
            bernoulli: None,
            binom_row: None,
        }
    }

    pub(crate) fn index(&self, e: &Idx) -> Result<i128, EvalError> {
        Ok(match e {
            Idx::Int(n) => *n,
            Idx::Slot(s) => self.slots[*s],
            Idx::Neg(x) => self.index(x)?.checked_neg().ok_or(EvalError::Overflow)?,
            Idx::Add(a, b) => self.index(a)?.checked_add(self.index(b)?).ok_or(EvalError::Overflow)?,
            Idx::Sub(a, b) => self.index(a)?.checked_sub(self.index(b)?).ok_or(EvalError::Overflow)?,
            Idx::Mul(a, b) => self.index(a)?.checked_mul(self.index(b)?).ok_or(EvalError::Overflow)?,
            Idx::Div(a, b) => {
                let (num, den) = (self.index(a)?, self.index(b)?);
                if den == 0 || num % den != 0 {
                    return Err(EvalError::NonIntegerIndex { num, den });
                }
                num.checked_div(den).ok_or(EvalError::Overflow)?
            }
            Idx::Pow(a, b) => {
                let (base, exp) = (self.index(a)?, self.index(b)?);
                if exp < 0 {
                    match base {
                        1 => 1,
                        -1 => if exp % 2 == 0 { 1 } else { -1 },
                        _ => {
                            let den = base
                                .checked_pow(exp.unsigned_abs().try_into().map_err(|_| EvalError::Overflow)?)
                                .ok_or(EvalError::Overflow)?;
                            return Err(EvalError::NonIntegerIndex { num: 1, den });
                        }
                    }
                } else {
                    let exp: u32 = exp.try_into().map_err(|_| EvalError::Overflow)?;
                    base.checked_pow(exp).ok_or(EvalError::Overflow)?
                }
            }
        })
    }

    fn inv(&self, v: u128) -> Result<u128, EvalError> {
        if v > 0 && v < self.p as u128 {
            return Ok(self.ctx.inv_raw(v as usize) % self.m.value());
        }
        Ok(self.m.inv_raw(v)?)
    }

    pub(crate) fn eval(&mut self, node: &Node) -> Result<u128, EvalError> {
        let m = self.m;
        Ok(match node {
            Node::Const(c) => *c,
            Node::Slot(s) => m.reduce_i128(self.slots[*s]),
            Node::Bernoulli(n) => {
                let n = self.index(n)?;
                self.bernoulli(n)?
            }
            Node::Harmonic(n, order) => {
                let n = self.index(n)?;
                self.harmonic(n, *order)?
            }
            Node::Binomial(n, k) => {
                let (n, k) = (self.index(n)?, self.index(k)?);
                self.binomial(n, k)?
            }
            Node::Sum { slot, lo, hi, body } => {
                let (lo, hi) = (self.index(lo)?, self.index(hi)?);
                let mut acc = 0;
                let mut k = lo;
                while k <= hi {
                    self.slots[*slot] = k;
                    acc = m.add_raw(acc, self.eval(body)?);
                    k += 1;
                }
                acc
            }
            Node::Pow(base, exp, kind) => {
                let n = self.index(exp)?;
                self.power(base, n, *kind)?
            }
            Node::Neg(x) => m.neg_raw(self.eval(x)?),
            Node::Add(a, b) => m.add_raw(self.eval(a)?, self.eval(b)?),
            Node::Sub(a, b) => m.sub_raw(self.eval(a)?, self.eval(b)?),
            Node::Mul(a, b) => m.mul_raw(self.eval(a)?, self.eval(b)?),
            Node::Div(a, b) => m.mul_raw(self.eval(a)?, self.eval_inv(b)?),
        })
    }

    /// The inverse of `node`, pushing the inversion to the leaves so table
    /// entries (`1/k`, `2^{-k}`) are used where possible.
    fn eval_inv(&mut self, node: &Node) -> Result<u128, EvalError> {
        let m = self.m;
        Ok(match node {
            Node::Slot(s) => {
                let k = self.slots[*s];
                self.inv(m.reduce_i128(k))?
            }
            Node::Mul(a, b) => m.mul_raw(self.eval_inv(a)?, self.eval_inv(b)?),
            Node::Div(a, b) => m.mul_raw(self.eval_inv(a)?, self.eval(b)?),
            Node::Neg(x) => m.neg_raw(self.eval_inv(x)?),
            Node::Pow(base, exp, kind) => {
                let n = self.index(exp)?.checked_neg().ok_or(EvalError::Overflow)?;
                self.power(base, n, *kind)?
            }
            other => {
                let v = self.eval(other)?;
                self.inv(v)?
            }
        })
    }

    fn power(&mut self, base: &Node, n: i128, kind: Base) -> Result<u128, EvalError> {
        let m = self.m;
        let table = |t: Option<u128>| t.map(|v| v % m.value());
        match kind {
            Base::MinusOne => {
                return Ok(if n % 2 == 0 { 1 % m.value() } else { m.neg_raw(1) });
            }
            Base::Two if n.unsigned_abs() <= self.p as u128 => {
                let k = n.unsigned_abs() as usize;
                let v = if n >= 0 {
                    table(self.ctx.pow2_raw(k))
                } else {
                    table(self.ctx.inv_pow2_raw(k))
                };
                return Ok(v.expect("tables cover 0..=p"));
            }
            _ => {}
        }
        if n >= 0 {
            let b = self.eval(base)?;
            Ok(m.pow_raw(b, n as u128))
        } else {
            let b = self.eval_inv(base)?;
            Ok(m.pow_raw(b, n.unsigned_abs()))
        }
    }

    fn bernoulli(&mut self, n: i128) -> Result<u128, EvalError> {
        let p = self.p;
        if n < 0 || n > p as i128 - 2 {
            return Err(EvalError::IndexOutOfRange { what: "B", n, p });
        }
        let m = self.m;
        if n == p as i128 - 3 {
            return Ok(self.ctx.b_pm3().value() % m.value());
        }
        if n >= 3 && n % 2 == 1 {
            return Ok(0);
        }
        let have = self.bernoulli.as_ref().map_or(-1, |t| t.n_max() as i128);
        if have < n {
            let table = bernoulli_table(n as u64, m).map_err(|_| EvalError::IndexOutOfRange {
                what: "B",
                n,
                p,
            })?;
            self.bernoulli = Some(table);
        }
        Ok(self.bernoulli.as_ref().unwrap().get(n as usize).unwrap().value())
    }

    fn harmonic(&mut self, n: i128, order: u32) -> Result<u128, EvalError> {
        if n < 0 {
            return Err(EvalError::IndexOutOfRange {
                what: "H",
                n,
                p: self.p,
            });
        }
        let m = self.m;
        if n < self.p as i128 {
            if let Some(v) = self.ctx.harmonic_raw(n as usize, order) {
                return Ok(v % m.value());
            }
        }
        let mut acc = 0;
        for k in 1..=n {
            let ik = self.inv(m.reduce_i128(k))?;
            acc = m.add_raw(acc, m.pow_raw(ik, order as u128));
        }
        Ok(acc)
    }

    /// Splits `x != 0` into `(x / p^v mod p^e, v)`.
    fn split(&self, x: i128) -> (u128, u32) {
        let p = self.p as i128;
        let (mut x, mut v) = (x, 0);
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        (self.m.reduce_i128(x), v)
    }

    fn assemble(&self, unit: u128, v: u32) -> u128 {
        if v >= self.m.exponent() {
            0
        } else {
            self.m.mul_raw(unit, self.m.pow_raw(self.p as u128, v as u128))
        }
    }

    fn binomial(&mut self, n: i128, k: i128) -> Result<u128, EvalError> {
        if k < 0 || k > n {
            return Ok(0);
        }
        if let Some((row_n, row)) = &self.binom_row {
            if *row_n == n {
                let (u, v) = row[k as usize];
                return Ok(self.assemble(u, v));
            }
        }
        let m = self.m;
        if n <= ROW_FACTOR * self.p as i128 + 64 {
            let mut row = Vec::with_capacity(n as usize + 1);
            let (mut u, mut v) = (1 % m.value(), 0u32);
            row.push((u, v));
            for j in 1..=n {
                let (a, va) = self.split(n - j + 1);
                let (b, vb) = self.split(j);
                u = m.mul_raw(m.mul_raw(u, a), self.inv(b)?);
                v = v + va - vb;
                row.push((u, v));
            }
            let (u, v) = row[k as usize];
            self.binom_row = Some((n, row));
            return Ok(self.assemble(u, v));
        }
        let k = k.min(n - k);
        let (mut u, mut v) = (1 % m.value(), 0u32);
        for j in 1..=k {
            let (a, va) = self.split(n - j + 1);
            let (b, vb) = self.split(j);
            u = m.mul_raw(m.mul_raw(u, a), self.inv(b)?);
            v = v + va - vb;
        }
        Ok(self.assemble(u, v))
    }
}
