use std::ops;

use crate::exactnum::Rational;

/// Integer-valued expression used for bounds, exponents and the arguments of
/// `B`, `H` and `binom`. Evaluated exactly, never modularly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexExpr {
    Int(i128),
    Prime,
    Var(String),
    Neg(Box<IndexExpr>),
    Add(Box<IndexExpr>, Box<IndexExpr>),
    Sub(Box<IndexExpr>, Box<IndexExpr>),
    Mul(Box<IndexExpr>, Box<IndexExpr>),
    /// Exact division; a remainder is an evaluation error.
    Div(Box<IndexExpr>, Box<IndexExpr>),
    Pow(Box<IndexExpr>, Box<IndexExpr>),
}

/// Value expression, evaluated in `Z/p^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(Rational),
    /// The prime `p` as a value.
    Prime,
    /// `q_p(2) = (2^{p-1} - 1)/p`.
    FermatQuotient,
    Var(String),
    Bernoulli(IndexExpr),
    /// `H_{n,order}`.
    Harmonic(IndexExpr, u32),
    Binomial(IndexExpr, IndexExpr),
    Sum {
        var: String,
        lo: IndexExpr,
        hi: IndexExpr,
        body: Box<Expr>,
    },
    Pow(Box<Expr>, IndexExpr),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

/// `p > bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precondition {
    pub greater_than: u64,
}

impl Precondition {
    pub fn admits(&self, p: u64) -> bool {
        p > self.greater_than
    }
}

/// `forall(var = lo..hi, ...)` wrapped around both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantifier {
    pub var: String,
    pub lo: IndexExpr,
    pub hi: IndexExpr,
}

/// One congruence statement `lhs === rhs (mod p^e)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceSpec {
    pub id: String,
    pub precondition: Precondition,
    pub quantifier: Option<Quantifier>,
    pub lhs: Expr,
    pub rhs: Expr,
    pub mod_exponent: u32,
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Const(Rational::from_integer(n.into()))
    }

    pub fn rational(num: i64, den: i64) -> Expr {
        Expr::Const(crate::exactnum::rat(num, den))
    }

    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn pow(self, exp: IndexExpr) -> Expr {
        Expr::Pow(Box::new(self), exp)
    }

    /// Visits this node and every value sub-expression, pre-order.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Expr)) {
        f(self);
        match self {
            Expr::Sum { body, .. } => body.walk(f),
            Expr::Pow(b, _) | Expr::Neg(b) => b.walk(f),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            _ => {}
        }
    }
}

impl IndexExpr {
    pub fn var(name: &str) -> IndexExpr {
        IndexExpr::Var(name.to_string())
    }
}

macro_rules! binop {
    ($ty:ident, $trait:ident, $method:ident, $variant:ident) => {
        impl ops::$trait for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                $ty::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

binop!(Expr, Add, add, Add);
binop!(Expr, Sub, sub, Sub);
binop!(Expr, Mul, mul, Mul);
binop!(Expr, Div, div, Div);
binop!(IndexExpr, Add, add, Add);
binop!(IndexExpr, Sub, sub, Sub);
binop!(IndexExpr, Mul, mul, Mul);
binop!(IndexExpr, Div, div, Div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl ops::Neg for IndexExpr {
    type Output = IndexExpr;
    fn neg(self) -> IndexExpr {
        IndexExpr::Neg(Box::new(self))
    }
}
