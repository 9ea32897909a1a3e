//! Exact reference evaluation shared by the integration tests.
//!
//! Everything here is deliberately naive: rationals over `BigInt`, binomials
//! from factorial quotients, inverses from a local extended Euclid. None of
//! it goes through the modular evaluator.
#![allow(dead_code)]

use std::collections::BTreeMap;

use hcong::dsl::{Expr, IndexExpr};
use hcong::exactnum::{bernoulli_exact, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn index_value(e: &IndexExpr, p: i128, env: &BTreeMap<String, i128>) -> i128 {
    let go = |x: &IndexExpr| index_value(x, p, env);
    match e {
        IndexExpr::Int(n) => *n,
        IndexExpr::Prime => p,
        IndexExpr::Var(v) => env[v],
        IndexExpr::Neg(x) => -go(x),
        IndexExpr::Add(a, b) => go(a) + go(b),
        IndexExpr::Sub(a, b) => go(a) - go(b),
        IndexExpr::Mul(a, b) => go(a) * go(b),
        IndexExpr::Div(a, b) => {
            let (n, d) = (go(a), go(b));
            assert_eq!(n % d, 0, "inexact index division");
            n / d
        }
        IndexExpr::Pow(a, b) => go(a).pow(go(b) as u32),
    }
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: i128, k: i128) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    factorial(n as u64) / (factorial(k as u64) * factorial((n - k) as u64))
}

pub fn harmonic(n: i128, order: u32) -> Rational {
    let mut acc = Rational::zero();
    for k in 1..=n {
        acc += Rational::new(BigInt::one(), BigInt::from(k).pow(order));
    }
    acc
}

fn power(base: &Rational, exp: i128) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp.unsigned_abs() {
        acc *= base;
    }
    if exp < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// Exact rational value of `e` at prime `p`.
pub fn exact_value(e: &Expr, p: i128, env: &mut BTreeMap<String, i128>) -> Rational {
    let int = |n: BigInt| Rational::from_integer(n);
    match e {
        Expr::Const(q) => q.clone(),
        Expr::Prime => int(p.into()),
        Expr::FermatQuotient => {
            let two: BigInt = BigInt::from(2).pow((p - 1) as u32);
            int((two - 1) / BigInt::from(p))
        }
        Expr::Var(v) => int(env[v].into()),
        Expr::Bernoulli(n) => bernoulli_exact(index_value(n, p, env) as u64),
        Expr::Harmonic(n, order) => harmonic(index_value(n, p, env), *order),
        Expr::Binomial(n, k) => int(binomial(index_value(n, p, env), index_value(k, p, env))),
        Expr::Sum { var, lo, hi, body } => {
            let (lo, hi) = (index_value(lo, p, env), index_value(hi, p, env));
            let saved = env.get(var).copied();
            let mut acc = Rational::zero();
            for k in lo..=hi {
                env.insert(var.clone(), k);
                acc += exact_value(body, p, env);
            }
            match saved {
                Some(v) => env.insert(var.clone(), v),
                None => env.remove(var),
            };
            acc
        }
        Expr::Pow(b, n) => {
            let n = index_value(n, p, env);
            power(&exact_value(b, p, env), n)
        }
        Expr::Neg(x) => -exact_value(x, p, env),
        Expr::Add(a, b) => exact_value(a, p, env) + exact_value(b, p, env),
        Expr::Sub(a, b) => exact_value(a, p, env) - exact_value(b, p, env),
        Expr::Mul(a, b) => exact_value(a, p, env) * exact_value(b, p, env),
        Expr::Div(a, b) => exact_value(a, p, env) / exact_value(b, p, env),
    }
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub fn egcd_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let (mut r0, mut r1) = (a.mod_floor(m), m.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let s2 = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s2);
    }
    r0.is_one().then(|| s0.mod_floor(m))
}

/// Canonical residue of a p-integral rational modulo `p^e`.
pub fn reduce(q: &Rational, p: u64, e: u32) -> u128 {
    let m = BigInt::from(p).pow(e);
    let inv = egcd_inverse(q.denom(), &m).expect("denominator must be a unit");
    let r = (q.numer() * inv).mod_floor(&m);
    assert!(!r.is_negative());
    r.to_u128().unwrap()
}

/// Every `Sum` node in `e`, outermost first.
pub fn sums(e: &Expr) -> Vec<&Expr> {
    let mut out = Vec::new();
    e.walk(&mut |x| {
        if matches!(x, Expr::Sum { .. }) {
            out.push(x);
        }
    });
    out
}
