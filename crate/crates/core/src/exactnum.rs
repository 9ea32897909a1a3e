//! Exact integer and rational arithmetic.
//!
//! Everything here works over unbounded integers and is meant for small
//! indices (n up to a few hundred). The modular kernels in
//! [`crate::residue`] and [`crate::bernoulli`] are checked against these.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Reduced fraction with unbounded numerator and positive denominator.
///
/// `num_rational` keeps values normalized after every operation, which is
/// exactly the canonical form the identity checks rely on.
pub type Rational = BigRational;

/// Builds `num/den` from machine integers. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integral rational.
pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// `base^exp` for a rational base and a signed exponent.
///
/// Panics on `0^(negative)`.
pub fn rat_pow(base: &Rational, exp: i64) -> Rational {
    let mut acc = Rational::one();
    let mut sq = if exp < 0 { base.recip() } else { base.clone() };
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        sq = &sq * &sq;
        e >>= 1;
    }
    acc
}

/// The generalized harmonic number `H_{n,m} = sum_{k=1}^{n} 1/k^m`, with `H_{0,m} = 0`.
pub fn harmonic_exact(n: u64, m: u32) -> Rational {
    assert!(m >= 1, "harmonic order must be positive");
    let mut acc = Rational::zero();
    for k in 1..=n {
        let den = num_traits::pow(BigInt::from(k), m as usize);
        acc += Rational::new(BigInt::one(), den);
    }
    acc
}

/// Binomial coefficient `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial_exact(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 1..=k {
        // acc = C(n-k+i-1, i-1) here, so the division is exact.
        acc = acc * BigInt::from(n - k + i) / BigInt::from(i);
    }
    acc
}

/// Bernoulli number `B_n` via `B_0 = 1`, `sum_{k=0}^{n} C(n+1,k) B_k = 0`.
///
/// This uses the convention `B_1 = -1/2`. Cost is quadratic in `n`, which is
/// fine at oracle scale.
pub fn bernoulli_exact(n: u64) -> Rational {
    bernoulli_exact_table(n).pop().expect("table holds n+1 entries")
}

/// `[B_0, ..., B_n]` by the same recurrence.
pub fn bernoulli_exact_table(n: u64) -> Vec<Rational> {
    let mut table: Vec<Rational> = Vec::with_capacity(n as usize + 1);
    table.push(Rational::one());
    for m in 1..=n {
        let mut acc = Rational::zero();
        // Row C(m+1, k) built incrementally.
        let mut c = BigInt::one();
        for (k, b) in table.iter().enumerate() {
            if !b.is_zero() {
                acc += b * Rational::from_integer(c.clone());
            }
            c = c * BigInt::from(m + 1 - k as u64) / BigInt::from(k as u64 + 1);
        }
        table.push(-acc / int(m + 1));
    }
    table
}

/// Signed power of -1.
pub(crate) fn sign_pow(exp: i64) -> Rational {
    if exp.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// True when the rational has no factor `p` in its reduced denominator.
pub fn is_p_integral(q: &Rational, p: u64) -> bool {
    !(q.denom() % BigInt::from(p)).is_zero()
}
