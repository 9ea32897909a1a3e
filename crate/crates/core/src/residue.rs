//! Arithmetic in `Z/p^e` for odd primes `p` and `1 <= e <= 4`.
//!
//! Values are stored as `u128`. For `p < 2^32` every `p^e` with `e <= 4`
//! fits, and products of two residues fit in `u128` whenever the modulus is
//! below `2^64`. Larger moduli (only `p^4` for `p > 2^16`) fall back to a
//! shift-and-add multiply that never overflows.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::exactnum::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResidueError {
    #[error("{value} is not invertible modulo {p}^{e}")]
    NotInvertible { value: u128, p: u64, e: u32 },
    #[error("rational {0} has a denominator divisible by {1}")]
    NotPIntegral(String, u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("modulus exponent {0} outside 1..=4")]
    ExponentOutOfRange(u32),
    #[error("{p}^{e} overflows the residue width")]
    ModulusOverflow { p: u64, e: u32 },
    #[error("mixed moduli: {0} vs {1}")]
    ModulusMismatch(PrimePowerModulus, PrimePowerModulus),
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let n128 = n as u128;
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_u128(a as u128, d as u128, n128);
        if x == 1 || x == n128 - 1 {
            continue;
        }
        for _ in 1..s {
            x = x * x % n128;
            if x == n128 - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pow_u128(mut base: u128, mut exp: u128, m: u128) -> u128 {
    // Only used with m < 2^64.
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// The modulus `p^e`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePowerModulus {
    p: u64,
    e: u32,
    m: u128,
}

impl fmt::Debug for PrimePowerModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.e)
    }
}

impl fmt::Display for PrimePowerModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.e)
    }
}

impl PrimePowerModulus {
    pub fn new(p: u64, e: u32) -> Result<Self, ResidueError> {
        if !(1..=4).contains(&e) {
            return Err(ResidueError::ExponentOutOfRange(e));
        }
        if p == 2 || !is_prime(p) {
            return Err(ResidueError::NotOddPrime(p));
        }
        let m = (p as u128)
            .checked_pow(e)
            .ok_or(ResidueError::ModulusOverflow { p, e })?;
        Ok(Self { p, e, m })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    /// `p^e`.
    pub fn value(&self) -> u128 {
        self.m
    }

    /// Same prime, different exponent.
    pub fn with_exponent(&self, e: u32) -> Result<Self, ResidueError> {
        Self::new_unchecked_prime(self.p, e)
    }

    fn new_unchecked_prime(p: u64, e: u32) -> Result<Self, ResidueError> {
        if !(1..=4).contains(&e) {
            return Err(ResidueError::ExponentOutOfRange(e));
        }
        let m = (p as u128)
            .checked_pow(e)
            .ok_or(ResidueError::ModulusOverflow { p, e })?;
        Ok(Self { p, e, m })
    }

    pub fn residue(&self, value: u128) -> Residue {
        Residue {
            value: value % self.m,
            modulus: *self,
        }
    }

    pub fn from_i128(&self, value: i128) -> Residue {
        self.residue(self.reduce_i128(value))
    }

    pub fn zero(&self) -> Residue {
        self.residue(0)
    }

    pub fn one(&self) -> Residue {
        self.residue(1)
    }

    // Raw operations on canonical values in [0, m).

    #[inline]
    pub(crate) fn reduce_i128(&self, v: i128) -> u128 {
        if v >= 0 {
            v as u128 % self.m
        } else {
            let r = v.unsigned_abs() % self.m;
            if r == 0 {
                0
            } else {
                self.m - r
            }
        }
    }

    #[inline]
    pub(crate) fn add_raw(&self, a: u128, b: u128) -> u128 {
        if a >= self.m - b {
            a - (self.m - b)
        } else {
            a + b
        }
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            self.m - (b - a)
        }
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u128) -> u128 {
        if a == 0 {
            0
        } else {
            self.m - a
        }
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u128, b: u128) -> u128 {
        if self.m <= u64::MAX as u128 {
            a * b % self.m
        } else {
            self.mul_wide(a, b)
        }
    }

    #[cold]
    fn mul_wide(&self, mut a: u128, mut b: u128) -> u128 {
        let mut acc = 0u128;
        if a < b {
            std::mem::swap(&mut a, &mut b);
        }
        while b > 0 {
            if b & 1 == 1 {
                acc = self.add_raw(acc, a);
            }
            a = self.add_raw(a, a);
            b >>= 1;
        }
        acc
    }

    pub(crate) fn pow_raw(&self, base: u128, mut exp: u128) -> u128 {
        let mut acc = 1 % self.m;
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, sq);
            }
            sq = self.mul_raw(sq, sq);
            exp >>= 1;
        }
        acc
    }

    /// Inverse by the extended Euclidean algorithm.
    pub(crate) fn inv_raw(&self, a: u128) -> Result<u128, ResidueError> {
        if a.is_multiple_of(self.p as u128) {
            return Err(ResidueError::NotInvertible {
                value: a,
                p: self.p,
                e: self.e,
            });
        }
        // Coefficients tracked as (sign, magnitude) modulo m to stay in u128.
        let (mut r0, mut r1) = (self.m, a);
        let (mut s0, mut s1) = (0u128, 1u128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            let qs = self.mul_raw(q % self.m, s1);
            (s0, s1) = (s1, self.sub_raw(s0, qs));
        }
        debug_assert_eq!(r0, 1);
        Ok(s0)
    }
}

/// A canonical residue in `[0, p^e)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u128,
    modulus: PrimePowerModulus,
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Residue {
    pub fn value(&self) -> u128 {
        self.value
    }

    pub fn modulus(&self) -> PrimePowerModulus {
        self.modulus
    }

    fn same(&self, other: &Residue) -> Result<PrimePowerModulus, ResidueError> {
        if self.modulus == other.modulus {
            Ok(self.modulus)
        } else {
            Err(ResidueError::ModulusMismatch(self.modulus, other.modulus))
        }
    }

    pub fn try_add(&self, other: &Residue) -> Result<Residue, ResidueError> {
        let m = self.same(other)?;
        Ok(m.residue(m.add_raw(self.value, other.value)))
    }

    pub fn try_sub(&self, other: &Residue) -> Result<Residue, ResidueError> {
        let m = self.same(other)?;
        Ok(m.residue(m.sub_raw(self.value, other.value)))
    }

    pub fn try_mul(&self, other: &Residue) -> Result<Residue, ResidueError> {
        let m = self.same(other)?;
        Ok(m.residue(m.mul_raw(self.value, other.value)))
    }

    pub fn neg(&self) -> Residue {
        self.modulus.residue(self.modulus.neg_raw(self.value))
    }

    /// Reduces to `p^e'` for `e' <= e`.
    pub fn reduce_to(&self, target: PrimePowerModulus) -> Result<Residue, ResidueError> {
        if target.p != self.modulus.p || target.e > self.modulus.e {
            return Err(ResidueError::ModulusMismatch(self.modulus, target));
        }
        Ok(target.residue(self.value))
    }

    pub fn is_unit(&self) -> bool {
        !self.value.is_multiple_of(self.modulus.p as u128)
    }
}

/// Multiplicative inverse of a unit.
pub fn inverse(x: &Residue) -> Result<Residue, ResidueError> {
    let m = x.modulus;
    m.inv_raw(x.value).map(|v| m.residue(v))
}

/// The residue `r` with `r * den == num (mod p^e)`.
pub fn reduce_rational(q: &Rational, m: PrimePowerModulus) -> Result<Residue, ResidueError> {
    let modulus = BigInt::from(m.m);
    let den = q.denom().mod_floor(&modulus);
    let den = den.to_u128().expect("reduced below modulus");
    if den % m.p as u128 == 0 {
        return Err(ResidueError::NotPIntegral(q.to_string(), m.p));
    }
    let num = q.numer().mod_floor(&modulus).to_u128().expect("reduced below modulus");
    let inv = m.inv_raw(den)?;
    Ok(m.residue(m.mul_raw(num, inv)))
}

/// `base^exp`; negative exponents invert first.
pub fn pow_mod(base: &Residue, exp: i64) -> Result<Residue, ResidueError> {
    let m = base.modulus;
    let b = if exp < 0 { m.inv_raw(base.value)? } else { base.value };
    Ok(m.residue(m.pow_raw(b, exp.unsigned_abs() as u128)))
}

/// The Fermat quotient `q_p(2) = (2^{p-1} - 1)/p` reduced mod `p^e`, `1 <= e <= 3`.
pub fn fermat_quotient(p: u64, e: u32) -> Result<Residue, ResidueError> {
    if !(1..=3).contains(&e) {
        return Err(ResidueError::ExponentOutOfRange(e));
    }
    let lifted = PrimePowerModulus::new(p, e + 1)?;
    let pow = lifted.pow_raw(2, (p - 1) as u128);
    let numer = lifted.sub_raw(pow, 1);
    debug_assert_eq!(numer % p as u128, 0, "Fermat's little theorem");
    let target = lifted.with_exponent(e)?;
    // numer < p^{e+1}, so numer / p < p^e is already canonical.
    Ok(target.residue(numer / p as u128))
}

/// Inverses of `1..p-1` modulo `p^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseTable {
    modulus: PrimePowerModulus,
    // Slot 0 is unused so that `values[k]` is the inverse of `k`.
    values: Vec<u128>,
}

impl InverseTable {
    pub fn modulus(&self) -> PrimePowerModulus {
        self.modulus
    }

    /// Inverse of `k` for `1 <= k <= p-1`.
    pub fn get(&self, k: u64) -> Option<Residue> {
        if k == 0 || k >= self.modulus.p {
            return None;
        }
        Some(self.modulus.residue(self.values[k as usize]))
    }

    #[inline]
    pub(crate) fn raw(&self, k: usize) -> u128 {
        self.values[k]
    }

    /// `[inv(1), ..., inv(p-1)]`.
    pub fn to_vec(&self) -> Vec<Residue> {
        self.values[1..]
            .iter()
            .map(|&v| self.modulus.residue(v))
            .collect()
    }
}

/// All inverses of `1..p-1` mod `p^e` in linear time.
///
/// Builds the table mod `p` with `inv[i] = -(p / i) * inv[p mod i]`, then
/// lifts each entry with the Newton step `x <- x (2 - k x)`, which doubles
/// the `p`-adic precision per round.
pub fn batch_inverses(m: PrimePowerModulus) -> InverseTable {
    let p = m.p as usize;
    let p128 = m.p as u128;
    let mut values = vec![0u128; p];
    if p > 1 {
        values[1] = 1;
    }
    for i in 2..p {
        let q = (p / i) as u128;
        let r = p % i;
        values[i] = (p128 - q * values[r] % p128) % p128;
    }
    let mut precision = 1;
    while precision < m.e {
        precision = (precision * 2).min(m.e);
        let step = PrimePowerModulus {
            p: m.p,
            e: precision,
            m: p128.pow(precision),
        };
        for (k, x) in values.iter_mut().enumerate().skip(1) {
            let kx = step.mul_raw(k as u128 % step.m, *x);
            *x = step.mul_raw(*x, step.sub_raw(2 % step.m, kx));
        }
    }
    InverseTable { modulus: m, values }
}

/// Reduces an exact integer modulo `p^e`.
pub fn reduce_integer(n: &BigInt, m: PrimePowerModulus) -> Residue {
    if n.is_zero() {
        return m.zero();
    }
    let v = n.mod_floor(&BigInt::from(m.m)).to_u128().expect("reduced");
    m.residue(v)
}
