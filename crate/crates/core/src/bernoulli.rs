//! Bernoulli numbers modulo `p^e`.
//!
//! Two independent routes:
//!
//! * the defining recurrence `B_n = -1/(n+1) sum_{k<n} C(n+1,k) B_k`, valid
//!   while every divisor `n+1` is a unit, i.e. `n <= p-2`; quadratic in `n`.
//! * the power sum `S = sum_{k=1}^{p-1} k^{p-3}`. Faulhaber's formula gives
//!   `S = p B_{p-3} + p^3 (p-3)(p-4)/6 B_{p-5} + O(p^4)` for `p >= 7`
//!   (the `p^2` term carries `B_{p-4} = 0`), so `S/p` yields `B_{p-3}` mod
//!   `p^2` directly and mod `p^3` after subtracting the `B_{p-5}` correction.

use thiserror::Error;

use crate::residue::{batch_inverses, PrimePowerModulus, Residue, ResidueError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BernoulliError {
    #[error("Bernoulli index {n} out of range for p = {p} (need n <= p - 2)")]
    IndexOutOfRange { n: u64, p: u64 },
    #[error("power-sum method needs p > 5, got {0}")]
    PrimeTooSmall(u64),
    #[error("power sum not divisible by p = {0}")]
    PowerSumNotDivisible(u64),
    #[error(transparent)]
    Residue(#[from] ResidueError),
}

/// `B_0 .. B_{n_max}` modulo `p^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BernoulliTable {
    modulus: PrimePowerModulus,
    values: Vec<Residue>,
}

impl BernoulliTable {
    pub fn modulus(&self) -> PrimePowerModulus {
        self.modulus
    }

    pub fn get(&self, n: usize) -> Option<Residue> {
        self.values.get(n).copied()
    }

    pub fn values(&self) -> &[Residue] {
        &self.values
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }
}

/// Recurrence table up to `n_max <= p-2`.
pub fn bernoulli_table(n_max: u64, m: PrimePowerModulus) -> Result<BernoulliTable, BernoulliError> {
    let p = m.p();
    if n_max + 2 > p {
        return Err(BernoulliError::IndexOutOfRange { n: n_max, p });
    }
    let n_max = n_max as usize;
    let inv = batch_inverses(m);
    let mut values = Vec::with_capacity(n_max + 1);
    values.push(1 % m.value());
    // row[k] = C(n+1, k), updated in place by Pascal's rule.
    let mut row = vec![0u128; n_max + 2];
    row[0] = 1;
    row[1] = 1 % m.value();
    for n in 1..=n_max {
        for k in (1..=n + 1).rev() {
            row[k] = m.add_raw(row[k], row[k - 1]);
        }
        let mut acc = 0u128;
        for (k, &b) in values.iter().enumerate() {
            if b != 0 {
                acc = m.add_raw(acc, m.mul_raw(row[k], b));
            }
        }
        values.push(m.neg_raw(m.mul_raw(acc, inv.raw(n + 1))));
    }
    Ok(BernoulliTable {
        modulus: m,
        values: values.into_iter().map(|v| m.residue(v)).collect(),
    })
}

/// `B_n` mod `p^e` by the recurrence; `n <= p-2`.
pub fn bernoulli_mod_recurrence(n: u64, m: PrimePowerModulus) -> Result<Residue, BernoulliError> {
    let table = bernoulli_table(n, m)?;
    Ok(table.values[n as usize])
}

/// `(sum_{k=1}^{p-1} k^exp mod p^{e+1}) / p`, as a residue mod `p^e`.
fn power_sum_over_p(p: u64, exp: u64, e: u32) -> Result<Residue, BernoulliError> {
    let lifted = PrimePowerModulus::new(p, e + 1)?;
    let mut s = 0u128;
    for k in 1..p {
        s = lifted.add_raw(s, lifted.pow_raw(k as u128, exp as u128));
    }
    if !s.is_multiple_of(p as u128) {
        return Err(BernoulliError::PowerSumNotDivisible(p));
    }
    Ok(lifted.with_exponent(e)?.residue(s / p as u128))
}

/// `B_{p-3}` mod `p^e` from the power sum `sum k^{p-3}`, for `p > 5` and `1 <= e <= 3`.
pub fn bernoulli_pm3_powersum(p: u64, e: u32) -> Result<Residue, BernoulliError> {
    if p <= 5 {
        return Err(BernoulliError::PrimeTooSmall(p));
    }
    if !(1..=3).contains(&e) {
        return Err(ResidueError::ExponentOutOfRange(e).into());
    }
    let head = power_sum_over_p(p, p - 3, e)?;
    if e < 3 {
        return Ok(head);
    }
    // Remove p^2 (p-3)(p-4)/6 B_{p-5}; only B_{p-5} mod p matters.
    let m = head.modulus();
    let b_pm5 = power_sum_over_p(p, p - 5, 1)?.value();
    let coeff = m.mul_raw(((p - 3) as u128 * (p - 4) as u128) % m.value(), m.inv_raw(6)?);
    let p2 = (p as u128 * p as u128) % m.value();
    let corr = m.mul_raw(m.mul_raw(p2, coeff), b_pm5);
    Ok(m.residue(m.sub_raw(head.value(), corr)))
}
