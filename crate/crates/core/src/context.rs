//! Per-prime tables shared by every congruence evaluated at that prime.

use thiserror::Error;

use crate::bernoulli::{bernoulli_mod_recurrence, bernoulli_pm3_powersum, BernoulliError};
use crate::residue::{
    batch_inverses, fermat_quotient, InverseTable, PrimePowerModulus, Residue, ResidueError,
};

/// Default prime ceiling for the O(p^2) Bernoulli cross-check.
pub const DEFAULT_CROSS_CHECK_CEILING: u64 = 500;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("prime context needs p > 3, got {0}")]
    PrimeTooSmall(u64),
    #[error("context exponent {0} outside 1..=3")]
    ExponentOutOfRange(u32),
    #[error(
        "Bernoulli methods disagree at p = {p}: power sum {powersum}, recurrence {recurrence}"
    )]
    BernoulliMismatch {
        p: u64,
        powersum: u128,
        recurrence: u128,
    },
    #[error(transparent)]
    Residue(#[from] ResidueError),
    #[error(transparent)]
    Bernoulli(#[from] BernoulliError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContextOptions {
    /// Primes up to this bound also run the recurrence and compare.
    pub cross_check_ceiling: u64,
}

impl Default for ContextOptions {
    fn default() -> Self {
        Self {
            cross_check_ceiling: DEFAULT_CROSS_CHECK_CEILING,
        }
    }
}

/// Tables for one prime, all modulo `p^{e_max}`.
#[derive(Debug, Clone)]
pub struct PrimeContext {
    modulus: PrimePowerModulus,
    inv: InverseTable,
    /// `2^k` for `k = 0..=p`.
    pow2: Vec<u128>,
    /// `2^{-k}` for `k = 0..=p`.
    inv_pow2: Vec<u128>,
    /// `H_{k,m}` for `k = 0..p-1`, `m = 1, 2, 3`.
    harmonic: [Vec<u128>; 3],
    /// `2^{p-1}` modulo `p^{e_max+1}`.
    pow2_pm1_lifted: u128,
    q2: Residue,
    b_pm3: Residue,
}

pub fn build_context(p: u64, e_max: u32) -> Result<PrimeContext, ContextError> {
    build_context_with(p, e_max, &ContextOptions::default())
}

pub fn build_context_with(
    p: u64,
    e_max: u32,
    opts: &ContextOptions,
) -> Result<PrimeContext, ContextError> {
    if !(1..=3).contains(&e_max) {
        return Err(ContextError::ExponentOutOfRange(e_max));
    }
    let m = PrimePowerModulus::new(p, e_max)?;
    if p <= 3 {
        return Err(ContextError::PrimeTooSmall(p));
    }
    let inv = batch_inverses(m);

    let mut pow2 = Vec::with_capacity(p as usize + 1);
    let mut x = 1u128;
    for _ in 0..=p {
        pow2.push(x);
        x = m.add_raw(x, x);
    }
    let half = inv.raw(2);
    let mut inv_pow2 = Vec::with_capacity(p as usize + 1);
    let mut y = 1u128;
    for _ in 0..=p {
        inv_pow2.push(y);
        y = m.mul_raw(y, half);
    }

    let mut harmonic = [vec![0u128; p as usize], vec![0u128; p as usize], vec![0u128; p as usize]];
    for k in 1..p as usize {
        let i1 = inv.raw(k);
        let i2 = m.mul_raw(i1, i1);
        let i3 = m.mul_raw(i2, i1);
        harmonic[0][k] = m.add_raw(harmonic[0][k - 1], i1);
        harmonic[1][k] = m.add_raw(harmonic[1][k - 1], i2);
        harmonic[2][k] = m.add_raw(harmonic[2][k - 1], i3);
    }

    let lifted = PrimePowerModulus::new(p, e_max + 1)?;
    let pow2_pm1_lifted = lifted.pow_raw(2, (p - 1) as u128);
    let q2 = fermat_quotient(p, e_max)?;

    let b_pm3 = if p <= 5 {
        bernoulli_mod_recurrence(p - 3, m)?
    } else {
        let fast = bernoulli_pm3_powersum(p, e_max)?;
        if p <= opts.cross_check_ceiling {
            let slow = bernoulli_mod_recurrence(p - 3, m)?;
            if slow != fast {
                return Err(ContextError::BernoulliMismatch {
                    p,
                    powersum: fast.value(),
                    recurrence: slow.value(),
                });
            }
        }
        fast
    };

    Ok(PrimeContext {
        modulus: m,
        inv,
        pow2,
        inv_pow2,
        harmonic,
        pow2_pm1_lifted,
        q2,
        b_pm3,
    })
}

impl PrimeContext {
    pub fn p(&self) -> u64 {
        self.modulus.p()
    }

    pub fn e_max(&self) -> u32 {
        self.modulus.exponent()
    }

    /// The modulus `p^{e_max}` all tables live in.
    pub fn modulus(&self) -> PrimePowerModulus {
        self.modulus
    }

    /// `p^e` for `e <= e_max`.
    pub fn modulus_at(&self, e: u32) -> Option<PrimePowerModulus> {
        if (1..=self.e_max()).contains(&e) {
            self.modulus.with_exponent(e).ok()
        } else {
            None
        }
    }

    pub fn inverses(&self) -> &InverseTable {
        &self.inv
    }

    /// `2^k` for `0 <= k <= p`.
    pub fn pow2(&self, k: u64) -> Option<Residue> {
        self.pow2.get(k as usize).map(|&v| self.modulus.residue(v))
    }

    /// `H_{n,order}` for `0 <= n <= p-1` and order 1..=3.
    pub fn harmonic(&self, n: u64, order: u32) -> Option<Residue> {
        let table = self.harmonic.get(order.checked_sub(1)? as usize)?;
        table.get(n as usize).map(|&v| self.modulus.residue(v))
    }

    /// `2^{p-1}` modulo `p^{e_max+1}`.
    pub fn pow2_pm1_lifted(&self) -> u128 {
        self.pow2_pm1_lifted
    }

    pub fn q2(&self) -> Residue {
        self.q2
    }

    /// `B_{p-3}` modulo `p^{e_max}`.
    pub fn b_pm3(&self) -> Residue {
        self.b_pm3
    }

    #[inline]
    pub(crate) fn inv_raw(&self, k: usize) -> u128 {
        self.inv.raw(k)
    }

    #[inline]
    pub(crate) fn pow2_raw(&self, k: usize) -> Option<u128> {
        self.pow2.get(k).copied()
    }

    #[inline]
    pub(crate) fn inv_pow2_raw(&self, k: usize) -> Option<u128> {
        self.inv_pow2.get(k).copied()
    }

    #[inline]
    pub(crate) fn harmonic_raw(&self, n: usize, order: u32) -> Option<u128> {
        match order {
            1..=3 => self.harmonic[order as usize - 1].get(n).copied(),
            _ => None,
        }
    }
}
