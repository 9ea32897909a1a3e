//! Exact checks of the combinatorial identities behind the congruences.
//!
//! Every check evaluates both sides over the rationals; there is no
//! tolerance. All functions require `n >= 1` (`n >= 2` for [`check_lemma_3_1`]).

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::exactnum::{binomial_exact, harmonic_exact, int, rat, rat_pow, sign_pow, Rational};

fn two_pow(n: u64) -> Rational {
    rat_pow(&int(2), n as i64)
}

fn c(n: u64, k: u64) -> Rational {
    Rational::from_integer(binomial_exact(n, k as i64))
}

fn h(n: u64) -> Rational {
    harmonic_exact(n, 1)
}

/// `sum_{1<=k<=i<=n} (2^k - 1)/(k i)` and `sum_{j=1}^n C(n,j)/j^2`.
pub fn lemma_2_4_sides(n: u64) -> (Rational, Rational) {
    assert!(n >= 1, "n must be positive");
    // Inner sum over i in k..=n is H_n - H_{k-1}.
    let hn = h(n);
    let mut lhs = Rational::zero();
    let mut h_prev = Rational::zero();
    for k in 1..=n {
        lhs += (two_pow(k) - int(1)) / int(k) * (&hn - &h_prev);
        h_prev += rat(1, k as i64);
    }
    let rhs = (1..=n).map(|j| c(n, j) / int(j * j)).sum();
    (lhs, rhs)
}

pub fn check_lemma_2_4(n: u64) -> bool {
    let (l, r) = lemma_2_4_sides(n);
    l == r
}

/// `sum_{k=1}^{n-1} (-2)^k/k C(n,k)` and the parity-dependent closed form.
pub fn lemma_3_1_sides(n: u64) -> (Rational, Rational) {
    assert!(n >= 2, "n must be at least 2");
    let lhs = (1..n)
        .map(|k| rat_pow(&int(-2), k as i64) / int(k) * c(n, k))
        .sum();
    let rhs = if n % 2 == 1 {
        -int(2) * h(n - 1) + h((n - 1) / 2) + (two_pow(n) - int(2)) / int(n)
    } else {
        -int(2) * h(n) + h(n / 2) - two_pow(n) / int(n)
    };
    (lhs, rhs)
}

pub fn check_lemma_3_1(n: u64) -> bool {
    let (l, r) = lemma_3_1_sides(n);
    l == r
}

/// `sum_{k=1}^{n-1} (-2)^{k-1}/k C(n,k-1)`, the parity-split closed form and
/// the single formula covering both parities.
pub fn lemma_4_1_sides(n: u64) -> (Rational, Rational, Rational) {
    assert!(n >= 1, "n must be positive");
    let lhs = (1..n)
        .map(|k| rat_pow(&int(-2), k as i64 - 1) / int(k) * c(n, k - 1))
        .sum();
    let n1 = int(n + 1);
    let half_pow = two_pow(n - 1);
    let split = if n % 2 == 1 {
        &half_pow * (int(1) - int(n)) / &n1
    } else {
        (int(n - 1) * &half_pow + int(1)) / &n1
    };
    let sign = sign_pow(n as i64);
    let unified = &sign * int(n - 1) * &half_pow / &n1 + (int(1) + &sign) / (int(2) * &n1);
    (lhs, split, unified)
}

pub fn check_lemma_4_1(n: u64) -> bool {
    let (l, s, u) = lemma_4_1_sides(n);
    l == s && l == u
}

/// `(-1)^n sum_{k=1}^{n-1} (-1)^{k-1} C(n,k) 2^k H_k` and
/// `(2^n - 2) H_{n-1} + H_{floor(n/2)} + (2^n - 2)/n`.
pub fn lemma_4_2_sides(n: u64) -> (Rational, Rational) {
    assert!(n >= 1, "n must be positive");
    let mut sum = Rational::zero();
    let mut hk = Rational::zero();
    for k in 1..n {
        hk += rat(1, k as i64);
        sum += sign_pow(k as i64 - 1) * c(n, k) * two_pow(k) * &hk;
    }
    let lhs = sign_pow(n as i64) * sum;
    let t = two_pow(n) - int(2);
    let rhs = &t * h(n - 1) + h(n / 2) + &t / int(n);
    (lhs, rhs)
}

pub fn check_lemma_4_2(n: u64) -> bool {
    let (l, r) = lemma_4_2_sides(n);
    l == r
}

/// The polynomial identity in `x` for the parity of `n`:
///
/// * odd `n`: `sum_{k<n} (-1)^k/k C(n,k) x^k = sum_{k<n} ((1-x)^k - 1)/k - (1 - x^n + (x-1)^n)/n`
/// * even `n`: `sum_{k<=n} (-x)^k/k C(n,k) = sum_{k<=n} ((1-x)^k - 1)/k`
pub fn integral_identity_sides(n: u64, x: &Rational) -> (Rational, Rational) {
    assert!(n >= 1, "n must be positive");
    let one = int(1);
    let y = &one - x;
    let tail = |top: u64| -> Rational {
        (1..=top)
            .map(|k| (rat_pow(&y, k as i64) - &one) / int(k))
            .sum()
    };
    if n % 2 == 1 {
        let lhs = (1..n)
            .map(|k| sign_pow(k as i64) / int(k) * c(n, k) * rat_pow(x, k as i64))
            .sum();
        let xn = rat_pow(x, n as i64);
        let xm1n = rat_pow(&(x - &one), n as i64);
        let rhs = tail(n - 1) - (&one - xn + xm1n) / int(n);
        (lhs, rhs)
    } else {
        let lhs = (1..=n)
            .map(|k| rat_pow(&-x, k as i64) / int(k) * c(n, k))
            .sum();
        (lhs, tail(n))
    }
}

pub fn check_integral_identity(n: u64, x: &Rational) -> bool {
    let (l, r) = integral_identity_sides(n, x);
    l == r
}

/// Evaluation points used for the polynomial identity.
pub fn default_x_grid() -> Vec<Rational> {
    vec![int(0), int(-1), rat(1, 2), int(2), int(3)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Identity {
    Lemma2_4,
    Lemma3_1,
    Lemma4_1,
    Lemma4_2,
    Integral,
}

impl Identity {
    pub const ALL: [Identity; 5] = [
        Identity::Lemma2_4,
        Identity::Lemma3_1,
        Identity::Lemma4_1,
        Identity::Lemma4_2,
        Identity::Integral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Lemma2_4 => "2.4",
            Identity::Lemma3_1 => "3.1",
            Identity::Lemma4_1 => "4.1",
            Identity::Lemma4_2 => "4.2",
            Identity::Integral => "integral",
        }
    }

    /// Smallest `n` the identity is stated for.
    pub fn min_n(self) -> u64 {
        match self {
            Identity::Lemma3_1 => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == s.trim())
            .ok_or_else(|| format!("unknown identity `{s}` (expected 2.4, 3.1, 4.1, 4.2 or integral)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityOutcome {
    pub identity: Identity,
    pub n: u64,
    pub x: Option<Rational>,
    pub holds: bool,
}

/// Runs the selected identities for `min_n..=max_n`; the polynomial
/// identity runs at every point of [`default_x_grid`].
pub fn run_identities(which: &[Identity], max_n: u64) -> Vec<IdentityOutcome> {
    let mut out = Vec::new();
    for &id in which {
        for n in id.min_n()..=max_n {
            match id {
                Identity::Integral => {
                    for x in default_x_grid() {
                        let holds = check_integral_identity(n, &x);
                        out.push(IdentityOutcome { identity: id, n, x: Some(x), holds });
                    }
                }
                _ => {
                    let holds = match id {
                        Identity::Lemma2_4 => check_lemma_2_4(n),
                        Identity::Lemma3_1 => check_lemma_3_1(n),
                        Identity::Lemma4_1 => check_lemma_4_1(n),
                        Identity::Lemma4_2 => check_lemma_4_2(n),
                        Identity::Integral => unreachable!(),
                    };
                    out.push(IdentityOutcome { identity: id, n, x: None, holds });
                }
            }
        }
    }
    out
}
