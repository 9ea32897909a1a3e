//! Harmonic-number congruences modulo prime powers.
//!
//! Exact rational references ([`exactnum`]), residues modulo `p^e`
//! ([`residue`]), Bernoulli numbers ([`bernoulli`]), a statement language
//! ([`dsl`]) with a builtin catalog ([`catalog`]) and range verification
//! ([`verify`]).

pub mod bernoulli;
pub mod catalog;
pub mod cli;
pub mod context;
pub mod dsl;
pub mod exactnum;
pub mod identities;
pub mod report;
pub mod residue;
pub mod verify;
