//! Text language for congruence statements.
//!
//! See `data/catalog.hc` and the README for the grammar. Index positions
//! (sum bounds, exponents, arguments of `B`, `H`, `binom`) are exact
//! integers; everything else is evaluated in `Z/p^e`.

mod ast;
mod check;
mod eval;
mod lexer;
mod parser;
mod printer;

pub use ast::{CongruenceSpec, Expr, IndexExpr, Precondition, Quantifier};
pub use check::check_congruence;
pub use eval::{evaluate_expr, EvalError};
pub use parser::{parse_congruence, parse_congruence_at, parse_expr, parse_index_expr, ParseError};
