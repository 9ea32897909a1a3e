//! The builtin catalog and the catalog file format.

use std::collections::HashSet;
use std::sync::OnceLock;

use thiserror::Error;

use crate::dsl::{parse_congruence_at, CongruenceSpec, ParseError};

/// Source of the builtin catalog.
pub const BUILTIN_CATALOG: &str = include_str!("../data/catalog.hc");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("line {line}: duplicate congruence id `{id}`")]
    DuplicateId { id: String, line: usize },
}

/// Parses catalog text: one statement per line, `#` comments, blank lines ignored.
pub fn parse_catalog(text: &str) -> Result<Vec<CongruenceSpec>, CatalogError> {
    let mut specs = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let spec = parse_congruence_at(line, i + 1)?;
        if !seen.insert(spec.id.clone()) {
            return Err(CatalogError::DuplicateId {
                id: spec.id,
                line: i + 1,
            });
        }
        specs.push(spec);
    }
    Ok(specs)
}

/// The builtin entries in file order.
pub fn builtin_catalog() -> &'static [CongruenceSpec] {
    static CATALOG: OnceLock<Vec<CongruenceSpec>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        parse_catalog(BUILTIN_CATALOG).unwrap_or_else(|e| panic!("builtin catalog is malformed: {e}"))
    })
}

/// Looks up a builtin entry by id.
pub fn builtin_entry(id: &str) -> Option<&'static CongruenceSpec> {
    builtin_catalog().iter().find(|s| s.id == id)
}
