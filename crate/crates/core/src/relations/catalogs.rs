//! Built-in relation catalogs.

use crate::error::{Result, TydError};
use crate::relations::dsl::{parse_catalog, render_entry, CatalogEntry};

pub const TYPE_A: &str = include_str!("../../catalogs/type_a.sexp");
pub const TWISTED_CURRENT: &str = include_str!("../../catalogs/twisted_current.sexp");

pub fn type_a() -> Result<Vec<CatalogEntry>> {
    parse_catalog(TYPE_A)
}

pub fn twisted_current() -> Result<Vec<CatalogEntry>> {
    parse_catalog(TWISTED_CURRENT)
}

pub const MINIMAL: &str = include_str!("../../catalogs/minimal.sexp");

pub fn minimal() -> Result<Vec<CatalogEntry>> {
    parse_catalog(MINIMAL)
}

pub const CHAINS: &str = include_str!("../../catalogs/chains.sexp");

/// Ad-chain identities with their negative-root mirrors interleaved.
pub fn chains() -> Result<Vec<CatalogEntry>> {
    Ok(crate::relations::check::with_mirrors(&parse_catalog(CHAINS)?))
}

pub const TY: &str = include_str!("../../catalogs/ty.sexp");

/// The finite presentation on modes 0 and 1, at the associative level.
pub fn ty() -> Result<Vec<CatalogEntry>> {
    parse_catalog(TY)
}

/// Parses an external catalog and checks that every entry survives a
/// render/parse round trip. Returns the entry ids.
pub fn lint(text: &str) -> Result<Vec<String>> {
    let entries = parse_catalog(text)?;
    for e in &entries {
        let again = parse_catalog(&render_entry(e))?;
        if again.as_slice() != std::slice::from_ref(e) {
            return Err(TydError::Catalog(format!("entry '{}' does not round-trip", e.id())));
        }
    }
    Ok(entries.iter().map(|e| e.id().to_string()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_catalogs_lint_clean() {
        for text in [TYPE_A, TWISTED_CURRENT, MINIMAL, CHAINS, TY] {
            assert!(!lint(text).unwrap().is_empty());
        }
    }

    #[test]
    fn lint_reports_parse_errors() {
        assert!(matches!(lint("(relation a () (= 0"), Err(TydError::Parse { .. })));
    }
}
