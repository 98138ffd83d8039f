//! Formulae, G-terms, sequents, and the purely structural operations on
//! them: polarity, subtyping of complex types, regime canonicalization.

mod formula;
mod gterm;
pub mod parse;

use thiserror::Error;

pub use formula::{polarity_of, subformula_closure, BasicType, Formula, Occurrence, Polarity, Step};
pub use gterm::{canonicalize, CanonicalGTerm, GTerm, Regime, Sequent};

use crate::base::{BaseError, BaseLogic};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("invalid occurrence path: {0}")]
    InvalidPath(String),
    #[error("unknown regime `{0}` (expected NL, L, LP or NLP)")]
    UnknownRegime(String),
}

impl SyntaxError {
    pub(crate) fn shifted(self, offset: usize) -> Self {
        match self {
            SyntaxError::Parse { column, message } => SyntaxError::Parse {
                column: column + offset,
                message,
            },
            other => other,
        }
    }
}

/// `a ⪯ b` lifted to complex types: covariant in results, contravariant in
/// arguments. Basic and complex types are never related, nor are `/` and `\`.
pub fn subtype(a: &Formula, b: &Formula, base: &dyn BaseLogic) -> Result<bool, BaseError> {
    match (a, b) {
        (Formula::Basic(x), Formula::Basic(y)) => base.entails_bool(&x.erased(), &y.erased()),
        (Formula::Over(r1, a1), Formula::Over(r2, a2)) | (Formula::Under(a1, r1), Formula::Under(a2, r2)) => {
            Ok(subtype(r1, r2, base)? && subtype(a2, a1, base)?)
        }
        _ => Ok(false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::PosetBase;

    fn poset() -> PosetBase {
        PosetBase::from_edges(["a", "b1", "b2"], [("b1", "b2")]).unwrap()
    }

    fn f(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    #[test]
    fn contravariant_argument() {
        let p = poset();
        assert!(subtype(&f("a/b2"), &f("a/b1"), &p).unwrap());
        assert!(!subtype(&f("a/b1"), &f("a/b2"), &p).unwrap());
        assert!(subtype(&f("b2\\a"), &f("b1\\a"), &p).unwrap());
    }

    #[test]
    fn reflexive_and_shape_sensitive() {
        let p = poset();
        for s in ["a", "a/b1", "b1\\(a/b2)"] {
            assert!(subtype(&f(s), &f(s), &p).unwrap());
        }
        assert!(!subtype(&f("a/b1"), &f("b1\\a"), &p).unwrap());
        assert!(!subtype(&f("b1"), &f("b2/b1"), &p).unwrap());
    }
}
