//! Pluggable base logics for basic categories.
//!
//! The Lambek layer sees a base logic only through its consequence
//! preorder ([`BaseLogic::entails`]); meet and join are needed only by
//! coordination. Backends are registered by name in a [`BaseRegistry`] and
//! selected at runtime, e.g. from the `base` line of a grammar file.

mod feature;
mod identity;
mod poset;
mod prop;
mod registry;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::feature::FeatureError;
use crate::syntax::{BasicType, Formula, GTerm, Sequent};

pub use feature::FeatureBase;
pub use identity::IdentityBase;
pub use poset::PosetBase;
pub use prop::{prop_entails, prop_join, prop_meet, PropBase, PropFormula};
pub use registry::{BaseFactory, BaseRegistry, BaseSpec};

/// Three-way outcome of an entailment query.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Verdict {
    Entailed,
    Disentailed,
    Blocked,
}

impl Verdict {
    pub fn is_entailed(self) -> bool {
        self == Verdict::Entailed
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Entailed => "Entailed",
            Verdict::Disentailed => "Disentailed",
            Verdict::Blocked => "Blocked",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BaseError {
    #[error("undeclared atom `{0}`")]
    Undeclared(String),
    #[error("cannot parse base formula `{text}`: {message}")]
    Parse { text: String, message: String },
    #[error("the {backend} base logic does not support {operation}")]
    Unsupported {
        backend: String,
        operation: &'static str,
    },
    #[error("unknown base logic `{0}`")]
    UnknownBackend(String),
    #[error(transparent)]
    Feature(#[from] FeatureError),
}

/// Behavioural interface of a base logic.
///
/// Implementations are immutable after construction and safe to share
/// between threads.
pub trait BaseLogic: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    /// Parses a base formula and returns it in canonical rendering, so that
    /// syntactic equality of payloads is stable.
    fn parse(&self, text: &str) -> Result<BasicType, BaseError>;

    fn render(&self, b: &BasicType) -> String {
        b.payload().to_string()
    }

    fn entails(&self, lhs: &BasicType, rhs: &BasicType) -> Result<Verdict, BaseError>;

    /// Boolean projection used by the axiom side condition.
    fn entails_bool(&self, lhs: &BasicType, rhs: &BasicType) -> Result<bool, BaseError> {
        Ok(self.entails(lhs, rhs)?.is_entailed())
    }

    fn consistent(&self, _b: &BasicType) -> Result<bool, BaseError> {
        Ok(true)
    }

    /// Greatest lower bound; `Ok(None)` means inconsistent / no bound.
    fn meet(&self, _a: &BasicType, _b: &BasicType) -> Result<Option<BasicType>, BaseError> {
        Err(self.unsupported("meet"))
    }

    /// Least upper bound; `Ok(None)` means undefined.
    fn join(&self, _a: &BasicType, _b: &BasicType) -> Result<Option<BasicType>, BaseError> {
        Err(self.unsupported("join"))
    }

    /// Whether `meet`/`join` are available (required for coordination).
    fn has_lattice(&self) -> bool {
        false
    }

    fn unsupported(&self, operation: &'static str) -> BaseError {
        BaseError::Unsupported {
            backend: self.name().to_string(),
            operation,
        }
    }
}

/// Passes every basic type of `f` through `base.parse`, keeping layer
/// labels, so payloads are in the backend's canonical rendering.
pub fn canonical_formula(f: &Formula, base: &dyn BaseLogic) -> Result<Formula, BaseError> {
    f.try_map_basics(&mut |b| Ok(base.parse(b.payload())?.with_label(b.label())))
}

pub fn canonical_sequent(s: &Sequent, base: &dyn BaseLogic) -> Result<Sequent, BaseError> {
    fn walk(u: &GTerm, base: &dyn BaseLogic) -> Result<GTerm, BaseError> {
        Ok(match u {
            GTerm::Leaf(f) => GTerm::Leaf(canonical_formula(f, base)?),
            GTerm::Node(l, r) => GTerm::node(walk(l, base)?, walk(r, base)?),
        })
    }
    Ok(Sequent::new(
        walk(&s.antecedent, base)?,
        canonical_formula(&s.succedent, base)?,
    ))
}
