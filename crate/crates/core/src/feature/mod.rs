//! Restricted feature logic: terms, solved forms, entailment with the
//! three-way verdict, unification and generalization.

mod entail;
mod graph;
mod lattice;
mod simulation;
mod solved;
mod term;

use thiserror::Error;

pub use entail::{entail_check, entail_report, entail_solved, EntailReport, RuleApplication};
pub use graph::{Clash, FeatureGraph, NodeId};
pub use lattice::{ft_join, ft_meet, graph_to_term};
pub use simulation::simulation_oracle;
pub use solved::{normalize, Inconsistent, SimpleConstraint, SolvedForm};
pub use term::FeatureTerm;
pub(crate) use term::is_variable_name;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeatureError {
    #[error("cannot parse feature term `{text}` at column {column}: {message}")]
    Parse {
        text: String,
        column: usize,
        message: String,
    },
    #[error("inconsistent feature term `{0}`")]
    InconsistentInput(String),
    #[error("path `{path}` runs through the atom `{atom}`")]
    PathThroughAtom { path: String, atom: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}
