//! Subtyped Lambek calculi over pluggable base logics.
//!
//! * [`syntax`]: formulae, G-terms, sequents, polarity, subtyping.
//! * [`base`]: the base-logic interface and its backends.
//! * [`feature`]: the feature logic with three-way entailment.
//! * [`prover`]: cut-free backward proof search for NL, L, LP and NLP.
//! * [`grammar`]: lexicons, membership, coordination, compile-out.
//! * [`layered`]: proof search threading a global feature environment.

pub mod base;
pub mod feature;
pub mod grammar;
pub mod layered;
pub mod prover;
pub mod syntax;
