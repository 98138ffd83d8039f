use crate::base::{BaseError, BaseLogic};
use crate::prover::{SearchConfig, Searcher};
use crate::syntax::{Formula, GTerm, Regime, Sequent};

use super::GrammarError;

/// Least common supertype candidate: joins in result positions, meets in
/// argument positions. `None` when the shapes differ or a bound is missing.
pub fn type_join(a: &Formula, b: &Formula, base: &dyn BaseLogic) -> Result<Option<Formula>, BaseError> {
    lattice(a, b, base, true)
}

/// Dual of [`type_join`].
pub fn type_meet(a: &Formula, b: &Formula, base: &dyn BaseLogic) -> Result<Option<Formula>, BaseError> {
    lattice(a, b, base, false)
}

fn lattice(a: &Formula, b: &Formula, base: &dyn BaseLogic, join: bool) -> Result<Option<Formula>, BaseError> {
    Ok(match (a, b) {
        (Formula::Basic(x), Formula::Basic(y)) => {
            let (x, y) = (x.erased(), y.erased());
            let bound = if join { base.join(&x, &y)? } else { base.meet(&x, &y)? };
            bound.map(Formula::Basic)
        }
        (Formula::Over(r1, a1), Formula::Over(r2, a2)) => {
            match (lattice(r1, r2, base, join)?, lattice(a1, a2, base, !join)?) {
                (Some(r), Some(arg)) => Some(Formula::over(r, arg)),
                _ => None,
            }
        }
        (Formula::Under(a1, r1), Formula::Under(a2, r2)) => {
            match (lattice(a1, a2, base, !join)?, lattice(r1, r2, base, join)?) {
                (Some(arg), Some(r)) => Some(Formula::under(arg, r)),
                _ => None,
            }
        }
        _ => None,
    })
}

/// Coordination types for two conjuncts given by their candidate types.
/// A join is kept only if some type of each side derives it on its own.
pub fn coordinate(
    left: &[Formula],
    right: &[Formula],
    regime: Regime,
    base: &dyn BaseLogic,
) -> Result<Vec<Formula>, GrammarError> {
    if !base.has_lattice() {
        return Err(GrammarError::NoLattice(base.name().to_string()));
    }
    let mut searcher = Searcher::new(SearchConfig::cut_free(regime), base);
    let mut derives = |from: &[Formula], a: &Formula| -> Result<bool, BaseError> {
        for b in from {
            if searcher.prove(&Sequent::new(GTerm::Leaf(b.clone()), a.clone()))?.is_some() {
                return Ok(true);
            }
        }
        Ok(false)
    };
    let mut out = Vec::new();
    for b in left {
        for c in right {
            let Some(a) = type_join(b, c, base)? else {
                continue;
            };
            if !out.contains(&a) && derives(left, &a)? && derives(right, &a)? {
                out.push(a);
            }
        }
    }
    Ok(out)
}
