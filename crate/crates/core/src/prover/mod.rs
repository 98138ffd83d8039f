//! Cut-free backward proof search for the four regimes, an optional
//! depth-bounded cut, a node-by-node proof checker, and the admissible
//! monotonicity rules.

mod proof;
mod search;
mod structural;

use thiserror::Error;

pub use proof::{Proof, RuleName};
pub use search::Searcher;
pub use structural::{structural_rules, CutSite, LeftSite, StructuralRules};

use crate::base::{BaseError, BaseLogic};
use crate::syntax::{canonicalize, subtype, Formula, GTerm, Occurrence, Regime, Sequent, SyntaxError};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SearchConfig {
    pub regime: Regime,
    pub allow_cut: bool,
    /// Maximum number of nested cuts on any branch; ignored without cut.
    pub cut_depth_bound: usize,
    pub memoize: bool,
}

impl SearchConfig {
    pub fn cut_free(regime: Regime) -> Self {
        SearchConfig {
            regime,
            allow_cut: false,
            cut_depth_bound: 0,
            memoize: true,
        }
    }

    pub fn with_cut(regime: Regime, cut_depth_bound: usize) -> Self {
        SearchConfig {
            regime,
            allow_cut: true,
            cut_depth_bound,
            memoize: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProverError {
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("invalid {rule} step concluding `{conclusion}`: {reason}")]
    Invalid {
        rule: RuleName,
        conclusion: String,
        reason: String,
    },
    #[error("admissibility violation: `{0}` is not derivable")]
    Admissibility(String),
}

/// Searches for a proof of `s`. `Ok(None)` means not provable (with cut
/// only up to the configured depth).
pub fn prove(s: &Sequent, cfg: &SearchConfig, base: &dyn BaseLogic) -> Result<Option<Proof>, BaseError> {
    Searcher::new(*cfg, base).prove(s)
}

/// As [`prove`], with cut formulae drawn from the subformula closure of
/// `s` and nested at most `cfg.cut_depth_bound` deep.
pub fn prove_with_cut(s: &Sequent, cfg: &SearchConfig, base: &dyn BaseLogic) -> Result<Option<Proof>, BaseError> {
    let cfg = SearchConfig { allow_cut: true, ..*cfg };
    Searcher::new(cfg, base).prove(s)
}

fn same(a: &GTerm, b: &GTerm, regime: Regime) -> bool {
    canonicalize(a, regime) == canonicalize(b, regime)
}

/// Checks every node of `p` against its rule schema, with antecedents
/// compared modulo the regime's structural rules.
pub fn validate(p: &Proof, regime: Regime, base: &dyn BaseLogic) -> Result<(), ProverError> {
    let mut stack = vec![p];
    while let Some(node) = stack.pop() {
        check_node(node, regime, base)?;
        stack.extend(node.premises.iter());
    }
    Ok(())
}

fn check_node(p: &Proof, regime: Regime, base: &dyn BaseLogic) -> Result<(), ProverError> {
    let fail = |reason: &str| ProverError::Invalid {
        rule: p.rule,
        conclusion: p.conclusion.display_in(regime),
        reason: reason.to_string(),
    };
    let arity = |n: usize| {
        if p.premises.len() == n {
            Ok(())
        } else {
            Err(fail(&format!("expected {n} premise(s), found {}", p.premises.len())))
        }
    };
    let site = || p.site.as_deref().ok_or_else(|| fail("missing site"));
    let u = &p.conclusion.antecedent;
    let c = &p.conclusion.succedent;

    match p.rule {
        RuleName::Ax => {
            arity(0)?;
            let (GTerm::Leaf(Formula::Basic(b1)), Formula::Basic(b2)) = (u, c) else {
                return Err(fail("axioms relate two basic types"));
            };
            if !base.entails_bool(&b1.erased(), &b2.erased())? {
                return Err(fail("side condition b1 ⪯ b2 fails"));
            }
        }
        RuleName::SlashR | RuleName::BackslashR => {
            arity(1)?;
            let q = &p.premises[0].conclusion;
            let expected = match (p.rule, c) {
                (RuleName::SlashR, Formula::Over(a, b)) => (GTerm::node(u.clone(), GTerm::Leaf((**b).clone())), a),
                (RuleName::BackslashR, Formula::Under(b, a)) => (GTerm::node(GTerm::Leaf((**b).clone()), u.clone()), a),
                _ => return Err(fail("succedent has the wrong connective")),
            };
            if !same(&q.antecedent, &expected.0, regime) || q.succedent != **expected.1 {
                return Err(fail("premise does not match"));
            }
        }
        RuleName::SlashL | RuleName::BackslashL => {
            arity(2)?;
            let path = site()?;
            let GTerm::Node(l, r) = u.at(path)? else {
                return Err(fail("site is not a ⊙ node"));
            };
            let (functor, v) = if p.rule == RuleName::SlashL { (l, r) } else { (r, l) };
            let (result, arg) = match (p.rule, functor.as_leaf()) {
                (RuleName::SlashL, Some(Formula::Over(a, b))) | (RuleName::BackslashL, Some(Formula::Under(b, a))) => {
                    (a, b)
                }
                _ => return Err(fail("no functor of the right shape at the site")),
            };
            let (q1, q2) = (&p.premises[0].conclusion, &p.premises[1].conclusion);
            if !same(&q1.antecedent, v, regime) || &q1.succedent != &**arg {
                return Err(fail("argument premise does not match"));
            }
            let rest = u.replace(path, GTerm::Leaf((**result).clone()))?;
            if !same(&q2.antecedent, &rest, regime) || &q2.succedent != c {
                return Err(fail("context premise does not match"));
            }
        }
        RuleName::Cut => {
            arity(2)?;
            let path = site()?;
            let v = u.at(path)?;
            let (q1, q2) = (&p.premises[0].conclusion, &p.premises[1].conclusion);
            if !same(&q1.antecedent, v, regime) {
                return Err(fail("left premise does not match the cut site"));
            }
            let rest = u.replace(path, GTerm::Leaf(q1.succedent.clone()))?;
            if !same(&q2.antecedent, &rest, regime) || &q2.succedent != c {
                return Err(fail("right premise does not match"));
            }
        }
        RuleName::StrengthenL => {
            arity(1)?;
            let path = site()?;
            let q = &p.premises[0].conclusion;
            let (Some(a), Ok(Some(b))) = (u.at(path)?.as_leaf(), q.antecedent.at(path).map(GTerm::as_leaf)) else {
                return Err(fail("site is not a formula in both sequents"));
            };
            let rest = u.replace(path, GTerm::Leaf(b.clone()))?;
            if rest != q.antecedent || &q.succedent != c {
                return Err(fail("premise differs outside the site"));
            }
            if !subtype(a, b, base)? {
                return Err(fail("strengthened formula is not a subtype"));
            }
        }
        RuleName::WeakenR => {
            arity(1)?;
            let q = &p.premises[0].conclusion;
            if !same(&q.antecedent, u, regime) {
                return Err(fail("antecedents differ"));
            }
            if !subtype(&q.succedent, c, base)? {
                return Err(fail("weakened formula is not a supertype"));
            }
        }
        RuleName::Coord => {
            arity(2)?;
            let GTerm::Node(l, r) = u else {
                return Err(fail("coordination joins two conjuncts"));
            };
            for (q, part) in p.premises.iter().zip([l, r]) {
                if !same(&q.conclusion.antecedent, part, regime) || &q.conclusion.succedent != c {
                    return Err(fail("conjunct does not derive the coordinated type"));
                }
            }
        }
    }
    Ok(())
}

/// The derived rule strengthen-L: from a proof `p` of `U[B] ⇒ C` and
/// `A ⪯ B`, a proof of `U[A] ⇒ C` found by fresh cut-free search.
pub fn check_strengthen_l(
    p: &Proof,
    occ: &Occurrence,
    a: &Formula,
    regime: Regime,
    base: &dyn BaseLogic,
) -> Result<Proof, ProverError> {
    let s = &p.conclusion;
    let b = s.antecedent.at(occ)?.as_leaf().ok_or_else(|| {
        ProverError::Syntax(SyntaxError::InvalidPath("strengthening needs a formula position".into()))
    })?;
    if !subtype(a, b, base)? {
        return Err(ProverError::Invalid {
            rule: RuleName::StrengthenL,
            conclusion: s.display_in(regime),
            reason: format!("{a} is not a subtype of {b}"),
        });
    }
    let target = Sequent::new(s.antecedent.replace(occ, GTerm::Leaf(a.clone()))?, s.succedent.clone());
    prove(&target, &SearchConfig::cut_free(regime), base)?
        .ok_or_else(|| ProverError::Admissibility(target.display_in(regime)))
}

/// The derived rule weaken-R: from a proof of `U ⇒ A` and `A ⪯ B`, a proof
/// of `U ⇒ B` found by fresh cut-free search.
pub fn check_weaken_r(p: &Proof, b: &Formula, regime: Regime, base: &dyn BaseLogic) -> Result<Proof, ProverError> {
    let s = &p.conclusion;
    if !subtype(&s.succedent, b, base)? {
        return Err(ProverError::Invalid {
            rule: RuleName::WeakenR,
            conclusion: s.display_in(regime),
            reason: format!("{} is not a subtype of {b}", s.succedent),
        });
    }
    let target = Sequent::new(s.antecedent.clone(), b.clone());
    prove(&target, &SearchConfig::cut_free(regime), base)?
        .ok_or_else(|| ProverError::Admissibility(target.display_in(regime)))
}

/// Subtyping is derivability: for `A ⪯ B`, a proof of `A ⇒ B`.
pub fn check_subtype_derivable(a: &Formula, b: &Formula, regime: Regime, base: &dyn BaseLogic) -> Result<Proof, ProverError> {
    let target = Sequent::new(GTerm::Leaf(a.clone()), b.clone());
    if !subtype(a, b, base)? {
        return Err(ProverError::Invalid {
            rule: RuleName::WeakenR,
            conclusion: target.display_in(regime),
            reason: format!("{a} is not a subtype of {b}"),
        });
    }
    prove(&target, &SearchConfig::cut_free(regime), base)?
        .ok_or_else(|| ProverError::Admissibility(target.display_in(regime)))
}

/// A one-step derivation applying strengthen-L on top of `p`, for
/// rendering and checking the derived rule itself.
pub fn strengthen_l_node(p: Proof, occ: &Occurrence, a: &Formula) -> Result<Proof, ProverError> {
    let s = &p.conclusion;
    let antecedent = s.antecedent.replace(occ, GTerm::Leaf(a.clone()))?;
    Ok(Proof {
        rule: RuleName::StrengthenL,
        conclusion: Sequent::new(antecedent, s.succedent.clone()),
        site: Some(occ.clone()),
        premises: vec![p],
    })
}

/// A one-step derivation applying weaken-R on top of `p`.
pub fn weaken_r_node(p: Proof, b: &Formula) -> Proof {
    Proof {
        rule: RuleName::WeakenR,
        conclusion: Sequent::new(p.conclusion.antecedent.clone(), b.clone()),
        site: None,
        premises: vec![p],
    }
}
