//! Entailment checking by guard simplification.
//!
//! The context is the normalized left formula with its existential prefix
//! dropped; the guard is the normalized right formula. Guard constraints are
//! cancelled against the context (SAtom, SFeat), and guard existentials are
//! bound to context variables through shared features (SFeatExist). When
//! no rule applies, the residual guard is inspected.

use std::collections::{HashMap, HashSet, VecDeque};

use super::solved::{normalize_with_prefix, SimpleConstraint, SolvedForm};
use super::term::FeatureTerm;
use super::FeatureError;
use crate::base::Verdict;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RuleApplication {
    SAtom,
    SFeat,
    SFeatExist,
}

#[derive(Clone, Debug)]
pub struct EntailReport {
    pub verdict: Verdict,
    /// Rule applications in the order they fired.
    pub trace: Vec<RuleApplication>,
    /// Guard constraints left after simplification, with substitutions
    /// applied (`⊤` constraints omitted).
    pub residual: Vec<SimpleConstraint>,
    pub guard_size: usize,
    pub context_size: usize,
}

#[derive(Default)]
struct ContextNode<'a> {
    atom: Option<&'a str>,
    feats: HashMap<&'a str, &'a str>,
}

/// Decides `φ ⊨ ψ` for consistent `φ`, `ψ`.
pub fn entail_check(phi: &FeatureTerm, psi: &FeatureTerm) -> Result<Verdict, FeatureError> {
    Ok(entail_report(phi, psi)?.verdict)
}

pub fn entail_report(phi: &FeatureTerm, psi: &FeatureTerm) -> Result<EntailReport, FeatureError> {
    let context = normalize_with_prefix("x", phi, "x")
        .map_err(|_| FeatureError::InconsistentInput(phi.to_string()))?;
    let guard = normalize_with_prefix("x", psi, "y")
        .map_err(|_| FeatureError::InconsistentInput(psi.to_string()))?;
    Ok(entail_solved(&context, &guard))
}

/// Runs the simplification on already-normalized forms. Both must share
/// the root variable, and the guard's bound variables must not occur in
/// the context.
pub fn entail_solved(context: &SolvedForm, guard: &SolvedForm) -> EntailReport {
    debug_assert_eq!(context.root, guard.root);
    let mut ctx: HashMap<&str, ContextNode<'_>> = HashMap::new();
    for c in &context.constraints {
        let node = ctx.entry(c.subject()).or_default();
        match c {
            SimpleConstraint::EqAtom { atom, .. } => node.atom = Some(atom),
            SimpleConstraint::EqFeat { feature, target, .. } => {
                node.feats.insert(feature, target);
            }
            _ => {}
        }
    }

    let cs: Vec<&SimpleConstraint> = guard
        .constraints
        .iter()
        .filter(|c| !matches!(c, SimpleConstraint::EqTop { .. }))
        .collect();
    let mut existential: HashSet<&str> = guard.bound.iter().map(String::as_str).collect();
    let mut subst: HashMap<&str, &str> = HashMap::new();
    let resolve = |subst: &HashMap<&str, &str>, v: &'_ str| -> String {
        subst.get(v).map(|s| s.to_string()).unwrap_or_else(|| v.to_string())
    };

    let mut trace = Vec::new();
    let mut cancelled = vec![false; cs.len()];
    let mut pending: VecDeque<usize> = (0..cs.len()).collect();
    let mut waiting: HashMap<&str, Vec<usize>> = HashMap::new();
    let mut exist_queue: VecDeque<usize> = VecDeque::new();

    loop {
        // SAtom / SFeat eagerly
        while let Some(i) = pending.pop_front() {
            let subj = resolve(&subst, cs[i].subject());
            if let Some(&v) = existential.get(subj.as_str()) {
                waiting.entry(v).or_default().push(i);
                continue;
            }
            let node = ctx.get(subj.as_str());
            match cs[i] {
                SimpleConstraint::EqAtom { atom, .. } => {
                    if node.and_then(|n| n.atom) == Some(atom.as_str()) {
                        cancelled[i] = true;
                        trace.push(RuleApplication::SAtom);
                    }
                }
                SimpleConstraint::EqFeat { feature, target, .. } => {
                    let Some(&y) = node.and_then(|n| n.feats.get(feature.as_str())) else {
                        continue;
                    };
                    let t = resolve(&subst, target);
                    if t == y {
                        cancelled[i] = true;
                        trace.push(RuleApplication::SFeat);
                    } else if existential.contains(t.as_str()) {
                        exist_queue.push_back(i);
                    }
                }
                _ => {}
            }
        }

        // one SFeatExist, then back to cancellation
        let Some(i) = exist_queue.pop_front() else { break };
        let SimpleConstraint::EqFeat { var, feature, target } = cs[i] else {
            unreachable!("only feature constraints are queued")
        };
        let subj = resolve(&subst, var);
        let y = ctx[subj.as_str()].feats[feature.as_str()];
        let t = resolve(&subst, target);
        if t == y {
            cancelled[i] = true;
            trace.push(RuleApplication::SFeat);
            continue;
        }
        let Some(&yi) = existential.get(t.as_str()) else {
            continue;
        };
        existential.remove(yi);
        subst.insert(yi, y);
        trace.push(RuleApplication::SFeatExist);
        // the rewritten constraint now reads var = feature : y
        cancelled[i] = true;
        trace.push(RuleApplication::SFeat);
        if let Some(woken) = waiting.remove(yi) {
            pending.extend(woken);
        }
    }

    let residual: Vec<SimpleConstraint> = cs
        .iter()
        .enumerate()
        .filter(|(i, _)| !cancelled[*i])
        .map(|(_, c)| apply(c, &|v| resolve(&subst, v)))
        .collect();

    let verdict = if residual.is_empty() {
        Verdict::Entailed
    } else if residual.iter().any(|c| clashes(c, &ctx)) {
        Verdict::Disentailed
    } else {
        Verdict::Blocked
    };

    EntailReport {
        verdict,
        trace,
        residual,
        guard_size: guard.constraints.len(),
        context_size: context.constraints.len(),
    }
}

fn apply(c: &SimpleConstraint, r: &impl Fn(&str) -> String) -> SimpleConstraint {
    match c {
        SimpleConstraint::EqAtom { var, atom } => SimpleConstraint::EqAtom {
            var: r(var),
            atom: atom.clone(),
        },
        SimpleConstraint::EqTop { var } => SimpleConstraint::EqTop { var: r(var) },
        SimpleConstraint::EqBottom { var } => SimpleConstraint::EqBottom { var: r(var) },
        SimpleConstraint::EqFeat { var, feature, target } => SimpleConstraint::EqFeat {
            var: r(var),
            feature: feature.clone(),
            target: r(target),
        },
    }
}

/// Context `x = a` against guard `x = b` (a ≠ b) or `x = f : z`, or
/// context `x = f : z` against guard `x = a`.
fn clashes(c: &SimpleConstraint, ctx: &HashMap<&str, ContextNode<'_>>) -> bool {
    let Some(node) = ctx.get(c.subject()) else {
        return false;
    };
    match c {
        SimpleConstraint::EqAtom { atom, .. } => match node.atom {
            Some(a) => a != atom,
            None => !node.feats.is_empty(),
        },
        SimpleConstraint::EqFeat { .. } => node.atom.is_some(),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> FeatureTerm {
        FeatureTerm::parse(s).unwrap()
    }

    fn check(a: &str, b: &str) -> Verdict {
        entail_check(&t(a), &t(b)).unwrap()
    }

    #[test]
    fn worked_examples() {
        assert_eq!(check("cat:np & case:acc", "cat:np"), Verdict::Entailed);
        assert_eq!(check("cat:np & case:acc", "top"), Verdict::Entailed);
        assert_eq!(check("cat:np", "cat:vp"), Verdict::Disentailed);
        assert_eq!(check("cat:np", "case:acc"), Verdict::Blocked);
        assert_eq!(check("cat:np", "cat:np & case:acc"), Verdict::Blocked);
    }

    #[test]
    fn atom_feature_clashes_both_ways() {
        assert_eq!(check("f:a", "f:g:b"), Verdict::Disentailed);
        assert_eq!(check("f:g:b", "f:a"), Verdict::Disentailed);
        assert_eq!(check("a", "b"), Verdict::Disentailed);
        assert_eq!(check("a", "a"), Verdict::Entailed);
    }

    #[test]
    fn reentrancy() {
        // context shares, guard asks for sharing
        assert_eq!(check("exists X (f:X & g:X)", "exists Y (f:Y & g:Y)"), Verdict::Entailed);
        // context does not force sharing
        assert_eq!(check("f:top & g:top", "exists Y (f:Y & g:Y)"), Verdict::Blocked);
        // sharing is more specific than no sharing
        assert_eq!(check("exists X (f:X & g:X)", "f:top & g:top"), Verdict::Entailed);
        // cyclic context
        assert_eq!(check("exists X (X & f:X)", "f:f:f:top"), Verdict::Entailed);
    }

    #[test]
    fn deep_substitution_and_trace() {
        let r = entail_report(&t("f:g:a & h:b"), &t("f:g:a")).unwrap();
        assert_eq!(r.verdict, Verdict::Entailed);
        assert!(r.residual.is_empty());
        assert!(r.trace.len() <= r.guard_size * (r.context_size + 1));
        assert!(r.trace.contains(&RuleApplication::SFeatExist));
    }

    #[test]
    fn inconsistent_inputs_are_rejected() {
        assert!(matches!(
            entail_check(&t("f:a & f:b"), &t("top")),
            Err(FeatureError::InconsistentInput(_))
        ));
    }

    #[test]
    fn unconnected_existentials_are_vacuous() {
        assert_eq!(check("cat:np", "exists Y (cat:np & Y & top)"), Verdict::Entailed);
    }
}
