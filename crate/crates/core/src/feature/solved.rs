use std::fmt;

use super::graph::FeatureGraph;
use super::term::FeatureTerm;

/// `x = a`, `x = ⊤`, `x = ⊥`, or `x = f : y`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SimpleConstraint {
    EqAtom { var: String, atom: String },
    EqTop { var: String },
    EqBottom { var: String },
    EqFeat { var: String, feature: String, target: String },
}

impl SimpleConstraint {
    pub fn subject(&self) -> &str {
        match self {
            SimpleConstraint::EqAtom { var, .. }
            | SimpleConstraint::EqTop { var }
            | SimpleConstraint::EqBottom { var }
            | SimpleConstraint::EqFeat { var, .. } => var,
        }
    }

    pub fn atom(var: &str, atom: &str) -> Self {
        SimpleConstraint::EqAtom {
            var: var.into(),
            atom: atom.into(),
        }
    }

    pub fn feat(var: &str, feature: &str, target: &str) -> Self {
        SimpleConstraint::EqFeat {
            var: var.into(),
            feature: feature.into(),
            target: target.into(),
        }
    }

    pub fn top(var: &str) -> Self {
        SimpleConstraint::EqTop { var: var.into() }
    }
}

impl fmt::Display for SimpleConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleConstraint::EqAtom { var, atom } => write!(f, "{var} = {atom}"),
            SimpleConstraint::EqTop { var } => write!(f, "{var} = ⊤"),
            SimpleConstraint::EqBottom { var } => write!(f, "{var} = ⊥"),
            SimpleConstraint::EqFeat { var, feature, target } => write!(f, "{var} = {feature} : {target}"),
        }
    }
}

/// `∃ bound (c1 & ... & cn)` describing `root`. Features are functional,
/// there are no atom clashes and no `x = ⊥`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SolvedForm {
    pub root: String,
    pub bound: Vec<String>,
    pub constraints: Vec<SimpleConstraint>,
}

impl fmt::Display for SolvedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.bound.is_empty() {
            write!(f, "∃{} ", self.bound.join(" "))?;
        }
        let body: Vec<String> = self.constraints.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", body.join(" & "))
    }
}

/// Outcome marker for an unsatisfiable constraint.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Inconsistent;

impl fmt::Display for Inconsistent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Inconsistent")
    }
}

/// Normal form of `x = φ`; fresh variables are `y0, y1, ...`.
///
/// Variables other than `x` that occur free in `φ` are treated as
/// existentially closed over the term.
pub fn normalize(x: &str, phi: &FeatureTerm) -> Result<SolvedForm, Inconsistent> {
    normalize_with_prefix(x, phi, "y")
}

pub(crate) fn normalize_with_prefix(x: &str, phi: &FeatureTerm, prefix: &str) -> Result<SolvedForm, Inconsistent> {
    let mut g = FeatureGraph::new();
    let root = g.var_node(x);
    g.add_term(root, phi).map_err(|_| Inconsistent)?;
    Ok(g.solved_form(root, x, prefix))
}
