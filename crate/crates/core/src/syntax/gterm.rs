use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::formula::{Formula, Step};
use super::SyntaxError;

/// Structured antecedent built with the binary connective ⊙. Never empty.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum GTerm {
    Leaf(Formula),
    Node(Arc<GTerm>, Arc<GTerm>),
}

impl GTerm {
    pub fn leaf(f: Formula) -> Self {
        GTerm::Leaf(f)
    }

    pub fn node(l: GTerm, r: GTerm) -> Self {
        GTerm::Node(Arc::new(l), Arc::new(r))
    }

    /// Right-nested `a ⊙ (b ⊙ (c ⊙ ...))`. Panics on an empty list, which
    /// would be an empty antecedent.
    pub fn list(items: Vec<GTerm>) -> Self {
        let mut it = items.into_iter().rev();
        let mut acc = it.next().expect("G-terms are nonempty");
        for x in it {
            acc = GTerm::node(x, acc);
        }
        acc
    }

    pub fn from_formulas(fs: impl IntoIterator<Item = Formula>) -> Self {
        GTerm::list(fs.into_iter().map(GTerm::Leaf).collect())
    }

    /// Path of the `index`-th element in a right-nested list of `len` items.
    pub fn list_site(index: usize, len: usize) -> Vec<Step> {
        let mut path = vec![Step::Right; index];
        if index + 1 < len {
            path.push(Step::Left);
        }
        path
    }

    pub fn as_leaf(&self) -> Option<&Formula> {
        match self {
            GTerm::Leaf(f) => Some(f),
            GTerm::Node(..) => None,
        }
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                GTerm::Leaf(f) => out.push(f),
                GTerm::Node(l, r) => {
                    stack.push(r);
                    stack.push(l);
                }
            }
        }
        out
    }

    pub fn connectives(&self) -> usize {
        self.leaves().iter().map(|f| f.connectives()).sum()
    }

    pub fn len(&self) -> usize {
        match self {
            GTerm::Leaf(_) => 1,
            GTerm::Node(l, r) => l.len() + r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn at(&self, path: &[Step]) -> Result<&GTerm, SyntaxError> {
        let mut cur = self;
        for step in path {
            cur = match (cur, step) {
                (GTerm::Node(l, _), Step::Left) => l,
                (GTerm::Node(_, r), Step::Right) => r,
                _ => {
                    return Err(SyntaxError::InvalidPath(format!(
                        "{step:?} below G-term {cur}"
                    )))
                }
            };
        }
        Ok(cur)
    }

    /// `U[X]` with the occurrence at `path` replaced by `with`.
    pub fn replace(&self, path: &[Step], with: GTerm) -> Result<GTerm, SyntaxError> {
        match (self, path.split_first()) {
            (_, None) => Ok(with),
            (GTerm::Node(l, r), Some((Step::Left, rest))) => {
                Ok(GTerm::Node(Arc::new(l.replace(rest, with)?), r.clone()))
            }
            (GTerm::Node(l, r), Some((Step::Right, rest))) => {
                Ok(GTerm::Node(l.clone(), Arc::new(r.replace(rest, with)?)))
            }
            (_, Some((step, _))) => Err(SyntaxError::InvalidPath(format!(
                "{step:?} below G-term {self}"
            ))),
        }
    }

    /// Swaps the two children of the node at `path`.
    pub fn swap_at(&self, path: &[Step]) -> Result<GTerm, SyntaxError> {
        match self.at(path)? {
            GTerm::Node(l, r) => self.replace(path, GTerm::Node(r.clone(), l.clone())),
            GTerm::Leaf(_) => Err(SyntaxError::InvalidPath("swap at a leaf".into())),
        }
    }

    /// All node and leaf positions, preorder.
    pub fn positions(&self) -> Vec<Vec<Step>> {
        let mut out = Vec::new();
        let mut stack = vec![(self, Vec::new())];
        while let Some((t, path)) = stack.pop() {
            if let GTerm::Node(l, r) = t {
                let mut rp = path.clone();
                rp.push(Step::Right);
                stack.push((r, rp));
                let mut lp = path.clone();
                lp.push(Step::Left);
                stack.push((l, lp));
            }
            out.push(path);
        }
        out
    }

    pub fn map_formulas(&self, f: &mut impl FnMut(&Formula) -> Formula) -> GTerm {
        match self {
            GTerm::Leaf(x) => GTerm::Leaf(f(x)),
            GTerm::Node(l, r) => GTerm::node(l.map_formulas(f), r.map_formulas(f)),
        }
    }

    pub fn erase(&self) -> GTerm {
        self.map_formulas(&mut |f| f.erase())
    }

    /// Renders in the regime's natural notation: flat lists for the
    /// associative regimes, bracketed trees otherwise.
    pub fn display_in(&self, regime: Regime) -> String {
        if regime.is_associative() {
            self.leaves().iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ")
        } else {
            match self {
                GTerm::Leaf(f) => f.to_string(),
                GTerm::Node(l, r) => format!("{}, {}", l.nested(), r.nested()),
            }
        }
    }

    fn nested(&self) -> String {
        match self {
            GTerm::Leaf(f) => f.to_string(),
            GTerm::Node(l, r) => format!("({}, {})", l.nested(), r.nested()),
        }
    }
}

impl fmt::Display for GTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in(Regime::NL))
    }
}

/// Which structural rules are folded into G-term identity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Regime {
    NL,
    L,
    LP,
    NLP,
}

impl Regime {
    pub const ALL: [Regime; 4] = [Regime::NL, Regime::L, Regime::LP, Regime::NLP];

    pub fn is_associative(self) -> bool {
        matches!(self, Regime::L | Regime::LP)
    }

    pub fn is_commutative(self) -> bool {
        matches!(self, Regime::LP | Regime::NLP)
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::NL => "NL",
            Regime::L => "L",
            Regime::LP => "LP",
            Regime::NLP => "NLP",
        };
        f.write_str(s)
    }
}

impl FromStr for Regime {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "NL" => Ok(Regime::NL),
            "L" => Ok(Regime::L),
            "LP" => Ok(Regime::LP),
            "NLP" => Ok(Regime::NLP),
            other => Err(SyntaxError::UnknownRegime(other.to_string())),
        }
    }
}

/// Normal form of a G-term modulo a regime's structural rules. Two G-terms
/// are regime-equivalent iff their canonical forms are equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CanonicalGTerm {
    /// NL: the tree itself; NLP: the tree with every node's children sorted.
    Tree(GTerm),
    /// L: the leaf sequence.
    Seq(Vec<Formula>),
    /// LP: the sorted leaf multiset.
    Bag(Vec<Formula>),
}

pub fn canonicalize(u: &GTerm, regime: Regime) -> CanonicalGTerm {
    match regime {
        Regime::NL => CanonicalGTerm::Tree(u.clone()),
        Regime::L => CanonicalGTerm::Seq(u.leaves().into_iter().cloned().collect()),
        Regime::LP => {
            let mut v: Vec<Formula> = u.leaves().into_iter().cloned().collect();
            v.sort();
            CanonicalGTerm::Bag(v)
        }
        Regime::NLP => CanonicalGTerm::Tree(sort_children(u)),
    }
}

fn sort_children(u: &GTerm) -> GTerm {
    match u {
        GTerm::Leaf(_) => u.clone(),
        GTerm::Node(l, r) => {
            let (l, r) = (sort_children(l), sort_children(r));
            if r < l {
                GTerm::node(r, l)
            } else {
                GTerm::node(l, r)
            }
        }
    }
}

impl CanonicalGTerm {
    /// A G-term that canonicalizes back to `self`.
    pub fn to_gterm(&self) -> GTerm {
        match self {
            CanonicalGTerm::Tree(t) => t.clone(),
            CanonicalGTerm::Seq(v) | CanonicalGTerm::Bag(v) => GTerm::from_formulas(v.iter().cloned()),
        }
    }
}

/// A sequent `U ⇒ A`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Sequent {
    pub antecedent: GTerm,
    pub succedent: Formula,
}

impl Sequent {
    pub fn new(antecedent: GTerm, succedent: Formula) -> Self {
        Sequent { antecedent, succedent }
    }

    pub fn connectives(&self) -> usize {
        self.antecedent.connectives() + self.succedent.connectives()
    }

    pub fn display_in(&self, regime: Regime) -> String {
        format!("{} ⇒ {}", self.antecedent.display_in(regime), self.succedent)
    }

    pub fn erase(&self) -> Sequent {
        Sequent::new(self.antecedent.erase(), self.succedent.erase())
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⇒ {}", self.antecedent, self.succedent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf(s: &str) -> GTerm {
        GTerm::Leaf(Formula::basic(s))
    }

    fn left3() -> GTerm {
        GTerm::node(GTerm::node(leaf("a"), leaf("b")), leaf("c"))
    }

    fn right3() -> GTerm {
        GTerm::node(leaf("a"), GTerm::node(leaf("b"), leaf("c")))
    }

    #[test]
    fn associative_flattening() {
        assert_eq!(canonicalize(&left3(), Regime::L), canonicalize(&right3(), Regime::L));
        assert_eq!(
            canonicalize(&left3(), Regime::L),
            CanonicalGTerm::Seq(vec![Formula::basic("a"), Formula::basic("b"), Formula::basic("c")])
        );
        assert_ne!(canonicalize(&left3(), Regime::NL), canonicalize(&right3(), Regime::NL));
    }

    #[test]
    fn nlp_commutes_but_does_not_associate() {
        let ab = GTerm::node(leaf("a"), leaf("b"));
        let ba = GTerm::node(leaf("b"), leaf("a"));
        assert_eq!(canonicalize(&ab, Regime::NLP), canonicalize(&ba, Regime::NLP));
        assert_ne!(canonicalize(&left3(), Regime::NLP), canonicalize(&right3(), Regime::NLP));
        assert_ne!(canonicalize(&ab, Regime::NL), canonicalize(&ba, Regime::NL));
        assert_eq!(canonicalize(&left3(), Regime::LP), canonicalize(&GTerm::node(leaf("c"), GTerm::node(leaf("b"), leaf("a"))), Regime::LP));
    }

    #[test]
    fn replace_and_at() {
        let t = right3();
        assert_eq!(t.at(&[Step::Right, Step::Left]).unwrap(), &leaf("b"));
        let t2 = t.replace(&[Step::Right], leaf("d")).unwrap();
        assert_eq!(t2, GTerm::node(leaf("a"), leaf("d")));
        assert!(t.at(&[Step::Left, Step::Left]).is_err());
    }

    #[test]
    fn list_sites() {
        let items: Vec<GTerm> = ["a", "b", "c"].iter().map(|s| leaf(s)).collect();
        let t = GTerm::list(items.clone());
        for (i, it) in items.iter().enumerate() {
            assert_eq!(t.at(&GTerm::list_site(i, 3)).unwrap(), it);
        }
        assert_eq!(GTerm::list_site(0, 1), Vec::<Step>::new());
    }
}
