//! Regime strategies: where a left rule or a cut may apply in a G-term.
//!
//! Each site comes with a *presented* antecedent, a regime-equivalent
//! rebracketing or reordering in which the chosen sub-G-term is an actual
//! subterm at `path`. Proof nodes record the presented form, so every
//! rule application can be checked against the schemata by path.

use std::collections::HashSet;

use super::RuleName;
use crate::syntax::{canonicalize, CanonicalGTerm, Formula, GTerm, Occurrence, Regime};

/// A place where `/L` or `\L` applies.
#[derive(Clone, Debug)]
pub struct LeftSite {
    pub rule: RuleName,
    pub presented: GTerm,
    /// Path of `A/B ⊙ V` (or `V ⊙ B\A`) in `presented`.
    pub path: Occurrence,
    /// The functor `A/B` or `B\A`.
    pub functor: Formula,
    /// The argument structure `V`.
    pub argument: GTerm,
}

/// A sub-G-term that a cut may replace.
#[derive(Clone, Debug)]
pub struct CutSite {
    pub presented: GTerm,
    pub path: Occurrence,
    pub part: GTerm,
}

/// How a regime's structural rules shape proof search.
pub trait StructuralRules: Send + Sync {
    fn regime(&self) -> Regime;

    /// All left-rule applications on `u`, left to right.
    fn left_sites(&self, u: &GTerm) -> Vec<LeftSite>;

    /// All sub-G-terms of `u` up to the regime's structural identity.
    fn cut_sites(&self, u: &GTerm) -> Vec<CutSite>;
}

/// The strategy object for a regime.
pub fn structural_rules(regime: Regime) -> &'static dyn StructuralRules {
    match regime {
        Regime::NL => &NonAssociative,
        Regime::L => &Associative,
        Regime::LP => &AssociativeCommutative,
        Regime::NLP => &Commutative,
    }
}

fn functor_rule(f: &Formula) -> Option<RuleName> {
    match f {
        Formula::Over(..) => Some(RuleName::SlashL),
        Formula::Under(..) => Some(RuleName::BackslashL),
        Formula::Basic(_) => None,
    }
}

fn redex(rule: RuleName, functor: &Formula, argument: &GTerm) -> GTerm {
    let f = GTerm::Leaf(functor.clone());
    match rule {
        RuleName::SlashL => GTerm::node(f, argument.clone()),
        _ => GTerm::node(argument.clone(), f),
    }
}

fn leaves_of(fs: &[Formula]) -> Vec<GTerm> {
    fs.iter().cloned().map(GTerm::Leaf).collect()
}

/// `items` with `items[i..=j]` grouped into one sub-G-term; returns the
/// presented list and the group's path.
fn group(items: &[Formula], i: usize, j: usize, grouped: GTerm) -> (GTerm, Occurrence) {
    let mut parts = leaves_of(&items[..i]);
    let index = parts.len();
    parts.push(grouped);
    parts.extend(leaves_of(&items[j + 1..]));
    let len = parts.len();
    (GTerm::list(parts), GTerm::list_site(index, len))
}

/// NL: no structural rules; sites are literal subterms.
pub struct NonAssociative;

impl StructuralRules for NonAssociative {
    fn regime(&self) -> Regime {
        Regime::NL
    }

    fn left_sites(&self, u: &GTerm) -> Vec<LeftSite> {
        tree_left_sites(u, false)
    }

    fn cut_sites(&self, u: &GTerm) -> Vec<CutSite> {
        tree_cut_sites(u)
    }
}

/// NLP: trees whose nodes may swap their children.
pub struct Commutative;

impl StructuralRules for Commutative {
    fn regime(&self) -> Regime {
        Regime::NLP
    }

    fn left_sites(&self, u: &GTerm) -> Vec<LeftSite> {
        tree_left_sites(u, true)
    }

    fn cut_sites(&self, u: &GTerm) -> Vec<CutSite> {
        tree_cut_sites(u)
    }
}

fn tree_left_sites(u: &GTerm, commutative: bool) -> Vec<LeftSite> {
    let mut out = Vec::new();
    for path in u.positions() {
        let GTerm::Node(l, r) = u.at(&path).expect("position from positions()") else {
            continue;
        };
        if let Some(f @ Formula::Over(..)) = l.as_leaf() {
            out.push(LeftSite {
                rule: RuleName::SlashL,
                presented: u.clone(),
                path: path.clone(),
                functor: f.clone(),
                argument: (**r).clone(),
            });
        }
        if let Some(f @ Formula::Under(..)) = r.as_leaf() {
            out.push(LeftSite {
                rule: RuleName::BackslashL,
                presented: u.clone(),
                path: path.clone(),
                functor: f.clone(),
                argument: (**l).clone(),
            });
        }
        if commutative {
            let swapped = || u.swap_at(&path).expect("node position");
            if let Some(f @ Formula::Over(..)) = r.as_leaf() {
                out.push(LeftSite {
                    rule: RuleName::SlashL,
                    presented: swapped(),
                    path: path.clone(),
                    functor: f.clone(),
                    argument: (**l).clone(),
                });
            }
            if let Some(f @ Formula::Under(..)) = l.as_leaf() {
                out.push(LeftSite {
                    rule: RuleName::BackslashL,
                    presented: swapped(),
                    path: path.clone(),
                    functor: f.clone(),
                    argument: (**r).clone(),
                });
            }
        }
    }
    out
}

fn tree_cut_sites(u: &GTerm) -> Vec<CutSite> {
    u.positions()
        .into_iter()
        .map(|path| CutSite {
            part: u.at(&path).expect("position from positions()").clone(),
            presented: u.clone(),
            path,
        })
        .collect()
}

/// L: antecedents are sequences; sites are contiguous ranges.
pub struct Associative;

impl StructuralRules for Associative {
    fn regime(&self) -> Regime {
        Regime::L
    }

    fn left_sites(&self, u: &GTerm) -> Vec<LeftSite> {
        let items: Vec<Formula> = u.leaves().into_iter().cloned().collect();
        let n = items.len();
        let mut out = Vec::new();
        for (i, f) in items.iter().enumerate() {
            match functor_rule(f) {
                Some(RuleName::SlashL) => {
                    for j in i + 1..n {
                        let argument = GTerm::list(leaves_of(&items[i + 1..=j]));
                        let (presented, path) = group(&items, i, j, redex(RuleName::SlashL, f, &argument));
                        out.push(LeftSite {
                            rule: RuleName::SlashL,
                            presented,
                            path,
                            functor: f.clone(),
                            argument,
                        });
                    }
                }
                Some(rule) => {
                    for j in (0..i).rev() {
                        let argument = GTerm::list(leaves_of(&items[j..i]));
                        let (presented, path) = group(&items, j, i, redex(rule, f, &argument));
                        out.push(LeftSite {
                            rule,
                            presented,
                            path,
                            functor: f.clone(),
                            argument,
                        });
                    }
                }
                None => {}
            }
        }
        out
    }

    fn cut_sites(&self, u: &GTerm) -> Vec<CutSite> {
        let items: Vec<Formula> = u.leaves().into_iter().cloned().collect();
        let n = items.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                let part = GTerm::list(leaves_of(&items[i..=j]));
                let (presented, path) = group(&items, i, j, part.clone());
                out.push(CutSite { presented, path, part });
            }
        }
        out
    }
}

/// LP: antecedents are multisets; sites are sub-multisets.
pub struct AssociativeCommutative;

/// Nonempty sub-multisets of `items` (by index subsets, deduplicated up to
/// equal formulae), each with its complement.
fn splits(items: &[Formula]) -> Vec<(Vec<Formula>, Vec<Formula>)> {
    let n = items.len();
    assert!(n < 24, "antecedent too large for sub-multiset enumeration");
    let mut seen: HashSet<(Vec<Formula>, Vec<Formula>)> = HashSet::new();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let (mut inside, mut outside) = (Vec::new(), Vec::new());
        for (k, f) in items.iter().enumerate() {
            if mask & (1 << k) != 0 {
                inside.push(f.clone());
            } else {
                outside.push(f.clone());
            }
        }
        inside.sort();
        outside.sort();
        if seen.insert((inside.clone(), outside.clone())) {
            out.push((inside, outside));
        }
    }
    out
}

impl StructuralRules for AssociativeCommutative {
    fn regime(&self) -> Regime {
        Regime::LP
    }

    fn left_sites(&self, u: &GTerm) -> Vec<LeftSite> {
        let CanonicalGTerm::Bag(items) = canonicalize(u, Regime::LP) else {
            unreachable!("LP canonical form is a bag")
        };
        let mut out = Vec::new();
        let mut done: HashSet<&Formula> = HashSet::new();
        for (i, f) in items.iter().enumerate() {
            let Some(rule) = functor_rule(f) else { continue };
            if !done.insert(f) {
                continue;
            }
            let mut others = items.clone();
            others.remove(i);
            for (inside, outside) in splits(&others) {
                let argument = GTerm::from_formulas(inside);
                let mut parts = vec![redex(rule, f, &argument)];
                parts.extend(leaves_of(&outside));
                let len = parts.len();
                out.push(LeftSite {
                    rule,
                    presented: GTerm::list(parts),
                    path: GTerm::list_site(0, len),
                    functor: f.clone(),
                    argument,
                });
            }
        }
        out
    }

    fn cut_sites(&self, u: &GTerm) -> Vec<CutSite> {
        let CanonicalGTerm::Bag(items) = canonicalize(u, Regime::LP) else {
            unreachable!("LP canonical form is a bag")
        };
        splits(&items)
            .into_iter()
            .map(|(inside, outside)| {
                let part = GTerm::from_formulas(inside);
                let mut parts = vec![part.clone()];
                parts.extend(leaves_of(&outside));
                let len = parts.len();
                CutSite {
                    presented: GTerm::list(parts),
                    path: GTerm::list_site(0, len),
                    part,
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse::parse_gterm;

    fn g(s: &str, r: Regime) -> GTerm {
        parse_gterm(s, r, false).unwrap()
    }

    fn check_sites(u: &GTerm, r: Regime) {
        let rules = structural_rules(r);
        assert_eq!(rules.regime(), r);
        for s in rules.left_sites(u) {
            assert_eq!(canonicalize(&s.presented, r), canonicalize(u, r));
            assert_eq!(s.presented.at(&s.path).unwrap(), &redex(s.rule, &s.functor, &s.argument));
        }
        for s in rules.cut_sites(u) {
            assert_eq!(canonicalize(&s.presented, r), canonicalize(u, r));
            assert_eq!(s.presented.at(&s.path).unwrap(), &s.part);
        }
    }

    #[test]
    fn associative_ranges() {
        let u = g("x, a/b, c, d", Regime::L);
        let sites = Associative.left_sites(&u);
        let args: Vec<String> = sites.iter().map(|s| s.argument.display_in(Regime::L)).collect();
        assert_eq!(args, ["c", "c, d"]);
        let u = g("x, y, b\\a", Regime::L);
        let args: Vec<String> = Associative
            .left_sites(&u)
            .iter()
            .map(|s| s.argument.display_in(Regime::L))
            .collect();
        assert_eq!(args, ["y", "x, y"]);
        assert_eq!(Associative.cut_sites(&g("a, b, c", Regime::L)).len(), 6);
        check_sites(&g("x, a/b, c, b\\d", Regime::L), Regime::L);
    }

    #[test]
    fn tree_sites() {
        let u = g("(a/b, c), b\\a", Regime::NL);
        let rules: Vec<RuleName> = NonAssociative.left_sites(&u).iter().map(|s| s.rule).collect();
        assert_eq!(rules, [RuleName::BackslashL, RuleName::SlashL]);
        let u = g("b\\a, b", Regime::NL);
        assert!(NonAssociative.left_sites(&u).is_empty());
        assert_eq!(Commutative.left_sites(&u).len(), 1);
        check_sites(&g("(a/b, c), (b\\a, d/e)", Regime::NLP), Regime::NLP);
        assert_eq!(NonAssociative.cut_sites(&u).len(), 3);
    }

    #[test]
    fn multiset_sites() {
        let u = g("a/b, c, c", Regime::LP);
        // argument {c} or {c, c}; duplicates collapse
        assert_eq!(AssociativeCommutative.left_sites(&u).len(), 2);
        check_sites(&g("a/b, c, b\\d, e", Regime::LP), Regime::LP);
        assert_eq!(AssociativeCommutative.cut_sites(&g("a, b, c", Regime::LP)).len(), 7);
    }
}
