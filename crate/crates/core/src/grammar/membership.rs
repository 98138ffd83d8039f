use std::collections::HashSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::base::BaseLogic;
use crate::prover::{validate, Proof, ProverError, RuleName, SearchConfig, Searcher};
use crate::syntax::{Formula, GTerm, Regime, Sequent};

use super::coordination::type_join;
use super::{Grammar, GrammarError};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MembershipOptions {
    /// Try antecedent bracketings (NL/NLP) in reverse order.
    pub reverse_shapes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessItem {
    pub words: String,
    #[serde(with = "formula_text")]
    pub formula: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinationStep {
    pub marker: String,
    pub left: String,
    pub right: String,
    #[serde(with = "formula_text")]
    pub result: Formula,
    pub proof: Proof,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub sentence: Vec<String>,
    pub accepted: bool,
    #[serde(default)]
    pub witness: Vec<WitnessItem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proof: Option<Proof>,
    #[serde(default)]
    pub coordinations: Vec<CoordinationStep>,
}

impl MembershipReport {
    pub fn render_text(&self, regime: Regime) -> String {
        let mut out = format!(
            "{}: {}\n",
            if self.accepted { "accepted" } else { "rejected" },
            self.sentence.join(" ")
        );
        for c in &self.coordinations {
            out.push_str(&format!("coordination `{}` {} `{}` : {}\n", c.left, c.marker, c.right, c.result));
            out.push_str(&indent(&c.proof.render_text(regime)));
        }
        if !self.witness.is_empty() {
            out.push_str("assignment:\n");
            for w in &self.witness {
                out.push_str(&format!("  {} : {}\n", w.words, w.formula));
            }
        }
        if let Some(p) = &self.proof {
            out.push_str("proof:\n");
            out.push_str(&indent(&p.render_text(regime)));
        }
        out
    }
}

/// Re-checks an accepting report: every proof validates, the main proof
/// concludes the goal from the witness types, and single-word witnesses
/// use lexical types.
pub fn validate_report(g: &Grammar, r: &MembershipReport) -> Result<(), ProverError> {
    let invalid = |reason: &str| ProverError::Invalid {
        rule: RuleName::Coord,
        conclusion: r.sentence.join(" "),
        reason: reason.to_string(),
    };
    let Some(p) = &r.proof else {
        return if r.accepted { Err(invalid("accepted without a proof")) } else { Ok(()) };
    };
    validate(p, g.regime, &*g.base)?;
    for c in &r.coordinations {
        validate(&c.proof, g.regime, &*g.base)?;
    }
    if p.conclusion.succedent != g.goal_formula().erase() {
        return Err(invalid("proof does not conclude the goal"));
    }
    let leaves: Vec<&Formula> = p.conclusion.antecedent.leaves();
    let witness: Vec<&Formula> = r.witness.iter().map(|w| &w.formula).collect();
    let mut sorted = (leaves.clone(), witness.clone());
    sorted.0.sort();
    sorted.1.sort();
    let same = if g.regime.is_commutative() { sorted.0 == sorted.1 } else { leaves == witness };
    if !same {
        return Err(invalid("proof antecedent differs from the witness"));
    }
    for w in &r.witness {
        if !w.words.contains(' ') && !g.types(&w.words).map_err(|e| invalid(&e.to_string()))?.contains(&w.formula) {
            return Err(invalid("witness type is not lexical"));
        }
    }
    Ok(())
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("  {l}\n")).collect()
}

mod formula_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::syntax::parse::parse_annotated_formula;
    use crate::syntax::Formula;

    pub fn serialize<S: Serializer>(f: &Formula, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(f)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Formula, D::Error> {
        let text = String::deserialize(d)?;
        parse_annotated_formula(&text).map_err(serde::de::Error::custom)
    }
}

/// All binary bracketings of `items`, left-branching first.
pub fn bracketings(items: &[Formula]) -> Vec<GTerm> {
    match items {
        [] => Vec::new(),
        [f] => vec![GTerm::Leaf(f.clone())],
        _ => {
            let mut out = Vec::new();
            for split in (1..items.len()).rev() {
                for l in bracketings(&items[..split]) {
                    for r in bracketings(&items[split..]) {
                        out.push(GTerm::node(l.clone(), r));
                    }
                }
            }
            out
        }
    }
}

pub fn membership(g: &Grammar, words: &[impl AsRef<str>]) -> Result<MembershipReport, GrammarError> {
    membership_with(g, words, MembershipOptions::default())
}

/// Decides whether `words` is in the language of `g`. Coordination
/// markers are resolved left to right before the final proof search.
pub fn membership_with(
    g: &Grammar,
    words: &[impl AsRef<str>],
    opts: MembershipOptions,
) -> Result<MembershipReport, GrammarError> {
    let sentence: Vec<String> = words.iter().map(|w| w.as_ref().to_string()).collect();
    if sentence.is_empty() {
        return Err(GrammarError::EmptySentence);
    }
    let mut slots = Vec::with_capacity(sentence.len());
    for w in &sentence {
        if g.is_marker(w) {
            slots.push(Slot::Marker(w.clone()));
        } else {
            slots.push(Slot::Item(Item {
                words: vec![w.clone()],
                types: g.types(w)?,
            }));
        }
    }
    if slots.iter().any(|s| matches!(s, Slot::Marker(_))) && !g.base.has_lattice() {
        return Err(GrammarError::NoLattice(g.base_name.clone()));
    }
    let mut engine = Engine {
        regime: g.regime,
        base: &*g.base,
        searcher: Searcher::new(SearchConfig::cut_free(g.regime), &*g.base),
        opts,
        closure: g.closure().into_iter().collect(),
        failed: HashSet::new(),
    };
    let goal = g.goal_formula().erase();
    let mut steps = Vec::new();
    let found = engine.resolve(slots, &goal, &mut steps)?;
    Ok(match found {
        Some((witness, proof)) => MembershipReport {
            sentence,
            accepted: true,
            witness,
            proof: Some(proof),
            coordinations: steps,
        },
        None => MembershipReport {
            sentence,
            accepted: false,
            witness: Vec::new(),
            proof: None,
            coordinations: Vec::new(),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Item {
    words: Vec<String>,
    types: Vec<Formula>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Slot {
    Marker(String),
    Item(Item),
}

impl Slot {
    fn item(&self) -> Option<&Item> {
        match self {
            Slot::Item(i) => Some(i),
            Slot::Marker(_) => None,
        }
    }

    /// Identity for failure memoization: words do not matter, types do.
    fn key(&self) -> Result<&[Formula], &str> {
        match self {
            Slot::Item(i) => Ok(&i.types),
            Slot::Marker(m) => Err(m),
        }
    }
}

struct Engine<'a> {
    regime: Regime,
    base: &'a dyn BaseLogic,
    searcher: Searcher<'a>,
    opts: MembershipOptions,
    closure: Vec<Formula>,
    failed: HashSet<Vec<Result<Vec<Formula>, String>>>,
}

type Found = (Vec<WitnessItem>, Proof);

impl Engine<'_> {
    fn shapes(&self, items: &[Formula]) -> Vec<GTerm> {
        if self.regime.is_associative() {
            return vec![GTerm::from_formulas(items.iter().cloned())];
        }
        let mut out = bracketings(items);
        if self.opts.reverse_shapes {
            out.reverse();
        }
        out
    }

    /// Some type assignment and antecedent shape for `items` that proves
    /// `target`.
    fn derive(&mut self, items: &[&Item], target: &Formula) -> Result<Option<(Vec<Formula>, Proof)>, GrammarError> {
        for assignment in items.iter().map(|i| i.types.iter().cloned()).multi_cartesian_product() {
            for shape in self.shapes(&assignment) {
                if let Some(p) = self.searcher.prove(&Sequent::new(shape, target.clone()))? {
                    return Ok(Some((assignment, p)));
                }
            }
        }
        Ok(None)
    }

    /// Types a conjunct may be coordinated under: its own types if it is a
    /// single item, otherwise the closure types it derives.
    fn span_types(&mut self, items: &[&Item]) -> Result<Vec<Formula>, GrammarError> {
        if let [single] = items {
            return Ok(single.types.clone());
        }
        let mut out = Vec::new();
        for f in self.closure.clone() {
            if self.derive(items, &f)?.is_some() {
                out.push(f);
            }
        }
        Ok(out)
    }

    fn resolve(
        &mut self,
        slots: Vec<Slot>,
        goal: &Formula,
        steps: &mut Vec<CoordinationStep>,
    ) -> Result<Option<Found>, GrammarError> {
        let Some(m) = slots.iter().position(|s| matches!(s, Slot::Marker(_))) else {
            let items: Vec<&Item> = slots.iter().filter_map(Slot::item).collect();
            return Ok(self.derive(&items, goal)?.map(|(assignment, proof)| {
                let witness = items
                    .iter()
                    .zip(assignment)
                    .map(|(i, formula)| WitnessItem {
                        words: i.words.join(" "),
                        formula,
                    })
                    .collect();
                (witness, proof)
            }));
        };
        let key: Vec<_> = slots
            .iter()
            .map(|s| s.key().map(<[Formula]>::to_vec).map_err(str::to_string))
            .collect();
        if self.failed.contains(&key) {
            return Ok(None);
        }
        let Slot::Marker(marker) = &slots[m] else { unreachable!() };
        let left_max = slots[..m].iter().rev().take_while(|s| s.item().is_some()).count();
        let right_max = slots[m + 1..].iter().take_while(|s| s.item().is_some()).count();
        let mut windows: Vec<(usize, usize)> = (1..=left_max)
            .cartesian_product(1..=right_max)
            .collect();
        windows.sort_by_key(|&(l, r)| (l + r, l));

        for (llen, rlen) in windows {
            let left: Vec<&Item> = slots[m - llen..m].iter().filter_map(Slot::item).collect();
            let right: Vec<&Item> = slots[m + 1..=m + rlen].iter().filter_map(Slot::item).collect();
            let left_types = self.span_types(&left)?;
            if left_types.is_empty() {
                continue;
            }
            let right_types = self.span_types(&right)?;
            let mut candidates: Vec<Formula> = Vec::new();
            for b in &left_types {
                for c in &right_types {
                    if let Some(a) = type_join(b, c, self.base)? {
                        if !candidates.contains(&a) {
                            candidates.push(a);
                        }
                    }
                }
            }
            for a in candidates {
                let Some((_, lp)) = self.derive(&left, &a)? else {
                    continue;
                };
                let Some((_, rp)) = self.derive(&right, &a)? else {
                    continue;
                };
                let join_words = |items: &[&Item]| items.iter().flat_map(|i| i.words.iter().cloned()).collect::<Vec<_>>();
                let (lw, rw) = (join_words(&left), join_words(&right));
                let conclusion = Sequent::new(
                    GTerm::node(lp.conclusion.antecedent.clone(), rp.conclusion.antecedent.clone()),
                    a.clone(),
                );
                steps.push(CoordinationStep {
                    marker: marker.clone(),
                    left: lw.join(" "),
                    right: rw.join(" "),
                    result: a.clone(),
                    proof: Proof {
                        rule: RuleName::Coord,
                        conclusion,
                        site: None,
                        premises: vec![lp, rp],
                    },
                });
                let mut words = lw;
                words.push(marker.clone());
                words.extend(rw);
                let mut next = slots[..m - llen].to_vec();
                next.push(Slot::Item(Item { words, types: vec![a] }));
                next.extend_from_slice(&slots[m + rlen + 1..]);
                if let Some(found) = self.resolve(next, goal, steps)? {
                    return Ok(Some(found));
                }
                steps.pop();
            }
        }
        self.failed.insert(key);
        Ok(None)
    }
}
