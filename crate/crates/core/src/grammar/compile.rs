use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use itertools::Itertools;
use serde::Serialize;

use crate::base::{BaseError, BaseLogic, IdentityBase};
use crate::syntax::{BasicType, Formula, Polarity, Regime, Step};

use super::membership::membership;
use super::{Grammar, GrammarError, LexEntry};

/// Formulas obtained from `a` by replacing any of its basic occurrences of
/// the given polarity with a supertype drawn from `universe`.
fn replace_by_supertypes(
    a: &Formula,
    polarity: Polarity,
    universe: &[BasicType],
    base: &dyn BaseLogic,
) -> Result<BTreeSet<Formula>, BaseError> {
    let mut choices: Vec<(Vec<Step>, Vec<BasicType>)> = Vec::new();
    for (path, pol, b) in a.basic_occurrences() {
        let b = b.erased();
        let mut options = vec![b.clone()];
        if pol == polarity {
            for u in universe {
                if *u != b && base.entails_bool(&b, u)? {
                    options.push(u.clone());
                }
            }
        }
        choices.push((path, options));
    }
    let mut out = BTreeSet::new();
    for pick in choices.iter().map(|(_, o)| o.iter()).multi_cartesian_product() {
        let mut f = a.erase();
        for ((path, _), b) in choices.iter().zip(pick) {
            f = f.replace_basic(path, b).expect("occurrence paths are valid");
        }
        out.insert(f);
    }
    Ok(out)
}

/// `super⁺`: positive occurrences replaced by supertypes from `universe`.
pub fn super_plus(a: &Formula, universe: &[BasicType], base: &dyn BaseLogic) -> Result<BTreeSet<Formula>, BaseError> {
    replace_by_supertypes(a, Polarity::Positive, universe, base)
}

/// `super⁻`: negative occurrences replaced by supertypes from `universe`.
pub fn super_minus(a: &Formula, universe: &[BasicType], base: &dyn BaseLogic) -> Result<BTreeSet<Formula>, BaseError> {
    replace_by_supertypes(a, Polarity::Negative, universe, base)
}

/// Whether `b` arises from `a` by replacing negative basic occurrences with
/// subtypes and positive ones with supertypes, all drawn from `universe`.
/// Decided by enumerating the reachable set.
pub fn lemma12_oracle(a: &Formula, b: &Formula, base: &dyn BaseLogic, universe: &[BasicType]) -> Result<bool, BaseError> {
    let (a, b) = (a.erase(), b.erase());
    if !a.same_skeleton(&b) {
        return Ok(false);
    }
    let mut options: Vec<(Vec<Step>, Vec<BasicType>)> = Vec::new();
    for (path, pol, x) in a.basic_occurrences() {
        let mut opts = vec![x.clone()];
        for u in universe {
            let related = match pol {
                Polarity::Positive => base.entails_bool(x, u)?,
                Polarity::Negative => base.entails_bool(u, x)?,
            };
            if related && u != x {
                opts.push(u.clone());
            }
        }
        options.push((path, opts));
    }
    for pick in options.iter().map(|(_, o)| o.iter()).multi_cartesian_product() {
        let mut f = a.clone();
        for ((path, _), x) in options.iter().zip(pick) {
            f = f.replace_basic(path, x).expect("occurrence paths are valid");
        }
        if f == b {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Basic types of the lexicon and the goal, one representative per
/// equivalence class (the first in sorted order).
pub fn basic_universe(g: &Grammar) -> Result<Vec<BasicType>, BaseError> {
    let mut all = BTreeSet::new();
    for f in g.lexicon.values().flatten().map(|e| &e.formula).chain([&g.goal.formula]) {
        for (_, _, b) in f.basic_occurrences() {
            all.insert(b.erased());
        }
    }
    let mut reps: Vec<BasicType> = Vec::new();
    'outer: for b in all {
        for r in &reps {
            if g.base.entails_bool(&b, r)? && g.base.entails_bool(r, &b)? {
                continue 'outer;
            }
        }
        reps.push(b);
    }
    Ok(reps)
}

fn representative(b: &BasicType, universe: &[BasicType], base: &dyn BaseLogic) -> Result<BasicType, BaseError> {
    for r in universe {
        if base.entails_bool(b, r)? && base.entails_bool(r, b)? {
            return Ok(r.clone());
        }
    }
    Ok(b.erased())
}

/// A finite family of pure Lambek grammars sharing one lexicon and
/// differing in their start type.
#[derive(Clone, Debug, Serialize)]
pub struct CompiledFamily {
    pub regime: Regime,
    #[serde(serialize_with = "lexicon_text")]
    pub lexicon: BTreeMap<String, Vec<Formula>>,
    #[serde(serialize_with = "formulas_text")]
    pub start_types: Vec<Formula>,
    #[serde(serialize_with = "basics_text")]
    pub universe: Vec<BasicType>,
}

fn formulas_text<S: serde::Serializer>(fs: &[Formula], ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_seq(fs.iter().map(ToString::to_string))
}

fn basics_text<S: serde::Serializer>(bs: &[BasicType], ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_seq(bs.iter().map(|b| b.payload().to_string()))
}

fn lexicon_text<S: serde::Serializer>(lex: &BTreeMap<String, Vec<Formula>>, ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_map(
        lex.iter()
            .map(|(w, fs)| (w, fs.iter().map(ToString::to_string).collect::<Vec<_>>())),
    )
}

impl CompiledFamily {
    /// One grammar per start type, over the identity preorder.
    pub fn grammars(&self) -> Vec<Grammar> {
        let base: Arc<dyn BaseLogic> = Arc::new(IdentityBase);
        let lexicon: BTreeMap<String, Vec<LexEntry>> = self
            .lexicon
            .iter()
            .map(|(w, fs)| (w.clone(), fs.iter().cloned().map(LexEntry::plain).collect()))
            .collect();
        self.start_types
            .iter()
            .map(|s| Grammar {
                regime: self.regime,
                base_name: "identity".into(),
                base: base.clone(),
                lexicon: lexicon.clone(),
                conj_markers: BTreeSet::new(),
                goal: LexEntry::plain(s.clone()),
            })
            .collect()
    }

    pub fn lexicon_size(&self) -> usize {
        self.lexicon.values().map(Vec::len).sum()
    }
}

/// Translates `g` into a family of pure Lambek grammars whose languages
/// union to the language of `g`.
pub fn compile_out(g: &Grammar) -> Result<CompiledFamily, GrammarError> {
    if !g.conj_markers.is_empty() {
        return Err(GrammarError::Compile("coordination markers have no pure Lambek counterpart".into()));
    }
    let base = &*g.base;
    let universe = basic_universe(g)?;
    let collapse = |f: &Formula| -> Result<Formula, BaseError> {
        f.erase()
            .try_map_basics(&mut |b| representative(b, &universe, base))
    };
    let mut lexicon = BTreeMap::new();
    for (w, entries) in &g.lexicon {
        let mut types = BTreeSet::new();
        for e in entries {
            types.extend(super_plus(&collapse(&e.formula)?, &universe, base)?);
        }
        lexicon.insert(w.clone(), types.into_iter().collect());
    }
    let start_types = super_minus(&collapse(&g.goal.formula)?, &universe, base)?
        .into_iter()
        .collect();
    Ok(CompiledFamily {
        regime: g.regime,
        lexicon,
        start_types,
        universe,
    })
}

pub fn family_membership(family: &CompiledFamily, words: &[impl AsRef<str>]) -> Result<bool, GrammarError> {
    for g in family.grammars() {
        if membership(&g, words)?.accepted {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub max_len: usize,
    pub strings_checked: usize,
    pub accepted: usize,
    pub family_size: usize,
    /// Strings on which direct and family membership disagree.
    pub mismatches: Vec<Vec<String>>,
}

impl EquivalenceReport {
    pub fn equivalent(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares direct membership with family membership on every string
/// over the lexicon's words of length 1 to `max_len`.
pub fn check_equivalence(g: &Grammar, max_len: usize) -> Result<EquivalenceReport, GrammarError> {
    let family = compile_out(g)?;
    let words: Vec<&String> = g.lexicon.keys().collect();
    let mut report = EquivalenceReport {
        max_len,
        strings_checked: 0,
        accepted: 0,
        family_size: family.start_types.len(),
        mismatches: Vec::new(),
    };
    for len in 1..=max_len {
        for s in std::iter::repeat(words.iter()).take(len).multi_cartesian_product() {
            let s: Vec<&str> = s.into_iter().map(|w| w.as_str()).collect();
            let direct = membership(g, &s)?.accepted;
            let compiled = family_membership(&family, &s)?;
            report.strings_checked += 1;
            report.accepted += usize::from(direct);
            if direct != compiled {
                report.mismatches.push(s.iter().map(|w| w.to_string()).collect());
            }
        }
    }
    Ok(report)
}
