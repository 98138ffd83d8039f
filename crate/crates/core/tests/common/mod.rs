#![allow(dead_code)]

use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use lambek_core::base::PosetBase;
use lambek_core::feature::FeatureTerm;
use lambek_core::grammar::Grammar;
use lambek_core::syntax::{BasicType, Formula, GTerm, Polarity, Regime, Sequent};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../grammars")
        .join(format!("{name}.grammar"))
}

pub fn fixture(name: &str) -> Grammar {
    let path = fixture_path(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    Grammar::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// `a ⪯ b ⪯ d`, `c ⪯ d`.
pub const POSET4_ATOMS: [&str; 4] = ["a", "b", "c", "d"];

pub fn poset4() -> PosetBase {
    PosetBase::from_edges(POSET4_ATOMS, [("a", "b"), ("b", "d"), ("c", "d")]).unwrap()
}

/// `b1 ⪯ b2 ⪯ b3`.
pub const CHAIN3_ATOMS: [&str; 3] = ["b1", "b2", "b3"];

pub fn chain3() -> PosetBase {
    PosetBase::from_edges(CHAIN3_ATOMS, [("b1", "b2"), ("b2", "b3")]).unwrap()
}

/// Random formula with exactly `connectives` slashes.
pub fn random_formula(rng: &mut StdRng, atoms: &[&str], connectives: usize) -> Formula {
    if connectives == 0 {
        return Formula::basic(atoms.choose(rng).unwrap());
    }
    let left = rng.gen_range(0..connectives);
    let l = random_formula(rng, atoms, left);
    let r = random_formula(rng, atoms, connectives - 1 - left);
    if rng.gen_bool(0.5) {
        Formula::over(l, r)
    } else {
        Formula::under(l, r)
    }
}

/// Random formula of nesting depth at most `depth`.
pub fn random_formula_depth(rng: &mut StdRng, atoms: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return Formula::basic(atoms.choose(rng).unwrap());
    }
    let l = random_formula_depth(rng, atoms, depth - 1);
    let r = random_formula_depth(rng, atoms, depth - 1);
    if rng.gen_bool(0.5) {
        Formula::over(l, r)
    } else {
        Formula::under(l, r)
    }
}

/// Replaces basic occurrences by related atoms: moving up the order at
/// occurrences of polarity `up_at`, down elsewhere. With
/// `up_at = Positive` the result is a supertype, with `Negative` a subtype.
pub fn random_related(rng: &mut StdRng, f: &Formula, poset: &PosetBase, up_at: Polarity) -> Formula {
    let mut out = f.clone();
    for (path, pol, b) in f.basic_occurrences() {
        if rng.gen_bool(0.4) {
            continue;
        }
        let up = pol == up_at;
        let options: Vec<&String> = poset
            .atoms()
            .iter()
            .filter(|c| {
                if up {
                    poset.leq(b.payload(), c).unwrap()
                } else {
                    poset.leq(c, b.payload()).unwrap()
                }
            })
            .collect();
        let pick = options.choose(rng).unwrap();
        out = out.replace_basic(&path, &BasicType::new(pick.as_str())).unwrap();
    }
    out
}

fn flatten(u: &GTerm, out: &mut Vec<Formula>) {
    match u {
        GTerm::Leaf(f) => out.push(f.clone()),
        GTerm::Node(l, r) => {
            flatten(l, out);
            flatten(r, out);
        }
    }
}

/// Shapes an antecedent for a regime: flat lists for L/LP, trees as built
/// for NL/NLP.
pub fn shape_for(u: GTerm, regime: Regime) -> GTerm {
    if regime.is_associative() {
        let mut items = Vec::new();
        flatten(&u, &mut items);
        GTerm::from_formulas(items)
    } else {
        u
    }
}

fn leaf_paths(u: &GTerm) -> Vec<Vec<lambek_core::syntax::Step>> {
    u.positions()
        .into_iter()
        .filter(|p| u.at(p).unwrap().as_leaf().is_some())
        .collect()
}

/// Random sequent with at most `max_connectives` slashes in total. Half of
/// them are built by expanding a leaf `X` into `X/Y, Y` or `Y, Y\X` (so
/// they start out derivable in every regime) and then perturbed by
/// replacing, swapping or moving atoms; the rest are unstructured.
pub fn random_sequent(rng: &mut StdRng, regime: Regime, atoms: &[&str], max_connectives: usize) -> Sequent {
    if rng.gen_bool(0.3) {
        let n = rng.gen_range(1..=3usize);
        let mut budget = rng.gen_range(0..=max_connectives);
        let mut items = Vec::new();
        for i in 0..=n {
            let c = if i == n { budget } else { rng.gen_range(0..=budget.min(3)) };
            budget -= c;
            items.push(random_formula(rng, atoms, c));
        }
        let succedent = items.pop().unwrap();
        let mut u = GTerm::Leaf(items[0].clone());
        for f in &items[1..] {
            u = GTerm::node(u, GTerm::Leaf(f.clone()));
        }
        return Sequent::new(shape_for(u, regime), succedent);
    }
    let c = rng.gen_range(0..=1);
    let goal = random_formula(rng, atoms, c);
    let mut used = goal.connectives();
    let mut u = GTerm::Leaf(goal.clone());
    let steps = rng.gen_range(1..=3);
    for _ in 0..steps {
        let c = rng.gen_range(0..=1);
        let y = random_formula(rng, atoms, c);
        if used + 1 + y.connectives() * 2 > max_connectives {
            break;
        }
        used += 1 + y.connectives() * 2;
        let paths = leaf_paths(&u);
        let path = paths.choose(rng).unwrap().clone();
        let x = u.at(&path).unwrap().as_leaf().unwrap().clone();
        let expanded = if rng.gen_bool(0.5) {
            GTerm::node(GTerm::Leaf(Formula::over(x, y.clone())), GTerm::Leaf(y))
        } else {
            GTerm::node(GTerm::Leaf(y.clone()), GTerm::Leaf(Formula::under(y, x)))
        };
        u = u.replace(&path, expanded).unwrap();
    }
    let mut succedent = goal;
    // move the last argument to the succedent: U, Y ⇒ X gives U ⇒ X/Y
    if let GTerm::Node(l, r) = &u {
        if let Some(y) = r.as_leaf() {
            if rng.gen_bool(0.3) && used + 1 <= max_connectives {
                succedent = Formula::over(succedent, y.clone());
                u = (**l).clone();
            }
        }
    }
    // perturb
    match rng.gen_range(0..4) {
        0 => {}
        1 => {
            let paths = leaf_paths(&u);
            let path = paths.choose(rng).unwrap();
            let f = u.at(path).unwrap().as_leaf().unwrap();
            let occs = f.basic_occurrences();
            let (p, _, _) = occs.choose(rng).unwrap();
            let g = f.replace_basic(p, &BasicType::new(atoms.choose(rng).unwrap())).unwrap();
            u = u.replace(path, GTerm::Leaf(g)).unwrap();
        }
        2 => {
            let paths: Vec<_> = u.positions().into_iter().filter(|p| u.at(p).unwrap().as_leaf().is_none()).collect();
            if let Some(p) = paths.choose(rng) {
                u = u.swap_at(p).unwrap();
            }
        }
        _ => {
            let occs = succedent.basic_occurrences();
            let (p, _, _) = occs.choose(rng).unwrap();
            succedent = succedent.replace_basic(p, &BasicType::new(atoms.choose(rng).unwrap())).unwrap();
        }
    }
    Sequent::new(shape_for(u, regime), succedent)
}

const FEATURES: [&str; 3] = ["f", "g", "h"];
const FEATURE_ATOMS: [&str; 3] = ["a", "b", "c"];
const VARS: [&str; 2] = ["X", "Y"];

/// Random feature term over a small vocabulary, with shared variables.
pub fn random_feature_term(rng: &mut StdRng, depth: usize) -> FeatureTerm {
    let leaf = |rng: &mut StdRng| match rng.gen_range(0..6) {
        0 | 1 | 2 => FeatureTerm::atom(FEATURE_ATOMS.choose(rng).unwrap()),
        3 | 4 => FeatureTerm::var(VARS.choose(rng).unwrap()),
        _ => FeatureTerm::Top,
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..10) {
        0 | 1 => leaf(rng),
        2..=5 => FeatureTerm::feat(FEATURES.choose(rng).unwrap(), random_feature_term(rng, depth - 1)),
        6..=8 => FeatureTerm::conj(random_feature_term(rng, depth - 1), random_feature_term(rng, depth - 1)),
        _ => {
            let v = VARS.choose(rng).unwrap();
            FeatureTerm::exists(v, random_feature_term(rng, depth - 1))
        }
    }
}

/// A guard that is often, but not always, a weakening of `phi`: random
/// conjuncts of it, perturbed at times.
pub fn random_guard(rng: &mut StdRng, phi: &FeatureTerm) -> FeatureTerm {
    fn weaken(rng: &mut StdRng, t: &FeatureTerm) -> FeatureTerm {
        match t {
            FeatureTerm::Conj(a, b) => match rng.gen_range(0..4) {
                0 => weaken(rng, a),
                1 => weaken(rng, b),
                _ => FeatureTerm::conj(weaken(rng, a), weaken(rng, b)),
            },
            FeatureTerm::Feat(f, s) => FeatureTerm::feat(f, weaken(rng, s)),
            FeatureTerm::Exists(x, s) => FeatureTerm::exists(x, weaken(rng, s)),
            FeatureTerm::Atom(_) if rng.gen_bool(0.15) => FeatureTerm::atom(FEATURE_ATOMS.choose(rng).unwrap()),
            other if rng.gen_bool(0.1) => {
                FeatureTerm::conj(other.clone(), FeatureTerm::feat(FEATURES.choose(rng).unwrap(), FeatureTerm::Top))
            }
            other => other.clone(),
        }
    }
    if rng.gen_bool(0.3) {
        random_feature_term(rng, 3)
    } else {
        weaken(rng, phi)
    }
}
