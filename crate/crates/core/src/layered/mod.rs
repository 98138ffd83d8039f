//! Double layering: basic-type occurrences carry layer variables, lexical
//! entries constrain them, and proof search threads a global feature
//! environment that every axiom extends by identifying two variables.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::base::{BaseError, BaseLogic};
use crate::feature::{graph_to_term, FeatureError, FeatureGraph, FeatureTerm, NodeId};
use crate::grammar::{bracketings, Equation, Grammar, GrammarError, LexEntry};
use crate::prover::{structural_rules, Proof, RuleName, SearchConfig, Searcher, StructuralRules};
use crate::syntax::{BasicType, Formula, GTerm, Sequent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayeredError {
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error("layered search is cut-free")]
    CutUnsupported,
    #[error("coordination is not available in layered mode")]
    Coordination,
}

/// The global constraint: a consistent feature graph over layer variables.
/// Extending an environment copies it, so branches never share bindings.
#[derive(Clone, Debug, Default)]
pub struct Environment {
    graph: FeatureGraph,
}

impl Environment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Environment for the conjunction of `equations`; `None` if they are
    /// inconsistent.
    pub fn from_equations<'e>(equations: impl IntoIterator<Item = &'e Equation>) -> Option<Self> {
        let mut env = Environment::new();
        for eq in equations {
            let n = env.graph.var_node(&eq.var);
            env.graph.add_term(n, &eq.term).ok()?;
        }
        Some(env)
    }

    /// Makes sure `var` is present, unconstrained if new.
    pub fn declare(&mut self, var: &str) {
        self.graph.var_node(var);
    }

    /// `Φ ∧ x = y`, or `None` if that is inconsistent.
    pub fn identify(&self, x: &str, y: &str) -> Option<Environment> {
        let mut next = self.clone();
        let a = next.graph.var_node(x);
        let b = next.graph.var_node(y);
        next.graph.union(a, b).ok()?;
        Some(next)
    }

    pub fn graph(&self) -> &FeatureGraph {
        &self.graph
    }

    pub fn variables(&self) -> Vec<&str> {
        self.graph.vars().map(|(v, _)| v).collect()
    }

    fn representative(&self, node: NodeId) -> Option<&str> {
        let node = self.graph.find(node);
        self.graph
            .vars()
            .find(|(_, n)| self.graph.find(*n) == node)
            .map(|(v, _)| v)
    }

    /// What the environment says about `var`, as a feature term in which
    /// other variables appear by their representative names.
    pub fn term_of(&self, var: &str) -> Option<FeatureTerm> {
        self.graph.lookup_var(var).map(|n| graph_to_term(&self.graph, n))
    }

    /// Canonical rendering independent of insertion order: variable classes
    /// plus the graph reachable from them, nodes numbered in breadth-first
    /// order with features sorted by name.
    pub fn canonical(&self) -> String {
        let mut number: HashMap<NodeId, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut out = String::new();
        for (v, n) in self.graph.vars() {
            let n = self.graph.find(n);
            let next = number.len();
            let id = *number.entry(n).or_insert_with(|| {
                queue.push_back(n);
                next
            });
            out.push_str(&format!("{v}={id};"));
        }
        while let Some(n) = queue.pop_front() {
            out.push_str(&format!("|{}", number[&n]));
            if let Some(a) = self.graph.atom_of(n) {
                out.push_str(&format!("={a}"));
            }
            let feats: BTreeMap<&str, NodeId> = self
                .graph
                .features(n)
                .iter()
                .map(|(f, c)| (&**f, self.graph.find(*c)))
                .collect();
            for (f, c) in feats {
                let next = number.len();
                let id = *number.entry(c).or_insert_with(|| {
                    queue.push_back(c);
                    next
                });
                out.push_str(&format!(",{f}:{id}"));
            }
        }
        out
    }
}

impl PartialEq for Environment {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

impl fmt::Display for Environment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = BTreeSet::new();
        let mut first = true;
        for (_, n) in self.graph.vars() {
            let n = self.graph.find(n);
            if !seen.insert(n) {
                continue;
            }
            let class: Vec<&str> = self
                .graph
                .vars()
                .filter(|(_, m)| self.graph.find(*m) == n)
                .map(|(w, _)| w)
                .collect();
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "{}", class.join(" = "))?;
            let t = graph_to_term(&self.graph, n);
            if t != FeatureTerm::Top {
                write!(f, " : {t}")?;
            }
        }
        Ok(())
    }
}

/// Answer of [`query_env`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QueryResult {
    Atom(String),
    /// A node without an atom, named by the first variable denoting it, or
    /// `_<n>` for an anonymous node.
    Var(String),
    /// The path leaves the constrained part of the environment.
    Top,
}

impl fmt::Display for QueryResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryResult::Atom(a) => f.write_str(a),
            QueryResult::Var(v) => f.write_str(v),
            QueryResult::Top => f.write_str("top"),
        }
    }
}

/// Follows `path` from the variable `x`.
pub fn query_env(env: &Environment, x: &str, path: &[&str]) -> Result<QueryResult, FeatureError> {
    let g = &env.graph;
    let mut n = g
        .lookup_var(x)
        .ok_or_else(|| FeatureError::UnknownVariable(x.to_string()))?;
    for (i, f) in path.iter().enumerate() {
        if let Some(a) = g.atom_of(n) {
            return Err(FeatureError::PathThroughAtom {
                path: path[..=i].join(":"),
                atom: a.to_string(),
            });
        }
        match g.feature(n, f) {
            Some(c) => n = c,
            None => return Ok(QueryResult::Top),
        }
    }
    Ok(match g.atom_of(n) {
        Some(a) => QueryResult::Atom(a.to_string()),
        None => QueryResult::Var(match env.representative(n) {
            Some(v) => v.to_string(),
            None => format!("_{}", g.find(n)),
        }),
    })
}

fn rename_term(t: &FeatureTerm, rename: &impl Fn(&str) -> String, bound: &mut Vec<String>) -> FeatureTerm {
    match t {
        FeatureTerm::Var(x) if !bound.contains(x) => FeatureTerm::Var(rename(x)),
        FeatureTerm::Var(_) | FeatureTerm::Atom(_) | FeatureTerm::Top | FeatureTerm::Bottom => t.clone(),
        FeatureTerm::Feat(f, s) => FeatureTerm::feat(f, rename_term(s, rename, bound)),
        FeatureTerm::Exists(x, body) => {
            bound.push(x.clone());
            let body = rename_term(body, rename, bound);
            bound.pop();
            FeatureTerm::exists(x, body)
        }
        FeatureTerm::Conj(a, b) => FeatureTerm::conj(rename_term(a, rename, bound), rename_term(b, rename, bound)),
    }
}

/// Renames every layer variable of `entry` with the suffix `_{tag}`,
/// keeping sharing inside the entry. Unlabelled occurrences get a fresh
/// variable of their own.
pub fn instantiate(entry: &LexEntry, tag: usize) -> LexEntry {
    let rename = |v: &str| format!("{v}_{tag}");
    let mut anonymous = 0usize;
    let formula = entry.formula.map_basics(&mut |b: &BasicType| {
        let label = match b.label() {
            Some(l) => rename(l),
            None => {
                anonymous += 1;
                format!("A{anonymous}'_{tag}")
            }
        };
        b.with_label(Some(&label))
    });
    let constraints = entry
        .constraints
        .iter()
        .map(|eq| Equation {
            var: rename(&eq.var),
            term: rename_term(&eq.term, &rename, &mut Vec::new()),
        })
        .collect();
    LexEntry { formula, constraints }
}

/// One solution of a layered search.
#[derive(Clone, Debug)]
pub struct LayeredSolution {
    pub proof: Proof,
    pub env: Environment,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LayeredConfig {
    pub search: SearchConfig,
    /// Maximum number of solutions returned; `None` for all.
    pub max_solutions: Option<usize>,
}

impl LayeredConfig {
    pub fn new(search: SearchConfig) -> Self {
        LayeredConfig {
            search,
            max_solutions: None,
        }
    }
}

struct LayeredSearch<'a> {
    base: &'a dyn BaseLogic,
    rules: &'static dyn StructuralRules,
    plain: Searcher<'a>,
    /// Branches cut off because an axiom made the environment inconsistent.
    pruned: usize,
}

type Solutions = Vec<(Proof, Environment)>;

fn push_unique(out: &mut Solutions, seen: &mut HashSet<String>, p: Proof, env: Environment) {
    if seen.insert(env.canonical()) {
        out.push((p, env));
    }
}

impl LayeredSearch<'_> {
    fn solve(&mut self, u: &GTerm, c: &Formula, env: &Environment) -> Result<Solutions, BaseError> {
        let erased = Sequent::new(u.erase(), c.erase());
        if self.plain.prove(&erased)?.is_none() {
            return Ok(Vec::new());
        }
        let conclusion = || Sequent::new(u.clone(), c.clone());
        let mut out = Vec::new();
        let mut seen = HashSet::new();

        if let (GTerm::Leaf(Formula::Basic(b1)), Formula::Basic(b2)) = (u, c) {
            if self.base.entails_bool(&b1.erased(), &b2.erased())? {
                let next = match (b1.label(), b2.label()) {
                    (Some(x), Some(y)) => env.identify(x, y),
                    _ => Some(env.clone()),
                };
                match next {
                    Some(e) => push_unique(&mut out, &mut seen, Proof::leaf(RuleName::Ax, conclusion()), e),
                    None => self.pruned += 1,
                }
            }
        }

        let right = match c {
            Formula::Over(a, b) => Some((RuleName::SlashR, GTerm::node(u.clone(), GTerm::Leaf((**b).clone())), a)),
            Formula::Under(b, a) => Some((RuleName::BackslashR, GTerm::node(GTerm::Leaf((**b).clone()), u.clone()), a)),
            Formula::Basic(_) => None,
        };
        if let Some((rule, premise, a)) = right {
            for (p, e) in self.solve(&premise, a, env)? {
                let proof = Proof {
                    rule,
                    conclusion: conclusion(),
                    site: None,
                    premises: vec![p],
                };
                push_unique(&mut out, &mut seen, proof, e);
            }
        }

        for site in self.rules.left_sites(u) {
            let (result, arg) = match &site.functor {
                Formula::Over(a, b) | Formula::Under(b, a) => (a, b),
                Formula::Basic(_) => unreachable!("functors are complex"),
            };
            let rest = site
                .presented
                .replace(&site.path, GTerm::Leaf((**result).clone()))
                .expect("site path is valid in its presentation");
            for (p1, e1) in self.solve(&site.argument, arg, env)? {
                for (p2, e2) in self.solve(&rest, c, &e1)? {
                    let proof = Proof {
                        rule: site.rule,
                        conclusion: Sequent::new(site.presented.clone(), c.clone()),
                        site: Some(site.path.clone()),
                        premises: vec![p1.clone(), p2],
                    };
                    push_unique(&mut out, &mut seen, proof, e2);
                }
            }
        }
        Ok(out)
    }
}

/// Cut-free search for `goal` that threads `env` through the proof. At
/// each axiom `[b1]^X ⇒ [b2]^Y`, `b1` must entail `b2` and `X = Y` must
/// be consistent with the environment. Returns one proof per distinct
/// final environment.
pub fn prove_layered(
    goal: &Sequent,
    env: &Environment,
    cfg: &LayeredConfig,
    base: &dyn BaseLogic,
) -> Result<Vec<LayeredSolution>, LayeredError> {
    Ok(layered_search(goal, env, cfg, base)?.0)
}

/// As [`prove_layered`], also reporting how many branches were pruned.
pub fn layered_search(
    goal: &Sequent,
    env: &Environment,
    cfg: &LayeredConfig,
    base: &dyn BaseLogic,
) -> Result<(Vec<LayeredSolution>, usize), LayeredError> {
    if cfg.search.allow_cut {
        return Err(LayeredError::CutUnsupported);
    }
    let mut env = env.clone();
    for f in goal.antecedent.leaves().into_iter().chain([&goal.succedent]) {
        for (_, _, b) in f.basic_occurrences() {
            if let Some(l) = b.label() {
                env.declare(l);
            }
        }
    }
    let mut search = LayeredSearch {
        base,
        rules: structural_rules(cfg.search.regime),
        plain: Searcher::new(SearchConfig::cut_free(cfg.search.regime), base),
        pruned: 0,
    };
    let mut solutions: Vec<LayeredSolution> = search
        .solve(&goal.antecedent, &goal.succedent, &env)?
        .into_iter()
        .map(|(proof, env)| LayeredSolution { proof, env })
        .collect();
    if let Some(k) = cfg.max_solutions {
        solutions.truncate(k);
    }
    Ok((solutions, search.pruned))
}

/// A reading of a sentence: the lexical choice, the proof and the
/// resulting environment.
#[derive(Clone, Debug)]
pub struct Reading {
    pub assignment: Vec<LexEntry>,
    pub goal: LexEntry,
    pub proof: Proof,
    pub env: Environment,
}

#[derive(Clone, Debug, Default)]
pub struct LayeredReport {
    pub readings: Vec<Reading>,
    /// Whether the sentence is accepted with the feature layer ignored.
    pub accepted_plain: bool,
    pub pruned: usize,
}

/// Membership with the feature layer: every assignment and antecedent
/// shape is searched, word `i` instantiated with tag `i + 1`, the goal
/// with tag 0. Readings with equal environments are reported once.
pub fn layered_membership(
    g: &Grammar,
    words: &[impl AsRef<str>],
    cfg: &LayeredConfig,
) -> Result<LayeredReport, LayeredError> {
    if words.is_empty() {
        return Err(GrammarError::EmptySentence.into());
    }
    if words.iter().any(|w| g.is_marker(w.as_ref())) {
        return Err(LayeredError::Coordination);
    }
    let options: Vec<Vec<LexEntry>> = words
        .iter()
        .enumerate()
        .map(|(i, w)| Ok(g.entries(w.as_ref())?.iter().map(|e| instantiate(e, i + 1)).collect()))
        .collect::<Result<_, GrammarError>>()?;
    let goal = instantiate(&g.goal, 0);
    let mut report = LayeredReport::default();
    let mut seen = HashSet::new();
    let mut plain = Searcher::new(SearchConfig::cut_free(g.regime), &*g.base);
    let limit = cfg.max_solutions.unwrap_or(usize::MAX);
    for assignment in options.iter().map(|o| o.iter().cloned()).multi_cartesian_product() {
        let formulas: Vec<Formula> = assignment.iter().map(|e| e.formula.clone()).collect();
        let shapes = if g.regime.is_associative() {
            vec![GTerm::from_formulas(formulas)]
        } else {
            bracketings(&formulas)
        };
        let Some(env) = Environment::from_equations(assignment.iter().chain([&goal]).flat_map(|e| &e.constraints))
        else {
            continue;
        };
        for shape in shapes {
            let seq = Sequent::new(shape, goal.formula.clone());
            if plain.prove(&seq.erase())?.is_none() {
                continue;
            }
            report.accepted_plain = true;
            let (solutions, pruned) = layered_search(&seq, &env, cfg, &*g.base)?;
            report.pruned += pruned;
            for s in solutions {
                if report.readings.len() < limit && seen.insert(s.env.canonical()) {
                    report.readings.push(Reading {
                        assignment: assignment.clone(),
                        goal: goal.clone(),
                        proof: s.proof,
                        env: s.env,
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Drops layer labels from every sequent of `p`.
pub fn erase_proof(p: &Proof) -> Proof {
    Proof {
        rule: p.rule,
        conclusion: p.conclusion.erase(),
        site: p.site.clone(),
        premises: p.premises.iter().map(erase_proof).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::FeatureBase;
    use crate::prover::validate;
    use crate::syntax::parse::{parse_annotated_formula, parse_sequent};
    use crate::syntax::Regime;

    fn entry(ty: &str, constraints: &[(&str, &str)]) -> LexEntry {
        LexEntry {
            formula: parse_annotated_formula(ty).unwrap(),
            constraints: constraints
                .iter()
                .map(|(v, t)| Equation {
                    var: v.to_string(),
                    term: FeatureTerm::parse(t).unwrap(),
                })
                .collect(),
        }
    }

    #[test]
    fn instantiation_renames_and_shares() {
        let e = entry("([np]^X \\ [s]^S) / [np]^Y / ([np]^Y \\ [s]^Z)", &[("S", "content:(a:X & b:Y & exists X (c:X))")]);
        let a = instantiate(&e, 1);
        let b = instantiate(&e, 2);
        let labels = |e: &LexEntry| -> Vec<String> {
            e.formula
                .basic_occurrences()
                .iter()
                .map(|(_, _, b)| b.label().unwrap().to_string())
                .collect()
        };
        let (la, lb) = (labels(&a), labels(&b));
        assert_eq!(la.iter().filter(|l| *l == "Y_1").count(), 2);
        assert!(la.iter().all(|l| !lb.contains(l)));
        assert_eq!(a.constraints[0].var, "S_1");
        assert_eq!(
            a.constraints[0].term.to_string(),
            FeatureTerm::parse("content:(a:X_1 & b:Y_1 & exists X (c:X))").unwrap().to_string()
        );
        let plain = instantiate(&entry("np", &[]), 3);
        assert!(plain.formula.erase() == Formula::basic("np"));
        assert!(plain.constraints.is_empty());
    }

    #[test]
    fn identify_and_prune() {
        let env = Environment::from_equations(&[
            Equation {
                var: "A".into(),
                term: FeatureTerm::parse("num:sg").unwrap(),
            },
            Equation {
                var: "B".into(),
                term: FeatureTerm::parse("num:pl").unwrap(),
            },
        ])
        .unwrap();
        assert!(env.identify("A", "B").is_none());
        let e = env.identify("A", "C").unwrap();
        assert_eq!(query_env(&e, "C", &["num"]).unwrap(), QueryResult::Atom("sg".into()));
        assert_eq!(query_env(&e, "C", &[]).unwrap(), QueryResult::Var("A".into()));
        assert_eq!(query_env(&e, "C", &["agr"]).unwrap(), QueryResult::Top);
        assert!(matches!(
            query_env(&e, "C", &["num", "x"]),
            Err(FeatureError::PathThroughAtom { .. })
        ));
        assert!(query_env(&e, "Q", &[]).is_err());
        let mut fresh = Environment::new();
        fresh.declare("F");
        assert_eq!(query_env(&fresh, "F", &[]).unwrap(), QueryResult::Var("F".into()));
    }

    #[test]
    fn canonical_ignores_insertion_order() {
        let a = Environment::from_equations(&[
            Equation {
                var: "X".into(),
                term: FeatureTerm::parse("f:a & g:Y").unwrap(),
            },
        ])
        .unwrap();
        let b = Environment::from_equations(&[
            Equation {
                var: "X".into(),
                term: FeatureTerm::parse("g:Y & f:a").unwrap(),
            },
        ])
        .unwrap();
        assert_eq!(a, b);
        assert!(a.to_string().contains("X : "));
    }

    #[test]
    fn unconstrained_goal_matches_plain_prover() {
        let base = FeatureBase;
        let seq = parse_sequent("[cat:np]^A, [cat:np]^B \\ [cat:s]^C => [cat:s]^D", Regime::L, true).unwrap();
        let cfg = LayeredConfig::new(SearchConfig::cut_free(Regime::L));
        let sols = prove_layered(&seq, &Environment::new(), &cfg, &base).unwrap();
        assert_eq!(sols.len(), 1);
        let p = erase_proof(&sols[0].proof);
        validate(&p, Regime::L, &base).unwrap();
        assert_eq!(query_env(&sols[0].env, "A", &[]).unwrap(), QueryResult::Var("A".into()));
        assert_eq!(query_env(&sols[0].env, "B", &[]).unwrap(), QueryResult::Var("A".into()));
        assert_eq!(query_env(&sols[0].env, "D", &[]).unwrap(), QueryResult::Var("C".into()));
        let cut = LayeredConfig::new(SearchConfig::with_cut(Regime::L, 1));
        assert!(matches!(
            prove_layered(&seq, &Environment::new(), &cut, &base),
            Err(LayeredError::CutUnsupported)
        ));
    }
}
