use std::collections::HashMap;

use super::structural::{structural_rules, StructuralRules};
use super::{Proof, RuleName, SearchConfig};
use crate::base::{BaseError, BaseLogic};
use crate::syntax::{canonicalize, subformula_closure, BasicType, CanonicalGTerm, Formula, GTerm, Sequent};

type Key = (CanonicalGTerm, Formula);

/// Positive minus negative basic occurrences, counting `f` with `sign`.
fn atom_balance(f: &Formula, sign: i32) -> i32 {
    match f {
        Formula::Basic(_) => sign,
        Formula::Over(a, b) | Formula::Under(b, a) => atom_balance(a, sign) + atom_balance(b, -sign),
    }
}

/// Every axiom consumes one positive and one negative occurrence, and a
/// cut formula occurs once with each sign, so derivable sequents balance.
pub(crate) fn balanced(u: &GTerm, c: &Formula) -> bool {
    u.leaves().into_iter().map(|f| atom_balance(f, -1)).sum::<i32>() + atom_balance(c, 1) == 0
}

/// One backward proof search. Memo tables live as long as the searcher,
/// so they are scoped to one regime and one base logic.
pub struct Searcher<'a> {
    base: &'a dyn BaseLogic,
    cfg: SearchConfig,
    rules: &'static dyn StructuralRules,
    cut_formulas: Vec<Formula>,
    /// Outcomes per sequent, with the cut budget they were computed under.
    memo: HashMap<Key, Vec<(usize, Option<Proof>)>>,
    axioms: HashMap<(BasicType, BasicType), bool>,
    explored: usize,
}

impl<'a> Searcher<'a> {
    pub fn new(cfg: SearchConfig, base: &'a dyn BaseLogic) -> Self {
        Searcher {
            base,
            rules: structural_rules(cfg.regime),
            cfg,
            cut_formulas: Vec::new(),
            memo: HashMap::new(),
            axioms: HashMap::new(),
            explored: 0,
        }
    }

    /// Goals visited so far (memo hits excluded).
    pub fn explored(&self) -> usize {
        self.explored
    }

    pub fn prove(&mut self, s: &Sequent) -> Result<Option<Proof>, BaseError> {
        let budget = if self.cfg.allow_cut {
            let mut fs: Vec<&Formula> = s.antecedent.leaves();
            fs.push(&s.succedent);
            self.cut_formulas = subformula_closure(fs).into_iter().collect();
            self.cfg.cut_depth_bound
        } else {
            0
        };
        self.search(&s.antecedent, &s.succedent, budget)
    }

    fn lookup(&self, key: &Key, budget: usize) -> Option<Option<Proof>> {
        let entries = self.memo.get(key)?;
        for (b, outcome) in entries {
            match outcome {
                Some(p) if *b <= budget => return Some(Some(p.clone())),
                None if *b >= budget => return Some(None),
                _ => {}
            }
        }
        None
    }

    fn search(&mut self, u: &GTerm, c: &Formula, budget: usize) -> Result<Option<Proof>, BaseError> {
        if !balanced(u, c) {
            return Ok(None);
        }
        let key = self
            .cfg
            .memoize
            .then(|| (canonicalize(u, self.cfg.regime), c.clone()));
        if let Some(key) = &key {
            if let Some(hit) = self.lookup(key, budget) {
                return Ok(hit);
            }
        }
        self.explored += 1;
        let outcome = self.expand(u, c, budget)?;
        if let Some(key) = key {
            self.memo.entry(key).or_default().push((budget, outcome.clone()));
        }
        Ok(outcome)
    }

    fn axiom(&mut self, b1: &BasicType, b2: &BasicType) -> Result<bool, BaseError> {
        let (b1, b2) = (b1.erased(), b2.erased());
        if let Some(&v) = self.axioms.get(&(b1.clone(), b2.clone())) {
            return Ok(v);
        }
        let v = self.base.entails_bool(&b1, &b2)?;
        self.axioms.insert((b1, b2), v);
        Ok(v)
    }

    fn expand(&mut self, u: &GTerm, c: &Formula, budget: usize) -> Result<Option<Proof>, BaseError> {
        let conclusion = || Sequent::new(u.clone(), c.clone());

        // Ax
        if let (GTerm::Leaf(Formula::Basic(b1)), Formula::Basic(b2)) = (u, c) {
            if self.axiom(b1, b2)? {
                return Ok(Some(Proof::leaf(RuleName::Ax, conclusion())));
            }
        }

        // /R and \R
        let right = match c {
            Formula::Over(a, b) => Some((RuleName::SlashR, GTerm::node(u.clone(), GTerm::Leaf((**b).clone())), a)),
            Formula::Under(b, a) => Some((RuleName::BackslashR, GTerm::node(GTerm::Leaf((**b).clone()), u.clone()), a)),
            Formula::Basic(_) => None,
        };
        if let Some((rule, premise, a)) = right {
            if let Some(p) = self.search(&premise, a, budget)? {
                return Ok(Some(Proof {
                    rule,
                    conclusion: conclusion(),
                    site: None,
                    premises: vec![p],
                }));
            }
        }

        // /L and \L
        for site in self.rules.left_sites(u) {
            let (result, arg) = match &site.functor {
                Formula::Over(a, b) | Formula::Under(b, a) => (a, b),
                Formula::Basic(_) => unreachable!("functors are complex"),
            };
            let Some(p1) = self.search(&site.argument, arg, budget)? else {
                continue;
            };
            let rest = site
                .presented
                .replace(&site.path, GTerm::Leaf((**result).clone()))
                .expect("site path is valid in its presentation");
            let Some(p2) = self.search(&rest, c, budget)? else {
                continue;
            };
            return Ok(Some(Proof {
                rule: site.rule,
                conclusion: Sequent::new(site.presented, c.clone()),
                site: Some(site.path),
                premises: vec![p1, p2],
            }));
        }

        // Cut, bounded in nesting depth
        if budget > 0 {
            let formulas = self.cut_formulas.clone();
            for site in self.rules.cut_sites(u) {
                for a in &formulas {
                    if site.part.as_leaf() == Some(a) {
                        continue;
                    }
                    let Some(p1) = self.search(&site.part, a, budget - 1)? else {
                        continue;
                    };
                    let rest = site
                        .presented
                        .replace(&site.path, GTerm::Leaf(a.clone()))
                        .expect("site path is valid in its presentation");
                    let Some(p2) = self.search(&rest, c, budget - 1)? else {
                        continue;
                    };
                    return Ok(Some(Proof {
                        rule: RuleName::Cut,
                        conclusion: Sequent::new(site.presented, c.clone()),
                        site: Some(site.path),
                        premises: vec![p1, p2],
                    }));
                }
            }
        }
        Ok(None)
    }
}
