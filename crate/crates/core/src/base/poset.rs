use std::collections::HashMap;

use super::{BaseError, BaseLogic, Verdict};
use crate::syntax::BasicType;

/// Explicit finite preorder over declared atoms.
///
/// The reflexive-transitive closure is computed once at construction;
/// queries are table lookups. A bare order declares no exclusions, so
/// `Disentailed` is never reported.
#[derive(Debug, Clone)]
pub struct PosetBase {
    atoms: Vec<String>,
    index: HashMap<String, usize>,
    // leq[i][j] <=> atoms[i] ⪯ atoms[j]
    leq: Vec<Vec<bool>>,
}

impl PosetBase {
    pub fn from_edges<'a>(
        atoms: impl IntoIterator<Item = &'a str>,
        edges: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, BaseError> {
        let mut names: Vec<String> = Vec::new();
        let mut index = HashMap::new();
        for a in atoms {
            if !index.contains_key(a) {
                index.insert(a.to_string(), names.len());
                names.push(a.to_string());
            }
        }
        let n = names.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in edges {
            let i = *index.get(a).ok_or_else(|| BaseError::Undeclared(a.to_string()))?;
            let j = *index.get(b).ok_or_else(|| BaseError::Undeclared(b.to_string()))?;
            leq[i][j] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        Ok(PosetBase {
            atoms: names,
            index,
            leq,
        })
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    fn idx(&self, name: &str) -> Result<usize, BaseError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| BaseError::Undeclared(name.to_string()))
    }

    pub fn leq(&self, a: &str, b: &str) -> Result<bool, BaseError> {
        Ok(self.leq[self.idx(a)?][self.idx(b)?])
    }

    pub fn poset_entails(&self, a: &str, b: &str) -> Result<Verdict, BaseError> {
        Ok(if self.leq(a, b)? {
            Verdict::Entailed
        } else {
            Verdict::Blocked
        })
    }

    /// Least elements of `cands` under ⪯, provided they are all equivalent;
    /// the first one in declaration order is returned.
    fn least(&self, cands: &[usize], upward: bool) -> Option<usize> {
        let below = |i: usize, j: usize| if upward { self.leq[i][j] } else { self.leq[j][i] };
        let least: Vec<usize> = cands
            .iter()
            .copied()
            .filter(|&c| cands.iter().all(|&d| below(c, d)))
            .collect();
        least.first().copied()
    }

    fn bound(&self, a: &BasicType, b: &BasicType, upward: bool) -> Result<Option<BasicType>, BaseError> {
        let (i, j) = (self.idx(a.payload())?, self.idx(b.payload())?);
        let cands: Vec<usize> = (0..self.atoms.len())
            .filter(|&k| {
                if upward {
                    self.leq[i][k] && self.leq[j][k]
                } else {
                    self.leq[k][i] && self.leq[k][j]
                }
            })
            .collect();
        Ok(self
            .least(&cands, upward)
            .map(|k| BasicType::new(&self.atoms[k])))
    }
}

impl BaseLogic for PosetBase {
    fn name(&self) -> &str {
        "poset"
    }

    fn parse(&self, text: &str) -> Result<BasicType, BaseError> {
        let t = text.trim();
        self.idx(t)?;
        Ok(BasicType::new(t))
    }

    fn entails(&self, lhs: &BasicType, rhs: &BasicType) -> Result<Verdict, BaseError> {
        self.poset_entails(lhs.payload(), rhs.payload())
    }

    fn meet(&self, a: &BasicType, b: &BasicType) -> Result<Option<BasicType>, BaseError> {
        self.bound(a, b, false)
    }

    fn join(&self, a: &BasicType, b: &BasicType) -> Result<Option<BasicType>, BaseError> {
        self.bound(a, b, true)
    }

    fn has_lattice(&self) -> bool {
        true
    }
}
