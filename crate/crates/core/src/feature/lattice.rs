use std::collections::HashMap;

use super::graph::{FeatureGraph, NodeId};
use super::solved::Inconsistent;
use super::term::FeatureTerm;

/// Unification: the conjunction, normalized. Free variables shared by the
/// two terms are identified.
pub fn ft_meet(phi: &FeatureTerm, psi: &FeatureTerm) -> Result<FeatureTerm, Inconsistent> {
    let mut g = FeatureGraph::new();
    let root = g.new_node();
    g.add_term(root, phi).map_err(|_| Inconsistent)?;
    g.add_term(root, psi).map_err(|_| Inconsistent)?;
    Ok(graph_to_term(&g, root))
}

/// Generalization: the most specific term entailed by both inputs, read
/// off the product of their graphs.
///
/// # Panics
/// If either input is inconsistent.
pub fn ft_join(phi: &FeatureTerm, psi: &FeatureTerm) -> FeatureTerm {
    let (g1, r1) = graph_of(phi);
    let (g2, r2) = graph_of(psi);
    let mut shape = Shape::default();
    let mut index: HashMap<(NodeId, NodeId), usize> = HashMap::new();
    let mut work = vec![(g1.find(r1), g2.find(r2))];
    index.insert(work[0], shape.add());
    while let Some((a, b)) = work.pop() {
        let id = index[&(a, b)];
        if let (Some(x), Some(y)) = (g1.atom_of(a), g2.atom_of(b)) {
            if x == y {
                shape.atom[id] = Some(x.to_string());
            }
        }
        for (f, c1) in g1.features(a) {
            let Some(c2) = g2.feature(b, f) else { continue };
            let pair = (g1.find(*c1), c2);
            let child = match index.get(&pair) {
                Some(&c) => c,
                None => {
                    let c = shape.add();
                    index.insert(pair, c);
                    work.push(pair);
                    c
                }
            };
            shape.feats[id].push((f.to_string(), child));
        }
    }
    shape.to_term(0)
}

fn graph_of(t: &FeatureTerm) -> (FeatureGraph, NodeId) {
    let mut g = FeatureGraph::new();
    let root = g.new_node();
    g.add_term(root, t)
        .unwrap_or_else(|_| panic!("generalization of an inconsistent term `{t}`"));
    (g, root)
}

/// Closed term describing the part of `g` reachable from `root`. Nodes
/// reached more than once, and a root on a cycle, are named by
/// existential variables `V0, V1, ...`.
pub fn graph_to_term(g: &FeatureGraph, root: NodeId) -> FeatureTerm {
    let mut shape = Shape::default();
    let mut index: HashMap<NodeId, usize> = HashMap::new();
    let root = g.find(root);
    index.insert(root, shape.add());
    let mut work = vec![root];
    while let Some(n) = work.pop() {
        let id = index[&n];
        shape.atom[id] = g.atom_of(n).map(str::to_string);
        for (f, c) in g.features(n) {
            let c = g.find(*c);
            let child = match index.get(&c) {
                Some(&x) => x,
                None => {
                    let x = shape.add();
                    index.insert(c, x);
                    work.push(c);
                    x
                }
            };
            shape.feats[id].push((f.to_string(), child));
        }
    }
    shape.to_term(0)
}

#[derive(Default)]
struct Shape {
    atom: Vec<Option<String>>,
    feats: Vec<Vec<(String, usize)>>,
}

impl Shape {
    fn add(&mut self) -> usize {
        self.atom.push(None);
        self.feats.push(Vec::new());
        self.atom.len() - 1
    }

    fn to_term(&self, root: usize) -> FeatureTerm {
        let mut indegree = vec![0usize; self.atom.len()];
        for fs in &self.feats {
            for &(_, c) in fs {
                indegree[c] += 1;
            }
        }
        let mut names: Vec<Option<String>> = vec![None; self.atom.len()];
        let mut count = 0;
        for (n, &d) in indegree.iter().enumerate() {
            if d >= 2 || (n == root && d >= 1) {
                names[n] = Some(format!("V{count}"));
                count += 1;
            }
        }
        let mut visited = vec![false; self.atom.len()];
        let body = self.emit(root, &names, &mut visited);
        names
            .into_iter()
            .flatten()
            .rev()
            .fold(body, |acc, v| FeatureTerm::exists(&v, acc))
    }

    fn emit(&self, n: usize, names: &[Option<String>], visited: &mut [bool]) -> FeatureTerm {
        if visited[n] {
            let v = names[n].as_deref().expect("revisited nodes are named");
            return FeatureTerm::var(v);
        }
        visited[n] = true;
        let mut parts = Vec::new();
        if let Some(v) = &names[n] {
            parts.push(FeatureTerm::var(v));
        }
        if let Some(a) = &self.atom[n] {
            parts.push(FeatureTerm::atom(a));
        }
        for (f, c) in &self.feats[n] {
            parts.push(FeatureTerm::feat(f, self.emit(*c, names, visited)));
        }
        FeatureTerm::conj_all(parts)
    }
}
