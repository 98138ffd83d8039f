//! Union-find feature graph: the working representation behind
//! normalization, unification, and the double-layer environment.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;
use std::sync::Arc;

use super::solved::{SimpleConstraint, SolvedForm};
use super::term::FeatureTerm;

/// Two pieces of information that cannot hold of one node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Clash;

pub type NodeId = usize;

#[derive(Clone, Debug, Default)]
pub struct FeatureGraph {
    parent: Vec<NodeId>,
    atom: Vec<Option<Arc<str>>>,
    feats: Vec<Vec<(Arc<str>, NodeId)>>,
    vars: BTreeMap<String, NodeId>,
}

// Lexical scope for existential variables while walking a term.
struct Frame {
    name: String,
    node: NodeId,
    outer: Scope,
}

type Scope = Option<Rc<Frame>>;

fn lookup(scope: &Scope, name: &str) -> Option<NodeId> {
    let mut cur = scope;
    while let Some(frame) = cur {
        if frame.name == name {
            return Some(frame.node);
        }
        cur = &frame.outer;
    }
    None
}

impl FeatureGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn new_node(&mut self) -> NodeId {
        let id = self.parent.len();
        self.parent.push(id);
        self.atom.push(None);
        self.feats.push(Vec::new());
        id
    }

    pub fn find(&self, mut n: NodeId) -> NodeId {
        while self.parent[n] != n {
            n = self.parent[n];
        }
        n
    }

    fn find_compress(&mut self, n: NodeId) -> NodeId {
        let root = self.find(n);
        let mut cur = n;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Node of a named (free) variable, created on first use.
    pub fn var_node(&mut self, name: &str) -> NodeId {
        if let Some(&n) = self.vars.get(name) {
            return n;
        }
        let n = self.new_node();
        self.vars.insert(name.to_string(), n);
        n
    }

    pub fn lookup_var(&self, name: &str) -> Option<NodeId> {
        self.vars.get(name).map(|&n| self.find(n))
    }

    pub fn vars(&self) -> impl Iterator<Item = (&str, NodeId)> {
        self.vars.iter().map(|(k, &v)| (k.as_str(), self.find(v)))
    }

    pub fn atom_of(&self, n: NodeId) -> Option<&str> {
        self.atom[self.find(n)].as_deref()
    }

    pub fn features(&self, n: NodeId) -> &[(Arc<str>, NodeId)] {
        &self.feats[self.find(n)]
    }

    pub fn feature(&self, n: NodeId, f: &str) -> Option<NodeId> {
        self.features(n)
            .iter()
            .find(|(g, _)| g.as_ref() == f)
            .map(|&(_, c)| self.find(c))
    }

    pub fn set_atom(&mut self, n: NodeId, a: &str) -> Result<(), Clash> {
        let r = self.find_compress(n);
        match &self.atom[r] {
            Some(b) if b.as_ref() != a => return Err(Clash),
            _ => {}
        }
        if !self.feats[r].is_empty() {
            return Err(Clash);
        }
        self.atom[r] = Some(Arc::from(a));
        Ok(())
    }

    /// The `f`-successor of `n`, created if absent.
    pub fn child(&mut self, n: NodeId, f: &str) -> Result<NodeId, Clash> {
        let r = self.find_compress(n);
        if self.atom[r].is_some() {
            return Err(Clash);
        }
        if let Some(&(_, c)) = self.feats[r].iter().find(|(g, _)| g.as_ref() == f) {
            return Ok(c);
        }
        let c = self.new_node();
        self.feats[r].push((Arc::from(f), c));
        Ok(c)
    }

    /// Identifies two nodes, merging their features recursively.
    pub fn union(&mut self, a: NodeId, b: NodeId) -> Result<(), Clash> {
        let mut work = vec![(a, b)];
        while let Some((a, b)) = work.pop() {
            let (ra, rb) = (self.find_compress(a), self.find_compress(b));
            if ra == rb {
                continue;
            }
            let (keep, gone) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[gone] = keep;
            let gone_atom = self.atom[gone].take();
            match (&self.atom[keep], gone_atom) {
                (Some(x), Some(y)) if *x != y => return Err(Clash),
                (None, Some(y)) => self.atom[keep] = Some(y),
                _ => {}
            }
            let moved = std::mem::take(&mut self.feats[gone]);
            for (f, c) in moved {
                match self.feats[keep].iter().find(|(g, _)| *g == f) {
                    Some(&(_, d)) => work.push((c, d)),
                    None => self.feats[keep].push((f, c)),
                }
            }
            if self.atom[keep].is_some() && !self.feats[keep].is_empty() {
                return Err(Clash);
            }
        }
        Ok(())
    }

    /// Adds the constraint `node = term`. Free variables are resolved
    /// through the graph's named variables; `exists` binds fresh nodes.
    pub fn add_term(&mut self, node: NodeId, term: &FeatureTerm) -> Result<(), Clash> {
        let mut stack: Vec<(NodeId, &FeatureTerm, Scope)> = vec![(node, term, None)];
        while let Some((n, t, scope)) = stack.pop() {
            match t {
                FeatureTerm::Top => {}
                FeatureTerm::Bottom => return Err(Clash),
                FeatureTerm::Atom(a) => self.set_atom(n, a)?,
                FeatureTerm::Var(x) => {
                    let m = match lookup(&scope, x) {
                        Some(m) => m,
                        None => self.var_node(x),
                    };
                    self.union(n, m)?;
                }
                FeatureTerm::Feat(f, sub) => {
                    let c = self.child(n, f)?;
                    stack.push((c, sub, scope));
                }
                FeatureTerm::Exists(x, body) => {
                    let fresh = self.new_node();
                    let inner = Some(Rc::new(Frame {
                        name: x.clone(),
                        node: fresh,
                        outer: scope,
                    }));
                    stack.push((n, body, inner));
                }
                FeatureTerm::Conj(a, b) => {
                    stack.push((n, b, scope.clone()));
                    stack.push((n, a, scope));
                }
            }
        }
        Ok(())
    }

    /// Solved form of everything reachable from `root`, with `root` named
    /// `root_name` and every other node a fresh `prefix{i}` in depth-first
    /// discovery order. Unreachable nodes are dropped: they are existential
    /// and consistent, hence vacuous.
    pub fn solved_form(&self, root: NodeId, root_name: &str, prefix: &str) -> SolvedForm {
        let root = self.find(root);
        let mut names: HashMap<NodeId, String> = HashMap::new();
        let mut bound = Vec::new();
        let mut constraints = Vec::new();
        names.insert(root, root_name.to_string());
        self.emit_head(root, root_name, &mut constraints);
        let mut stack = vec![(root, 0usize)];
        while let Some((n, i)) = stack.pop() {
            let feats = &self.feats[n];
            if i >= feats.len() {
                continue;
            }
            stack.push((n, i + 1));
            let (f, c) = (&feats[i].0, self.find(feats[i].1));
            let fresh = !names.contains_key(&c);
            if fresh {
                let name = format!("{prefix}{}", bound.len());
                names.insert(c, name.clone());
                bound.push(name);
            }
            constraints.push(SimpleConstraint::EqFeat {
                var: names[&n].clone(),
                feature: f.to_string(),
                target: names[&c].clone(),
            });
            if fresh {
                self.emit_head(c, &names[&c], &mut constraints);
                stack.push((c, 0));
            }
        }
        SolvedForm {
            root: root_name.to_string(),
            bound,
            constraints,
        }
    }

    fn emit_head(&self, n: NodeId, name: &str, out: &mut Vec<SimpleConstraint>) {
        if let Some(a) = &self.atom[n] {
            out.push(SimpleConstraint::EqAtom {
                var: name.to_string(),
                atom: a.to_string(),
            });
        } else if self.feats[n].is_empty() {
            out.push(SimpleConstraint::EqTop { var: name.to_string() });
        }
    }
}
