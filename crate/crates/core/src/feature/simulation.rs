use std::collections::{HashMap, VecDeque};

use super::solved::{normalize, SimpleConstraint, SolvedForm};
use super::term::FeatureTerm;

#[derive(Default)]
struct Node<'a> {
    atom: Option<&'a str>,
    feats: Vec<(&'a str, &'a str)>,
}

fn adjacency(sf: &SolvedForm) -> HashMap<&str, Node<'_>> {
    let mut out: HashMap<&str, Node<'_>> = HashMap::new();
    out.entry(sf.root.as_str()).or_default();
    for c in &sf.constraints {
        let node = out.entry(c.subject()).or_default();
        match c {
            SimpleConstraint::EqAtom { atom, .. } => node.atom = Some(atom),
            SimpleConstraint::EqFeat { feature, target, .. } => node.feats.push((feature, target)),
            _ => {}
        }
    }
    out
}

/// Independent check of `φ ⊨ ψ`: the graph of `ψ` maps into the graph of
/// `φ`, root to root, preserving features and atoms.
///
/// # Panics
/// If either term is inconsistent.
pub fn simulation_oracle(phi: &FeatureTerm, psi: &FeatureTerm) -> bool {
    let ctx = normalize("x", phi).expect("simulation oracle needs a consistent context");
    let guard = normalize("x", psi).expect("simulation oracle needs a consistent guard");
    let (cg, gg) = (adjacency(&ctx), adjacency(&guard));

    let mut image: HashMap<&str, &str> = HashMap::new();
    image.insert(guard.root.as_str(), ctx.root.as_str());
    let mut queue = VecDeque::from([guard.root.as_str()]);
    while let Some(v) = queue.pop_front() {
        let (gnode, cnode) = (&gg[v], &cg[image[v]]);
        if let Some(a) = gnode.atom {
            if cnode.atom != Some(a) {
                return false;
            }
        }
        for &(f, w) in &gnode.feats {
            let Some(&(_, d)) = cnode.feats.iter().find(|(g, _)| *g == f) else {
                return false;
            };
            match image.get(w) {
                Some(&e) if e != d => return false,
                Some(_) => {}
                None => {
                    image.insert(w, d);
                    queue.push_back(w);
                }
            }
        }
    }
    true
}
