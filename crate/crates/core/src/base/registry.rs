use std::collections::BTreeMap;
use std::sync::Arc;

use super::{BaseError, BaseLogic, FeatureBase, IdentityBase, PosetBase, PropBase};

/// Declarations gathered from a grammar file that a backend may need.
#[derive(Clone, Debug, Default)]
pub struct BaseSpec {
    pub atoms: Vec<String>,
    /// `(sub, sup)` pairs, meaning `sub ⪯ sup`.
    pub edges: Vec<(String, String)>,
}

pub type BaseFactory = fn(&BaseSpec) -> Result<Arc<dyn BaseLogic>, BaseError>;

/// Name-indexed table of base-logic constructors.
#[derive(Clone)]
pub struct BaseRegistry {
    factories: BTreeMap<String, BaseFactory>,
}

impl BaseRegistry {
    pub fn empty() -> Self {
        BaseRegistry {
            factories: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &str, factory: BaseFactory) -> &mut Self {
        self.factories.insert(name.to_string(), factory);
        self
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }

    pub fn create(&self, name: &str, spec: &BaseSpec) -> Result<Arc<dyn BaseLogic>, BaseError> {
        let factory = self
            .factories
            .get(name)
            .ok_or_else(|| BaseError::UnknownBackend(name.to_string()))?;
        factory(spec)
    }
}

impl Default for BaseRegistry {
    fn default() -> Self {
        let mut r = BaseRegistry::empty();
        r.register("poset", |spec| {
            let p = PosetBase::from_edges(
                spec.atoms.iter().map(String::as_str),
                spec.edges.iter().map(|(a, b)| (a.as_str(), b.as_str())),
            )?;
            Ok(Arc::new(p))
        })
        .register("prop", |_| Ok(Arc::new(PropBase)))
        .register("feature", |_| Ok(Arc::new(FeatureBase)))
        .register("identity", |_| Ok(Arc::new(IdentityBase)));
        r
    }
}
