use super::{BaseError, BaseLogic, Verdict};
use crate::feature::{entail_check, ft_join, ft_meet, FeatureError, FeatureTerm};
use crate::syntax::BasicType;

/// Feature terms as basic categories, ordered by entailment.
///
/// Payloads are stored in normalized form, so equal payloads denote the
/// same constraint up to renaming of bound variables.
#[derive(Debug, Clone, Copy, Default)]
pub struct FeatureBase;

impl FeatureBase {
    fn term(&self, b: &BasicType) -> Result<FeatureTerm, BaseError> {
        Ok(FeatureTerm::parse(b.payload())?)
    }
}

impl BaseLogic for FeatureBase {
    fn name(&self) -> &str {
        "feature"
    }

    fn parse(&self, text: &str) -> Result<BasicType, BaseError> {
        let t = FeatureTerm::parse(text)?;
        let canonical = ft_meet(&t, &FeatureTerm::Top)
            .map_err(|_| FeatureError::InconsistentInput(text.trim().to_string()))?;
        Ok(BasicType::new(canonical.to_string()))
    }

    fn entails(&self, lhs: &BasicType, rhs: &BasicType) -> Result<Verdict, BaseError> {
        Ok(entail_check(&self.term(lhs)?, &self.term(rhs)?)?)
    }

    fn consistent(&self, b: &BasicType) -> Result<bool, BaseError> {
        Ok(ft_meet(&self.term(b)?, &FeatureTerm::Top).is_ok())
    }

    fn meet(&self, a: &BasicType, b: &BasicType) -> Result<Option<BasicType>, BaseError> {
        Ok(ft_meet(&self.term(a)?, &self.term(b)?)
            .ok()
            .map(|t| BasicType::new(t.to_string())))
    }

    fn join(&self, a: &BasicType, b: &BasicType) -> Result<Option<BasicType>, BaseError> {
        let (x, y) = (self.term(a)?, self.term(b)?);
        for (t, b) in [(&x, a), (&y, b)] {
            if ft_meet(t, &FeatureTerm::Top).is_err() {
                return Err(FeatureError::InconsistentInput(b.payload().to_string()).into());
            }
        }
        Ok(Some(BasicType::new(ft_join(&x, &y).to_string())))
    }

    fn has_lattice(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entailment_through_the_base_interface() {
        let b = FeatureBase;
        let np_acc = b.parse("cat:np & case:acc").unwrap();
        let np = b.parse("cat : np").unwrap();
        assert_eq!(np.payload(), "cat:np");
        assert_eq!(b.entails(&np_acc, &np).unwrap(), Verdict::Entailed);
        assert_eq!(b.entails(&np, &np_acc).unwrap(), Verdict::Blocked);
        assert!(b.parse("cat:np & cat:vp").is_err());
    }

    #[test]
    fn lattice_operations() {
        let b = FeatureBase;
        let acc = b.parse("cat:np & case:acc").unwrap();
        let dat = b.parse("cat:np & case:dat").unwrap();
        let j = b.join(&acc, &dat).unwrap().unwrap();
        assert!(b.entails_bool(&acc, &j).unwrap() && b.entails_bool(&dat, &j).unwrap());
        assert_eq!(b.meet(&acc, &dat).unwrap(), None);
    }
}
