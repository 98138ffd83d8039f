use super::{BaseError, BaseLogic, Verdict};
use crate::syntax::BasicType;

/// Identity preorder: `a ⪯ b` iff `a == b`. Used for pure Lambek grammars,
/// e.g. the compiled-out family.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityBase;

impl BaseLogic for IdentityBase {
    fn name(&self) -> &str {
        "identity"
    }

    fn parse(&self, text: &str) -> Result<BasicType, BaseError> {
        let t = text.trim();
        if t.is_empty() {
            return Err(BaseError::Parse {
                text: text.to_string(),
                message: "empty basic type".into(),
            });
        }
        Ok(BasicType::new(t))
    }

    fn entails(&self, lhs: &BasicType, rhs: &BasicType) -> Result<Verdict, BaseError> {
        Ok(if lhs.payload() == rhs.payload() {
            Verdict::Entailed
        } else {
            Verdict::Blocked
        })
    }
}
