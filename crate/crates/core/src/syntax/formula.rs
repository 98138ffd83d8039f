use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::SyntaxError;

/// A basic category: an opaque payload owned by the bound base logic.
///
/// The optional `label` is a layer variable used only by the double-layer
/// (unification) mode. Outside that mode it is always `None`, so equality
/// reduces to syntactic equality of payloads.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BasicType {
    payload: Arc<str>,
    label: Option<Arc<str>>,
}

impl BasicType {
    pub fn new(payload: impl AsRef<str>) -> Self {
        BasicType {
            payload: Arc::from(payload.as_ref().trim()),
            label: None,
        }
    }

    pub fn labelled(payload: impl AsRef<str>, label: impl AsRef<str>) -> Self {
        BasicType {
            payload: Arc::from(payload.as_ref().trim()),
            label: Some(Arc::from(label.as_ref())),
        }
    }

    pub fn payload(&self) -> &str {
        &self.payload
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(&self, label: Option<&str>) -> Self {
        BasicType {
            payload: self.payload.clone(),
            label: label.map(Arc::from),
        }
    }

    pub fn erased(&self) -> Self {
        self.with_label(None)
    }

    /// Bare identifiers print as-is; anything else is bracketed.
    pub fn is_bare(&self) -> bool {
        is_identifier(&self.payload)
    }
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '-'
}

pub(crate) fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_ident_char) && !s.starts_with('-')
}

impl fmt::Display for BasicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_bare() {
            write!(f, "{}", self.payload)?;
        } else {
            write!(f, "[{}]", self.payload)?;
        }
        if let Some(label) = &self.label {
            write!(f, "^{label}")?;
        }
        Ok(())
    }
}

/// Product-free Lambek formula.
///
/// `Over(result, arg)` is `result/arg`, `Under(arg, result)` is `arg\result`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    Basic(BasicType),
    Over(Arc<Formula>, Arc<Formula>),
    Under(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    pub fn basic(payload: impl AsRef<str>) -> Self {
        Formula::Basic(BasicType::new(payload))
    }

    /// `result / arg`
    pub fn over(result: Formula, arg: Formula) -> Self {
        Formula::Over(Arc::new(result), Arc::new(arg))
    }

    /// `arg \ result`
    pub fn under(arg: Formula, result: Formula) -> Self {
        Formula::Under(Arc::new(arg), Arc::new(result))
    }

    pub fn parse(text: &str) -> Result<Self, SyntaxError> {
        super::parse::parse_formula(text)
    }

    pub fn is_basic(&self) -> bool {
        matches!(self, Formula::Basic(_))
    }

    pub fn as_basic(&self) -> Option<&BasicType> {
        match self {
            Formula::Basic(b) => Some(b),
            _ => None,
        }
    }

    /// Number of slash nodes.
    pub fn connectives(&self) -> usize {
        match self {
            Formula::Basic(_) => 0,
            Formula::Over(a, b) | Formula::Under(a, b) => 1 + a.connectives() + b.connectives(),
        }
    }

    pub fn child(&self, step: Step) -> Option<&Formula> {
        match (self, step) {
            (Formula::Over(result, _), Step::Result) | (Formula::Under(_, result), Step::Result) => {
                Some(result)
            }
            (Formula::Over(_, arg), Step::Arg) | (Formula::Under(arg, _), Step::Arg) => Some(arg),
            _ => None,
        }
    }

    pub fn at(&self, path: &[Step]) -> Result<&Formula, SyntaxError> {
        let mut cur = self;
        for (i, step) in path.iter().enumerate() {
            cur = cur
                .child(*step)
                .ok_or_else(|| SyntaxError::InvalidPath(format!("step {i} ({step:?}) in {self}")))?;
        }
        Ok(cur)
    }

    /// Every basic occurrence together with its path and polarity, in
    /// left-to-right print order.
    pub fn basic_occurrences(&self) -> Vec<(Vec<Step>, Polarity, &BasicType)> {
        let mut out = Vec::new();
        self.collect_basics(&mut Vec::new(), Polarity::Positive, &mut out);
        out
    }

    fn collect_basics<'a>(
        &'a self,
        path: &mut Vec<Step>,
        pol: Polarity,
        out: &mut Vec<(Vec<Step>, Polarity, &'a BasicType)>,
    ) {
        match self {
            Formula::Basic(b) => out.push((path.clone(), pol, b)),
            Formula::Over(result, arg) => {
                path.push(Step::Result);
                result.collect_basics(path, pol, out);
                path.pop();
                path.push(Step::Arg);
                arg.collect_basics(path, pol.flip(), out);
                path.pop();
            }
            Formula::Under(arg, result) => {
                path.push(Step::Arg);
                arg.collect_basics(path, pol.flip(), out);
                path.pop();
                path.push(Step::Result);
                result.collect_basics(path, pol, out);
                path.pop();
            }
        }
    }

    /// Rebuilds the formula with every basic type passed through `f`.
    pub fn try_map_basics<E>(
        &self,
        f: &mut impl FnMut(&BasicType) -> Result<BasicType, E>,
    ) -> Result<Formula, E> {
        Ok(match self {
            Formula::Basic(b) => Formula::Basic(f(b)?),
            Formula::Over(r, a) => Formula::over(r.try_map_basics(f)?, a.try_map_basics(f)?),
            Formula::Under(a, r) => Formula::under(a.try_map_basics(f)?, r.try_map_basics(f)?),
        })
    }

    pub fn map_basics(&self, f: &mut impl FnMut(&BasicType) -> BasicType) -> Formula {
        let r: Result<Formula, std::convert::Infallible> = self.try_map_basics(&mut |b| Ok(f(b)));
        match r {
            Ok(x) => x,
            Err(e) => match e {},
        }
    }

    /// Strips layer labels from every basic type.
    pub fn erase(&self) -> Formula {
        self.map_basics(&mut |b| b.erased())
    }

    /// Same tree of Over/Under nodes, ignoring the basic types.
    pub fn same_skeleton(&self, other: &Formula) -> bool {
        match (self, other) {
            (Formula::Basic(_), Formula::Basic(_)) => true,
            (Formula::Over(r1, a1), Formula::Over(r2, a2))
            | (Formula::Under(a1, r1), Formula::Under(a2, r2)) => {
                r1.same_skeleton(r2) && a1.same_skeleton(a2)
            }
            _ => false,
        }
    }

    /// Replaces the basic type at `path`.
    pub fn replace_basic(&self, path: &[Step], with: &BasicType) -> Result<Formula, SyntaxError> {
        match (self, path.split_first()) {
            (Formula::Basic(_), None) => Ok(Formula::Basic(with.clone())),
            (_, None) => Err(SyntaxError::InvalidPath("path does not end at a basic type".into())),
            (Formula::Over(r, a), Some((Step::Result, rest))) => {
                Ok(Formula::Over(Arc::new(r.replace_basic(rest, with)?), a.clone()))
            }
            (Formula::Over(r, a), Some((Step::Arg, rest))) => {
                Ok(Formula::Over(r.clone(), Arc::new(a.replace_basic(rest, with)?)))
            }
            (Formula::Under(a, r), Some((Step::Result, rest))) => {
                Ok(Formula::Under(a.clone(), Arc::new(r.replace_basic(rest, with)?)))
            }
            (Formula::Under(a, r), Some((Step::Arg, rest))) => {
                Ok(Formula::Under(Arc::new(a.replace_basic(rest, with)?), r.clone()))
            }
            (_, Some((step, _))) => Err(SyntaxError::InvalidPath(format!(
                "{step:?} is not a formula step"
            ))),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Basic(b) => write!(f, "{b}"),
            // `\` binds tighter than `/`, `/` associates to the left
            Formula::Over(result, arg) => {
                write!(f, "{result}/")?;
                paren_if_complex(f, arg)
            }
            Formula::Under(arg, result) => {
                paren_if_complex(f, arg)?;
                f.write_str("\\")?;
                match result.as_ref() {
                    Formula::Over(..) => write!(f, "({result})"),
                    _ => write!(f, "{result}"),
                }
            }
        }
    }
}

fn paren_if_complex(f: &mut fmt::Formatter<'_>, x: &Formula) -> fmt::Result {
    if x.is_basic() {
        write!(f, "{x}")
    } else {
        write!(f, "({x})")
    }
}

impl Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        super::parse::parse_annotated_formula(&text).map_err(serde::de::Error::custom)
    }
}

/// One step of an occurrence path.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Step {
    /// Into the result of a slash.
    Result,
    /// Into the argument of a slash.
    Arg,
    /// Into the left child of a G-term node.
    Left,
    /// Into the right child of a G-term node.
    Right,
}

/// Path-addressed position inside a formula or G-term.
pub type Occurrence = Vec<Step>;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Polarity::Positive => 1,
            Polarity::Negative => -1,
        }
    }
}

/// Polarity of the subformula occurrence at `occ`: descending into a
/// result keeps the sign, descending into an argument flips it.
pub fn polarity_of(root: &Formula, occ: &[Step]) -> Result<Polarity, SyntaxError> {
    let mut cur = root;
    let mut pol = Polarity::Positive;
    for step in occ {
        cur = cur
            .child(*step)
            .ok_or_else(|| SyntaxError::InvalidPath(format!("{step:?} below {cur}")))?;
        if *step == Step::Arg {
            pol = pol.flip();
        }
    }
    Ok(pol)
}

/// Smallest set containing `fs` and closed under result/argument children.
pub fn subformula_closure<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    let mut stack: Vec<&Formula> = fs.into_iter().collect();
    while let Some(f) = stack.pop() {
        if out.insert(f.clone()) {
            if let Formula::Over(a, b) | Formula::Under(a, b) = f {
                stack.push(a);
                stack.push(b);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    #[test]
    fn polarity_examples() {
        assert_eq!(polarity_of(&f("a"), &[]).unwrap(), Polarity::Positive);
        assert_eq!(polarity_of(&f("a/b"), &[Step::Arg]).unwrap(), Polarity::Negative);
        // a/(b/c): c is the argument of an argument
        let root = f("a/(b/c)");
        assert_eq!(polarity_of(&root, &[Step::Arg, Step::Arg]).unwrap(), Polarity::Positive);
        assert_eq!(polarity_of(&root, &[Step::Arg, Step::Result]).unwrap(), Polarity::Negative);
    }

    #[test]
    fn polarity_invalid_path() {
        assert!(polarity_of(&f("a"), &[Step::Arg]).is_err());
        assert!(polarity_of(&f("a/b"), &[Step::Left]).is_err());
    }

    #[test]
    fn closure_examples() {
        let got = subformula_closure([&f("a/(b\\c)")]);
        let want: BTreeSet<_> = ["a/(b\\c)", "a", "b\\c", "b", "c"].iter().map(|s| f(s)).collect();
        assert_eq!(got, want);

        assert_eq!(subformula_closure([&f("a")]), BTreeSet::from([f("a")]));

        let got = subformula_closure([&f("a/b"), &f("b\\a")]);
        let want: BTreeSet<_> = ["a/b", "b\\a", "a", "b"].iter().map(|s| f(s)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn display_precedence() {
        for s in ["a/b/c", "a/(b/c)", "a\\b\\c", "(a\\b)\\c", "np\\s/np", "a\\(b/c)", "[np & acc]/b"] {
            assert_eq!(f(s).to_string(), s);
        }
        assert_eq!(f("(a/b)/c").to_string(), "a/b/c");
        assert_eq!(f("(np\\s)/np"), f("np\\s/np"));
    }

    #[test]
    fn connective_count() {
        assert_eq!(f("a").connectives(), 0);
        assert_eq!(f("a/(b\\c)/d").connectives(), 3);
    }
}
