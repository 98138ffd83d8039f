use std::fmt;

use serde::{Deserialize, Serialize};

use crate::syntax::{Occurrence, Regime, Sequent};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum RuleName {
    Ax,
    SlashL,
    SlashR,
    BackslashL,
    BackslashR,
    Cut,
    StrengthenL,
    WeakenR,
    Coord,
}

impl RuleName {
    pub fn symbol(self) -> &'static str {
        match self {
            RuleName::Ax => "Ax",
            RuleName::SlashL => "/L",
            RuleName::SlashR => "/R",
            RuleName::BackslashL => "\\L",
            RuleName::BackslashR => "\\R",
            RuleName::Cut => "Cut",
            RuleName::StrengthenL => "StrengthenL",
            RuleName::WeakenR => "WeakenR",
            RuleName::Coord => "Co",
        }
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A derivation tree. `site` addresses, inside the conclusion's antecedent,
/// the sub-G-term a left rule, cut or strengthening acts on.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Proof {
    pub rule: RuleName,
    #[serde(with = "sequent_text")]
    pub conclusion: Sequent,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub site: Option<Occurrence>,
    #[serde(default)]
    pub premises: Vec<Proof>,
}

impl Proof {
    pub fn leaf(rule: RuleName, conclusion: Sequent) -> Self {
        Proof {
            rule,
            conclusion,
            site: None,
            premises: Vec::new(),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Proof::size).sum::<usize>()
    }

    /// Number of nodes that are not axioms.
    pub fn rule_count(&self) -> usize {
        usize::from(self.rule != RuleName::Ax) + self.premises.iter().map(Proof::rule_count).sum::<usize>()
    }

    pub fn count(&self, rule: RuleName) -> usize {
        usize::from(self.rule == rule) + self.premises.iter().map(|p| p.count(rule)).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(Proof::depth).max().unwrap_or(0)
    }

    /// Indented text tree, one node per line, conclusion first.
    pub fn render_text(&self, regime: Regime) -> String {
        let mut out = String::new();
        let mut stack = vec![(self, 0usize)];
        while let Some((p, depth)) = stack.pop() {
            out.push_str(&"  ".repeat(depth));
            out.push_str(&format!("{:<5} {}\n", p.rule.symbol(), p.conclusion.display_in(regime)));
            for q in p.premises.iter().rev() {
                stack.push((q, depth + 1));
            }
        }
        out
    }
}

/// Sequents in JSON are written with fully bracketed antecedents, so that
/// sites stay meaningful after a round trip.
mod sequent_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::syntax::parse::parse_sequent;
    use crate::syntax::{Regime, Sequent};

    pub fn serialize<S: Serializer>(s: &Sequent, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&s.display_in(Regime::NL))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Sequent, D::Error> {
        let text = String::deserialize(d)?;
        parse_sequent(&text, Regime::NL, true).map_err(serde::de::Error::custom)
    }
}
