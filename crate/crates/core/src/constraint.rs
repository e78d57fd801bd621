use std::fmt;

use crate::entropy::LinearForm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    /// `lhs >= 0`
    Ge,
    /// `lhs = 0`
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Ge => ">=",
            Relation::Eq => "=",
        })
    }
}

/// A labelled linear constraint `lhs >= 0` or `lhs = 0`.
///
/// Labels are stable identifiers that certificates refer to, e.g.
/// `elem:I(A;B|{C})`, `copy1:sub:H(A,R)`, `sym:H(B)`, `problem:normalize`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub label: String,
    pub lhs: LinearForm,
    pub relation: Relation,
}

impl Constraint {
    pub fn ge(label: impl Into<String>, lhs: LinearForm) -> Self {
        Constraint {
            label: label.into(),
            lhs,
            relation: Relation::Ge,
        }
    }

    pub fn eq(label: impl Into<String>, lhs: LinearForm) -> Self {
        Constraint {
            label: label.into(),
            lhs,
            relation: Relation::Eq,
        }
    }

    pub fn render(&self, names: &[String]) -> String {
        format!("{} {} 0", self.lhs.render(names), self.relation)
    }
}
