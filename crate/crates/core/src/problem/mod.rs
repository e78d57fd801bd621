//! Problem model: variables, base constraints, Copy Lemma steps, symmetry,
//! normalization and objective.

mod builtin;
mod dsl;

pub use builtin::{builtin, builtin_ingleton, builtin_vamos_v0, vamos_access_structure, BUILTINS};
pub use dsl::{emit_problem, parse_problem};

use std::collections::HashSet;

use crate::constraint::{Constraint, Relation};
use crate::entropy::{LinearForm, VarSet};
use crate::error::{Error, Result};
use crate::extension::CopyStep;
use crate::rational::Rational;
use crate::symmetry::{Perm, PermGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveKind {
    MinimizeLinear,
    /// `max{forms} -> min`, realized through an epigraph column.
    MinimizeMax,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective {
    pub kind: ObjectiveKind,
    pub forms: Vec<LinearForm>,
}

impl Objective {
    pub fn linear(f: LinearForm) -> Self {
        Objective {
            kind: ObjectiveKind::MinimizeLinear,
            forms: vec![f],
        }
    }

    pub fn max(forms: Vec<LinearForm>) -> Self {
        Objective {
            kind: ObjectiveKind::MinimizeMax,
            forms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalization {
    pub form: LinearForm,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub name: String,
    /// Ground variables first, then the copies of each step in order.
    pub variables: Vec<String>,
    pub ground: usize,
    /// Base constraints, labelled `problem:...`.
    pub constraints: Vec<Constraint>,
    pub copy_steps: Vec<CopyStep>,
    /// Generators acting on the ground variables.
    pub symmetry: Vec<Perm>,
    /// Optional generators on the full variable list (only used on request).
    pub extra_symmetry: Vec<Perm>,
    pub normalization: Option<Normalization>,
    pub objective: Objective,
}

impl Problem {
    pub fn ground_names(&self) -> &[String] {
        &self.variables[..self.ground]
    }

    /// Variable count before step `k` (0-based) is applied.
    pub fn step_offset(&self, k: usize) -> usize {
        self.ground
            + self.copy_steps[..k]
                .iter()
                .map(|s| s.new_names.len())
                .sum::<usize>()
    }

    pub fn group(&self) -> Result<PermGroup> {
        PermGroup::closure(self.ground, &self.symmetry)
    }

    /// Checks names, copy steps and that every form references declared
    /// variables only.
    pub fn validate(&self) -> Result<()> {
        if self.ground == 0 {
            return Err(Error::Problem("no variables declared".into()));
        }
        let mut seen = HashSet::new();
        for n in &self.variables {
            if !seen.insert(n) {
                return Err(Error::DuplicateName(n.clone()));
            }
        }
        let mut at = self.ground;
        for (k, step) in self.copy_steps.iter().enumerate() {
            step.validate(&self.variables[..at])
                .map_err(|e| Error::Problem(format!("copy step {}: {e}", k + 1)))?;
            if self.variables[at..at + step.new_names.len()] != step.new_names[..] {
                return Err(Error::Problem(format!("copy step {} names out of order", k + 1)));
            }
            at += step.new_names.len();
        }
        if at != self.variables.len() {
            return Err(Error::Problem("variables not introduced by any statement".into()));
        }
        let all = VarSet::full(self.variables.len());
        let check = |f: &LinearForm, what: &str| {
            if f.support().is_subset(all) {
                Ok(())
            } else {
                Err(Error::Problem(format!("{what} references undeclared variables")))
            }
        };
        for c in &self.constraints {
            check(&c.lhs, &c.label)?;
        }
        if let Some(n) = &self.normalization {
            check(&n.form, "normalization")?;
        }
        if self.objective.forms.is_empty() {
            return Err(Error::Problem("objective has no forms".into()));
        }
        for f in &self.objective.forms {
            check(f, "objective")?;
            if f.coefficient(VarSet::EPIGRAPH) != Rational::default() {
                return Err(Error::Problem("objective may not mention `t`".into()));
            }
        }
        for g in &self.symmetry {
            if g.len() > self.ground {
                return Err(Error::Problem("symmetry acts beyond the ground variables".into()));
            }
        }
        for g in &self.extra_symmetry {
            if g.len() > self.variables.len() {
                return Err(Error::Problem("extra symmetry acts on unknown variables".into()));
            }
        }
        Ok(())
    }

    /// Checks that the ground-level data (base constraints, normalization and
    /// objective) is invariant under every symmetry generator; this is what
    /// licenses restricting the ground profile to invariant points.
    pub fn check_ground_invariance(&self) -> Result<()> {
        let key = |c: &Constraint| match c.relation {
            Relation::Eq => (c.relation, c.lhs.sign_normalized().0),
            Relation::Ge => (c.relation, c.lhs.clone()),
        };
        let base: HashSet<_> = self.constraints.iter().map(key).collect();
        let objective: HashSet<&LinearForm> = self.objective.forms.iter().collect();
        for g in &self.symmetry {
            let name = g.render(&self.variables);
            for c in &self.constraints {
                let image = Constraint {
                    label: String::new(),
                    lhs: g.act_form(&c.lhs),
                    relation: c.relation,
                };
                if !base.contains(&key(&image)) {
                    return Err(Error::NotInvariant(format!(
                        "{name} maps constraint `{}` outside the constraint set",
                        c.label
                    )));
                }
            }
            if let Some(n) = &self.normalization {
                if g.act_form(&n.form) != n.form {
                    return Err(Error::NotInvariant(format!("{name} moves the normalization")));
                }
            }
            for f in &self.objective.forms {
                if !objective.contains(&g.act_form(f)) {
                    return Err(Error::NotInvariant(format!("{name} does not fix the objective")));
                }
            }
        }
        Ok(())
    }
}
