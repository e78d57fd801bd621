//! Copy Lemma extensions.
//!
//! `Z' := Y-copy(Z | X)` extends a distribution `(X, Y, Z)` by a new tuple
//! `Z'` such that `(X, Z')` is distributed like `(X, Z)` and
//! `I(Z' ; Y, Z | X) = 0`. On entropy profiles this becomes
//!
//! * one substitution equality `H(T) = H(σ(T))` for every non-empty
//!   `T ⊆ X ∪ Z'` meeting `Z'`, where `σ` replaces each copy by the tuple
//!   it copies, and
//! * the independence equality `I(Z' ; Y ∪ Z | X) = 0`.
//!
//! Each element of `Z` may itself be a tuple; its copy is a single new
//! (composite) variable.

use num_traits::One;

use crate::constraint::Constraint;
use crate::entropy::{LinearForm, VarSet, MAX_VARS};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopyStep {
    /// Tuples being copied; each becomes one new variable.
    pub copied: Vec<VarSet>,
    /// Conditioning tuple `X`.
    pub over: VarSet,
    /// Context tuple `Y` the copies are independent of (given `X`).
    pub context: VarSet,
    pub new_names: Vec<String>,
}

impl CopyStep {
    pub fn copied_all(&self) -> VarSet {
        self.copied.iter().fold(VarSet::EMPTY, |s, v| s | *v)
    }

    /// Checks the step against the `n` variables in scope.
    ///
    /// Copied tuples must be non-empty, pairwise disjoint and disjoint from
    /// `over`; `context` must be disjoint from `over` but may overlap the
    /// copied tuples.
    pub fn validate(&self, names: &[String]) -> Result<()> {
        let n = names.len();
        let scope = VarSet::full(n);
        if self.copied.is_empty() {
            return Err(Error::CopyStep("nothing to copy".into()));
        }
        if self.copied.len() != self.new_names.len() {
            return Err(Error::CopyStep(format!(
                "{} copied tuples but {} new names",
                self.copied.len(),
                self.new_names.len()
            )));
        }
        if n + self.new_names.len() > MAX_VARS {
            return Err(Error::VariableCount(n + self.new_names.len()));
        }
        let mut acc = VarSet::EMPTY;
        for z in &self.copied {
            if z.is_empty() {
                return Err(Error::CopyStep("empty copied tuple".into()));
            }
            if !acc.is_disjoint(*z) {
                return Err(Error::CopyStep("copied tuples overlap".into()));
            }
            acc |= *z;
        }
        for (what, set) in [("copied", acc), ("over", self.over), ("context", self.context)] {
            if !set.is_subset(scope) {
                return Err(Error::CopyStep(format!("{what} tuple references unknown variables")));
            }
        }
        if !acc.is_disjoint(self.over) {
            return Err(Error::CopyStep(format!(
                "copied tuple and conditioning tuple share {}",
                (acc & self.over).names(names)
            )));
        }
        if !self.context.is_disjoint(self.over) {
            return Err(Error::CopyStep(format!(
                "context and conditioning tuple share {}",
                (self.context & self.over).names(names)
            )));
        }
        for (k, name) in self.new_names.iter().enumerate() {
            if names.contains(name) || self.new_names[..k].contains(name) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        Ok(())
    }

    /// Variable set of the new copies when appended after `n` variables.
    pub fn copies_at(&self, n: usize) -> VarSet {
        VarSet::from_indices(n..n + self.new_names.len())
    }

    /// `σ`: replaces every copy in `t` by its original tuple.
    pub fn substitute(&self, n: usize, t: VarSet) -> VarSet {
        let copies = self.copies_at(n);
        let mut out = t.without(copies);
        for (k, z) in self.copied.iter().enumerate() {
            if t.contains(n + k) {
                out |= *z;
            }
        }
        out
    }
}

/// Appends the copies of `step` to `names` and returns the extended name
/// list together with the emitted constraints, labelled `"{tag}:..."`.
pub fn apply_copy_step(
    step: &CopyStep,
    names: &[String],
    tag: &str,
) -> Result<(Vec<String>, Vec<Constraint>)> {
    step.validate(names)?;
    let n = names.len();
    let mut ext = names.to_vec();
    ext.extend(step.new_names.iter().cloned());
    let copies = step.copies_at(n);
    let one = Rational::one();
    let mut rows = Vec::with_capacity((1 << (step.over.len() + step.new_names.len())) + 1);
    for t in (step.over | copies).subsets() {
        if t.is_disjoint(copies) {
            continue;
        }
        let mut f = LinearForm::zero();
        f.add_term(t, one.clone());
        f.add_term(step.substitute(n, t), -one.clone());
        rows.push(Constraint::eq(format!("{tag}:sub:H({})", t.names(&ext)), f));
    }
    rows.push(Constraint::eq(
        format!("{tag}:indep"),
        LinearForm::cond_mutual_info(copies, step.context | step.copied_all(), step.over)?,
    ));
    Ok((ext, rows))
}

/// The two independence equalities of consecutive steps over the same `X`,
/// where the second step's context contains the first step's copies, merged
/// into `H(Z, Z'_1, Z'_2 | X) = H(Z | X) + H(Z'_1 | X) + H(Z'_2 | X)`.
///
/// `first_at`/`second_at` are the variable counts before each step.
pub fn merged_independence(
    first: &CopyStep,
    first_at: usize,
    second: &CopyStep,
    second_at: usize,
    tag: &str,
) -> Result<Constraint> {
    if first.over != second.over {
        return Err(Error::CopyStep("merged independence needs equal conditioning tuples".into()));
    }
    let c1 = first.copies_at(first_at);
    let c2 = second.copies_at(second_at);
    if c1.is_empty() || c2.is_empty() {
        return Err(Error::CopyStep("merged independence of empty copies".into()));
    }
    if !c1.is_subset(second.context) {
        return Err(Error::CopyStep(
            "second step's context must contain the first step's copies".into(),
        ));
    }
    let originals = first.copied_all() | first.context | second.context.without(c1);
    let x = first.over;
    let lhs = LinearForm::cond_entropy(originals | c1 | c2, x)?
        - LinearForm::cond_entropy(originals, x)?
        - LinearForm::cond_entropy(c1, x)?
        - LinearForm::cond_entropy(c2, x)?;
    Ok(Constraint::eq(format!("{tag}:indep-merged"), lhs))
}
