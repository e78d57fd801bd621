//! LP assembly and solving.
//!
//! An [`Lp`] has free columns (entropy coordinates, plus the epigraph scalar
//! `t` for min-max objectives) and labelled rows `lhs >= 0` / `lhs = 0`.

mod export;
mod field;
mod lu;
mod simplex;
mod solve;

pub use export::{export_lp, parse_lp_export};
pub use field::Field;
pub use solve::{
    check_optimality, rational_dual, solve_exact, solve_exact_with, solve_float, FloatOptions, Solution,
    Status,
};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::constraint::Constraint;
use crate::entropy::{LinearForm, VarSet};
use crate::error::{Error, Result};
use crate::extension::{apply_copy_step, merged_independence};
use crate::problem::{ObjectiveKind, Problem};
use crate::shannon::elemental_inequalities;
use crate::symmetry::{invariance_equalities, quotient_reduce, substitute_orbits, PermGroup};

pub const NORMALIZATION_LABEL: &str = "problem:normalize";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetryMode {
    Off,
    /// `H(V) = H(rep V)` rows for the ground coordinates.
    InvarianceEqs,
    /// Orbit-representative columns.
    Quotient,
}

impl fmt::Display for SymmetryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymmetryMode::Off => "off",
            SymmetryMode::InvarianceEqs => "invariance-eqs",
            SymmetryMode::Quotient => "quotient",
        })
    }
}

impl FromStr for SymmetryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "off" | "none" => Ok(SymmetryMode::Off),
            "invariance-eqs" | "eqs" => Ok(SymmetryMode::InvarianceEqs),
            "quotient" => Ok(SymmetryMode::Quotient),
            _ => Err(Error::Problem(format!("unknown symmetry mode `{s}`"))),
        }
    }
}

/// Which copy steps contribute constraints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CopySelection {
    All,
    /// No copy steps and no copy variables.
    None,
    /// Keep the variables of these (1-based) steps but skip their constraints.
    Drop(BTreeSet<usize>),
}

impl fmt::Display for CopySelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CopySelection::All => f.write_str("all"),
            CopySelection::None => f.write_str("none"),
            CopySelection::Drop(ks) => {
                let parts: Vec<String> = ks.iter().map(|k| k.to_string()).collect();
                write!(f, "drop:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for CopySelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(CopySelection::All),
            "none" => Ok(CopySelection::None),
            _ => {
                let list = s
                    .strip_prefix("drop:")
                    .ok_or_else(|| Error::Problem(format!("bad copy selection `{s}`")))?;
                let ks = list
                    .split(',')
                    .map(|k| k.trim().parse::<usize>())
                    .collect::<std::result::Result<BTreeSet<_>, _>>()
                    .map_err(|_| Error::Problem(format!("bad copy selection `{s}`")))?;
                Ok(CopySelection::Drop(ks))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BuildOptions {
    pub symmetry: SymmetryMode,
    /// Replace the independence rows of consecutive steps over the same
    /// conditioning tuple by one merged equality.
    pub merged_independence: bool,
    /// Also use the problem's extra symmetry generators (quotient only).
    pub extra_symmetry: bool,
    pub copy_steps: CopySelection,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            symmetry: SymmetryMode::InvarianceEqs,
            merged_independence: false,
            extra_symmetry: false,
            copy_steps: CopySelection::All,
        }
    }
}

impl BuildOptions {
    /// Quotient for problems with at least 10 variables, invariance
    /// equalities otherwise.
    pub fn default_for(p: &Problem) -> Self {
        let symmetry = if p.variables.len() >= 10 {
            SymmetryMode::Quotient
        } else {
            SymmetryMode::InvarianceEqs
        };
        BuildOptions {
            symmetry,
            ..Default::default()
        }
    }
}

impl fmt::Display for BuildOptions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "symmetry={} merged-independence={} extra-symmetry={} copy-steps={}",
            self.symmetry, self.merged_independence, self.extra_symmetry, self.copy_steps
        )
    }
}

impl FromStr for BuildOptions {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut o = BuildOptions::default();
        for part in s.split_whitespace() {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Problem(format!("bad option `{part}`")))?;
            let flag = || match v {
                "true" => Ok(true),
                "false" => Ok(false),
                _ => Err(Error::Problem(format!("bad flag value `{part}`"))),
            };
            match k {
                "symmetry" => o.symmetry = v.parse()?,
                "merged-independence" => o.merged_independence = flag()?,
                "extra-symmetry" => o.extra_symmetry = flag()?,
                "copy-steps" => o.copy_steps = v.parse()?,
                _ => return Err(Error::Problem(format!("unknown option `{k}`"))),
            }
        }
        Ok(o)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionKind {
    /// Every coordinate replaced by its orbit representative.
    Full,
    /// Only coordinates inside this variable set; the origin LP carries the
    /// matching invariance equalities.
    Scoped(VarSet),
}

/// How a reduced LP was obtained from its origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub kind: ReductionKind,
    pub group: PermGroup,
    pub origin: Box<Lp>,
    /// Index into `origin.rows` for every reduced row.
    pub row_origin: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lp {
    pub name: String,
    pub var_names: Vec<String>,
    /// Sorted by bitmask; the epigraph column, if any, is last.
    pub columns: Vec<VarSet>,
    pub rows: Vec<Constraint>,
    /// Minimized.
    pub objective: LinearForm,
    /// Label of the normalization row.
    pub normalization: Option<String>,
    pub reduction: Option<Reduction>,
    pub options: BuildOptions,
}

impl Lp {
    pub fn row(&self, label: &str) -> Option<&Constraint> {
        self.rows.iter().find(|r| r.label == label)
    }

    pub fn column_index(&self, v: VarSet) -> Option<usize> {
        self.columns.binary_search(&v).ok()
    }

    /// The LP whose rows certificates refer to: the unreduced origin, if any.
    pub fn unreduced(&self) -> &Lp {
        match &self.reduction {
            Some(r) => r.origin.unreduced(),
            None => self,
        }
    }

    /// Checks that every row only uses listed columns and labels are unique.
    pub fn check(&self) -> Result<()> {
        let mut labels = std::collections::HashSet::new();
        for r in &self.rows {
            if !labels.insert(&r.label) {
                return Err(Error::Problem(format!("duplicate row label `{}`", r.label)));
            }
            for v in r.lhs.terms().keys() {
                if self.column_index(*v).is_none() {
                    return Err(Error::Problem(format!("row `{}` uses an unknown column", r.label)));
                }
            }
        }
        for v in self.objective.terms().keys() {
            if self.column_index(*v).is_none() {
                return Err(Error::Problem("objective uses an unknown column".into()));
            }
        }
        Ok(())
    }
}

/// Assembles the LP: elemental inequalities over all variables, base
/// constraints, invariance equalities, copy-step rows, epigraph rows and
/// the normalization, in that order.
pub fn build_lp(p: &Problem, options: &BuildOptions) -> Result<Lp> {
    p.validate()?;
    let has_symmetry = options.symmetry != SymmetryMode::Off && !p.symmetry.is_empty();
    if options.extra_symmetry && options.symmetry != SymmetryMode::Quotient {
        return Err(Error::Problem("extra symmetry needs the quotient mode".into()));
    }
    if has_symmetry {
        p.check_ground_invariance()?;
    }
    if options.symmetry != SymmetryMode::Quotient || !has_symmetry && !options.extra_symmetry {
        let mode = if has_symmetry {
            options.symmetry
        } else {
            SymmetryMode::Off
        };
        let mut lp = assemble(p, options, mode == SymmetryMode::InvarianceEqs)?;
        lp.options = options.clone();
        return Ok(lp);
    }

    let n = match options.copy_steps {
        CopySelection::None => p.ground,
        _ => p.variables.len(),
    };
    let mut gens: Vec<_> = p.symmetry.iter().map(|g| g.extended(n)).collect();
    if options.extra_symmetry {
        if n < p.variables.len() {
            return Err(Error::Problem("extra symmetry acts on removed copy variables".into()));
        }
        gens.extend(p.extra_symmetry.iter().map(|g| g.extended(n)));
    }
    let group = PermGroup::closure(n, &gens)?;

    let mut plain = assemble(p, options, false)?;
    plain.options = BuildOptions {
        symmetry: SymmetryMode::Off,
        ..options.clone()
    };
    let mut lp = match quotient_reduce(&plain, &group) {
        Ok(lp) => lp,
        Err(Error::NotInvariant(why)) => {
            if options.extra_symmetry {
                return Err(Error::NotInvariant(why));
            }
            // The copy steps break the symmetry: fix the ground coordinates
            // by invariance equalities and substitute only those.
            let mut with_eqs = assemble(p, options, true)?;
            with_eqs.options = BuildOptions {
                symmetry: SymmetryMode::InvarianceEqs,
                ..options.clone()
            };
            let ground_group = p.group()?.extended(n);
            substitute_orbits(&with_eqs, &ground_group, VarSet::full(p.ground))?
        }
        Err(e) => return Err(e),
    };
    lp.options = options.clone();
    Ok(lp)
}

fn assemble(p: &Problem, options: &BuildOptions, invariance_eqs: bool) -> Result<Lp> {
    let steps_on = |k: usize| match &options.copy_steps {
        CopySelection::All => true,
        CopySelection::None => false,
        CopySelection::Drop(ks) => !ks.contains(&(k + 1)),
    };
    if let CopySelection::Drop(ks) = &options.copy_steps {
        if let Some(k) = ks.iter().find(|&&k| k == 0 || k > p.copy_steps.len()) {
            return Err(Error::Problem(format!(
                "no copy step {k} (problem has {})",
                p.copy_steps.len()
            )));
        }
    }
    let names: Vec<String> = match options.copy_steps {
        CopySelection::None => p.ground_names().to_vec(),
        _ => p.variables.clone(),
    };
    let scope = VarSet::full(names.len());
    let in_scope = |f: &LinearForm, what: &str| {
        if f.support().without(VarSet::EPIGRAPH).is_subset(scope) {
            Ok(())
        } else {
            Err(Error::Problem(format!("{what} uses copy variables that were removed")))
        }
    };

    let mut rows = elemental_inequalities(&names)?;
    for c in &p.constraints {
        in_scope(&c.lhs, &c.label)?;
        rows.push(c.clone());
    }
    if invariance_eqs {
        rows.extend(invariance_equalities(&p.group()?, &names));
    }

    // Copy steps: (k, offset) of every active step.
    let active: Vec<(usize, usize)> = (0..p.copy_steps.len())
        .filter(|&k| steps_on(k))
        .map(|k| (k, p.step_offset(k)))
        .collect();
    let mut merged_with_next = vec![false; p.copy_steps.len()];
    let mut merged_rows: Vec<Option<Constraint>> = vec![None; p.copy_steps.len()];
    if options.merged_independence {
        for w in active.windows(2) {
            let ((k1, at1), (k2, at2)) = (w[0], w[1]);
            if k2 != k1 + 1 || merged_with_next[k1] || (k1 > 0 && merged_with_next[k1 - 1]) {
                continue;
            }
            let (s1, s2) = (&p.copy_steps[k1], &p.copy_steps[k2]);
            if let Ok(row) = merged_independence(s1, at1, s2, at2, &format!("copy{}", k1 + 1)) {
                merged_with_next[k1] = true;
                merged_rows[k1] = Some(row);
            }
        }
        if !merged_with_next.iter().any(|&m| m) {
            return Err(Error::Problem(
                "merged independence requested but no pair of steps qualifies".into(),
            ));
        }
    }
    for &(k, at) in &active {
        let tag = format!("copy{}", k + 1);
        let (_, step_rows) = apply_copy_step(&p.copy_steps[k], &names[..at], &tag)?;
        let merged_into_prev = k > 0 && merged_with_next[k - 1];
        for r in step_rows {
            let indep = r.label.ends_with(":indep");
            if indep && (merged_with_next[k] || merged_into_prev) {
                continue;
            }
            rows.push(r);
        }
        if let Some(m) = merged_rows[k].take() {
            rows.push(m);
        }
    }

    let objective = match p.objective.kind {
        ObjectiveKind::MinimizeLinear => {
            in_scope(&p.objective.forms[0], "objective")?;
            p.objective.forms[0].clone()
        }
        ObjectiveKind::MinimizeMax => {
            let t = LinearForm::coord(VarSet::EPIGRAPH)?;
            for (k, f) in p.objective.forms.iter().enumerate() {
                in_scope(f, "objective")?;
                rows.push(Constraint::ge(
                    format!("problem:epi:{}", epigraph_tag(f, &names, k)),
                    t.clone() - f.clone(),
                ));
            }
            t
        }
    };
    let mut normalization = None;
    if let Some(n) = &p.normalization {
        in_scope(&n.form, "normalization")?;
        let mut f = n.form.clone();
        f.add_constant(&-n.value.clone());
        rows.push(Constraint::eq(NORMALIZATION_LABEL, f));
        normalization = Some(NORMALIZATION_LABEL.to_string());
    }

    let mut columns: Vec<VarSet> = scope.subsets().skip(1).collect();
    columns.sort();
    if p.objective.kind == ObjectiveKind::MinimizeMax {
        columns.push(VarSet::EPIGRAPH);
    }
    let lp = Lp {
        name: p.name.clone(),
        var_names: names,
        columns,
        rows,
        objective,
        normalization,
        reduction: None,
        options: options.clone(),
    };
    lp.check()?;
    Ok(lp)
}

/// `H(S1)` for a single coordinate, the 1-based position otherwise.
fn epigraph_tag(f: &LinearForm, names: &[String], k: usize) -> String {
    let terms = f.terms();
    if terms.len() == 1 && Zero::is_zero(f.constant()) {
        let (v, c) = terms.iter().next().expect("one term");
        if One::is_one(c) {
            return format!("H({})", v.names(names));
        }
    }
    (k + 1).to_string()
}
