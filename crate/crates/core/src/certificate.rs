//! Dual certificates: rational multipliers on labelled LP rows whose
//! weighted sum is a target inequality.
//!
//! ```text
//! # entcopy certificate
//! problem ingleton
//! options symmetry=invariance-eqs merged-independence=false extra-symmetry=false copy-steps=all
//! options-hash 5c1f...
//! variables A B C D R S T U
//! target 4503*H(A,B) + ... >= 0
//! bound -3/19
//! factor 4503 : elem:I(A;B|{C,D})
//! ...
//! end
//! ```
//!
//! The target is `s·objective − m·normalization + κ` for some `s > 0`, so
//! under the normalization the objective is at least `(m·value − κ)/s`
//! (plus the objective's constant); that number is the bound.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use sha2::{Digest, Sha256};

use crate::constraint::{Constraint, Relation};
use crate::entropy::text::{parse_form, render_form};
use crate::entropy::{LinearForm, VarSet};
use crate::error::{Error, ParseError, Pos, Result};
use crate::lp::{Lp, ReductionKind, Solution, Status};
use crate::rational::{lcm_of_denominators, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub problem: String,
    /// Build options the rows come from, as written by `BuildOptions`.
    pub options: String,
    pub variables: Vec<String>,
    pub entries: Vec<(String, Rational)>,
    /// Certified inequality `target >= 0`.
    pub target: LinearForm,
    /// Claimed lower bound on the objective.
    pub bound: Option<Rational>,
}

/// Hex SHA-256 of an options string.
pub fn options_hash(options: &str) -> String {
    hex::encode(Sha256::digest(options.as_bytes()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    /// `Σ factor · lhs`.
    pub sum: LinearForm,
    /// `sum − target`; zero on success.
    pub residual: LinearForm,
    /// Inequality rows with a negative factor.
    pub sign_violations: Vec<String>,
    pub entries: usize,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.residual.is_zero() && self.sign_violations.is_empty()
    }
}

impl Certificate {
    pub fn options_hash(&self) -> String {
        options_hash(&self.options)
    }

    /// Checks the certificate against `rows` exactly.
    pub fn verify(&self, rows: &[Constraint]) -> Result<VerifyReport> {
        let by_label: HashMap<&str, &Constraint> = rows.iter().map(|r| (r.label.as_str(), r)).collect();
        let mut sum = LinearForm::zero();
        let mut sign_violations = Vec::new();
        for (label, k) in &self.entries {
            let row = by_label
                .get(label.as_str())
                .ok_or_else(|| Error::UnknownLabel(label.clone()))?;
            if row.relation == Relation::Ge && k.is_negative() {
                sign_violations.push(label.clone());
            }
            sum.add_scaled(&row.lhs, k);
        }
        let residual = sum.clone() - self.target.clone();
        Ok(VerifyReport {
            sum,
            residual,
            sign_violations,
            entries: self.entries.len(),
        })
    }

    /// Verifies against `lp.unreduced()` and checks that the target implies
    /// the claimed bound for `lp`'s objective. Returns the implied bound.
    pub fn check(&self, lp: &Lp) -> Result<Rational> {
        let base = lp.unreduced();
        if self.problem != lp.name {
            return Err(Error::Certificate(format!(
                "certificate is for `{}`, not `{}`",
                self.problem, lp.name
            )));
        }
        if self.options != lp.options.to_string() {
            return Err(Error::Certificate(format!(
                "certificate was built with `{}`, the LP with `{}`",
                self.options, lp.options
            )));
        }
        let report = self.verify(&base.rows)?;
        if !report.sign_violations.is_empty() {
            return Err(Error::Certificate(format!(
                "negative factor on inequality `{}`",
                report.sign_violations[0]
            )));
        }
        if !report.residual.is_zero() {
            return Err(Error::Certificate(format!(
                "sum differs from the target by {}",
                render_form(&report.residual, &self.variables)
            )));
        }
        let implied = implied_bound(&self.target, base)?;
        match &self.bound {
            Some(b) if *b != implied => Err(Error::Certificate(format!(
                "target implies {implied}, the header claims {b}"
            ))),
            _ => Ok(implied),
        }
    }

    pub fn emit(&self) -> String {
        let mut out = String::from("# entcopy certificate\n");
        let _ = writeln!(out, "problem {}", self.problem);
        let _ = writeln!(out, "options {}", self.options);
        let _ = writeln!(out, "options-hash {}", self.options_hash());
        let _ = writeln!(out, "variables {}", self.variables.join(" "));
        let _ = writeln!(out, "target {} >= 0", render_form(&self.target, &self.variables));
        if let Some(b) = &self.bound {
            let _ = writeln!(out, "bound {b}");
        }
        for (label, k) in &self.entries {
            if !k.is_zero() {
                let _ = writeln!(out, "factor {k} : {label}");
            }
        }
        out.push_str("end\n");
        out
    }

    pub fn parse(text: &str) -> Result<Certificate> {
        let mut problem = None;
        let mut options = None;
        let mut hash = None;
        let mut variables: Vec<String> = Vec::new();
        let mut target = None;
        let mut bound = None;
        let mut entries = Vec::new();
        let mut ended = false;
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let col = raw.len() - raw.trim_start().len() + 1;
            let pos = Pos { line: ln + 1, col };
            let err = |msg: String| Error::Parse(ParseError::new(pos, msg));
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if ended {
                return Err(err("text after `end`".into()));
            }
            let (kw, rest) = line.split_once(' ').unwrap_or((line, ""));
            let rest = rest.trim();
            let form = |src: &str| {
                parse_form(src, &variables).map_err(|e| {
                    Error::Parse(ParseError::new(
                        Pos {
                            line: ln + 1,
                            col: col + kw.len() + e.pos.col,
                        },
                        e.msg,
                    ))
                })
            };
            match kw {
                "problem" => problem = Some(rest.to_string()),
                "options" => options = Some(rest.to_string()),
                "options-hash" => hash = Some(rest.to_string()),
                "variables" => variables = rest.split_whitespace().map(str::to_string).collect(),
                "target" => {
                    let f = rest
                        .strip_suffix(">= 0")
                        .ok_or_else(|| err("target must end in `>= 0`".into()))?;
                    target = Some(form(f.trim())?);
                }
                "bound" => {
                    bound = Some(parse_rational(rest).ok_or_else(|| err(format!("bad bound `{rest}`")))?);
                }
                "factor" => {
                    let (k, label) = rest
                        .split_once(" : ")
                        .ok_or_else(|| err("expected `factor <rational> : <label>`".into()))?;
                    let k = parse_rational(k).ok_or_else(|| err(format!("bad factor `{k}`")))?;
                    let label = label.trim();
                    if label.is_empty() {
                        return Err(err("missing row label".into()));
                    }
                    if !k.is_zero() {
                        entries.push((label.to_string(), k));
                    }
                }
                "end" => ended = true,
                _ => return Err(err(format!("unknown line `{kw}`"))),
            }
        }
        if !ended {
            return Err(Error::Certificate("truncated certificate (no `end`)".into()));
        }
        let options = options.ok_or_else(|| Error::Certificate("missing `options` line".into()))?;
        if let Some(h) = hash {
            if h != options_hash(&options) {
                return Err(Error::Certificate("options hash does not match the options".into()));
            }
        }
        Ok(Certificate {
            problem: problem.ok_or_else(|| Error::Certificate("missing `problem` line".into()))?,
            options,
            variables,
            entries,
            target: target.ok_or_else(|| Error::Certificate("missing `target` line".into()))?,
            bound,
        })
    }

    /// Certificate from an optimal exact solution of `lp` (possibly a
    /// symmetry-reduced LP; multipliers are lifted to the unreduced rows).
    pub fn from_solution(lp: &Lp, sol: &Solution<Rational>) -> Result<Certificate> {
        if sol.status != Status::Optimal {
            return Err(Error::Certificate(format!("solution is {}", sol.status)));
        }
        Certificate::from_dual(lp, &sol.dual)
    }

    /// Certificate from dual multipliers of `lp`'s rows.
    pub fn from_dual(lp: &Lp, dual: &[(String, Rational)]) -> Result<Certificate> {
        let lifted = lift_dual(lp, dual)?;
        let base = lp.unreduced();
        let norm = base.normalization.as_deref();
        let mut entries: Vec<(String, Rational)> = lifted
            .into_iter()
            .filter(|(l, k)| Some(l.as_str()) != norm && !k.is_zero())
            .collect();
        let scale = Rational::from_integer(lcm_of_denominators(entries.iter().map(|e| &e.1)));
        for e in &mut entries {
            e.1 = &e.1 * &scale;
        }
        let index: HashMap<&str, &Constraint> = base.rows.iter().map(|r| (r.label.as_str(), r)).collect();
        let mut target = LinearForm::zero();
        for (l, k) in &entries {
            let row = index.get(l.as_str()).ok_or_else(|| Error::UnknownLabel(l.clone()))?;
            target.add_scaled(&row.lhs, k);
        }
        let bound = implied_bound(&target, base)?;
        Ok(Certificate {
            problem: lp.name.clone(),
            options: lp.options.to_string(),
            variables: base.var_names.clone(),
            entries,
            target,
            bound: Some(bound),
        })
    }
}

/// `(s, m)` with `target_hom = s·objective − m·normalization`, `s > 0`.
fn decompose(target: &LinearForm, objective: &LinearForm, norm: Option<&LinearForm>) -> Option<(Rational, Rational)> {
    let t = target.homogeneous();
    let o = objective.homogeneous();
    let zero = LinearForm::zero();
    let n = norm.map(|f| f.homogeneous()).unwrap_or(zero);
    let only_o = o.terms().iter().find(|(v, _)| n.coefficient(**v).is_zero());
    let only_n = n.terms().iter().find(|(v, _)| o.coefficient(**v).is_zero());
    let (s, m) = match (only_o, only_n) {
        (Some((v, c)), _) => {
            let s = t.coefficient(*v) / c;
            let m = match n.terms().iter().next() {
                Some((w, d)) => (s.clone() * o.coefficient(*w) - t.coefficient(*w)) / d,
                None => Rational::zero(),
            };
            (s, m)
        }
        (None, Some((w, d))) => {
            let m = -t.coefficient(*w) / d;
            let (v, c) = o.terms().iter().next()?;
            let s = (t.coefficient(*v) + m.clone() * n.coefficient(*v)) / c;
            (s, m)
        }
        (None, None) => return None,
    };
    if !s.is_positive() {
        return None;
    }
    let rebuilt = o.scale(&s) - n.scale(&m);
    (rebuilt == t).then_some((s, m))
}

/// Lower bound on `lp`'s objective implied by `target >= 0` under the
/// normalization.
pub fn implied_bound(target: &LinearForm, lp: &Lp) -> Result<Rational> {
    let norm_row = match &lp.normalization {
        Some(label) => Some(lp.row(label).ok_or_else(|| Error::UnknownLabel(label.clone()))?),
        None => None,
    };
    let (s, m) = decompose(target, &lp.objective, norm_row.map(|r| &r.lhs)).ok_or_else(|| {
        Error::Certificate("target is not a positive multiple of the objective modulo the normalization".into())
    })?;
    // The normalization row reads `N − value = 0`.
    let value = norm_row.map(|r| -r.lhs.constant().clone()).unwrap_or_default();
    Ok(lp.objective.constant() + (m * value - target.constant()) / s)
}

/// Multipliers of `lp`'s rows expressed on the rows of `lp.unreduced()`,
/// in row order.
pub fn lift_dual(lp: &Lp, dual: &[(String, Rational)]) -> Result<Vec<(String, Rational)>> {
    let Some(red) = &lp.reduction else {
        return Ok(dual.to_vec());
    };
    let origin = &*red.origin;
    let index: HashMap<&str, usize> = lp.rows.iter().enumerate().map(|(i, r)| (r.label.as_str(), i)).collect();
    let mut acc: Vec<Rational> = vec![Rational::zero(); origin.rows.len()];
    match &red.kind {
        ReductionKind::Full => {
            // Average over the group: every image of an origin row is again
            // an origin row (equalities possibly negated).
            let keys: HashMap<(Relation, LinearForm), (usize, bool)> = origin
                .rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let (k, flipped) = key(r);
                    (k, (i, flipped))
                })
                .collect();
            let order = Rational::from_integer(BigInt::from(red.group.order()));
            for (label, y) in dual {
                let i = *index.get(label.as_str()).ok_or_else(|| Error::UnknownLabel(label.clone()))?;
                let row = &origin.rows[red.row_origin[i]];
                let share = y / &order;
                for g in red.group.elements() {
                    let image = Constraint {
                        label: String::new(),
                        lhs: g.act_form(&row.lhs),
                        relation: row.relation,
                    };
                    let (k, flipped) = key(&image);
                    let &(j, jflipped) = keys.get(&k).ok_or_else(|| {
                        Error::NotInvariant(format!("image of row `{}` is not a row", row.label))
                    })?;
                    if flipped == jflipped {
                        acc[j] += &share;
                    } else {
                        acc[j] -= &share;
                    }
                }
            }
        }
        ReductionKind::Scoped(_) => {
            let mut sum = LinearForm::zero();
            for (label, y) in dual {
                let i = *index.get(label.as_str()).ok_or_else(|| Error::UnknownLabel(label.clone()))?;
                let o = red.row_origin[i];
                acc[o] += y;
                sum.add_scaled(&origin.rows[o].lhs, y);
            }
            // The substituted coordinates leave a residual that the
            // invariance equalities absorb.
            let residual = origin.objective.homogeneous() - sum.homogeneous();
            let sym: HashMap<VarSet, usize> = origin
                .rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r.relation == Relation::Eq && r.label.starts_with("sym:"))
                .filter_map(|(i, r)| {
                    let rep = red.group.representative(*r.lhs.terms().keys().next()?);
                    r.lhs.terms().keys().find(|v| **v != rep).map(|v| (*v, i))
                })
                .collect();
            for (v, c) in residual.terms() {
                if red.group.representative(*v) == *v {
                    // Balanced by the equalities of the other orbit members.
                    continue;
                }
                let Some(&j) = sym.get(v) else {
                    return Err(Error::Certificate(format!(
                        "cannot lift: no invariance equality for {}",
                        crate::entropy::text::render_coord(*v, &origin.var_names)
                    )));
                };
                acc[j] += c / origin.rows[j].lhs.coefficient(*v);
            }
        }
    }
    let lifted: Vec<(String, Rational)> = origin
        .rows
        .iter()
        .zip(acc)
        .filter(|(_, k)| !k.is_zero())
        .map(|(r, k)| (r.label.clone(), k))
        .collect();
    lift_dual(origin, &lifted)
}

fn key(r: &Constraint) -> ((Relation, LinearForm), bool) {
    match r.relation {
        Relation::Eq => {
            let (f, flipped) = r.lhs.sign_normalized();
            ((Relation::Eq, f), flipped)
        }
        Relation::Ge => ((Relation::Ge, r.lhs.clone()), false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{build_lp, solve_exact, BuildOptions, CopySelection};
    use crate::problem::builtin_ingleton;
    use crate::rational::ratio;

    #[test]
    fn empty_certificate_passes() {
        let c = Certificate {
            problem: "x".into(),
            options: BuildOptions::default().to_string(),
            variables: vec!["A".into()],
            entries: Vec::new(),
            target: LinearForm::zero(),
            bound: None,
        };
        assert!(c.verify(&[]).unwrap().passed());
        assert_eq!(Certificate::parse(&c.emit()).unwrap(), c);
    }

    #[test]
    fn shannon_only_ingleton() {
        let o = BuildOptions {
            copy_steps: CopySelection::None,
            ..Default::default()
        };
        let lp = build_lp(&builtin_ingleton(), &o).unwrap();
        let sol = solve_exact(&lp).unwrap();
        let cert = Certificate::from_solution(&lp, &sol).unwrap();
        assert_eq!(cert.bound, Some(ratio(-1, 4)));
        assert_eq!(cert.check(&lp).unwrap(), ratio(-1, 4));
        assert!(cert
            .entries
            .iter()
            .all(|(l, _)| l.starts_with("elem:") || l.starts_with("sym:")));
        let back = Certificate::parse(&cert.emit()).unwrap();
        assert_eq!(back, cert);
    }
}
