//! Plain-text problem syntax.
//!
//! ```text
//! # comment
//! name ingleton;
//! var A, B, C, D;
//! symmetry (A B);
//! symmetry (C D);
//! copy (R,S) := copy(B,D | A,C) given ();
//! copy T := copy(C | A,B,S) given (D,R);
//! constraint lab: H(A) >= H(B);
//! normalize H(A,B,C,D) = 1;
//! minimize I(A;B|C) + I(A;B|D) + I(C;D) - I(A;B);
//! ```
//!
//! Copied items may be tuples: `copy (V',W') := copy((S0,S1),(S6,S7) | ...)`.
//! `minimize max(f1, f2, ...)` minimizes a maximum. Cycle entries are names
//! or 0-based indices. `extra_symmetry` lists optional generators over all
//! variables that are only used on request.

use num_traits::Zero;

use super::{Normalization, Objective, ObjectiveKind, Problem};
use crate::constraint::{Constraint, Relation};
use crate::entropy::text::{parse_form_tokens, parse_name_list, parse_number, render_form};
use crate::entropy::VarSet;
use crate::error::{Error, ParseError, Pos};
use crate::extension::CopyStep;
use crate::symmetry::Perm;
use crate::text::{tokenize, Cursor, Tok};

pub fn parse_problem(src: &str) -> Result<Problem, Error> {
    let toks = tokenize(src)?;
    let mut cur = Cursor::new(&toks);
    let mut p = Parser::default();
    while !cur.is_done() {
        p.statement(&mut cur)?;
    }
    p.finish(cur.pos())
}

#[derive(Default)]
struct Parser {
    name: Option<String>,
    variables: Vec<String>,
    ground: Option<usize>,
    constraints: Vec<Constraint>,
    steps: Vec<CopyStep>,
    symmetry: Vec<Perm>,
    extra: Vec<(Pos, Vec<Vec<usize>>)>,
    normalization: Option<Normalization>,
    objective: Option<Objective>,
}

impl Parser {
    fn statement(&mut self, cur: &mut Cursor<'_>) -> Result<(), Error> {
        let (kw, pos) = cur.expect_ident()?;
        match kw.as_str() {
            "name" => {
                let mut name = String::new();
                while !cur.is_sym(";") {
                    match cur.next().map(|t| &t.tok) {
                        Some(Tok::Ident(s)) | Some(Tok::Num(s)) => name.push_str(s),
                        Some(Tok::Sym(s)) if *s == "-" || *s == ":" => name.push_str(s),
                        _ => return Err(cur.error("expected problem name").into()),
                    }
                }
                if name.is_empty() || self.name.replace(name).is_some() {
                    return Err(ParseError::new(pos, "expected exactly one problem name").into());
                }
            }
            "var" => {
                if !self.steps.is_empty() {
                    return Err(ParseError::new(pos, "`var` after a copy step").into());
                }
                loop {
                    let (v, vpos) = cur.expect_ident()?;
                    self.declare(v, vpos)?;
                    if !cur.eat_sym(",") {
                        break;
                    }
                }
            }
            "symmetry" => {
                let ground = self.variables.len();
                let cycles = self.cycles(cur, ground)?;
                let g = Perm::from_cycles(ground, &cycles)
                    .map_err(|e| ParseError::new(pos, e.to_string()))?;
                self.symmetry.push(g);
            }
            "extra_symmetry" => {
                let cycles = self.cycles(cur, self.variables.len())?;
                self.extra.push((pos, cycles));
            }
            "constraint" => {
                let label = if matches!(cur.peek(), Some(Tok::Ident(_))) && cur.peek_at(1) == Some(&Tok::Sym(":")) {
                    let (l, _) = cur.expect_ident()?;
                    cur.expect_sym(":")?;
                    l
                } else {
                    format!("c{}", self.constraints.len() + 1)
                };
                let lhs = parse_form_tokens(cur, &self.variables)?;
                let (rel, flip) = if cur.eat_sym(">=") {
                    (Relation::Ge, false)
                } else if cur.eat_sym("<=") {
                    (Relation::Ge, true)
                } else if cur.eat_sym("=") {
                    (Relation::Eq, false)
                } else {
                    return Err(cur.error("expected `>=`, `<=` or `=`").into());
                };
                let rhs = parse_form_tokens(cur, &self.variables)?;
                let f = if flip { rhs - lhs } else { lhs - rhs };
                if f.coefficient(VarSet::EPIGRAPH) != Zero::zero() {
                    return Err(ParseError::new(pos, "constraints may not mention `t`").into());
                }
                let label = format!("problem:{label}");
                if self.constraints.iter().any(|c| c.label == label) {
                    return Err(Error::DuplicateName(label));
                }
                self.constraints.push(Constraint {
                    label,
                    lhs: f,
                    relation: rel,
                });
            }
            "copy" => self.copy(cur, pos)?,
            "normalize" => {
                let form = parse_form_tokens(cur, &self.variables)?;
                cur.expect_sym("=")?;
                let neg = cur.eat_sym("-");
                let mut value = parse_number(cur)?;
                if neg {
                    value = -value;
                }
                if self.normalization.replace(Normalization { form, value }).is_some() {
                    return Err(ParseError::new(pos, "duplicate `normalize`").into());
                }
            }
            "minimize" => {
                let obj = if cur.is_ident("max") && cur.peek_at(1) == Some(&Tok::Sym("(")) {
                    cur.next();
                    cur.next();
                    let mut forms = vec![parse_form_tokens(cur, &self.variables)?];
                    while cur.eat_sym(",") {
                        forms.push(parse_form_tokens(cur, &self.variables)?);
                    }
                    cur.expect_sym(")")?;
                    Objective::max(forms)
                } else {
                    Objective::linear(parse_form_tokens(cur, &self.variables)?)
                };
                if self.objective.replace(obj).is_some() {
                    return Err(ParseError::new(pos, "duplicate objective").into());
                }
            }
            _ => return Err(ParseError::new(pos, format!("unknown statement `{kw}`")).into()),
        }
        cur.expect_sym(";")?;
        Ok(())
    }

    fn declare(&mut self, v: String, pos: Pos) -> Result<(), Error> {
        if v == "t" || v == "H" || v == "I" {
            return Err(ParseError::new(pos, format!("`{v}` is reserved")).into());
        }
        if self.variables.contains(&v) {
            return Err(Error::DuplicateName(v));
        }
        self.variables.push(v);
        Ok(())
    }

    /// `(a b c)(d e)`; entries are names or 0-based indices below `limit`.
    fn cycles(&self, cur: &mut Cursor<'_>, limit: usize) -> Result<Vec<Vec<usize>>, Error> {
        let mut out = Vec::new();
        while cur.eat_sym("(") {
            let mut cyc = Vec::new();
            while !cur.eat_sym(")") {
                let pos = cur.pos();
                let i = match cur.next().map(|t| &t.tok) {
                    Some(Tok::Ident(s)) => self
                        .variables
                        .iter()
                        .position(|n| n == s)
                        .ok_or_else(|| Error::UnknownVariable(s.clone()))?,
                    Some(Tok::Num(s)) => s
                        .parse::<usize>()
                        .map_err(|_| ParseError::new(pos, format!("bad index `{s}`")))?,
                    _ => return Err(ParseError::new(pos, "expected variable in cycle").into()),
                };
                if i >= limit {
                    return Err(ParseError::new(pos, "cycle entry outside the allowed variables").into());
                }
                cyc.push(i);
            }
            out.push(cyc);
        }
        if out.is_empty() {
            return Err(cur.error("expected cycle `( ... )`").into());
        }
        Ok(out)
    }

    fn copy(&mut self, cur: &mut Cursor<'_>, pos: Pos) -> Result<(), Error> {
        if self.ground.is_none() {
            self.ground = Some(self.variables.len());
        }
        let mut targets = Vec::new();
        if cur.eat_sym("(") {
            loop {
                targets.push(cur.expect_ident()?);
                if !cur.eat_sym(",") {
                    break;
                }
            }
            cur.expect_sym(")")?;
        } else {
            targets.push(cur.expect_ident()?);
        }
        cur.expect_sym(":=")?;
        if !cur.is_ident("copy") {
            return Err(cur.error("expected `copy(...)`").into());
        }
        cur.next();
        cur.expect_sym("(")?;
        let mut copied = Vec::new();
        loop {
            if cur.eat_sym("(") {
                copied.push(parse_name_list(cur, &self.variables)?);
                cur.expect_sym(")")?;
            } else {
                copied.push(parse_name_list_one(cur, &self.variables)?);
            }
            if !cur.eat_sym(",") {
                break;
            }
        }
        cur.expect_sym("|")?;
        let over = if cur.is_sym(")") {
            VarSet::EMPTY
        } else {
            parse_name_list(cur, &self.variables)?
        };
        cur.expect_sym(")")?;
        let context = if cur.is_ident("given") {
            cur.next();
            cur.expect_sym("(")?;
            let c = if cur.is_sym(")") {
                VarSet::EMPTY
            } else {
                parse_name_list(cur, &self.variables)?
            };
            cur.expect_sym(")")?;
            c
        } else {
            VarSet::EMPTY
        };
        if targets.len() != copied.len() {
            return Err(ParseError::new(
                pos,
                format!("{} targets for {} copied items", targets.len(), copied.len()),
            )
            .into());
        }
        let step = CopyStep {
            copied,
            over,
            context,
            new_names: targets.iter().map(|(n, _)| n.clone()).collect(),
        };
        step.validate(&self.variables)
            .map_err(|e| ParseError::new(pos, e.to_string()))?;
        for (n, p) in targets {
            self.declare(n, p)?;
        }
        self.steps.push(step);
        Ok(())
    }

    fn finish(self, end: Pos) -> Result<Problem, Error> {
        let n = self.variables.len();
        let extra_symmetry = self
            .extra
            .into_iter()
            .map(|(pos, cycles)| Perm::from_cycles(n, &cycles).map_err(|e| ParseError::new(pos, e.to_string()).into()))
            .collect::<Result<Vec<_>, Error>>()?;
        let objective = self
            .objective
            .ok_or_else(|| ParseError::new(end, "missing `minimize`"))?;
        let problem = Problem {
            name: self.name.unwrap_or_else(|| "unnamed".to_string()),
            ground: self.ground.unwrap_or(n),
            variables: self.variables,
            constraints: self.constraints,
            copy_steps: self.steps,
            symmetry: self.symmetry,
            extra_symmetry,
            normalization: self.normalization,
            objective,
        };
        problem.validate()?;
        Ok(problem)
    }
}

fn parse_name_list_one(cur: &mut Cursor<'_>, names: &[String]) -> Result<VarSet, ParseError> {
    let (name, pos) = cur.expect_ident()?;
    names
        .iter()
        .position(|n| *n == name)
        .map(VarSet::singleton)
        .ok_or_else(|| ParseError::new(pos, format!("unknown variable `{name}`")))
}

fn names_of(v: VarSet, names: &[String]) -> String {
    v.names(names).to_string()
}

/// Canonical text of a problem; `parse_problem(&emit_problem(p))` gives back
/// a problem equal to `p`.
pub fn emit_problem(p: &Problem) -> String {
    let names = &p.variables;
    let mut out = String::new();
    out.push_str(&format!("name {};\n", p.name));
    out.push_str(&format!("var {};\n", p.ground_names().join(", ")));
    for g in &p.symmetry {
        out.push_str(&format!("symmetry {};\n", g.render(names)));
    }
    for (k, step) in p.copy_steps.iter().enumerate() {
        let targets = if step.new_names.len() == 1 {
            step.new_names[0].clone()
        } else {
            format!("({})", step.new_names.join(","))
        };
        let items: Vec<String> = step
            .copied
            .iter()
            .map(|z| {
                if z.len() == 1 {
                    names_of(*z, names)
                } else {
                    format!("({})", names_of(*z, names))
                }
            })
            .collect();
        let at = p.step_offset(k);
        out.push_str(&format!(
            "copy {targets} := copy({} | {}) given ({});\n",
            items.join(","),
            names_of(step.over, &names[..at]),
            names_of(step.context, &names[..at]),
        ));
    }
    for g in &p.extra_symmetry {
        out.push_str(&format!("extra_symmetry {};\n", g.render(names)));
    }
    for c in &p.constraints {
        let label = c.label.strip_prefix("problem:").unwrap_or(&c.label);
        out.push_str(&format!(
            "constraint {label}: {} {} 0;\n",
            render_form(&c.lhs, names),
            c.relation
        ));
    }
    if let Some(n) = &p.normalization {
        out.push_str(&format!("normalize {} = {};\n", render_form(&n.form, names), n.value));
    }
    let forms: Vec<String> = p.objective.forms.iter().map(|f| render_form(f, names)).collect();
    match p.objective.kind {
        ObjectiveKind::MinimizeLinear => out.push_str(&format!("minimize {};\n", forms[0])),
        ObjectiveKind::MinimizeMax => out.push_str(&format!("minimize max({});\n", forms.join(", "))),
    }
    out
}
