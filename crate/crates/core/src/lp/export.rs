//! Plain-text LP interchange format.
//!
//! ```text
//! # entcopy lp
//! name ingleton
//! options symmetry=invariance-eqs merged-independence=false ...
//! variables A B C D R S T U
//! columns 255
//! column H(A)
//! ...
//! minimize -H(A) - H(B) + H(A,B) + ...
//! rows 1863
//! row elem:H(A|*) H(A,B,C,D,R,S,T,U) - H(B,C,D,R,S,T,U) >= 0
//! ...
//! end
//! ```
//!
//! Every row is `row <label> <form> (>=|=) 0` with exact rational
//! coefficients. Columns are free.

use std::fmt::Write as _;

use super::{BuildOptions, Lp};
use crate::constraint::{Constraint, Relation};
use crate::entropy::text::{parse_form, render_coord, render_form};
use crate::entropy::VarSet;
use crate::error::{Error, ParseError, Pos, Result};

pub fn export_lp(lp: &Lp) -> String {
    let names = &lp.var_names;
    let mut out = String::new();
    out.push_str("# entcopy lp\n");
    let _ = writeln!(out, "name {}", lp.name);
    let _ = writeln!(out, "options {}", lp.options);
    let _ = writeln!(out, "variables {}", names.join(" "));
    let _ = writeln!(out, "columns {}", lp.columns.len());
    for c in &lp.columns {
        let _ = writeln!(out, "column {}", render_coord(*c, names));
    }
    let _ = writeln!(out, "minimize {}", render_form(&lp.objective, names));
    let _ = writeln!(out, "rows {}", lp.rows.len());
    for r in &lp.rows {
        let _ = writeln!(
            out,
            "row {} {} {} 0",
            r.label,
            render_form(&r.lhs, names),
            r.relation
        );
    }
    out.push_str("end\n");
    out
}

/// Reads an exported LP back (without reduction metadata).
pub fn parse_lp_export(text: &str) -> Result<Lp> {
    let mut name = None;
    let mut options = None;
    let mut names: Vec<String> = Vec::new();
    let mut columns = Vec::new();
    let mut objective = None;
    let mut rows = Vec::new();
    let mut ended = false;
    for (ln, line) in text.lines().enumerate() {
        let pos = Pos { line: ln + 1, col: 1 };
        let err = |msg: String| Error::Parse(ParseError::new(pos, msg));
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (kw, rest) = line.split_once(' ').unwrap_or((line, ""));
        match kw {
            "name" => name = Some(rest.to_string()),
            "options" => options = Some(rest.parse::<BuildOptions>()?),
            "variables" => names = rest.split_whitespace().map(str::to_string).collect(),
            "columns" | "rows" => {}
            "column" => {
                let v = if rest == "t" {
                    VarSet::EPIGRAPH
                } else {
                    let f = parse_form(rest, &names).map_err(|e| err(e.msg))?;
                    let mut keys = f.terms().keys();
                    match (keys.next(), keys.next()) {
                        (Some(v), None) => *v,
                        _ => return Err(err(format!("bad column `{rest}`"))),
                    }
                };
                columns.push(v);
            }
            "minimize" => objective = Some(parse_form(rest, &names).map_err(|e| err(e.msg))?),
            "row" => {
                let (label, body) = rest
                    .split_once(' ')
                    .ok_or_else(|| err("row without body".into()))?;
                let (form, relation) = if let Some(f) = body.strip_suffix(">= 0") {
                    (f, Relation::Ge)
                } else if let Some(f) = body.strip_suffix("= 0") {
                    (f, Relation::Eq)
                } else {
                    return Err(err("row must end in `>= 0` or `= 0`".into()));
                };
                rows.push(Constraint {
                    label: label.to_string(),
                    lhs: parse_form(form.trim(), &names).map_err(|e| err(e.msg))?,
                    relation,
                });
            }
            "end" => ended = true,
            _ => return Err(err(format!("unknown line `{kw}`"))),
        }
    }
    if !ended {
        return Err(Error::Problem("LP export is truncated (no `end`)".into()));
    }
    let normalization = rows
        .iter()
        .any(|r: &Constraint| r.label == super::NORMALIZATION_LABEL)
        .then(|| super::NORMALIZATION_LABEL.to_string());
    let lp = Lp {
        name: name.unwrap_or_default(),
        var_names: names,
        columns,
        rows,
        objective: objective.ok_or_else(|| Error::Problem("LP export without objective".into()))?,
        normalization,
        reduction: None,
        options: options.unwrap_or_default(),
    };
    lp.check()?;
    Ok(lp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{build_lp, BuildOptions};
    use crate::problem::builtin_ingleton;

    #[test]
    fn export_round_trip() {
        let lp = build_lp(&builtin_ingleton(), &BuildOptions::default()).unwrap();
        let text = export_lp(&lp);
        let back = parse_lp_export(&text).unwrap();
        assert_eq!(back.rows, lp.rows);
        assert_eq!(back.columns, lp.columns);
        assert_eq!(back.objective, lp.objective);
        assert_eq!(export_lp(&back), text);
    }
}
