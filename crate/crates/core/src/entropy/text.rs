//! Textual syntax for linear forms: `3/2*H(A,B) - H(C|D) + I(A;B|C) - 1`.

use num_traits::{One, Signed, Zero};

use super::{LinearForm, VarSet};
use crate::error::ParseError;
use crate::rational::{parse_rational, Rational};
use crate::text::{tokenize, Cursor, Tok};

pub fn render_form(f: &LinearForm, names: &[String]) -> String {
    let mut out = String::new();
    let push = |out: &mut String, c: &Rational, atom: Option<String>| {
        let neg = c.is_negative();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        match atom {
            Some(atom) => {
                if !a.is_one() {
                    out.push_str(&a.to_string());
                    out.push('*');
                }
                out.push_str(&atom);
            }
            None => out.push_str(&a.to_string()),
        }
    };
    for (v, c) in f.terms() {
        push(&mut out, c, Some(render_coord(*v, names)));
    }
    if !f.constant().is_zero() {
        push(&mut out, f.constant(), None);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn render_coord(v: VarSet, names: &[String]) -> String {
    if v.is_epigraph() {
        "t".to_string()
    } else {
        format!("H({})", v.names(names))
    }
}

/// Parses a complete form; the whole input must be consumed.
pub fn parse_form(src: &str, names: &[String]) -> Result<LinearForm, ParseError> {
    let toks = tokenize(src)?;
    let mut cur = Cursor::new(&toks);
    let f = parse_form_tokens(&mut cur, names)?;
    if !cur.is_done() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(f)
}

/// Parses a form from the cursor, stopping at the first token that cannot
/// continue it (`;`, `=`, `>=`, `)`, ...).
pub fn parse_form_tokens(cur: &mut Cursor<'_>, names: &[String]) -> Result<LinearForm, ParseError> {
    let mut f = LinearForm::zero();
    let mut first = true;
    loop {
        let mut sign = Rational::one();
        if cur.eat_sym("-") {
            sign = -sign;
        } else if !cur.eat_sym("+") && !first {
            break;
        }
        first = false;
        let coef = if matches!(cur.peek(), Some(Tok::Num(_))) {
            let c = parse_number(cur)?;
            cur.eat_sym("*");
            Some(c)
        } else {
            None
        };
        let has_atom = matches!(cur.peek(), Some(Tok::Ident(s)) if s == "H" || s == "I" || s == "t");
        if !has_atom {
            match coef {
                Some(c) => {
                    f.add_constant(&(sign * c));
                    continue;
                }
                None => return Err(cur.error("expected term")),
            }
        }
        let atom = parse_atom(cur, names)?;
        let k = sign * coef.unwrap_or_else(Rational::one);
        f.add_scaled(&atom, &k);
    }
    Ok(f)
}

pub fn parse_number(cur: &mut Cursor<'_>) -> Result<Rational, ParseError> {
    let pos = cur.pos();
    let mut text = match cur.next().map(|t| &t.tok) {
        Some(Tok::Num(s)) => s.clone(),
        _ => return Err(ParseError::new(pos, "expected number")),
    };
    if cur.is_sym("/") && matches!(cur.peek_at(1), Some(Tok::Num(_))) {
        cur.next();
        if let Some(Tok::Num(d)) = cur.next().map(|t| &t.tok) {
            text.push('/');
            text.push_str(d);
        }
    }
    parse_rational(&text).ok_or_else(|| ParseError::new(pos, format!("invalid number `{text}`")))
}

fn parse_atom(cur: &mut Cursor<'_>, names: &[String]) -> Result<LinearForm, ParseError> {
    let (kind, pos) = cur.expect_ident()?;
    let err = |e: crate::error::Error| ParseError::new(pos, e.to_string());
    match kind.as_str() {
        "t" => Ok(LinearForm::coord(VarSet::EPIGRAPH).expect("non-empty")),
        "H" => {
            cur.expect_sym("(")?;
            let v = parse_name_list(cur, names)?;
            let w = if cur.eat_sym("|") {
                parse_name_list(cur, names)?
            } else {
                VarSet::EMPTY
            };
            cur.expect_sym(")")?;
            LinearForm::cond_entropy(v, w).map_err(err)
        }
        "I" => {
            cur.expect_sym("(")?;
            let v = parse_name_list(cur, names)?;
            cur.expect_sym(";")?;
            let w = parse_name_list(cur, names)?;
            let u = if cur.eat_sym("|") {
                parse_name_list(cur, names)?
            } else {
                VarSet::EMPTY
            };
            cur.expect_sym(")")?;
            LinearForm::cond_mutual_info(v, w, u).map_err(err)
        }
        _ => Err(ParseError::new(pos, format!("unknown quantity `{kind}`"))),
    }
}

/// `A,B,C` resolved against `names`.
pub fn parse_name_list(cur: &mut Cursor<'_>, names: &[String]) -> Result<VarSet, ParseError> {
    let mut set = VarSet::EMPTY;
    loop {
        let (name, pos) = cur.expect_ident()?;
        let i = names
            .iter()
            .position(|n| *n == name)
            .ok_or_else(|| ParseError::new(pos, format!("unknown variable `{name}`")))?;
        set |= VarSet::singleton(i);
        if !cur.eat_sym(",") {
            return Ok(set);
        }
    }
}
