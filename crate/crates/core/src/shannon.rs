//! Elemental Shannon inequalities.
//!
//! For `n` variables the elemental family consists of
//!
//! * `H(X_i | X_rest) >= 0` for every `i`, and
//! * `I(X_i ; X_j | X_K) >= 0` for every pair `i < j` and `K ⊆ [n] \ {i,j}`,
//!
//! `n + C(n,2)·2^(n-2)` rows in total. It is the minimal generating set of
//! the cone of Shannon-type inequalities.

use std::collections::HashMap;

use crate::constraint::Constraint;
use crate::entropy::{LinearForm, VarSet, MAX_VARS};
use crate::error::{Error, Result};
use crate::rational::Rational;

pub fn elemental_count(n: usize) -> usize {
    if n < 2 {
        return n;
    }
    n + n * (n - 1) / 2 * (1usize << (n - 2))
}

/// The elemental inequalities over variables `0..names.len()`, monotonicity
/// rows first (by `i`), then `I(i;j|K)` rows ordered by `(i, j, K)` with `K`
/// compared as a bitmask.
pub fn elemental_inequalities(names: &[String]) -> Result<Vec<Constraint>> {
    let n = names.len();
    if n == 0 || n > MAX_VARS {
        return Err(Error::VariableCount(n));
    }
    let all = VarSet::full(n);
    let mut out = Vec::with_capacity(elemental_count(n));
    for i in 0..n {
        let vi = VarSet::singleton(i);
        out.push(Constraint::ge(
            format!("elem:H({}|*)", names[i]),
            LinearForm::cond_entropy(vi, all.without(vi))?,
        ));
    }
    for i in 0..n {
        for j in i + 1..n {
            let (vi, vj) = (VarSet::singleton(i), VarSet::singleton(j));
            for k in all.without(vi | vj).subsets() {
                out.push(Constraint::ge(
                    elemental_label(names, i, j, k),
                    LinearForm::cond_mutual_info(vi, vj, k)?,
                ));
            }
        }
    }
    Ok(out)
}

pub fn elemental_label(names: &[String], i: usize, j: usize, k: VarSet) -> String {
    format!("elem:I({};{}|{{{}}})", names[i], names[j], k.names(names))
}

/// Dense profile indexed by bitmask (index 0 is `H(∅) = 0`).
fn dense_profile<T: Clone + Default>(
    point: &HashMap<VarSet, T>,
    n: usize,
    names: Option<&[String]>,
) -> Result<Vec<T>> {
    let size = 1usize << n;
    let mut h = vec![T::default(); size];
    for (mask, slot) in h.iter_mut().enumerate().skip(1) {
        let v = VarSet::from_bits(mask as u64);
        *slot = point.get(&v).cloned().ok_or_else(|| {
            Error::MissingCoordinate(match names {
                Some(ns) => format!("H({})", v.names(ns)),
                None => format!("{v:?}"),
            })
        })?;
    }
    Ok(h)
}

/// Feeds every elemental inequality at `h` (dense, bitmask-indexed) to
/// `visit` as `(a, b, c, d)` meaning `a - b + c - d >= 0`; stops at the first
/// `false`.
fn for_each_elemental<T>(n: usize, h: &[T], mut visit: impl FnMut(&T, &T, &T, &T) -> bool) -> bool {
    let all = (1usize << n) - 1;
    for i in 0..n {
        // H(all) - H(all \ i) >= 0, written as I-style quadruple with zeros.
        if !visit(&h[all], &h[all & !(1 << i)], &h[0], &h[0]) {
            return false;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let rest = VarSet::from_bits((all & !(1 << i) & !(1 << j)) as u64);
            for k in rest.subsets() {
                let k = k.bits() as usize;
                let ik = k | 1 << i;
                let jk = k | 1 << j;
                let ijk = ik | jk;
                // H(ik) + H(jk) - H(ijk) - H(k)
                if !visit(&h[ik], &h[ijk], &h[jk], &h[k]) {
                    return false;
                }
            }
        }
    }
    true
}

/// `true` iff every elemental inequality holds exactly at `point`.
pub fn is_shannon_feasible(point: &HashMap<VarSet, Rational>, n: usize) -> Result<bool> {
    if n == 0 || n > MAX_VARS {
        return Err(Error::VariableCount(n));
    }
    let h = dense_profile(point, n, None)?;
    Ok(for_each_elemental(n, &h, |a, b, c, d| {
        // a - b + c - d >= 0
        let v = a - b + c - d;
        v >= Rational::default()
    }))
}

/// Floating-point variant: every elemental inequality holds up to `slack`.
pub fn is_shannon_feasible_f64(point: &HashMap<VarSet, f64>, n: usize, slack: f64) -> Result<bool> {
    if n == 0 || n > MAX_VARS {
        return Err(Error::VariableCount(n));
    }
    let h = dense_profile(point, n, None)?;
    Ok(for_each_elemental(n, &h, |a, b, c, d| a - b + c - d >= -slack))
}
