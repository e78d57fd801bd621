//! Shared test oracles. Nothing here calls the library's LP solver.
#![allow(dead_code)]

use std::collections::HashMap;

use entcopy::oracle::JointDist;
use entcopy::rational::int;
use entcopy::{LinearForm, Rational, VarSet};
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'A' + i as u8) as char).to_string()).collect()
}

pub fn vs(ix: &[usize]) -> VarSet {
    VarSet::from_indices(ix.iter().copied())
}

/// Dense coefficient vector of a homogeneous form over `2^n - 1` coordinates
/// (coordinate `V` at index `bits(V) - 1`).
pub fn dense(f: &LinearForm, n: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); (1 << n) - 1];
    for (s, c) in f.terms() {
        v[s.bits() as usize - 1] = c.clone();
    }
    v
}

/// Every basic inequality by brute-force enumeration: `I(A;B|C) >= 0` with
/// `A`, `B` non-empty and `A`, `B`, `C` pairwise disjoint, and
/// `H(A|C) = I(A;A|C) >= 0` with `A`, `C` disjoint.
pub fn basic_inequalities(n: usize) -> Vec<LinearForm> {
    let full = (1u64 << n) - 1;
    let mut out = Vec::new();
    for a in 1..=full {
        for b in 1..=full {
            if (a & b != 0 && a != b) || a > b {
                continue;
            }
            let rest = full & !(a | b);
            let mut c = rest;
            loop {
                out.push(
                    LinearForm::cond_mutual_info(VarSet::from_bits(a), VarSet::from_bits(b), VarSet::from_bits(c))
                        .unwrap(),
                );
                if c == 0 {
                    break;
                }
                c = (c - 1) & rest;
            }
        }
    }
    out
}

/// Searches `y >= 0` with `Σ y_i g_i = target` (phase one of a dense
/// tableau simplex with Bland's rule, exact arithmetic).
pub fn nonneg_combination(gens: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let m = target.len();
    let n = gens.len();
    // Columns: gens, then one artificial per row.
    let width = n + m + 1;
    let mut t: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let flip = target[i].is_negative();
            let sgn = |x: &Rational| if flip { -x.clone() } else { x.clone() };
            let mut row: Vec<Rational> = gens.iter().map(|g| sgn(&g[i])).collect();
            row.extend((0..m).map(|k| if k == i { int(1) } else { int(0) }));
            row.push(sgn(&target[i]));
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Objective: minimize the sum of artificials, as reduced costs.
    let mut obj = vec![Rational::zero(); width];
    for row in &t {
        for j in 0..width {
            if j < n || j == width - 1 {
                obj[j] -= &row[j];
            }
        }
    }
    while let Some(q) = (0..n + m).find(|&j| obj[j].is_negative()) {
        let mut best: Option<(Rational, usize)> = None;
        for i in 0..m {
            if t[i][q].is_positive() {
                let r = &t[i][width - 1] / &t[i][q];
                let better = match &best {
                    None => true,
                    Some((b, bi)) => r < *b || (r == *b && basis[i] < basis[*bi]),
                };
                if better {
                    best = Some((r, i));
                }
            }
        }
        let (_, p) = best?;
        let piv = t[p][q].clone();
        for x in t[p].iter_mut() {
            *x /= &piv;
        }
        let prow = t[p].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != p && !row[q].is_zero() {
                let f = row[q].clone();
                for j in 0..width {
                    row[j] -= &f * &prow[j];
                }
            }
        }
        let f = obj[q].clone();
        for j in 0..width {
            obj[j] -= &f * &prow[j];
        }
        basis[p] = q;
    }
    if !obj[width - 1].is_zero() {
        return None;
    }
    let mut y = vec![Rational::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            y[b] = t[i][width - 1].clone();
        }
    }
    Some(y)
}

/// Checks `Σ y_i g_i == target` exactly.
pub fn combination_matches(gens: &[Vec<Rational>], y: &[Rational], target: &[Rational]) -> bool {
    let mut acc = vec![Rational::zero(); target.len()];
    for (g, c) in gens.iter().zip(y) {
        for (a, x) in acc.iter_mut().zip(g) {
            *a += c * x;
        }
    }
    acc == target && y.iter().all(|c| !c.is_negative())
}

/// A random distribution with supports in `1..=max_support`; about a third
/// of the outcomes get weight zero.
pub fn random_dist<R: Rng>(rng: &mut R, n: usize, max_support: u32) -> JointDist {
    let supports: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=max_support)).collect();
    let count: usize = supports.iter().map(|&s| s as usize).product();
    loop {
        let w: Vec<u64> = (0..count)
            .map(|_| if rng.gen_bool(0.35) { 0 } else { rng.gen_range(1..10) })
            .collect();
        if let Ok(d) = JointDist::from_weights(supports.clone(), &w) {
            return d;
        }
    }
}

/// Entropy in bits from a probability table, computed directly.
pub fn entropy_bits(probs: &[f64]) -> f64 {
    -probs.iter().filter(|&&p| p > 0.0).map(|p| p * p.log2()).sum::<f64>()
}

/// `H(V) = |V|`.
pub fn modular_point(n: usize) -> HashMap<VarSet, Rational> {
    VarSet::full(n)
        .subsets()
        .skip(1)
        .map(|v| (v, int(v.len() as i64)))
        .collect()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn data(rel: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}
