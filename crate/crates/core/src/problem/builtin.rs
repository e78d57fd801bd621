use num_traits::One;

use super::{Normalization, Objective, Problem};
use crate::constraint::Constraint;
use crate::entropy::{LinearForm, VarSet};
use crate::error::{Error, Result};
use crate::extension::CopyStep;
use crate::rational::Rational;
use crate::symmetry::Perm;

pub const BUILTINS: [&str; 2] = ["ingleton", "vamos-v0"];

pub fn builtin(name: &str) -> Result<Problem> {
    match name {
        "ingleton" => Ok(builtin_ingleton()),
        "vamos-v0" => Ok(builtin_vamos_v0()),
        _ => Err(Error::Problem(format!(
            "unknown builtin `{name}` (available: {})",
            BUILTINS.join(", ")
        ))),
    }
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn vs(ix: &[usize]) -> VarSet {
    VarSet::from_indices(ix.iter().copied())
}

fn swap(n: usize, a: usize, b: usize) -> Perm {
    Perm::from_cycles(n, &[vec![a, b]]).expect("valid transposition")
}

/// Minimum of the Ingleton functional under `H(A,B,C,D) = 1`, with the
/// ground symmetry `⟨(A B), (C D)⟩` and three Copy Lemma steps:
///
/// ```text
/// (R,S) := ∅-copy(B,D | A,C)
/// T     := (D,R)-copy(C | A,B,S)
/// U     := D-copy(B | A,C,R,S,T)
/// ```
pub fn builtin_ingleton() -> Problem {
    let (a, b, c, d, r, s, t) = (0, 1, 2, 3, 4, 5, 6);
    let steps = vec![
        CopyStep {
            copied: vec![vs(&[b]), vs(&[d])],
            over: vs(&[a, c]),
            context: VarSet::EMPTY,
            new_names: names(&["R", "S"]),
        },
        CopyStep {
            copied: vec![vs(&[c])],
            over: vs(&[a, b, s]),
            context: vs(&[d, r]),
            new_names: names(&["T"]),
        },
        CopyStep {
            copied: vec![vs(&[b])],
            over: vs(&[a, c, r, s, t]),
            context: vs(&[d]),
            new_names: names(&["U"]),
        },
    ];
    let objective = LinearForm::ingleton(vs(&[a]), vs(&[b]), vs(&[c]), vs(&[d])).expect("disjoint");
    Problem {
        name: "ingleton".into(),
        variables: names(&["A", "B", "C", "D", "R", "S", "T", "U"]),
        ground: 4,
        constraints: Vec::new(),
        copy_steps: steps,
        symmetry: vec![swap(4, a, b), swap(4, c, d)],
        extra_symmetry: Vec::new(),
        normalization: Some(Normalization {
            form: LinearForm::coord(vs(&[a, b, c, d])).expect("non-empty"),
            value: Rational::one(),
        }),
        objective: Objective::linear(objective),
    }
}

/// Minimal qualified sets and maximal unqualified sets (over parties 1..=7)
/// of the access structure on the Vámos matroid: the 3-sets `{1,2,3}`,
/// `{1,4,5}` and every 4-set containing neither, except `{2,3,4,5}`,
/// `{2,3,6,7}`, `{4,5,6,7}`.
pub fn vamos_access_structure() -> (Vec<VarSet>, Vec<VarSet>) {
    let parties = vs(&[1, 2, 3, 4, 5, 6, 7]);
    let triples = [vs(&[1, 2, 3]), vs(&[1, 4, 5])];
    let exceptions = [vs(&[2, 3, 4, 5]), vs(&[2, 3, 6, 7]), vs(&[4, 5, 6, 7])];
    let mut minimal: Vec<VarSet> = triples.to_vec();
    for q in parties.subsets().filter(|q| q.len() == 4) {
        if triples.iter().any(|t| t.is_subset(q)) || exceptions.contains(&q) {
            continue;
        }
        minimal.push(q);
    }
    let qualified = |v: VarSet| minimal.iter().any(|m| m.is_subset(v));
    let maximal_unqualified: Vec<VarSet> = parties
        .subsets()
        .filter(|&v| !qualified(v))
        .filter(|&v| parties.without(v).iter().all(|i| qualified(v | VarSet::singleton(i))))
        .collect();
    (minimal, maximal_unqualified)
}

fn party_label(prefix: &str, v: VarSet) -> String {
    let digits: String = v.iter().map(|i| i.to_string()).collect();
    format!("problem:{prefix}_{digits}")
}

/// Information ratio of the access structure `V0` on the Vámos matroid:
/// secret `S0`, shares `S1..S7`, `H(S0) = 1`, minimize `max H(S_i)`.
///
/// Two pair-copy steps with `V = (S0,S1)`, `W = (S6,S7)`:
///
/// ```text
/// (V',W')   := (S0,S1,S6,S7)-copy(V,W | S2,S3,S4,S5)
/// (V'',W'') := (S0,S1,S6,S7,V',W')-copy(V,W | S2,S3,S4,S5)
/// ```
pub fn builtin_vamos_v0() -> Problem {
    let mut variables: Vec<String> = (0..8).map(|i| format!("S{i}")).collect();
    variables.extend(names(&["V'", "W'", "V''", "W''"]));
    let secret = VarSet::singleton(0);
    let (minimal, maximal_unqualified) = vamos_access_structure();
    let mut constraints = Vec::new();
    for q in &minimal {
        constraints.push(Constraint::eq(
            party_label("qual", *q),
            LinearForm::cond_entropy(secret, *q).expect("non-empty"),
        ));
    }
    for u in &maximal_unqualified {
        constraints.push(Constraint::eq(
            party_label("unqual", *u),
            LinearForm::cond_entropy(secret, *u).expect("non-empty")
                - LinearForm::coord(secret).expect("non-empty"),
        ));
    }
    let v = vs(&[0, 1]);
    let w = vs(&[6, 7]);
    let over = vs(&[2, 3, 4, 5]);
    let steps = vec![
        CopyStep {
            copied: vec![v, w],
            over,
            context: v | w,
            new_names: names(&["V'", "W'"]),
        },
        CopyStep {
            copied: vec![v, w],
            over,
            context: v | w | vs(&[8, 9]),
            new_names: names(&["V''", "W''"]),
        },
    ];
    let g = |cycles: &[Vec<usize>]| Perm::from_cycles(8, cycles).expect("valid cycles");
    Problem {
        name: "vamos-v0".into(),
        variables,
        ground: 8,
        constraints,
        copy_steps: steps,
        symmetry: vec![
            g(&[vec![2, 3]]),
            g(&[vec![4, 5]]),
            g(&[vec![6, 7]]),
            g(&[vec![2, 4], vec![3, 5]]),
        ],
        extra_symmetry: vec![Perm::from_cycles(12, &[vec![8, 10], vec![9, 11]]).expect("valid")],
        normalization: Some(Normalization {
            form: LinearForm::coord(secret).expect("non-empty"),
            value: Rational::one(),
        }),
        objective: Objective::max(
            (1..8)
                .map(|i| LinearForm::coord(VarSet::singleton(i)).expect("non-empty"))
                .collect(),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        builtin_ingleton().validate().unwrap();
        builtin_vamos_v0().validate().unwrap();
        builtin_ingleton().check_ground_invariance().unwrap();
        builtin_vamos_v0().check_ground_invariance().unwrap();
        assert!(builtin("nope").is_err());
    }

    #[test]
    fn vamos_structure_counts() {
        let (minimal, maximal) = vamos_access_structure();
        assert_eq!(minimal.len(), 26);
        assert!(maximal.contains(&vs(&[2, 3, 4, 5])));
        assert!(!minimal.contains(&vs(&[2, 3, 6, 7])));
    }

    #[test]
    fn vamos_group_order() {
        assert_eq!(builtin_vamos_v0().group().unwrap().order(), 16);
        assert_eq!(builtin_ingleton().group().unwrap().order(), 4);
    }
}
