mod common;

use common::{dense, names, nonneg_combination, vs};
use entcopy::extension::{apply_copy_step, merged_independence, CopyStep};
use entcopy::problem::{builtin_ingleton, builtin_vamos_v0};
use entcopy::shannon::elemental_inequalities;
use entcopy::{Constraint, LinearForm, Relation, VarSet};
use proptest::prelude::*;

fn h(ix: &[usize]) -> LinearForm {
    LinearForm::coord(vs(ix)).unwrap()
}

fn has_row(rows: &[Constraint], f: &LinearForm) -> bool {
    let neg = -f.clone();
    rows.iter().any(|r| r.relation == Relation::Eq && (r.lhs == *f || r.lhs == neg))
}

fn ingleton_rows(k: usize) -> (Vec<String>, Vec<Constraint>) {
    let p = builtin_ingleton();
    let at = p.step_offset(k);
    apply_copy_step(&p.copy_steps[k], &p.variables[..at], "c").unwrap()
}

// A=0 B=1 C=2 D=3 R=4 S=5 T=6 U=7
#[test]
fn ingleton_first_step() {
    let (ext, rows) = ingleton_rows(0);
    assert_eq!(ext.len(), 6);
    assert_eq!(rows.len(), 12 + 1);
    assert!(has_row(&rows, &(h(&[4, 5]) - h(&[1, 3]))));
    assert!(has_row(&rows, &(h(&[0, 2, 4, 5]) - h(&[0, 1, 2, 3]))));
    assert!(has_row(&rows, &(h(&[2, 4, 5]) - h(&[1, 2, 3]))));
    let indep = LinearForm::cond_mutual_info(vs(&[4, 5]), vs(&[1, 3]), vs(&[0, 2])).unwrap();
    assert!(has_row(&rows, &indep));
}

#[test]
fn ingleton_second_and_third_steps() {
    let (ext, rows) = ingleton_rows(1);
    assert_eq!(ext.len(), 7);
    assert_eq!(rows.len(), 8 + 1);
    assert!(has_row(&rows, &(h(&[0, 1, 5, 6]) - h(&[0, 1, 2, 5]))));
    let indep = LinearForm::cond_mutual_info(vs(&[6]), vs(&[2, 3, 4]), vs(&[0, 1, 5])).unwrap();
    assert!(has_row(&rows, &indep));
    let (_, rows) = ingleton_rows(2);
    assert_eq!(rows.len(), 32 + 1);
}

#[test]
fn vamos_pair_copy() {
    let p = builtin_vamos_v0();
    let at = p.step_offset(0);
    assert_eq!(at, 8);
    let (ext, rows) = apply_copy_step(&p.copy_steps[0], &p.variables[..at], "c").unwrap();
    assert_eq!(ext.len(), 10);
    assert_eq!(rows.len(), (64 - 16) + 1);
    // V' = 8 copies (S0,S1); W' = 9 copies (S6,S7).
    assert!(has_row(&rows, &(h(&[2, 8]) - h(&[0, 1, 2]))));
    assert!(has_row(&rows, &(h(&[8, 9]) - h(&[0, 1, 6, 7]))));
    let indep = LinearForm::cond_mutual_info(vs(&[8, 9]), vs(&[0, 1, 6, 7]), vs(&[2, 3, 4, 5])).unwrap();
    assert!(has_row(&rows, &indep));
}

#[test]
fn vamos_merged_independence() {
    let p = builtin_vamos_v0();
    let (s1, s2) = (&p.copy_steps[0], &p.copy_steps[1]);
    let merged = merged_independence(s1, p.step_offset(0), s2, p.step_offset(1), "m").unwrap();
    let x = vs(&[2, 3, 4, 5]);
    let ce = |v: &[usize]| LinearForm::cond_entropy(vs(v), x).unwrap();
    let expected = ce(&[0, 1, 6, 7, 8, 9, 10, 11]) - ce(&[0, 1, 6, 7]) - ce(&[8, 9]) - ce(&[10, 11]);
    assert_eq!(merged.relation, Relation::Eq);
    assert!(merged.lhs == expected || merged.lhs == -expected);
}

#[test]
fn rejects_malformed_steps() {
    let n = names(4);
    let step = |copied: Vec<VarSet>, over, context, new: &[&str]| CopyStep {
        copied,
        over,
        context,
        new_names: new.iter().map(|s| s.to_string()).collect(),
    };
    assert!(apply_copy_step(&step(vec![], VarSet::EMPTY, VarSet::EMPTY, &[]), &n, "c").is_err());
    assert!(apply_copy_step(&step(vec![vs(&[0])], vs(&[0]), VarSet::EMPTY, &["R"]), &n, "c").is_err());
    assert!(apply_copy_step(&step(vec![vs(&[0])], vs(&[1]), vs(&[1]), &["R"]), &n, "c").is_err());
    assert!(apply_copy_step(&step(vec![vs(&[0])], vs(&[1]), VarSet::EMPTY, &["A"]), &n, "c").is_err());
    assert!(apply_copy_step(&step(vec![vs(&[0]), vs(&[0, 1])], VarSet::EMPTY, VarSet::EMPTY, &["R", "S"]), &n, "c").is_err());
    assert!(apply_copy_step(&step(vec![vs(&[5])], VarSet::EMPTY, VarSet::EMPTY, &["R"]), &n, "c").is_err());
    // Nothing copied: the merged form would be 0 = 0.
    let empty = step(vec![], vs(&[1]), VarSet::EMPTY, &[]);
    assert!(merged_independence(&empty, 4, &empty, 4, "m").is_err());
}

/// Small instance: `A1 := C-copy(A | B)`, then `A2 := (C,A1)-copy(A | B)`.
#[test]
fn merged_equality_is_implied_by_separate_ones() {
    let mut nm = names(3);
    let s1 = CopyStep { copied: vec![vs(&[0])], over: vs(&[1]), context: vs(&[2]), new_names: vec!["A1".into()] };
    let (ext, rows1) = apply_copy_step(&s1, &nm, "a").unwrap();
    nm = ext;
    let s2 = CopyStep { copied: vec![vs(&[0])], over: vs(&[1]), context: vs(&[2, 3]), new_names: vec!["A2".into()] };
    let (ext, rows2) = apply_copy_step(&s2, &nm, "b").unwrap();
    let n = ext.len();
    let merged = merged_independence(&s1, 3, &s2, 4, "m").unwrap();

    let mut gens: Vec<_> = elemental_inequalities(&ext).unwrap().iter().map(|c| dense(&c.lhs, n)).collect();
    for r in [rows1.last().unwrap(), rows2.last().unwrap()] {
        gens.push(dense(&r.lhs, n));
        gens.push(dense(&-r.lhs.clone(), n));
    }
    assert!(nonneg_combination(&gens, &dense(&merged.lhs, n)).is_some());
    assert!(nonneg_combination(&gens, &dense(&-merged.lhs.clone(), n)).is_some());
    // Subadditivity gives one direction; the other needs the copy rows.
    let shannon = &gens[..gens.len() - 4];
    assert!(nonneg_combination(shannon, &dense(&-merged.lhs.clone(), n)).is_some());
    assert!(nonneg_combination(shannon, &dense(&merged.lhs, n)).is_none());
}

fn step_strategy() -> impl Strategy<Value = CopyStep> {
    // Over 4 variables: copied ⊆ {0,1}, over ⊆ {2}, context ⊆ {1,3}.
    (1u64..4, 0u64..2, 0u64..4).prop_map(|(z, x, y)| {
        let copied = vec![VarSet::from_bits(z)];
        let over = VarSet::from_bits(x << 2);
        let context = VarSet::from_indices(VarSet::from_bits(y).iter().map(|i| [1, 3][i]));
        CopyStep { copied, over, context, new_names: vec!["Z'".into()] }
    })
}

proptest! {
    #[test]
    fn row_counts_follow_subset_formula(step in step_strategy()) {
        let (_, rows) = apply_copy_step(&step, &names(4), "c").unwrap();
        let m = step.over.len();
        prop_assert_eq!(rows.len(), (1usize << (m + 1)) - (1 << m) + 1);
        prop_assert!(rows.iter().all(|r| r.relation == Relation::Eq && r.lhs.is_homogeneous()));
    }
}
