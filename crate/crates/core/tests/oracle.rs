mod common;

use common::{entropy_bits, names, random_dist, vs};
use entcopy::extension::{apply_copy_step, CopyStep};
use entcopy::oracle::{all_outcomes, copy_extend, entropy_profile, JointDist};
use entcopy::rational::{ratio, to_f64};
use entcopy::shannon::is_shannon_feasible_f64;
use entcopy::VarSet;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-12
}

#[test]
fn simple_entropies() {
    let bits = JointDist::uniform(vec![2, 2], &all_outcomes(&[2, 2])).unwrap();
    assert!(close(bits.entropy(vs(&[0])), 1.0));
    assert!(close(bits.entropy(vs(&[1])), 1.0));
    assert!(close(bits.entropy(vs(&[0, 1])), 2.0));

    let constant = JointDist::uniform(vec![2, 3], &[vec![0, 1], vec![1, 1]]).unwrap();
    assert!(close(constant.entropy(vs(&[1])), 0.0));
    assert!(close(constant.entropy(vs(&[0, 1])), constant.entropy(vs(&[0]))));

    let same = JointDist::uniform(vec![2, 2], &[vec![0, 0], vec![1, 1]]).unwrap();
    for v in [vs(&[0]), vs(&[1]), vs(&[0, 1])] {
        assert!(close(same.entropy(v), 1.0));
    }
}

#[test]
fn entropy_matches_direct_formula() {
    let d = JointDist::from_weights(vec![3, 2], &[1, 2, 3, 0, 4, 2]).unwrap();
    let p = |w: f64| w / 12.0;
    assert!(close(d.entropy(vs(&[0, 1])), entropy_bits(&[p(1.), p(2.), p(3.), p(4.), p(2.)])));
    assert!(close(d.entropy(vs(&[0])), entropy_bits(&[p(3.), p(3.), p(6.)])));
    assert!(close(d.entropy(vs(&[1])), entropy_bits(&[p(8.), p(4.)])));
    assert_eq!(d.marginal(vs(&[1]))[&vec![0]], ratio(2, 3));
}

#[test]
fn copy_of_function_is_pointwise() {
    // Z = X xor Y, copied over (X, Y): the copy equals Z.
    let outcomes: Vec<Vec<u32>> = all_outcomes(&[2, 2]).into_iter().map(|o| vec![o[0], o[1], o[0] ^ o[1]]).collect();
    let d = JointDist::uniform(vec![2, 2, 2], &outcomes).unwrap();
    let step = CopyStep { copied: vec![vs(&[2])], over: vs(&[0, 1]), context: VarSet::EMPTY, new_names: vec!["Z'".into()] };
    let e = copy_extend(&d, &step).unwrap();
    assert!(e.probs().keys().all(|o| o[3] == o[2]));
    let (h, he) = (entropy_profile(&d), entropy_profile(&e));
    for (v, x) in &h {
        assert!(close(*x, he[v]));
        let swapped = if v.contains(2) { v.without(vs(&[2])) | vs(&[3]) } else { *v };
        assert!(close(*x, he[&swapped]));
    }
}

#[test]
fn unconditional_copy_is_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let d = random_dist(&mut rng, 2, 3);
    let step = CopyStep { copied: vec![vs(&[0, 1])], over: VarSet::EMPTY, context: VarSet::EMPTY, new_names: vec!["P".into()] };
    let e = copy_extend(&d, &step).unwrap();
    let h = entropy_profile(&e);
    assert!(close(h[&vs(&[2])], h[&vs(&[0, 1])]));
    assert!((h[&vs(&[0, 1, 2])] - 2.0 * h[&vs(&[0, 1])]).abs() < 1e-9);
}

/// A random copy step over three or four variables.
fn random_step<R: Rng>(rng: &mut R, n: usize) -> CopyStep {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let k = rng.gen_range(1..n);
    let (copied, rest) = idx.split_at(k);
    let over: Vec<usize> = rest.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    let context: Vec<usize> = (0..n).filter(|i| !over.contains(i) && rng.gen_bool(0.5)).collect();
    let copied = if copied.len() > 1 && rng.gen_bool(0.5) {
        vec![VarSet::from_indices(copied[..1].iter().copied()), VarSet::from_indices(copied[1..].iter().copied())]
    } else {
        vec![VarSet::from_indices(copied.iter().copied())]
    };
    let new_names = (0..copied.len()).map(|i| format!("Z{i}'")).collect();
    CopyStep { copied, over: VarSet::from_indices(over), context: VarSet::from_indices(context), new_names }
}

#[test]
fn hundred_random_copy_extensions() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(3..=4);
        let d = random_dist(&mut rng, n, 3);
        let step = random_step(&mut rng, n);
        let e = copy_extend(&d, &step).unwrap();
        let h = entropy_profile(&e);
        let (_, rows) = apply_copy_step(&step, &names(n), "c").unwrap();
        for r in &rows {
            worst = worst.max(r.lhs.eval_f64(|v| h[&v]).abs());
        }
        assert!(is_shannon_feasible_f64(&entropy_profile(&d), n, 1e-9).unwrap());
        assert!(is_shannon_feasible_f64(&h, e.num_vars(), 1e-9).unwrap());
    }
    assert!(worst <= 1e-9, "largest copy-row violation {worst}");
}

proptest! {
    #[test]
    fn profiles_are_shannon(seed in any::<u64>(), n in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_dist(&mut rng, n, 3);
        prop_assert!(is_shannon_feasible_f64(&entropy_profile(&d), n, 1e-9).unwrap());
    }

    #[test]
    fn copy_rows_hold(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_dist(&mut rng, 3, 2);
        let step = random_step(&mut rng, 3);
        let e = copy_extend(&d, &step).unwrap();
        let h = entropy_profile(&e);
        let (_, rows) = apply_copy_step(&step, &names(3), "c").unwrap();
        for r in &rows {
            prop_assert!(r.lhs.eval_f64(|v| h[&v]).abs() <= 1e-9, "{}", r.label);
        }
    }

    #[test]
    fn marginals_sum_to_one(seed in any::<u64>(), mask in 1u64..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_dist(&mut rng, 3, 3);
        let total: f64 = d.marginal(VarSet::from_bits(mask)).values().map(to_f64).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }
}
