//! Elemental Shannon inequalities and a feasibility check on a few points.
//!
//!     cargo run --example shannon_check

use std::collections::HashMap;

use entcopy::rational::{int, ratio};
use entcopy::shannon::{elemental_count, elemental_inequalities, is_shannon_feasible};
use entcopy::{Rational, VarSet};

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'A' + i as u8) as char).to_string()).collect()
}

fn main() -> entcopy::Result<()> {
    for n in 2..=5 {
        println!("n={n}: {} elementals", elemental_count(n));
    }
    for c in elemental_inequalities(&names(3))? {
        println!("  {}", c.render(&names(3)));
    }

    // Two independent bits and their XOR: pairwise independent.
    let xor: HashMap<VarSet, Rational> = VarSet::full(3)
        .subsets()
        .skip(1)
        .map(|v| (v, int(v.len().min(2) as i64)))
        .collect();
    println!("xor profile Shannon: {}", is_shannon_feasible(&xor, 3)?);

    // H(AB) > H(A) + H(B) breaks subadditivity.
    let mut bad = xor.clone();
    bad.insert(VarSet::from_indices([0, 1]), ratio(5, 2));
    println!("superadditive point Shannon: {}", is_shannon_feasible(&bad, 3)?);
    Ok(())
}
