//! Builds a random distribution on four binary variables, extends it with
//! both Ingleton copy steps and checks every Copy Lemma row on the
//! resulting entropy profile.
//!
//!     cargo run --release --example oracle_copy [seed]

use entcopy::extension::apply_copy_step;
use entcopy::oracle::{copy_extend, entropy_profile, JointDist};
use entcopy::problem::builtin_ingleton;
use entcopy::shannon::is_shannon_feasible_f64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> entcopy::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<u64> = (0..16).map(|_| rng.gen_range(0..5)).collect();
    let mut d = JointDist::from_weights(vec![2; 4], &weights)?;

    let p = builtin_ingleton();
    let mut names = p.ground_names().to_vec();
    for (k, step) in p.copy_steps.iter().enumerate() {
        let (ext, rows) = apply_copy_step(step, &names, &format!("copy{}", k + 1))?;
        d = copy_extend(&d, step)?;
        let h = entropy_profile(&d);
        let worst = rows
            .iter()
            .map(|r| r.lhs.eval_f64(|v| h[&v]).abs())
            .fold(0.0, f64::max);
        println!("step {}: {} rows, largest violation {worst:.2e}", k + 1, rows.len());
        names = ext;
    }
    let h = entropy_profile(&d);
    println!("extended profile is Shannon: {}", is_shannon_feasible_f64(&h, d.num_vars(), 1e-9)?);
    Ok(())
}
