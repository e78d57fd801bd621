//! Solves the Ingleton LP under each symmetry treatment.
//!
//!     cargo run --release --example symmetry_modes

use entcopy::cli::render_value;
use entcopy::lp::{build_lp, solve_exact, BuildOptions, SymmetryMode};
use entcopy::problem::builtin_ingleton;

fn main() -> entcopy::Result<()> {
    let p = builtin_ingleton();
    println!("group order {}", p.group()?.order());
    for mode in [SymmetryMode::Off, SymmetryMode::InvarianceEqs, SymmetryMode::Quotient] {
        let opts = BuildOptions { symmetry: mode, ..BuildOptions::default_for(&p) };
        let lp = build_lp(&p, &opts)?;
        let v = solve_exact(&lp)?.value.unwrap();
        println!(
            "{:>14}: {:>3} columns {:>4} rows  {}",
            mode.to_string(),
            lp.columns.len(),
            lp.rows.len(),
            render_value(&v)
        );
    }
    Ok(())
}
