//! Information-ratio lower bound for the Vámos access structure, on the
//! orbit quotient of the 4095-coordinate LP. Takes a minute or two.
//!
//!     cargo run --release --example solve_vamos [float]

use std::time::Instant;

use entcopy::cli::render_value;
use entcopy::lp::{build_lp, solve_exact, solve_float, BuildOptions, FloatOptions, SymmetryMode};
use entcopy::problem::builtin_vamos_v0;

fn main() -> entcopy::Result<()> {
    let p = builtin_vamos_v0();
    let opts = BuildOptions { symmetry: SymmetryMode::Quotient, ..BuildOptions::default_for(&p) };
    let lp = build_lp(&p, &opts)?;
    println!("{} columns, {} rows", lp.columns.len(), lp.rows.len());

    let t = Instant::now();
    if std::env::args().any(|a| a == "float") {
        let sol = solve_float(&lp, &FloatOptions::default())?;
        println!("float: {:.9} after {} pivots", sol.value.unwrap(), sol.iterations);
    } else {
        let sol = solve_exact(&lp)?;
        println!("exact: {}", render_value(sol.value.as_ref().unwrap()));
    }
    eprintln!("{:.1?}", t.elapsed());
    Ok(())
}
