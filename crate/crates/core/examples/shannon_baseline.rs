//! The same objective with and without the copy steps: Shannon
//! inequalities alone only give -1/4.
//!
//!     cargo run --release --example shannon_baseline

use entcopy::cli::render_value;
use entcopy::lp::{build_lp, solve_exact, BuildOptions, CopySelection};
use entcopy::problem::builtin_ingleton;

fn main() -> entcopy::Result<()> {
    let p = builtin_ingleton();
    for (what, copies) in [
        ("Shannon only", CopySelection::None),
        ("copy steps 1-2", CopySelection::Drop([3].into())),
        ("all copy steps", CopySelection::All),
    ] {
        let opts = BuildOptions { copy_steps: copies, ..BuildOptions::default_for(&p) };
        let lp = build_lp(&p, &opts)?;
        let v = solve_exact(&lp)?.value.unwrap();
        println!("{what:>16}: {:>4} rows  {}", lp.rows.len(), render_value(&v));
    }
    Ok(())
}
