//! Writes the Ingleton LP in the plain-text interchange format and reads
//! it back.
//!
//!     cargo run --release --example export_lp > ingleton.lp

use entcopy::lp::{build_lp, export_lp, parse_lp_export, BuildOptions, SymmetryMode};
use entcopy::problem::builtin_ingleton;

fn main() -> entcopy::Result<()> {
    let p = builtin_ingleton();
    let opts = BuildOptions { symmetry: SymmetryMode::Off, ..BuildOptions::default_for(&p) };
    let lp = build_lp(&p, &opts)?;
    let text = export_lp(&lp);
    let back = parse_lp_export(&text)?;
    assert_eq!(back.rows.len(), lp.rows.len());
    eprintln!("{} rows, {} bytes", lp.rows.len(), text.len());
    print!("{text}");
    Ok(())
}
