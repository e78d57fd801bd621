//! Exact lower bound on the Ingleton score over the Copy Lemma extension,
//! with the certificate's target inequality.
//!
//!     cargo run --release --example solve_ingleton

use entcopy::certificate::Certificate;
use entcopy::cli::render_value;
use entcopy::entropy::text::render_form;
use entcopy::lp::{build_lp, solve_exact, BuildOptions};
use entcopy::problem::builtin_ingleton;

fn main() -> entcopy::Result<()> {
    let p = builtin_ingleton();
    let lp = build_lp(&p, &BuildOptions::default_for(&p))?;
    println!("{} columns, {} rows", lp.columns.len(), lp.rows.len());

    let sol = solve_exact(&lp)?;
    println!("minimum Ing/H(ABCD): {}", render_value(sol.value.as_ref().unwrap()));

    let cert = Certificate::from_solution(&lp, &sol)?;
    let bound = cert.check(&lp)?;
    println!("certificate: {} nonzero multipliers", cert.entries.len());
    println!("  {} >= 0", render_form(&cert.target, &cert.variables));
    println!("  bound {bound}");
    Ok(())
}
