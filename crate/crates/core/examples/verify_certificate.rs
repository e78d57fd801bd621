//! Re-checks a certificate file against freshly rebuilt constraint rows,
//! then shows that perturbing one multiplier breaks it.
//!
//!     cargo run --release --example verify_certificate [file.cert]

use entcopy::certificate::Certificate;
use entcopy::lp::{build_lp, BuildOptions};
use entcopy::problem::builtin;
use entcopy::rational::ratio;

fn main() -> entcopy::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/certificates/ingleton.cert").into());
    let mut cert = Certificate::parse(&std::fs::read_to_string(&path)?)?;
    let opts: BuildOptions = cert.options.parse()?;
    let lp = build_lp(&builtin(&cert.problem)?, &opts)?;

    let bound = cert.check(&lp)?;
    println!("{path}: PASS, {} >= {bound}", cert.problem);

    cert.entries[0].1 += ratio(1, 1000);
    let report = cert.verify(&lp.unreduced().rows)?;
    println!(
        "perturbed: passed={} ({} coordinates off)",
        report.passed(),
        report.residual.len()
    );
    Ok(())
}
