//! Problems in the text syntax. With a builtin name, prints its canonical
//! text; with a file, parses and solves it; with no argument, solves a
//! small inline problem.
//!
//!     cargo run --release --example problem_dsl -- ingleton > ingleton.ent
//!     cargo run --release --example problem_dsl -- my.ent

use entcopy::cli::render_value;
use entcopy::lp::{build_lp, solve_exact, BuildOptions};
use entcopy::problem::{builtin, emit_problem, parse_problem, BUILTINS};

const INLINE: &str = "
# One copy of (C,D) over (A,B), then bound Ing/H(ABCD).
name zy;
var A, B, C, D;
symmetry (A B);
symmetry (C D);
copy (R,S) := copy(C,D | A,B) given ();
normalize H(A,B,C,D) = 1;
minimize I(A;B|C) + I(A;B|D) + I(C;D) - I(A;B);
";

fn main() -> entcopy::Result<()> {
    let arg = std::env::args().nth(1);
    let p = match arg.as_deref() {
        Some(name) if BUILTINS.contains(&name) => {
            print!("{}", emit_problem(&builtin(name)?));
            return Ok(());
        }
        Some(path) => parse_problem(&std::fs::read_to_string(path)?)?,
        None => parse_problem(INLINE)?,
    };
    let lp = build_lp(&p, &BuildOptions::default_for(&p))?;
    let v = solve_exact(&lp)?.value.unwrap();
    println!("{}: {}", p.name, render_value(&v));
    Ok(())
}
