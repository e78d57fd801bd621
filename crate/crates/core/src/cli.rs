//! Command-line front end: `solve`, `verify` and `export-lp`.
//!
//! Exit codes: 0 success, 1 input/parse/validation error, 2 solver failure
//! (or a failed verification, or a non-optimal status), 3 float result that
//! could not be certified exactly.
//!
//! Standard output depends only on the inputs; timings and solver logs go
//! to standard error with `-v`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde::Deserialize;

use crate::certificate::{implied_bound, Certificate};
use crate::entropy::text::{render_coord, render_form};
use crate::error::{Error, Result};
use crate::lp::{
    build_lp, export_lp, rational_dual, solve_exact_with, solve_float, BuildOptions, CopySelection,
    FloatOptions, Lp, Solution, Status, SymmetryMode,
};
use crate::problem::{builtin, parse_problem, Problem};
use crate::rational::{decimal, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_UNCERTIFIED: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SolverPath {
    #[default]
    Exact,
    Float,
}

#[derive(Debug, Parser)]
#[command(name = "entcopy", version, about = "Entropy inequality LPs with Copy Lemma extensions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and solve a problem's LP.
    Solve(SolveArgs),
    /// Check a certificate against the rows it refers to.
    Verify(VerifyArgs),
    /// Write the assembled LP in the plain-text interchange format.
    ExportLp(ExportArgs),
}

#[derive(Debug, Args, Default)]
pub struct LpArgs {
    /// Builtin name (`ingleton`, `vamos-v0`) or path to a problem file.
    #[arg(long)]
    pub problem: Option<String>,
    /// TOML file with defaults for any of these options.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// off, invariance-eqs or quotient (default: quotient from 10 variables on).
    #[arg(long)]
    pub symmetry: Option<SymmetryMode>,
    #[arg(long)]
    pub merged_independence: bool,
    #[arg(long)]
    pub extra_symmetry: bool,
    /// Drop all copy steps and their variables.
    #[arg(long)]
    pub no_copy_steps: bool,
    /// Skip the constraints of copy step `k` (1-based); repeatable.
    #[arg(long = "drop-copy-step", value_name = "K")]
    pub drop_copy_step: Vec<usize>,
}

#[derive(Debug, Args, Default)]
pub struct SolveArgs {
    #[command(flatten)]
    pub lp: LpArgs,
    #[arg(long, value_enum)]
    pub path: Option<SolverPath>,
    /// Feasibility tolerance of the float path.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Denominator cap when rationalizing float multipliers.
    #[arg(long)]
    pub max_denominator: Option<u64>,
    /// Write the certificate here.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
    /// Write the primal and dual solution here.
    #[arg(long)]
    pub solution: Option<PathBuf>,
    /// Also write the LP here.
    #[arg(long)]
    pub export_lp: Option<PathBuf>,
    #[arg(short, long, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub certificate: PathBuf,
    /// Problem the certificate refers to (default: the builtin it names).
    #[arg(long)]
    pub problem: Option<String>,
    #[arg(short, long, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Args, Default)]
pub struct ExportArgs {
    #[command(flatten)]
    pub lp: LpArgs,
    /// Output file (default: standard output).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Keys accepted in a `--config` file; flags given on the command line win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct ConfigFile {
    problem: Option<String>,
    path: Option<SolverPath>,
    symmetry: Option<String>,
    merged_independence: Option<bool>,
    extra_symmetry: Option<bool>,
    copy_steps: Option<String>,
    tolerance: Option<f64>,
    max_denominator: Option<u64>,
    certificate: Option<PathBuf>,
    solution: Option<PathBuf>,
    export_lp: Option<PathBuf>,
    verbose: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProblemSource {
    Builtin(String),
    File(PathBuf),
}

impl ProblemSource {
    /// A builtin name, unless the string looks like a path.
    pub fn from_arg(s: &str) -> ProblemSource {
        let looks_like_path = s.contains('/') || s.contains('\\') || s.ends_with(".ent") || Path::new(s).is_file();
        if looks_like_path {
            ProblemSource::File(PathBuf::from(s))
        } else {
            ProblemSource::Builtin(s.to_string())
        }
    }

    pub fn load(&self) -> Result<Problem> {
        match self {
            ProblemSource::Builtin(name) => builtin(name),
            ProblemSource::File(path) => {
                let text = std::fs::read_to_string(path)?;
                parse_problem(&text)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: ProblemSource,
    pub path: SolverPath,
    /// `None`: chosen from the problem size.
    pub symmetry: Option<SymmetryMode>,
    pub merged_independence: bool,
    pub extra_symmetry: bool,
    pub copy_steps: CopySelection,
    /// Float path only.
    pub tolerance: f64,
    pub max_denominator: u64,
    pub solution_out: Option<PathBuf>,
    pub certificate_out: Option<PathBuf>,
    pub export_out: Option<PathBuf>,
    pub verbose: u8,
}

impl RunConfig {
    pub fn new(problem: ProblemSource) -> Self {
        RunConfig {
            problem,
            path: SolverPath::Exact,
            symmetry: None,
            merged_independence: false,
            extra_symmetry: false,
            copy_steps: CopySelection::All,
            tolerance: FloatOptions::default().tolerance,
            max_denominator: 1_000_000,
            solution_out: None,
            certificate_out: None,
            export_out: None,
            verbose: 0,
        }
    }

    fn from_lp_args(lp: &LpArgs) -> Result<(Self, ConfigFile)> {
        let file: ConfigFile = match &lp.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                toml::from_str(&text).map_err(|e| Error::Problem(format!("{}: {e}", path.display())))?
            }
            None => ConfigFile::default(),
        };
        let problem = lp
            .problem
            .clone()
            .or_else(|| file.problem.clone())
            .ok_or_else(|| Error::Problem("no problem given (use --problem)".into()))?;
        let mut cfg = RunConfig::new(ProblemSource::from_arg(&problem));
        cfg.symmetry = match (lp.symmetry, &file.symmetry) {
            (Some(s), _) => Some(s),
            (None, Some(s)) => Some(s.parse()?),
            (None, None) => None,
        };
        cfg.merged_independence = lp.merged_independence || file.merged_independence.unwrap_or(false);
        cfg.extra_symmetry = lp.extra_symmetry || file.extra_symmetry.unwrap_or(false);
        cfg.copy_steps = if lp.no_copy_steps {
            CopySelection::None
        } else if !lp.drop_copy_step.is_empty() {
            CopySelection::Drop(lp.drop_copy_step.iter().copied().collect())
        } else {
            match &file.copy_steps {
                Some(s) => s.parse()?,
                None => CopySelection::All,
            }
        };
        Ok((cfg, file))
    }

    pub fn for_solve(args: &SolveArgs) -> Result<Self> {
        let (mut cfg, file) = Self::from_lp_args(&args.lp)?;
        cfg.path = args.path.or(file.path).unwrap_or_default();
        cfg.tolerance = args.tolerance.or(file.tolerance).unwrap_or(cfg.tolerance);
        cfg.max_denominator = args.max_denominator.or(file.max_denominator).unwrap_or(cfg.max_denominator);
        cfg.certificate_out = args.certificate.clone().or(file.certificate);
        cfg.solution_out = args.solution.clone().or(file.solution);
        cfg.export_out = args.export_lp.clone().or(file.export_lp);
        cfg.verbose = args.verbose.max(file.verbose.unwrap_or(0));
        if !(cfg.tolerance > 0.0 && cfg.tolerance < 1e-2) {
            return Err(Error::Problem(format!("tolerance {} out of range", cfg.tolerance)));
        }
        Ok(cfg)
    }

    pub fn for_export(args: &ExportArgs) -> Result<Self> {
        let (mut cfg, file) = Self::from_lp_args(&args.lp)?;
        cfg.export_out = args.output.clone().or(file.export_lp);
        Ok(cfg)
    }

    pub fn build_options(&self, p: &Problem) -> Result<BuildOptions> {
        let mut o = BuildOptions::default_for(p);
        if let Some(s) = self.symmetry {
            o.symmetry = s;
        }
        if o.symmetry == SymmetryMode::Quotient && p.symmetry.is_empty() && !self.extra_symmetry {
            if self.symmetry.is_some() {
                return Err(Error::Problem("quotient requested but the problem declares no symmetry".into()));
            }
            o.symmetry = SymmetryMode::Off;
        }
        o.merged_independence = self.merged_independence;
        o.extra_symmetry = self.extra_symmetry;
        o.copy_steps = self.copy_steps.clone();
        Ok(o)
    }

    /// Loads the problem and assembles its LP.
    pub fn build(&self) -> Result<(Problem, Lp)> {
        let p = self.problem.load()?;
        let o = self.build_options(&p)?;
        let lp = build_lp(&p, &o)?;
        Ok((p, lp))
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match cli.command {
        Command::Solve(a) => match RunConfig::for_solve(&a) {
            Ok(cfg) => cmd_solve(&cfg, out, err),
            Err(e) => input_error(err, &e),
        },
        Command::Verify(a) => cmd_verify(&a.certificate, a.problem.as_deref(), a.verbose, out, err),
        Command::ExportLp(a) => match RunConfig::for_export(&a) {
            Ok(cfg) => cmd_export_lp(&cfg, out, err),
            Err(e) => input_error(err, &e),
        },
    }
}

fn input_error(err: &mut dyn Write, e: &Error) -> i32 {
    let _ = writeln!(err, "error: {e}");
    EXIT_INPUT
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(Error::from)
}

/// `q (decimal…)` with nine significant digits.
pub fn render_value(q: &Rational) -> String {
    let d = decimal(q, 9);
    if d == q.to_string() {
        d
    } else {
        format!("{q} ({d})")
    }
}

pub fn cmd_solve(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let started = Instant::now();
    let (_, lp) = match cfg.build() {
        Ok(x) => x,
        Err(e) => return input_error(err, &e),
    };
    let _ = writeln!(out, "problem {}", lp.name);
    let _ = writeln!(out, "options {}", lp.options);
    let _ = writeln!(out, "lp {} columns, {} rows", lp.columns.len(), lp.rows.len());
    if let Some(path) = &cfg.export_out {
        if let Err(e) = write_file(path, &export_lp(&lp)) {
            return input_error(err, &e);
        }
    }
    if cfg.verbose > 0 {
        let _ = writeln!(err, "built LP in {:.3?}", started.elapsed());
    }
    let fopts = FloatOptions {
        tolerance: cfg.tolerance,
        log: cfg.verbose > 1,
        ..FloatOptions::default()
    };
    let solve_start = Instant::now();
    let (code, cert, solution_text) = match cfg.path {
        SolverPath::Exact => {
            let sol = match solve_exact_with(&lp, &fopts) {
                Ok(s) => s,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_SOLVER;
                }
            };
            let _ = writeln!(out, "status {}", sol.status);
            if sol.status != Status::Optimal {
                return EXIT_SOLVER;
            }
            let value = sol.value.clone().expect("optimal");
            let _ = writeln!(out, "value {}", render_value(&value));
            let cert = if cfg.certificate_out.is_some() {
                match Certificate::from_solution(&lp, &sol) {
                    Ok(c) => Some(c),
                    Err(e) => {
                        let _ = writeln!(err, "error: {e}");
                        return EXIT_SOLVER;
                    }
                }
            } else {
                None
            };
            (EXIT_OK, cert, solution_file(&lp, &sol, |q| q.to_string()))
        }
        SolverPath::Float => {
            let sol = match solve_float(&lp, &fopts) {
                Ok(s) => s,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_SOLVER;
                }
            };
            let _ = writeln!(out, "status {}", sol.status);
            if sol.status != Status::Optimal {
                return EXIT_SOLVER;
            }
            let _ = writeln!(out, "value {:.12} (float)", sol.value.expect("optimal"));
            let cert = rational_dual(&lp, &sol, cfg.max_denominator)
                .and_then(|d| Certificate::from_dual(&lp, &d).ok())
                .filter(|c| c.check(&lp).is_ok());
            let code = match &cert {
                Some(c) => {
                    let b = c.bound.clone().expect("from_dual sets the bound");
                    let _ = writeln!(out, "certified {}", render_value(&b));
                    EXIT_OK
                }
                None => {
                    let _ = writeln!(out, "certified no");
                    EXIT_UNCERTIFIED
                }
            };
            (code, cert, solution_file(&lp, &sol, |v| format!("{v:e}")))
        }
    };
    if cfg.verbose > 0 {
        let _ = writeln!(err, "solved in {:.3?}", solve_start.elapsed());
    }
    if let Some(path) = &cfg.certificate_out {
        match &cert {
            Some(c) => {
                if let Err(e) = write_file(path, &c.emit()) {
                    return input_error(err, &e);
                }
                let _ = writeln!(out, "certificate {} ({} rows)", path.display(), c.entries.len());
            }
            None => {
                let _ = writeln!(err, "no certificate written");
            }
        }
    }
    if let Some(path) = &cfg.solution_out {
        if let Err(e) = write_file(path, &solution_text) {
            return input_error(err, &e);
        }
    }
    code
}

fn solution_file<T>(lp: &Lp, sol: &Solution<T>, show: impl Fn(&T) -> String) -> String {
    let mut s = String::from("# entcopy solution\n");
    let _ = writeln!(s, "problem {}", lp.name);
    let _ = writeln!(s, "options {}", lp.options);
    let _ = writeln!(s, "status {}", sol.status);
    if let Some(v) = &sol.value {
        let _ = writeln!(s, "value {}", show(v));
    }
    for (c, v) in lp.columns.iter().zip(&sol.primal) {
        let _ = writeln!(s, "primal {} {}", render_coord(*c, &lp.var_names), show(v));
    }
    for (label, v) in &sol.dual {
        let _ = writeln!(s, "dual {label} {}", show(v));
    }
    s.push_str("end\n");
    s
}

pub fn cmd_verify(
    cert_path: &Path,
    problem: Option<&str>,
    verbose: u8,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let started = Instant::now();
    let cert = match std::fs::read_to_string(cert_path)
        .map_err(Error::from)
        .and_then(|t| Certificate::parse(&t))
    {
        Ok(c) => c,
        Err(e) => return input_error(err, &e),
    };
    let source = ProblemSource::from_arg(problem.unwrap_or(&cert.problem));
    let lp = match source.load().and_then(|p| {
        let o: BuildOptions = cert.options.parse()?;
        build_lp(&p, &o)
    }) {
        Ok(lp) => lp,
        Err(e) => return input_error(err, &e),
    };
    let base = lp.unreduced();
    let _ = writeln!(out, "certificate {}", cert_path.display());
    let _ = writeln!(out, "problem {}", cert.problem);
    let _ = writeln!(out, "options {}", cert.options);
    let fail = |out: &mut dyn Write, why: String| {
        let _ = writeln!(out, "FAIL: {why}");
        EXIT_SOLVER
    };
    if lp.name != cert.problem {
        return fail(out, format!("certificate is for `{}`, problem is `{}`", cert.problem, lp.name));
    }
    let report = match cert.verify(&base.rows) {
        Ok(r) => r,
        Err(e) => return fail(out, e.to_string()),
    };
    if verbose > 0 {
        let _ = writeln!(err, "verified {} entries in {:.3?}", report.entries, started.elapsed());
    }
    if !report.sign_violations.is_empty() {
        for l in &report.sign_violations {
            let _ = writeln!(out, "negative factor on inequality {l}");
        }
        return fail(out, format!("{} sign violations", report.sign_violations.len()));
    }
    if !report.residual.is_zero() {
        let shown: Vec<String> = report
            .residual
            .terms()
            .iter()
            .take(10)
            .map(|(v, c)| format!("{c}*{}", render_coord(*v, &cert.variables)))
            .collect();
        let _ = writeln!(out, "residual {}", shown.join(", "));
        if !report.residual.constant().is_zero() {
            let _ = writeln!(out, "residual constant {}", report.residual.constant());
        }
        return fail(out, format!("sum differs from target in {} coordinates", report.residual.len()));
    }
    let bound = match implied_bound(&cert.target, base) {
        Ok(b) => b,
        Err(e) => return fail(out, e.to_string()),
    };
    if let Some(claimed) = &cert.bound {
        if *claimed != bound {
            return fail(out, format!("target implies {bound}, header claims {claimed}"));
        }
    }
    let _ = writeln!(out, "target {} >= 0", render_form(&cert.target, &cert.variables));
    let _ = writeln!(out, "bound {}", render_value(&bound));
    let _ = writeln!(out, "PASS: {} rows", report.entries);
    EXIT_OK
}

pub fn cmd_export_lp(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let (_, lp) = match cfg.build() {
        Ok(x) => x,
        Err(e) => return input_error(err, &e),
    };
    let text = export_lp(&lp);
    match &cfg.export_out {
        Some(path) => {
            if let Err(e) = write_file(path, &text) {
                return input_error(err, &e);
            }
            let _ = writeln!(out, "wrote {} ({} rows)", path.display(), lp.rows.len());
        }
        None => {
            let _ = out.write_all(text.as_bytes());
        }
    }
    EXIT_OK
}
