//! Solving an [`Lp`] through its dual in standard form.
//!
//! The LP `min c·x + c0` over free `x` with rows `a_i·x + k_i >= 0` (or
//! `= 0`) has the dual `max -k·y` with `Σ y_i a_i = c`, `y_i >= 0` on
//! inequality rows. The simplex runs on `min k·y s.t. M y = c, y >= 0`
//! (`M = [a_i]`, equality rows split into `±a_i`), whose row count is the
//! number of LP columns. The LP optimum is `c0 - min k·y` and the primal
//! point is `x = -π` for the final simplex multipliers `π`.

use num_traits::Signed;

use super::field::Field;
use super::simplex::{Engine, Outcome, Phase, Tolerances};
use super::Lp;
use crate::constraint::Relation;
use crate::error::{Error, Result};
use crate::rational::{rationalize, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::Unbounded => "unbounded",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution<T> {
    pub status: Status,
    /// Optimal value (only when optimal).
    pub value: Option<T>,
    /// One value per LP column (only when optimal).
    pub primal: Vec<T>,
    /// Nonzero multipliers by row label, in row order.
    pub dual: Vec<(String, T)>,
    pub iterations: usize,
    /// Final basis of the standard-form dual.
    pub(crate) basis: Vec<usize>,
}

impl<T> Solution<T> {
    fn without_optimum(status: Status, iterations: usize) -> Self {
        Solution {
            status,
            value: None,
            primal: Vec::new(),
            dual: Vec::new(),
            iterations,
            basis: Vec::new(),
        }
    }

    pub fn multiplier(&self, label: &str) -> Option<&T> {
        self.dual.iter().find(|(l, _)| l == label).map(|(_, v)| v)
    }
}

#[derive(Debug, Clone)]
pub struct FloatOptions {
    /// Primal/dual feasibility tolerance.
    pub tolerance: f64,
    /// Perturb the right-hand side to break degeneracy, then clean up.
    pub perturb: bool,
    pub log: bool,
}

impl Default for FloatOptions {
    fn default() -> Self {
        FloatOptions {
            tolerance: 1e-9,
            perturb: true,
            log: false,
        }
    }
}

struct StdForm<F> {
    cols: Vec<Vec<(usize, F)>>,
    costs: Vec<F>,
    rhs: Vec<F>,
    /// `(row, negated)` for every standard-form column.
    origin: Vec<(usize, bool)>,
}

fn std_form<F: Field>(lp: &Lp) -> Result<StdForm<F>> {
    let m = lp.columns.len();
    let index = |v| {
        lp.column_index(v)
            .ok_or_else(|| Error::Solver("row references an unknown column".into()))
    };
    let mut cols = Vec::new();
    let mut costs = Vec::new();
    let mut origin = Vec::new();
    for (i, row) in lp.rows.iter().enumerate() {
        let mut col = Vec::with_capacity(row.lhs.len());
        for (v, a) in row.lhs.terms() {
            col.push((index(*v)?, F::from_rational(a)));
        }
        col.sort_by_key(|e| e.0);
        let k = F::from_rational(row.lhs.constant());
        if row.relation == Relation::Eq {
            cols.push(col.iter().map(|(r, a)| (*r, a.neg())).collect());
            costs.push(k.neg());
            origin.push((i, true));
        }
        cols.push(col);
        costs.push(k);
        origin.push((i, false));
    }
    let mut rhs = vec![F::zero(); m];
    for (v, c) in lp.objective.terms() {
        rhs[index(*v)?] = F::from_rational(c);
    }
    Ok(StdForm {
        cols,
        costs,
        rhs,
        origin,
    })
}

enum Run {
    Optimal,
    Infeasible,
    Unbounded,
    Limit,
}

/// Phase 1 (if needed) and phase 2 from the engine's current basis.
fn finish<F: Field>(e: &mut Engine<'_, F>, tol: f64) -> Run {
    e.install_extra_artificial();
    if e.has_nonzero_artificial() {
        match e.run(Phase::One) {
            Outcome::Optimal => {}
            // Phase 1 is bounded below; this only happens numerically.
            Outcome::Unbounded => return Run::Limit,
            Outcome::IterationLimit => return Run::Limit,
        }
        let mass = e.artificial_mass();
        let infeasible = if F::EXACT {
            e.has_nonzero_artificial()
        } else {
            mass > tol * 10.0
        };
        if infeasible {
            return Run::Infeasible;
        }
    }
    match e.run(Phase::Two) {
        Outcome::Optimal => Run::Optimal,
        Outcome::Unbounded => Run::Unbounded,
        Outcome::IterationLimit => Run::Limit,
    }
}

/// The standard form is infeasible: the LP is unbounded if it has a
/// feasible point, infeasible otherwise. Decided by the homogeneous dual.
fn classify_dual_infeasible<F: Field>(s: &StdForm<F>, tol: Tolerances) -> Result<Status> {
    let zero = vec![F::zero(); s.rhs.len()];
    let mut e = Engine::new(&s.cols, &s.costs, zero, tol);
    match e.run(Phase::Two) {
        Outcome::Unbounded => Ok(Status::Infeasible),
        Outcome::Optimal => Ok(Status::Unbounded),
        Outcome::IterationLimit => Err(Error::Solver("iteration limit".into())),
    }
}

fn extract<F: Field>(lp: &Lp, s: &StdForm<F>, e: &Engine<'_, F>) -> Solution<F> {
    let pi = e.duals(Phase::Two);
    let primal: Vec<F> = pi.iter().map(|v| v.neg()).collect();
    let z = e.objective(Phase::Two);
    let value = F::from_rational(lp.objective.constant()).sub(&z);
    let y = e.solution();
    let mut per_row = vec![F::zero(); lp.rows.len()];
    for (j, yj) in y.iter().enumerate() {
        if yj.is_zero() {
            continue;
        }
        let (i, neg) = s.origin[j];
        per_row[i] = if neg { per_row[i].sub(yj) } else { per_row[i].add(yj) };
    }
    let dual = per_row
        .into_iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (lp.rows[i].label.clone(), v))
        .collect();
    Solution {
        status: Status::Optimal,
        value: Some(value),
        primal,
        dual,
        iterations: e.iterations,
        basis: e.basis.clone(),
    }
}

/// Deterministic perturbation in `[1, 2) * scale` for row `r`.
fn perturbation(r: usize, scale: f64) -> f64 {
    let mut h = (r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0xD1B5_4A32_D192_ED03;
    h ^= h >> 29;
    h = h.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    h ^= h >> 32;
    scale * (1.0 + (h >> 11) as f64 / (1u64 << 53) as f64)
}

fn float_tolerances(opts: &FloatOptions) -> Tolerances {
    Tolerances {
        primal: opts.tolerance,
        dual: opts.tolerance,
        pivot: 1e-7,
    }
}

/// Restores the true right-hand side after a shifted or perturbed solve
/// and repairs primal feasibility with the dual simplex.
fn clean_up(e: &mut Engine<'_, f64>, rhs: &[f64], log: bool) -> Run {
    e.shift = false;
    e.set_rhs(rhs.to_vec());
    let outcome = e.run_dual();
    if log {
        eprintln!("dual clean-up: {outcome:?} after {} iterations", e.iterations);
    }
    match outcome {
        Outcome::Optimal => match e.run(Phase::Two) {
            Outcome::Optimal => Run::Optimal,
            Outcome::Unbounded => Run::Unbounded,
            Outcome::IterationLimit => Run::Limit,
        },
        Outcome::IterationLimit => Run::Limit,
        Outcome::Unbounded => Run::Infeasible,
    }
}

/// Floating-point revised simplex.
pub fn solve_float(lp: &Lp, opts: &FloatOptions) -> Result<Solution<f64>> {
    let s = std_form::<f64>(lp)?;
    let tol = float_tolerances(opts);
    if opts.perturb {
        let rhs: Vec<f64> = s
            .rhs
            .iter()
            .enumerate()
            .map(|(r, v)| v + perturbation(r, 1e-7))
            .collect();
        let mut e = Engine::new(&s.cols, &s.costs, rhs, tol);
        e.log = opts.log;
        e.shift = true;
        if let Run::Optimal = finish(&mut e, opts.tolerance) {
            if opts.log {
                eprintln!("perturbed optimum after {} iterations; cleaning up", e.iterations);
            }
            match clean_up(&mut e, &s.rhs, opts.log) {
                Run::Optimal => return Ok(extract(lp, &s, &e)),
                Run::Limit => return Err(Error::Solver("iteration limit".into())),
                // Fall through to the unperturbed solve for classification.
                _ => {}
            }
        }
    }
    let mut e = Engine::new(&s.cols, &s.costs, s.rhs.clone(), tol);
    e.log = opts.log;
    e.shift = true;
    let run = match finish(&mut e, opts.tolerance) {
        Run::Optimal => clean_up(&mut e, &s.rhs, opts.log),
        other => other,
    };
    match run {
        Run::Optimal => Ok(extract(lp, &s, &e)),
        Run::Unbounded => Ok(Solution::without_optimum(Status::Infeasible, e.iterations)),
        Run::Infeasible => Ok(Solution::without_optimum(
            classify_dual_infeasible(&s, tol)?,
            e.iterations,
        )),
        Run::Limit => Err(Error::Solver("iteration limit".into())),
    }
}

/// Exact rational simplex. A floating-point solve supplies the starting
/// basis; the exact phase then restores feasibility if needed and pivots
/// to a provably optimal basis.
pub fn solve_exact(lp: &Lp) -> Result<Solution<Rational>> {
    solve_exact_with(lp, &FloatOptions::default())
}

pub fn solve_exact_with(lp: &Lp, opts: &FloatOptions) -> Result<Solution<Rational>> {
    let s = std_form::<Rational>(lp)?;
    let warm = solve_float(lp, opts).ok().filter(|f| f.status == Status::Optimal);
    let mut e = match warm {
        Some(f) => {
            if opts.log {
                eprintln!("float warm start: {} iterations", f.iterations);
            }
            Engine::with_basis(&s.cols, &s.costs, s.rhs.clone(), f.basis, Tolerances::EXACT)
        }
        None => Engine::new(&s.cols, &s.costs, s.rhs.clone(), Tolerances::EXACT),
    };
    e.log = opts.log;
    let run = finish(&mut e, 0.0);
    if opts.log {
        eprintln!("exact phase done: {} iterations", e.iterations);
    }
    let sol = match run {
        Run::Optimal => extract(lp, &s, &e),
        Run::Unbounded => Solution::without_optimum(Status::Infeasible, e.iterations),
        Run::Infeasible => Solution::without_optimum(
            classify_dual_infeasible(&s, Tolerances::EXACT)?,
            e.iterations,
        ),
        Run::Limit => return Err(Error::Solver("iteration limit".into())),
    };
    if sol.status == Status::Optimal {
        check_optimality(lp, &sol)?;
    }
    Ok(sol)
}

/// Exact primal feasibility, dual feasibility and equal objective values.
pub fn check_optimality(lp: &Lp, sol: &Solution<Rational>) -> Result<()> {
    let value = sol
        .value
        .as_ref()
        .ok_or_else(|| Error::Solver("no optimal value".into()))?;
    let at = |v| lp.column_index(v).map(|i| sol.primal[i].clone()).unwrap_or_default();
    for row in &lp.rows {
        let r = row.lhs.eval(at);
        let ok = match row.relation {
            Relation::Ge => !r.is_negative(),
            Relation::Eq => r == Rational::default(),
        };
        if !ok {
            return Err(Error::Solver(format!("primal point violates row `{}`", row.label)));
        }
    }
    if &lp.objective.eval(at) != value {
        return Err(Error::Solver("primal objective differs from the optimum".into()));
    }
    let mut combo = crate::entropy::LinearForm::zero();
    for (label, y) in &sol.dual {
        let row = lp
            .row(label)
            .ok_or_else(|| Error::UnknownLabel(label.clone()))?;
        if row.relation == Relation::Ge && y.is_negative() {
            return Err(Error::Solver(format!("negative multiplier on `{label}`")));
        }
        combo.add_scaled(&row.lhs, y);
    }
    let bound = lp.objective.constant() - combo.constant();
    if combo.homogeneous() != lp.objective.homogeneous() || &bound != value {
        return Err(Error::Solver("dual multipliers do not reproduce the objective".into()));
    }
    Ok(())
}

/// Rational multipliers for a floating-point optimum: small-denominator
/// rounding of each multiplier if that reproduces the objective exactly,
/// otherwise the exact basic solution of the final float basis. `None` if
/// neither is dual feasible.
pub fn rational_dual(lp: &Lp, sol: &Solution<f64>, max_den: u64) -> Option<Vec<(String, Rational)>> {
    if sol.status != Status::Optimal {
        return None;
    }
    let rounded: Option<Vec<(String, Rational)>> = sol
        .dual
        .iter()
        .map(|(l, v)| rationalize(*v, max_den).map(|q| (l.clone(), q)))
        .collect();
    if let Some(d) = rounded {
        let d: Vec<_> = d.into_iter().filter(|(_, q)| *q != Rational::default()).collect();
        if dual_feasible(lp, &d) {
            return Some(d);
        }
    }
    let s = std_form::<Rational>(lp).ok()?;
    let e = Engine::with_basis(&s.cols, &s.costs, s.rhs.clone(), sol.basis.clone(), Tolerances::EXACT);
    if !e.infeasible_positions().is_empty() || e.has_nonzero_artificial() {
        return None;
    }
    let exact = extract(lp, &s, &e);
    dual_feasible(lp, &exact.dual).then_some(exact.dual)
}

fn dual_feasible(lp: &Lp, dual: &[(String, Rational)]) -> bool {
    let mut combo = crate::entropy::LinearForm::zero();
    for (label, y) in dual {
        let Some(row) = lp.row(label) else {
            return false;
        };
        if row.relation == Relation::Ge && y.is_negative() {
            return false;
        }
        combo.add_scaled(&row.lhs, y);
    }
    combo.homogeneous() == lp.objective.homogeneous()
}
