//! Revised primal simplex on `min cost·y  s.t.  M y = rhs, y >= 0`.
//!
//! Column indices: `0..n` structural, `n..n+m` artificial (`±e_r`), `n+m`
//! an optional extra artificial used to restore feasibility of a warm-start
//! basis. Artificial columns never re-enter the basis; in phase 2 a basic
//! artificial is held at zero.
//!
//! Pricing is Dantzig's rule, switching to Bland's rule after a run of
//! degenerate pivots until the objective strictly improves again.

use std::borrow::Cow;

use super::field::Field;
use super::lu::Factor;

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub primal: f64,
    pub dual: f64,
    pub pivot: f64,
}

impl Tolerances {
    pub const EXACT: Tolerances = Tolerances {
        primal: 0.0,
        dual: 0.0,
        pivot: 0.0,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Optimal,
    Unbounded,
    IterationLimit,
}

pub struct Engine<'a, F: Field> {
    m: usize,
    n: usize,
    cols: &'a [Vec<(usize, F)>],
    costs: &'a [F],
    rhs: Vec<F>,
    art_sign: Vec<F>,
    extra: Option<Vec<(usize, F)>>,
    pub basis: Vec<usize>,
    pos_of: Vec<usize>,
    pub x: Vec<F>,
    factor: Factor<F>,
    tol: Tolerances,
    pub refactor_every: usize,
    pub degenerate_limit: usize,
    pub max_iterations: usize,
    pub iterations: usize,
    pub log: bool,
    /// Devex reference weights (float only; empty when unused).
    weights: Vec<f64>,
    pub devex: bool,
    /// Float only: absorb negative basic values into the right-hand side
    /// on recomputation (bound shifting). The caller restores the true
    /// right-hand side afterwards.
    pub shift: bool,
}

impl<'a, F: Field> Engine<'a, F> {
    /// Starts from the all-artificial basis.
    pub fn new(cols: &'a [Vec<(usize, F)>], costs: &'a [F], rhs: Vec<F>, tol: Tolerances) -> Self {
        let m = rhs.len();
        let art_sign: Vec<F> = rhs
            .iter()
            .map(|v| if v.lt_tol(0.0) { F::one().neg() } else { F::one() })
            .collect();
        let basis: Vec<usize> = (0..m).map(|r| cols.len() + r).collect();
        Self::with_signs(cols, costs, rhs, art_sign, basis, tol)
    }

    /// Starts from `basis` (column indices per row position), replacing
    /// dependent columns by artificials.
    pub fn with_basis(
        cols: &'a [Vec<(usize, F)>],
        costs: &'a [F],
        rhs: Vec<F>,
        basis: Vec<usize>,
        tol: Tolerances,
    ) -> Self {
        let art_sign = vec![F::one(); rhs.len()];
        Self::with_signs(cols, costs, rhs, art_sign, basis, tol)
    }

    fn with_signs(
        cols: &'a [Vec<(usize, F)>],
        costs: &'a [F],
        rhs: Vec<F>,
        art_sign: Vec<F>,
        basis: Vec<usize>,
        tol: Tolerances,
    ) -> Self {
        let m = rhs.len();
        let n = cols.len();
        assert_eq!(basis.len(), m);
        let ident: Vec<Vec<(usize, F)>> = (0..m).map(|r| vec![(r, F::one())]).collect();
        let mut e = Engine {
            m,
            n,
            cols,
            costs,
            rhs,
            art_sign,
            extra: None,
            basis,
            pos_of: vec![NONE; n + m + 1],
            x: Vec::new(),
            factor: Factor::factor(m, &ident).expect("identity is regular"),
            tol,
            refactor_every: if F::EXACT { 60 } else { 100 },
            degenerate_limit: if F::EXACT { 20 } else { 50 },
            max_iterations: 50 * (n + m) + 10_000,
            iterations: 0,
            log: false,
            weights: Vec::new(),
            devex: !F::EXACT,
            shift: false,
        };
        for (p, &j) in e.basis.iter().enumerate() {
            e.pos_of[j] = p;
        }
        e.refactor();
        e
    }

    fn column(&self, j: usize) -> Cow<'_, [(usize, F)]> {
        if j < self.n {
            Cow::Borrowed(&self.cols[j])
        } else if j < self.n + self.m {
            let r = j - self.n;
            Cow::Owned(vec![(r, self.art_sign[r].clone())])
        } else {
            Cow::Borrowed(self.extra.as_deref().expect("extra column present"))
        }
    }

    fn dense(&self, col: &[(usize, F)]) -> Vec<F> {
        let mut v = vec![F::zero(); self.m];
        for (r, a) in col {
            v[*r] = a.clone();
        }
        v
    }

    /// Refactors the current basis, swapping in artificials for dependent
    /// columns, and recomputes the basic solution.
    pub fn refactor(&mut self) {
        loop {
            let cols: Vec<Vec<(usize, F)>> =
                self.basis.iter().map(|&j| self.column(j).into_owned()).collect();
            match Factor::factor(self.m, &cols) {
                Ok(f) => {
                    self.factor = f;
                    break;
                }
                Err(s) => {
                    for (&p, &r) in s.positions.iter().zip(&s.rows) {
                        let old = self.basis[p];
                        self.pos_of[old] = NONE;
                        let art = self.n + r;
                        if self.pos_of[art] != NONE {
                            // Already basic elsewhere; cannot happen for a
                            // genuinely uncovered row.
                            continue;
                        }
                        self.basis[p] = art;
                        self.pos_of[art] = p;
                    }
                }
            }
        }
        self.recompute_x();
    }

    fn recompute_x(&mut self) {
        self.x = self.factor.ftran(self.rhs.clone());
        if F::EXACT {
            return;
        }
        for p in 0..self.m {
            if !self.x[p].lt_tol(0.0) {
                continue;
            }
            if self.shift && self.basis[p] < self.n + self.m {
                // Move the right-hand side so that this value sits on its bound.
                let v = self.x[p].clone();
                self.shift_rhs(p, &v);
                self.x[p] = F::zero();
            } else if !self.x[p].lt_tol(self.tol.primal) {
                self.x[p] = F::zero();
            }
        }
    }

    /// `rhs -= v * B_p`.
    fn shift_rhs(&mut self, p: usize, v: &F) {
        let col = self.column(self.basis[p]).into_owned();
        for (r, a) in &col {
            self.rhs[*r].sub_mul(a, v);
        }
    }

    fn cost(&self, j: usize, phase: Phase) -> F {
        match phase {
            Phase::One => {
                if j >= self.n {
                    F::one()
                } else {
                    F::zero()
                }
            }
            Phase::Two => {
                if j >= self.n {
                    F::zero()
                } else {
                    self.costs[j].clone()
                }
            }
        }
    }

    /// Simplex multipliers `π = c_B B^{-1}`.
    pub fn duals(&self, phase: Phase) -> Vec<F> {
        let cb: Vec<F> = self.basis.iter().map(|&j| self.cost(j, phase)).collect();
        self.factor.btran(cb)
    }

    pub fn objective(&self, phase: Phase) -> F {
        let mut z = F::zero();
        for (p, &j) in self.basis.iter().enumerate() {
            let c = self.cost(j, phase);
            if !c.is_zero() && !self.x[p].is_zero() {
                z = z.add(&c.mul(&self.x[p]));
            }
        }
        z
    }

    /// Positions holding infeasible (negative) values.
    pub fn infeasible_positions(&self) -> Vec<usize> {
        (0..self.m)
            .filter(|&p| self.x[p].lt_tol(self.tol.primal))
            .collect()
    }

    /// Makes the basis primal feasible by pivoting in one extra artificial
    /// column `-Σ_{p infeasible} B_p` at the most negative position. Phase 1
    /// must follow. Returns `false` if nothing needed fixing.
    pub fn install_extra_artificial(&mut self) -> bool {
        let bad = self.infeasible_positions();
        if bad.is_empty() {
            return false;
        }
        let mut acc = vec![F::zero(); self.m];
        for &p in &bad {
            for (r, a) in self.column(self.basis[p]).iter() {
                acc[*r] = acc[*r].sub(a);
            }
        }
        let col: Vec<(usize, F)> = acc
            .into_iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .collect();
        let extra_j = self.n + self.m;
        assert!(self.pos_of[extra_j] == NONE, "extra artificial installed twice");
        self.extra = Some(col);
        let mut p = bad[0];
        for &q in &bad {
            if self.x[q].sub(&self.x[p]).lt_tol(0.0) {
                p = q;
            }
        }
        let alpha = self.factor.ftran(self.dense(&self.column(extra_j)));
        self.pivot(extra_j, p, &alpha);
        if !F::EXACT {
            for v in self.x.iter_mut() {
                if v.lt_tol(0.0) {
                    *v = F::zero();
                }
            }
        }
        true
    }

    fn pivot(&mut self, j: usize, p: usize, alpha: &[F]) {
        let mut theta = self.x[p].div(&alpha[p]);
        if !F::EXACT && theta.lt_tol(0.0) {
            // A leaving value slightly outside its bound: never step
            // backwards, shift the right-hand side instead.
            if self.shift {
                let v = self.x[p].clone();
                self.shift_rhs(p, &v);
            }
            theta = F::zero();
        }
        if !theta.is_zero() {
            for (i, a) in alpha.iter().enumerate() {
                if i != p && !a.is_zero() {
                    self.x[i].sub_mul(a, &theta);
                }
            }
        }
        self.x[p] = theta.clone();
        let old = self.basis[p];
        self.pos_of[old] = NONE;
        self.basis[p] = j;
        self.pos_of[j] = p;
        self.factor.update(p, alpha);
        self.iterations += 1;
        if self.factor.eta_count() >= self.refactor_every {
            self.refactor();
        }
    }

    /// Runs the simplex method for `phase` from the current feasible basis.
    pub fn run(&mut self, phase: Phase) -> Outcome {
        let mut degenerate_run = 0usize;
        let mut bland = false;
        let mut round = 0usize;
        if self.devex {
            self.weights = vec![1.0; self.n];
        }
        loop {
            if self.iterations >= self.max_iterations {
                return Outcome::IterationLimit;
            }
            round += 1;
            let pi = self.duals(phase);
            let Some((j, dj)) = self.price(&pi, phase, bland) else {
                return Outcome::Optimal;
            };
            let alpha = self.factor.ftran(self.dense(&self.column(j)));
            let Some(p) = self.ratio_test(&alpha, phase) else {
                return Outcome::Unbounded;
            };
            let theta = self.x[p].div(&alpha[p]);
            let improving = if F::EXACT {
                !theta.is_zero()
            } else {
                theta.to_f64() * dj.to_f64().abs() > 1e-12
            };
            if improving {
                degenerate_run = 0;
                bland = false;
            } else {
                degenerate_run += 1;
                if degenerate_run > self.degenerate_limit {
                    bland = true;
                }
            }
            if self.log && round.is_multiple_of(500) {
                eprintln!(
                    "  phase {:?} iter {} obj {:.12} bland={bland}",
                    phase,
                    self.iterations,
                    self.objective(phase).to_f64()
                );
            }
            if self.devex {
                self.update_weights(j, p, &alpha);
            }
            self.pivot(j, p, &alpha);
        }
    }

    fn update_weights(&mut self, q: usize, p: usize, alpha: &[F]) {
        let apq = alpha[p].to_f64();
        let wq = self.weights[q];
        let mut unit = vec![F::zero(); self.m];
        unit[p] = F::one();
        let rho = self.factor.btran(unit);
        let mut grow = false;
        for j in 0..self.n {
            if self.pos_of[j] != NONE || j == q {
                continue;
            }
            let mut a = 0.0;
            for (r, v) in &self.cols[j] {
                a += v.to_f64() * rho[*r].to_f64();
            }
            if a != 0.0 {
                let r = a / apq;
                let w = r * r * wq;
                if w > self.weights[j] {
                    self.weights[j] = w;
                    grow |= w > 1e8;
                }
            }
        }
        let old = self.basis[p];
        if old < self.n {
            self.weights[old] = (wq / (apq * apq)).max(1.0);
        }
        if grow {
            self.weights.iter_mut().for_each(|w| *w = 1.0);
        }
    }

    /// Dual simplex in phase 2 from a dual feasible basis whose basic
    /// solution has negative entries (after [`Engine::set_rhs`]). Returns
    /// `Optimal` once primal feasible, `Unbounded` if the primal is
    /// infeasible (or a nonzero artificial blocks progress).
    pub fn run_dual(&mut self) -> Outcome {
        let mut skip: Vec<usize> = Vec::new();
        loop {
            if self.iterations >= self.max_iterations {
                return Outcome::IterationLimit;
            }
            let mut leave: Option<usize> = None;
            for p in 0..self.m {
                if self.basis[p] >= self.n {
                    if !self.x[p].is_zero() && self.x[p].abs_f64() > self.tol.primal {
                        return Outcome::Unbounded;
                    }
                    continue;
                }
                if self.x[p].lt_tol(self.tol.primal)
                    && leave.is_none_or(|q| self.x[p].sub(&self.x[q]).lt_tol(0.0))
                {
                    leave = Some(p);
                }
            }
            let Some(p) = leave else {
                return Outcome::Optimal;
            };
            let pi = self.duals(Phase::Two);
            let mut unit = vec![F::zero(); self.m];
            unit[p] = F::one();
            let rho = self.factor.btran(unit);
            // (column, reduced cost, pivot-row entry) with entry < 0.
            let mut cands: Vec<(usize, F, F)> = Vec::new();
            for j in 0..self.n {
                if self.pos_of[j] != NONE || skip.contains(&j) {
                    continue;
                }
                let mut a = F::zero();
                let mut d = self.costs[j].clone();
                for (r, v) in &self.cols[j] {
                    if !rho[*r].is_zero() {
                        a = a.add(&v.mul(&rho[*r]));
                    }
                    if !pi[*r].is_zero() {
                        d.sub_mul(v, &pi[*r]);
                    }
                }
                if a.lt_tol(self.tol.pivot) {
                    cands.push((j, d, a));
                }
            }
            let entering = if F::EXACT {
                let mut best: Option<(usize, F)> = None;
                for (j, d, a) in &cands {
                    let ratio = d.div(&a.neg());
                    if best.as_ref().is_none_or(|(_, br)| ratio.sub(br).lt_tol(0.0)) {
                        best = Some((*j, ratio));
                    }
                }
                best.map(|(j, _)| j)
            } else {
                let tol = self.tol.dual;
                let bound = cands
                    .iter()
                    .map(|(_, d, a)| (d.to_f64().max(0.0) + tol) / -a.to_f64())
                    .fold(f64::INFINITY, f64::min);
                let mut best: Option<(usize, f64)> = None;
                for (j, d, a) in &cands {
                    let ratio = d.to_f64().max(0.0) / -a.to_f64();
                    let mag = a.abs_f64();
                    if ratio <= bound && best.is_none_or(|(_, bm)| mag > bm) {
                        best = Some((*j, mag));
                    }
                }
                best.map(|(j, _)| j)
            };
            let Some(j) = entering else {
                return Outcome::Unbounded;
            };
            let alpha = self.factor.ftran(self.dense(&self.cols[j]));
            if alpha[p].is_zero() || !alpha[p].lt_tol(self.tol.pivot) {
                // Row and column computations disagree: refresh and retry
                // without this column.
                self.refactor();
                skip.push(j);
                continue;
            }
            skip.clear();
            self.pivot(j, p, &alpha);
        }
    }

    fn price(&self, pi: &[F], phase: Phase, bland: bool) -> Option<(usize, F)> {
        let mut best: Option<(usize, F, f64)> = None;
        for j in 0..self.n {
            if self.pos_of[j] != NONE {
                continue;
            }
            let mut d = self.cost(j, phase);
            for (r, a) in &self.cols[j] {
                if !pi[*r].is_zero() {
                    d.sub_mul(a, &pi[*r]);
                }
            }
            if !d.lt_tol(self.tol.dual) {
                continue;
            }
            if bland {
                return Some((j, d));
            }
            let mag = if self.devex {
                let v = d.to_f64();
                -(v * v) / self.weights[j]
            } else {
                d.to_f64()
            };
            let better = match &best {
                None => true,
                Some((_, bd, bm)) => {
                    if F::EXACT {
                        d.sub(bd).lt_tol(0.0)
                    } else {
                        mag < *bm
                    }
                }
            };
            if better {
                best = Some((j, d, mag));
            }
        }
        best.map(|(j, d, _)| (j, d))
    }

    /// Leaving position, or `None` if the direction is unbounded.
    fn ratio_test(&self, alpha: &[F], phase: Phase) -> Option<usize> {
        let held = |p: usize| phase == Phase::Two && self.basis[p] >= self.n;
        if F::EXACT {
            let mut best: Option<(usize, F)> = None;
            for p in 0..self.m {
                let a = &alpha[p];
                let ratio = if held(p) {
                    if a.is_zero() {
                        continue;
                    }
                    F::zero()
                } else if a.gt_tol(0.0) {
                    self.x[p].div(a)
                } else {
                    continue;
                };
                let better = match &best {
                    None => true,
                    Some((bp, br)) => {
                        let diff = ratio.sub(br);
                        diff.lt_tol(0.0) || (diff.is_zero() && self.basis[p] < self.basis[*bp])
                    }
                };
                if better {
                    best = Some((p, ratio));
                }
            }
            return best.map(|(p, _)| p);
        }
        // Harris two-pass ratio test.
        let tp = self.tol.pivot;
        let tf = self.tol.primal;
        let mut theta_max = f64::INFINITY;
        for p in 0..self.m {
            let a = alpha[p].to_f64();
            let x = self.x[p].to_f64();
            if held(p) {
                if a.abs() > tp {
                    theta_max = theta_max.min((x.abs() + tf) / a.abs());
                }
            } else if a > tp {
                theta_max = theta_max.min((x + tf) / a);
            }
        }
        if theta_max.is_infinite() {
            return None;
        }
        let mut best: Option<(usize, f64)> = None;
        for p in 0..self.m {
            let a = alpha[p].to_f64();
            let x = self.x[p].to_f64();
            let (eligible, ratio) = if held(p) {
                (a.abs() > tp, 0.0)
            } else {
                (a > tp, x / a)
            };
            if !eligible || ratio > theta_max {
                continue;
            }
            let better = match best {
                None => true,
                Some((bp, ba)) => {
                    a.abs() > ba || (a.abs() == ba && self.basis[p] < self.basis[bp])
                }
            };
            if better {
                best = Some((p, a.abs()));
            }
        }
        best.map(|(p, _)| p)
    }

    /// Basic artificial positions with a nonzero value.
    pub fn artificial_mass(&self) -> f64 {
        self.basis
            .iter()
            .enumerate()
            .filter(|(_, &j)| j >= self.n)
            .map(|(p, _)| self.x[p].to_f64().abs())
            .sum()
    }

    pub fn has_nonzero_artificial(&self) -> bool {
        self.basis
            .iter()
            .enumerate()
            .any(|(p, &j)| j >= self.n && !self.x[p].is_zero() && (F::EXACT || self.x[p].abs_f64() > self.tol.primal))
    }

    /// Structural values `y` (length `n`).
    pub fn solution(&self) -> Vec<F> {
        let mut y = vec![F::zero(); self.n];
        for (p, &j) in self.basis.iter().enumerate() {
            if j < self.n {
                y[j] = self.x[p].clone();
            }
        }
        y
    }

    pub fn set_rhs(&mut self, rhs: Vec<F>) {
        self.rhs = rhs;
        self.recompute_x();
    }
}
