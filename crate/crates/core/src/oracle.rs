//! Explicit finite joint distributions, their entropy profiles and the
//! constructive Copy Lemma extension. Used as ground truth in tests.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::entropy::VarSet;
use crate::error::{Error, Result};
use crate::extension::CopyStep;
use crate::rational::{to_f64, Rational};

/// Outcome: one value per variable, value `v` of variable `i` in
/// `0..supports[i]`.
pub type Outcome = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDist {
    supports: Vec<u32>,
    probs: BTreeMap<Outcome, Rational>,
}

impl JointDist {
    /// Checks supports, outcome ranges and that the probabilities are
    /// nonnegative and sum to exactly one. Zero entries are dropped.
    pub fn new(supports: Vec<u32>, probs: impl IntoIterator<Item = (Outcome, Rational)>) -> Result<Self> {
        if supports.is_empty() || supports.contains(&0) {
            return Err(Error::Problem("every variable needs a non-empty support".into()));
        }
        let mut map: BTreeMap<Outcome, Rational> = BTreeMap::new();
        for (o, p) in probs {
            if o.len() != supports.len() || o.iter().zip(&supports).any(|(v, s)| v >= s) {
                return Err(Error::Problem(format!("outcome {o:?} outside the supports")));
            }
            if p.is_negative() {
                return Err(Error::Problem(format!("negative probability for {o:?}")));
            }
            *map.entry(o).or_insert_with(Rational::zero) += p;
        }
        map.retain(|_, p| !p.is_zero());
        let total: Rational = map.values().sum();
        if total != Rational::from_integer(1.into()) {
            return Err(Error::Problem(format!("probabilities sum to {total}")));
        }
        Ok(JointDist { supports, probs: map })
    }

    /// Uniform distribution on the given outcomes (repeats add weight).
    pub fn uniform(supports: Vec<u32>, outcomes: &[Outcome]) -> Result<Self> {
        let p = Rational::new(1.into(), BigInt::from(outcomes.len()));
        Self::new(supports, outcomes.iter().map(|o| (o.clone(), p.clone())))
    }

    /// Probabilities proportional to `weights`, one per outcome in
    /// lexicographic order (last variable fastest).
    pub fn from_weights(supports: Vec<u32>, weights: &[u64]) -> Result<Self> {
        let outcomes = all_outcomes(&supports);
        if weights.len() != outcomes.len() {
            return Err(Error::Problem(format!(
                "{} weights for {} outcomes",
                weights.len(),
                outcomes.len()
            )));
        }
        let total: u64 = weights.iter().sum();
        if total == 0 {
            return Err(Error::Problem("all weights are zero".into()));
        }
        let probs = outcomes
            .into_iter()
            .zip(weights)
            .map(|(o, &w)| (o, Rational::new(w.into(), total.into())));
        Self::new(supports, probs)
    }

    pub fn num_vars(&self) -> usize {
        self.supports.len()
    }

    pub fn supports(&self) -> &[u32] {
        &self.supports
    }

    pub fn probs(&self) -> &BTreeMap<Outcome, Rational> {
        &self.probs
    }

    /// Distribution of the variables in `v` (in index order).
    pub fn marginal(&self, v: VarSet) -> BTreeMap<Outcome, Rational> {
        let idx: Vec<usize> = v.iter().collect();
        let mut out: BTreeMap<Outcome, Rational> = BTreeMap::new();
        for (o, p) in &self.probs {
            let key: Outcome = idx.iter().map(|&i| o[i]).collect();
            *out.entry(key).or_insert_with(Rational::zero) += p;
        }
        out
    }

    /// Entropy in bits of the variables in `v`.
    pub fn entropy(&self, v: VarSet) -> f64 {
        let mut h = 0.0;
        for p in self.marginal(v).values() {
            let p = to_f64(p);
            h -= p * p.log2();
        }
        h.max(0.0)
    }

    /// Independent joint distribution of `self` followed by `other`.
    pub fn product(&self, other: &JointDist) -> JointDist {
        let mut supports = self.supports.clone();
        supports.extend(&other.supports);
        let mut probs = BTreeMap::new();
        for (a, p) in &self.probs {
            for (b, q) in &other.probs {
                let mut o = a.clone();
                o.extend(b);
                probs.insert(o, p * q);
            }
        }
        JointDist { supports, probs }
    }
}

/// All outcomes of the given supports in lexicographic order.
pub fn all_outcomes(supports: &[u32]) -> Vec<Outcome> {
    let mut out = vec![Vec::new()];
    for &s in supports {
        out = out
            .into_iter()
            .flat_map(|o: Outcome| {
                (0..s).map(move |v| {
                    let mut o = o.clone();
                    o.push(v);
                    o
                })
            })
            .collect();
    }
    out
}

/// `H(X_V)` in bits for every non-empty `V`.
pub fn entropy_profile(d: &JointDist) -> HashMap<VarSet, f64> {
    VarSet::full(d.num_vars())
        .subsets()
        .skip(1)
        .map(|v| (v, d.entropy(v)))
        .collect()
}

/// Appends one variable per copied tuple: given the conditioning tuple,
/// the copies follow the conditional law of the copied tuples and are
/// independent of everything else. A copied tuple's value is encoded in
/// mixed radix over its variables.
pub fn copy_extend(d: &JointDist, step: &CopyStep) -> Result<JointDist> {
    let n = d.num_vars();
    let names: Vec<String> = (0..n).map(|i| format!("X{i}")).collect();
    let mut probe = step.clone();
    probe.new_names = (0..step.copied.len()).map(|k| format!("Y{k}")).collect();
    probe.validate(&names)?;

    let x_idx: Vec<usize> = step.over.iter().collect();
    let z_idx: Vec<Vec<usize>> = step.copied.iter().map(|z| z.iter().collect()).collect();
    let project = |o: &Outcome, idx: &[usize]| -> Outcome { idx.iter().map(|&i| o[i]).collect() };

    // Joint law of (X, Z_1, ..., Z_k) and of X.
    let mut xz: BTreeMap<(Outcome, Vec<Outcome>), Rational> = BTreeMap::new();
    let mut px: BTreeMap<Outcome, Rational> = BTreeMap::new();
    for (o, p) in &d.probs {
        let x = project(o, &x_idx);
        let zs: Vec<Outcome> = z_idx.iter().map(|idx| project(o, idx)).collect();
        *xz.entry((x.clone(), zs)).or_insert_with(Rational::zero) += p;
        *px.entry(x).or_insert_with(Rational::zero) += p;
    }

    let mut supports = d.supports.clone();
    for idx in &z_idx {
        supports.push(idx.iter().map(|&i| d.supports[i]).product());
    }
    let encode = |zv: &Outcome, idx: &[usize]| -> u32 {
        zv.iter()
            .zip(idx)
            .fold(0u32, |acc, (v, &i)| acc * d.supports[i] + v)
    };

    let mut probs = BTreeMap::new();
    for (o, p) in &d.probs {
        let x = project(o, &x_idx);
        let denom = &px[&x];
        for ((x2, zs), q) in xz.range((x.clone(), Vec::new())..) {
            if *x2 != x {
                break;
            }
            let mut ext = o.clone();
            for (zv, idx) in zs.iter().zip(&z_idx) {
                ext.push(encode(zv, idx));
            }
            probs.insert(ext, p * q / denom);
        }
    }
    JointDist::new(supports, probs)
}
