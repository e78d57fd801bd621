//! Permutation groups acting on variables, the induced action on entropy
//! coordinates, and the two ways of exploiting a symmetry of an LP: explicit
//! invariance equalities, or a quotient onto orbit representatives.
//!
//! A minimum of a group-invariant linear function over a group-invariant
//! convex set is attained at an invariant point (average the orbit of any
//! minimizer), so both reductions preserve the optimal value.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use crate::constraint::{Constraint, Relation};
use crate::entropy::{LinearForm, VarSet};
use crate::error::{Error, Result};
use crate::lp::{Lp, Reduction, ReductionKind};
use num_traits::Zero;

/// A bijection on variable indices `0..len`. Indices at or beyond `len`
/// (including the epigraph column) are fixed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    image: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            image: (0..n).collect(),
        }
    }

    pub fn from_image(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &i in &image {
            if i >= image.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Permutation(format!("{image:?} is not a bijection")));
            }
        }
        Ok(Perm { image })
    }

    /// Builds a permutation on `n` points from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut image: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for cyc in cycles {
            for (k, &a) in cyc.iter().enumerate() {
                if a >= n {
                    return Err(Error::Permutation(format!("index {a} out of range {n}")));
                }
                if std::mem::replace(&mut used[a], true) {
                    return Err(Error::Permutation(format!("index {a} repeated in cycles")));
                }
                image[a] = cyc[(k + 1) % cyc.len()];
            }
        }
        Ok(Perm { image })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image.get(i).copied().unwrap_or(i)
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Extends to `n >= len` points, fixing the new ones.
    pub fn extended(&self, n: usize) -> Perm {
        let mut image = self.image.clone();
        image.extend(image.len()..n.max(image.len()));
        Perm { image }
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        let n = self.len().max(other.len());
        Perm {
            image: (0..n).map(|i| self.apply(other.apply(i))).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut image = vec![0; self.len()];
        for (i, &j) in self.image.iter().enumerate() {
            image[j] = i;
        }
        Perm { image }
    }

    /// Image of a variable set (the induced map on coordinates).
    pub fn act(&self, v: VarSet) -> VarSet {
        if v.is_epigraph() {
            return v;
        }
        let n = self.image.len();
        let low = VarSet::full(n.min(crate::entropy::MAX_VARS));
        let moved = VarSet::from_indices((v & low).iter().map(|i| self.image[i]));
        moved | v.without(low)
    }

    pub fn act_form(&self, f: &LinearForm) -> LinearForm {
        f.map_coords(|v| self.act(v))
    }

    /// Cycle notation over `names`, e.g. `(A B)(C D)`.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] || self.image[s] == s {
                continue;
            }
            let mut cyc = vec![s];
            seen[s] = true;
            let mut j = self.image[s];
            while j != s {
                seen[j] = true;
                cyc.push(j);
                j = self.image[j];
            }
            out.push(cyc);
        }
        out
    }

    pub fn render(&self, names: &[String]) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        cycles
            .iter()
            .map(|c| {
                let parts: Vec<&str> = c.iter().map(|&i| names[i].as_str()).collect();
                format!("({})", parts.join(" "))
            })
            .collect()
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.image)
    }
}

/// A finite permutation group given by generators, with its full element
/// list computed by breadth-first closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            elements: vec![Perm::identity(degree)],
        }
    }

    /// Closure of `generators` acting on `degree` points. Elements are listed
    /// in breadth-first discovery order starting from the identity.
    pub fn closure(degree: usize, generators: &[Perm]) -> Result<Self> {
        let gens: Vec<Perm> = generators
            .iter()
            .map(|g| {
                if g.len() > degree {
                    Err(Error::Permutation(format!(
                        "generator on {} points exceeds degree {degree}",
                        g.len()
                    )))
                } else {
                    Ok(g.extended(degree))
                }
            })
            .collect::<Result<_>>()?;
        let id = Perm::identity(degree);
        let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
        let mut elements = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(e) = queue.pop_front() {
            for g in &gens {
                let p = g.compose(&e);
                if seen.insert(p.clone()) {
                    elements.push(p.clone());
                    queue.push_back(p);
                }
            }
        }
        Ok(PermGroup {
            degree,
            generators: gens,
            elements,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    /// The same group acting on `n >= degree` points (new points fixed).
    pub fn extended(&self, n: usize) -> PermGroup {
        PermGroup {
            degree: n.max(self.degree),
            generators: self.generators.iter().map(|g| g.extended(n)).collect(),
            elements: self.elements.iter().map(|g| g.extended(n)).collect(),
        }
    }

    pub fn orbit(&self, v: VarSet) -> BTreeSet<VarSet> {
        self.elements.iter().map(|g| g.act(v)).collect()
    }

    /// Orbit representative: the smallest bitmask in the orbit.
    pub fn representative(&self, v: VarSet) -> VarSet {
        self.elements
            .iter()
            .map(|g| g.act(v))
            .min()
            .unwrap_or(v)
    }

    pub fn fixes_form(&self, f: &LinearForm) -> bool {
        self.generators.iter().all(|g| g.act_form(f) == *f)
    }
}

/// `H(V) - H(rep(V)) = 0` for every non-empty `V ⊆ {0..n}` that is not its
/// own orbit representative.
pub fn invariance_equalities(group: &PermGroup, names: &[String]) -> Vec<Constraint> {
    let n = group.degree().min(names.len());
    let mut out = Vec::new();
    for v in VarSet::full(n).subsets().skip(1) {
        let r = group.representative(v);
        if r != v {
            let mut f = LinearForm::zero();
            f.add_term(v, num_traits::One::one());
            f.add_term(r, -<crate::rational::Rational as num_traits::One>::one());
            out.push(Constraint::eq(format!("sym:H({})", v.names(names)), f));
        }
    }
    out
}

/// Canonical key of a constraint for set-membership tests: equalities are
/// compared up to sign.
fn row_key(relation: Relation, f: &LinearForm) -> (Relation, LinearForm) {
    match relation {
        Relation::Eq => (relation, f.sign_normalized().0),
        Relation::Ge => (relation, f.clone()),
    }
}

/// Checks that every generator maps the row set onto itself and fixes the
/// objective.
pub fn check_invariance(lp: &Lp, group: &PermGroup) -> Result<()> {
    let keys: HashSet<(Relation, LinearForm)> =
        lp.rows.iter().map(|r| row_key(r.relation, &r.lhs)).collect();
    for (k, g) in group.generators().iter().enumerate() {
        let desc = || format!("generator #{} {}", k + 1, g.render(&lp.var_names));
        if g.act_form(&lp.objective) != lp.objective {
            return Err(Error::NotInvariant(format!("{} does not fix the objective", desc())));
        }
        for row in &lp.rows {
            let image = g.act_form(&row.lhs);
            if !keys.contains(&row_key(row.relation, &image)) {
                return Err(Error::NotInvariant(format!(
                    "{} maps row `{}` outside the constraint set",
                    desc(),
                    row.label
                )));
            }
        }
    }
    Ok(())
}

/// Replaces every coordinate by its orbit representative under `group`,
/// merging duplicate rows. Requires (and checks) that the LP is
/// `group`-invariant.
pub fn quotient_reduce(lp: &Lp, group: &PermGroup) -> Result<Lp> {
    if group.is_trivial() {
        return Ok(lp.clone());
    }
    let group = group.extended(lp.var_names.len());
    check_invariance(lp, &group)?;
    Ok(reduce_with(lp, &group, None))
}

/// Substitutes orbit representatives only for coordinates inside `scope`.
/// Valid when the LP already contains the invariance equalities for those
/// coordinates, which is checked.
pub fn substitute_orbits(lp: &Lp, group: &PermGroup, scope: VarSet) -> Result<Lp> {
    if group.is_trivial() {
        return Ok(lp.clone());
    }
    let keys: HashSet<(Relation, LinearForm)> =
        lp.rows.iter().map(|r| row_key(r.relation, &r.lhs)).collect();
    for v in scope.subsets().skip(1) {
        let r = group.representative(v);
        if r != v {
            let mut f = LinearForm::zero();
            f.add_term(v, num_traits::One::one());
            f.add_term(r, -<crate::rational::Rational as num_traits::One>::one());
            if !keys.contains(&row_key(Relation::Eq, &f)) {
                return Err(Error::NotInvariant(format!(
                    "missing invariance equality for H({})",
                    v.names(&lp.var_names)
                )));
            }
        }
    }
    Ok(reduce_with(lp, &group.extended(lp.var_names.len()), Some(scope)))
}

fn reduce_with(lp: &Lp, group: &PermGroup, scope: Option<VarSet>) -> Lp {
    let mut rep: HashMap<VarSet, VarSet> = HashMap::with_capacity(lp.columns.len());
    for &c in &lp.columns {
        let r = match scope {
            Some(s) if !c.is_subset(s) => c,
            _ => group.representative(c),
        };
        rep.insert(c, r);
    }
    let map = |v: VarSet| rep.get(&v).copied().unwrap_or(v);
    let mut seen: HashMap<(Relation, LinearForm), usize> = HashMap::new();
    let mut rows = Vec::new();
    let mut row_origin = Vec::new();
    for (i, row) in lp.rows.iter().enumerate() {
        let lhs = row.lhs.map_coords(map);
        if lhs.is_empty() && lhs.constant().is_zero() {
            continue;
        }
        let key = row_key(row.relation, &lhs);
        if seen.contains_key(&key) {
            continue;
        }
        seen.insert(key, rows.len());
        rows.push(Constraint {
            label: row.label.clone(),
            lhs,
            relation: row.relation,
        });
        row_origin.push(i);
    }
    let columns: BTreeSet<VarSet> = lp.columns.iter().map(|&c| map(c)).collect();
    Lp {
        name: lp.name.clone(),
        var_names: lp.var_names.clone(),
        columns: columns.into_iter().collect(),
        rows,
        objective: lp.objective.map_coords(map),
        normalization: lp.normalization.clone(),
        reduction: Some(Reduction {
            kind: match scope {
                None => ReductionKind::Full,
                Some(s) => ReductionKind::Scoped(s),
            },
            group: group.clone(),
            origin: Box::new(lp.clone()),
            row_origin,
        }),
        options: lp.options.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(ix: &[usize]) -> VarSet {
        VarSet::from_indices(ix.iter().copied())
    }

    fn t(a: usize, b: usize, n: usize) -> Perm {
        Perm::from_cycles(n, &[vec![a, b]]).unwrap()
    }

    #[test]
    fn action_of_transposition() {
        let p = t(0, 1, 3);
        assert_eq!(p.act(vs(&[0, 2])), vs(&[1, 2]));
        assert_eq!(p.act(vs(&[0, 1, 2])), vs(&[0, 1, 2]));
        let id = Perm::identity(3);
        for v in VarSet::full(3).subsets() {
            assert_eq!(id.act(v), v);
        }
        assert_eq!(p.act(VarSet::EPIGRAPH), VarSet::EPIGRAPH);
        assert_eq!(t(0, 1, 2).act(vs(&[0, 5])), vs(&[1, 5]));
    }

    #[test]
    fn closure_orders() {
        let g = PermGroup::closure(4, &[t(0, 1, 4), t(2, 3, 4)]).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(PermGroup::closure(4, &[]).unwrap().order(), 1);
        assert!(Perm::from_image(vec![0, 0, 1]).is_err());
        assert!(Perm::from_cycles(3, &[vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn orbits() {
        let g = PermGroup::closure(2, &[t(0, 1, 2)]).unwrap();
        assert_eq!(g.orbit(vs(&[0])), BTreeSet::from([vs(&[0]), vs(&[1])]));
        assert_eq!(g.orbit(vs(&[0, 1])).len(), 1);
        let ing = PermGroup::closure(4, &[t(0, 1, 4), t(2, 3, 4)]).unwrap();
        assert_eq!(
            ing.orbit(vs(&[0, 2])),
            BTreeSet::from([vs(&[0, 2]), vs(&[1, 2]), vs(&[0, 3]), vs(&[1, 3])])
        );
        assert_eq!(ing.representative(vs(&[1, 3])), vs(&[0, 2]));
    }

    #[test]
    fn invariance_rows() {
        let names: Vec<String> = ["A", "B", "C", "D"].iter().map(|s| s.to_string()).collect();
        let ing = PermGroup::closure(4, &[t(0, 1, 4), t(2, 3, 4)]).unwrap();
        let rows = invariance_equalities(&ing, &names);
        assert_eq!(rows.len(), 7);
        assert!(rows.iter().all(|r| r.relation == Relation::Eq));
        assert!(invariance_equalities(&PermGroup::trivial(4), &names).is_empty());
    }

    #[test]
    fn cycle_rendering_round_trip() {
        let p = Perm::from_cycles(6, &[vec![1, 3], vec![2, 4]]).unwrap();
        assert_eq!(p.cycles(), vec![vec![1, 3], vec![2, 4]]);
        let names: Vec<String> = (0..6).map(|i| format!("S{i}")).collect();
        assert_eq!(p.render(&names), "(S1 S3)(S2 S4)");
        assert_eq!(p.compose(&p.inverse()), Perm::identity(6));
    }
}
