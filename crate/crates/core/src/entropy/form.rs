use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use super::VarSet;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Exact linear (affine) combination of entropy coordinates.
///
/// Zero coefficients are never stored, so two forms are equal exactly when
/// their term maps and constants are equal.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LinearForm {
    terms: BTreeMap<VarSet, Rational>,
    constant: Rational,
}

impl LinearForm {
    pub fn zero() -> Self {
        LinearForm::default()
    }

    pub fn constant_form(c: Rational) -> Self {
        LinearForm {
            terms: BTreeMap::new(),
            constant: c,
        }
    }

    /// `H(X_V)`.
    pub fn coord(v: VarSet) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::EmptyCoordinate);
        }
        let mut f = LinearForm::zero();
        f.add_term(v, Rational::one());
        Ok(f)
    }

    /// `H(X_V | X_W) = H(X_{V∪W}) - H(X_W)`.
    pub fn cond_entropy(v: VarSet, w: VarSet) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::EmptyCoordinate);
        }
        let mut f = LinearForm::zero();
        f.add_term(v | w, Rational::one());
        f.add_term(w, -Rational::one());
        Ok(f)
    }

    /// `I(X_V ; X_W | X_U) = H(X_{U∪V}) + H(X_{U∪W}) - H(X_{U∪V∪W}) - H(X_U)`.
    pub fn cond_mutual_info(v: VarSet, w: VarSet, u: VarSet) -> Result<Self> {
        if v.is_empty() || w.is_empty() {
            return Err(Error::EmptyCoordinate);
        }
        let one = Rational::one();
        let mut f = LinearForm::zero();
        f.add_term(u | v, one.clone());
        f.add_term(u | w, one.clone());
        f.add_term(u | v | w, -one.clone());
        f.add_term(u, -one);
        Ok(f)
    }

    pub fn mutual_info(v: VarSet, w: VarSet) -> Result<Self> {
        Self::cond_mutual_info(v, w, VarSet::EMPTY)
    }

    /// `Ing(a,b,c,d) = I(a;b|c) + I(a;b|d) + I(c;d) - I(a;b)`.
    pub fn ingleton(a: VarSet, b: VarSet, c: VarSet, d: VarSet) -> Result<Self> {
        let parts = [a, b, c, d];
        for (i, x) in parts.iter().enumerate() {
            if x.is_empty() {
                return Err(Error::EmptyCoordinate);
            }
            for y in &parts[i + 1..] {
                if !x.is_disjoint(*y) {
                    return Err(Error::Overlap(format!("{x:?} and {y:?}")));
                }
            }
        }
        Ok(Self::cond_mutual_info(a, b, c)?
            + Self::cond_mutual_info(a, b, d)?
            + Self::mutual_info(c, d)?
            - Self::mutual_info(a, b)?)
    }

    /// Adds `c·H(v)`; `H(∅)` is identically zero and is dropped.
    pub fn add_term(&mut self, v: VarSet, c: Rational) {
        if v.is_empty() || c.is_zero() {
            return;
        }
        match self.terms.entry(v) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_constant(&mut self, c: &Rational) {
        self.constant += c;
    }

    pub fn terms(&self) -> &BTreeMap<VarSet, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, v: VarSet) -> Rational {
        self.terms.get(&v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn homogeneous(&self) -> LinearForm {
        LinearForm {
            terms: self.terms.clone(),
            constant: Rational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant.is_zero()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.constant.is_zero()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Union of all variables mentioned by the terms (epigraph excluded).
    pub fn support(&self) -> VarSet {
        self.terms
            .keys()
            .filter(|v| !v.is_epigraph())
            .fold(VarSet::EMPTY, |s, v| s | *v)
    }

    pub fn scale(&self, k: &Rational) -> LinearForm {
        if k.is_zero() {
            return LinearForm::zero();
        }
        LinearForm {
            terms: self.terms.iter().map(|(v, c)| (*v, c * k)).collect(),
            constant: &self.constant * k,
        }
    }

    /// `self += k·other`.
    pub fn add_scaled(&mut self, other: &LinearForm, k: &Rational) {
        if k.is_zero() {
            return;
        }
        for (v, c) in &other.terms {
            self.add_term(*v, c * k);
        }
        self.constant += &other.constant * k;
    }

    /// Rewrites every coordinate through `f`, merging coefficients that land
    /// on the same coordinate.
    pub fn map_coords(&self, mut f: impl FnMut(VarSet) -> VarSet) -> LinearForm {
        let mut out = LinearForm::constant_form(self.constant.clone());
        for (v, c) in &self.terms {
            out.add_term(f(*v), c.clone());
        }
        out
    }

    pub fn eval(&self, mut point: impl FnMut(VarSet) -> Rational) -> Rational {
        self.terms
            .iter()
            .fold(self.constant.clone(), |acc, (v, c)| acc + c * point(*v))
    }

    pub fn eval_f64(&self, mut point: impl FnMut(VarSet) -> f64) -> f64 {
        self.terms.iter().fold(crate::rational::to_f64(&self.constant), |acc, (v, c)| {
            acc + crate::rational::to_f64(c) * point(*v)
        })
    }

    /// Representation with the sign fixed so that the first coefficient is
    /// positive; `f = 0` and `-f = 0` share it.
    pub fn sign_normalized(&self) -> (LinearForm, bool) {
        let first_neg = match self.terms.values().next() {
            Some(c) => c.is_negative(),
            None => self.constant.is_negative(),
        };
        if first_neg {
            (-self.clone(), true)
        } else {
            (self.clone(), false)
        }
    }

    pub fn render(&self, names: &[String]) -> String {
        super::text::render_form(self, names)
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*H{v:?}")?;
        }
        if !self.constant.is_zero() || first {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}", self.constant)?;
        }
        Ok(())
    }
}

impl AddAssign<&LinearForm> for LinearForm {
    fn add_assign(&mut self, rhs: &LinearForm) {
        for (v, c) in &rhs.terms {
            self.add_term(*v, c.clone());
        }
        self.constant += &rhs.constant;
    }
}

impl SubAssign<&LinearForm> for LinearForm {
    fn sub_assign(&mut self, rhs: &LinearForm) {
        for (v, c) in &rhs.terms {
            self.add_term(*v, -c.clone());
        }
        self.constant -= &rhs.constant;
    }
}

impl Add for LinearForm {
    type Output = LinearForm;
    fn add(mut self, rhs: LinearForm) -> LinearForm {
        self += &rhs;
        self
    }
}

impl Sub for LinearForm {
    type Output = LinearForm;
    fn sub(mut self, rhs: LinearForm) -> LinearForm {
        self -= &rhs;
        self
    }
}

impl Neg for LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        LinearForm {
            terms: self.terms.into_iter().map(|(v, c)| (v, -c)).collect(),
            constant: -self.constant,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn vs(ix: &[usize]) -> VarSet {
        VarSet::from_indices(ix.iter().copied())
    }

    #[test]
    fn coord_and_cancellation() {
        let a = LinearForm::coord(vs(&[0])).unwrap();
        assert_eq!(a.coefficient(vs(&[0])), int(1));
        let sum = LinearForm::coord(vs(&[0, 1])).unwrap() + LinearForm::coord(vs(&[2])).unwrap();
        assert_eq!(sum.len(), 2);
        let z = a.clone() - a;
        assert!(z.is_zero());
        assert!(z.terms().is_empty());
        assert!(matches!(LinearForm::coord(VarSet::EMPTY), Err(Error::EmptyCoordinate)));
    }

    #[test]
    fn conditional_entropy() {
        let f = LinearForm::cond_entropy(vs(&[0]), vs(&[1])).unwrap();
        assert_eq!(f.coefficient(vs(&[0, 1])), int(1));
        assert_eq!(f.coefficient(vs(&[1])), int(-1));
        assert_eq!(f.len(), 2);
        assert_eq!(
            LinearForm::cond_entropy(vs(&[0]), VarSet::EMPTY).unwrap(),
            LinearForm::coord(vs(&[0])).unwrap()
        );
        assert!(LinearForm::cond_entropy(vs(&[0]), vs(&[0])).unwrap().is_zero());
    }

    #[test]
    fn mutual_information() {
        // I(1;2|3) = H(13) + H(23) - H(123) - H(3)
        let f = LinearForm::cond_mutual_info(vs(&[0]), vs(&[1]), vs(&[2])).unwrap();
        let expect: Vec<(VarSet, Rational)> = vec![
            (vs(&[2]), int(-1)),
            (vs(&[0, 2]), int(1)),
            (vs(&[1, 2]), int(1)),
            (vs(&[0, 1, 2]), int(-1)),
        ];
        let got: Vec<_> = f.terms().iter().map(|(v, c)| (*v, c.clone())).collect();
        let mut expect_sorted = expect;
        expect_sorted.sort();
        assert_eq!(got, expect_sorted);

        let g = LinearForm::mutual_info(vs(&[0]), vs(&[1])).unwrap();
        assert_eq!(g.coefficient(vs(&[0])), int(1));
        assert_eq!(g.coefficient(vs(&[1])), int(1));
        assert_eq!(g.coefficient(vs(&[0, 1])), int(-1));

        let self_info = LinearForm::mutual_info(vs(&[0]), vs(&[0])).unwrap();
        assert_eq!(self_info, LinearForm::coord(vs(&[0])).unwrap());
    }

    #[test]
    fn ingleton_rejects_overlap() {
        assert!(matches!(
            LinearForm::ingleton(vs(&[0]), vs(&[0, 1]), vs(&[2]), vs(&[3])),
            Err(Error::Overlap(_))
        ));
    }
}
