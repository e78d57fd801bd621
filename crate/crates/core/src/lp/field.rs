use std::fmt::Debug;

use num_traits::{One, Signed, Zero};

use crate::rational::{to_f64, Rational};

/// Scalar type of the simplex engine: `f64` with tolerances, or exact
/// rationals where every tolerance is zero.
pub trait Field: Clone + Debug + PartialEq + Send + Sync {
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn to_f64(&self) -> f64;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self -= a * b`
    fn sub_mul(&mut self, a: &Self, b: &Self);

    fn is_zero(&self) -> bool;
    /// `self > tol` (exact: `self > 0`).
    fn gt_tol(&self, tol: f64) -> bool;
    /// `self < -tol` (exact: `self < 0`).
    fn lt_tol(&self, tol: f64) -> bool;
    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl Field for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(q: &Rational) -> Self {
        to_f64(q)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn gt_tol(&self, tol: f64) -> bool {
        *self > tol
    }
    fn lt_tol(&self, tol: f64) -> bool {
        *self < -tol
    }
    fn abs_f64(&self) -> f64 {
        self.abs()
    }
}

impl Field for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn to_f64(&self) -> f64 {
        to_f64(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn gt_tol(&self, _tol: f64) -> bool {
        self.is_positive()
    }
    fn lt_tol(&self, _tol: f64) -> bool {
        self.is_negative()
    }
}
