//! Lower bounds on linear functionals of entropy profiles.
//!
//! Problems combine the elemental Shannon inequalities, Copy Lemma
//! extensions and symmetry reductions into a linear program, which is
//! solved exactly over the rationals; the dual solution yields a
//! certificate that can be checked independently of the solver.

pub mod certificate;
pub mod cli;
pub mod constraint;
pub mod entropy;
pub mod error;
pub mod extension;
pub mod lp;
pub mod oracle;
pub mod problem;
pub mod rational;
pub mod shannon;
pub mod symmetry;
pub mod text;

pub use constraint::{Constraint, Relation};
pub use entropy::{LinearForm, VarSet};
pub use error::{Error, Result};
pub use rational::Rational;
