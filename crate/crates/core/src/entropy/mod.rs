//! Entropy-profile algebra: variable sets, exact linear forms over profile
//! coordinates and the standard information quantities.

mod form;
pub mod text;
mod varset;

pub use form::LinearForm;
pub use text::{parse_form, render_coord};
pub use varset::{VarSet, VarSetNames, MAX_VARS};
