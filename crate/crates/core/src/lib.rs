//! Exact apolarity toolkit for homogeneous forms.
//!
//! From a form `f` this crate computes the graded pieces of its apolar
//! algebra, mixed Hessians and their ranks, Lefschetz checks, Waring and
//! border rank bounds, cactus rank lower bounds and replayable certificates
//! that a form is wild. All arithmetic is exact over the rationals.

pub mod apolar;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod families;
pub mod hessian;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod powersum;
mod ser;
pub mod symbolic;
pub mod univariate;

pub use error::{Error, Result};
pub use poly::{apply, bigrade, power, Bidegree, DiffOp, Form, LinearForm, Monomial, Partition, Poly, Vars};
