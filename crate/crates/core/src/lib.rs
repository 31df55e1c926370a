pub mod braid;
pub mod error;
pub mod kz;
pub mod mzv;
pub mod ncseries;
mod par;
pub mod relations;
pub mod scalars;
pub mod solver;

pub use error::{Error, Result};
pub use ncseries::{Index, NCSeries, Word};
pub use scalars::{BigFloat, QuadExt, Rational, Scalar};
