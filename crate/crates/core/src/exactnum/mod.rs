//! Scalar fields and truncated-jet arithmetic.

pub mod jet;
pub mod linalg;
pub mod scalar;

pub use jet::{invert_matrix, jet_arith, jet_invert, jet_partial, jet_scale, Jet, JetOp};
pub use scalar::{Backend, Cf, Qi, Scalar};
