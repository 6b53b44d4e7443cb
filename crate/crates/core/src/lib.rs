//! Exact computational calculus for compatible almost CR structures.
//!
//! Layers, bottom up: [`exactnum`] (scalars, jets), [`liealg`] (graded
//! su(n+1,1)), [`homology`] (Kostant codifferential), [`pseudoherm`]
//! (Tanaka-Webster calculus on a chart), [`crops`] (CR Killing operator),
//! [`weyltractor`] (normal Weyl form, tractor connections, BGG operators),
//! [`spec`] (manifold-spec files and verification suites).

pub mod error;
pub mod exactnum;
pub mod liealg;
pub mod homology;
pub mod check;
pub mod pseudoherm;
pub mod crops;
pub mod weyltractor;
pub mod samples;
pub mod spec;

pub use error::{Error, Result};
