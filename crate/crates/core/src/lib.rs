//! Exact invariants of convolutional codes over small finite fields.
//!
//! The crate computes the free distance of a convolutional code from a
//! canonical polynomial generator matrix by bounding the stage at which the
//! row-distance sequence stabilizes, certifies MDS codes against the
//! generalized Singleton bound, and builds one-dimensional convolutional
//! Goppa codes on the projective line together with a certified procedure
//! for extending their length.

pub mod cgc;
pub mod code;
pub mod distance;
mod error;
pub mod extend;
pub mod gf;
pub mod polymat;
pub mod text;

pub use code::{ClassificationParams, ConvCode};
pub use distance::{DistanceConfig, DistanceProfile, Method};
pub use error::{Error, Result};
pub use gf::{FieldElement, FieldEmbedding, FiniteField, Gf};
pub use polymat::{FqPoly, PolyMatrix, ScalarMatrix};
