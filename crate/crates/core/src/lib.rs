//! Graded-dimension calculus for Theriault products and Whitehead products of
//! simply connected co-H spaces.
//!
//! Spaces are modelled by their homology dimensions over a field. The
//! splittings of loop spaces, half-smashes and joins into iterated Theriault
//! products are checked as exact identities of truncated Poincaré series, and
//! cross-checked against a brute-force model of loop-space homology as a free
//! associative algebra.

pub mod bracket_oracle;
pub mod decomposer;
pub mod homology_models;
pub mod lie_kernel;
pub mod linalg;
pub mod series;
pub mod telescope_lab;

pub use homology_models::{ProductExpr, SpaceDocument, SpaceModel};
pub use linalg::{Field, Matrix, PrimeField, Rationals};
pub use series::{TruncSeries, DEFAULT_TRUNC_DEGREE};
