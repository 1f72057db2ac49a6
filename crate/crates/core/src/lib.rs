//! Exact computations on smooth toric varieties given by Delzant polyhedra.
//!
//! The crate goes from a list of facet inequalities to:
//!
//! * vertex data, the Delzant check, compactness and monotonicity
//!   ([`polyhedron`]);
//! * the cone of disc classes, heights, intersecting sums and truncated
//!   monoid-ring arithmetic ([`conemonoid`]);
//! * the nerve complex, simplicial homology, Reisner's Cohen-Macaulay test
//!   and the regular-sequence Hilbert check ([`srtop`]);
//! * classical and monotone quantum cohomology presentations, quantum
//!   Stanley-Reisner relations, B-field deformations, divisor inverses and
//!   finite-cutoff freeness of generalised Jacobian rings ([`presentation`]).
//!
//! All arithmetic is exact.

pub mod cli;
pub mod conemonoid;
pub mod corpus;
pub mod error;
pub mod exactmath;
pub mod polyhedron;
pub mod presentation;
pub mod srtop;

pub use error::{Error, Result};
pub use exactmath::Field;
pub use polyhedron::DelzantPolyhedron;
