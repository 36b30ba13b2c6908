//! Exact engine on finite groupoids.
//!
//! All density bundles of a finite groupoid are canonically trivial, so arrow
//! and object weights are plain rational functions. Every computation here is
//! exact.

pub mod calculus;
pub mod constructions;
pub mod groupoid;
pub mod homology;
pub mod linalg;

use thiserror::Error;

pub use calculus::{
    average_function, coinvariants, convolve, is_orbit_constant, is_trace, orbits, s_shriek,
    t_shriek, transverse_measure_cone, ArrowWeights, Coinvariants, HaarWeight, ObjectWeights,
    TraceCheck, TransverseMeasureCone,
};
pub use constructions::FiniteGroup;
pub use groupoid::{FiniteGroupoid, GroupoidDescriptor, Violation};
pub use homology::{
    boundary_matrix, boundary_squares_vanish, homology, nerve, restrict_full_subgroupoid, HomologyReport, NerveLevel,
};
pub use linalg::{Rational, RationalMatrix};

#[derive(Debug, Error)]
pub enum FiniteError {
    #[error("invalid groupoid: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("malformed groupoid descriptor: {0}")]
    Json(#[from] serde_json::Error),
    #[error("expected {expected} entries, found {found}")]
    Length { expected: usize, found: usize },
    #[error("Haar weight is negative at object {0}")]
    NegativeHaarWeight(usize),
    #[error("s-fiber over object {0} has zero mass")]
    EmptyFiber(usize),
    #[error("boundary matrices start in degree 1, got {0}")]
    Degree(usize),
    #[error("subset misses the orbit of object {0}")]
    OrbitMissed(usize),
    #[error("object {0} is out of range or repeated in the subset")]
    BadSubset(usize),
}
