//! Numerical substrate: grids, product quadrature, density fields, fiber
//! integration, pushforward of measures, Haar measures of model groups, and
//! invariant densities on principal circle bundles.

pub mod bundle;
pub mod field;
pub mod grid;
pub mod group;
pub mod measure;

use thiserror::Error;

pub use bundle::CircleBundle;
pub use field::DensityField;
pub use grid::{Axis, Grid};
pub use group::{GroupElement, GroupModel};
pub use measure::{GridMap, MeasureFunctional};

#[derive(Debug, Error)]
pub enum DensityError {
    #[error("invalid axis {0:?}")]
    BadAxis(Axis),
    #[error("grids of dimension {0} are not supported (maximum 4)")]
    Dimension(usize),
    #[error("expected {expected} values, found {found}")]
    Length { expected: usize, found: usize },
    #[error("grids do not match")]
    GridMismatch,
    #[error("invalid projection axes {0:?}")]
    BadProjection(Vec<usize>),
    #[error("group is not compact; no normalized Haar measure")]
    NotCompact,
    #[error("density is not invariant: defect {defect:.3e} exceeds tolerance {tolerance:.3e}")]
    NotInvariant { defect: f64, tolerance: f64 },
    #[error("malformed grid descriptor: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("csv layout: {0}")]
    CsvLayout(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
