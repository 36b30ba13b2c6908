//! Default tolerances shared by the quadrature engines.

/// Identities that hold up to quadrature error on the default grids.
pub const QUADRATURE: f64 = 1e-6;

/// Identities where every quantity is evaluated analytically.
pub const ANALYTIC: f64 = 1e-9;

/// Identities involving a centrally discretized derivative at `h = 1/256`.
pub const DISCRETE_DERIVATIVE: f64 = 1e-4;

/// Relative tolerance on grid weight sums.
pub const GRID_WEIGHTS: f64 = 1e-12;
