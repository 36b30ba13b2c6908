use super::foliation::derivative_along;
use super::SmoothError;
use crate::density::{DensityField, Grid, GridMap};

/// The submersion groupoid `G(π) = P ×_B P` of an axis projection
/// `π: P → B`; it is kept implicit, only `P`, `B` and `π` are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SubmersionGroupoidModel {
    total: Grid,
    fiber_axes: Vec<usize>,
}

impl SubmersionGroupoidModel {
    pub fn new(total: Grid, fiber_axes: Vec<usize>) -> Result<Self, SmoothError> {
        let mut sorted = fiber_axes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != fiber_axes.len() || sorted.iter().any(|&a| a >= total.dim()) {
            return Err(SmoothError::Density(crate::density::DensityError::BadProjection(fiber_axes)));
        }
        Ok(Self { total, fiber_axes: sorted })
    }

    pub fn total(&self) -> &Grid {
        &self.total
    }

    pub fn fiber_axes(&self) -> &[usize] {
        &self.fiber_axes
    }

    pub fn base(&self) -> Grid {
        self.total.without_axes(&self.fiber_axes)
    }

    pub fn projection(&self) -> Result<GridMap, SmoothError> {
        let kept: Vec<usize> = (0..self.total.dim()).filter(|a| !self.fiber_axes.contains(a)).collect();
        Ok(GridMap::projection(&self.total, &kept)?)
    }

    /// Every base node is hit by `π`.
    pub fn is_surjective(&self) -> Result<bool, SmoothError> {
        let map = self.projection()?;
        let mut hit = vec![false; map.target().len()];
        for i in 0..self.total.len() {
            hit[map.image(i)] = true;
        }
        Ok(hit.into_iter().all(|h| h))
    }
}

/// Result of [`exactness_probe`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExactnessReport {
    /// `v` with `d_π v = u`, vanishing at the start of every fiber.
    pub antiderivative: DensityField,
    pub max_fiber_integral: f64,
    /// Largest `|v|` outside the fiberwise support range of `u`.
    pub support_leak: f64,
}

impl ExactnessReport {
    pub fn is_compactly_supported(&self, tolerance: f64) -> bool {
        self.support_leak <= tolerance
    }
}

/// Degree-0 exactness along 1-dimensional fibers: a fiberwise density `u` with
/// vanishing fiber integrals is `d_π v` for the compactly supported cumulative
/// integral `v`. The cumulative trapezoid sum carries the end correction
/// `−h²/12 (u′(y_j) − u′(y_0))`, making `v` fourth-order accurate.
///
/// Fails with [`SmoothError::NonzeroFiberIntegral`] when some fiber integral
/// exceeds `tolerance · max(1, ∫|u|)`.
pub fn exactness_probe(
    model: &SubmersionGroupoidModel,
    u: &DensityField,
    tolerance: f64,
) -> Result<ExactnessReport, SmoothError> {
    if model.fiber_axes.len() != 1 {
        return Err(SmoothError::Dimension { expected: 1, found: model.fiber_axes.len() });
    }
    if u.grid() != &model.total {
        return Err(SmoothError::Density(crate::density::DensityError::GridMismatch));
    }
    let axis = model.fiber_axes[0];
    let fiber_integrals = u.fiber_integrate(&[axis])?;
    let abs_integrals = u.map(f64::abs).fiber_integrate(&[axis])?;
    for (k, (v, a)) in fiber_integrals.values().iter().zip(abs_integrals.values()).enumerate() {
        if v.abs() > tolerance * a.max(1.0) {
            return Err(SmoothError::NonzeroFiberIntegral { fiber: k, value: *v });
        }
    }
    let max_fiber_integral = fiber_integrals.max_abs();

    let grid = &model.total;
    let shape = grid.shape();
    let n = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let h = grid.axis(axis).spacing();
    let du = derivative_along(u, axis)?;
    let (uv, dv) = (u.values(), du.values());
    let threshold = tolerance * u.max_abs();
    let mut v = vec![0.0; uv.len()];
    let mut leak = 0.0f64;
    for o in 0..outer {
        for j in 0..inner {
            let idx = |i: usize| (o * n + i) * inner + j;
            let mut trapezoid = 0.0;
            for i in 1..n {
                trapezoid += 0.5 * h * (uv[idx(i - 1)] + uv[idx(i)]);
                v[idx(i)] = trapezoid - h * h / 12.0 * (dv[idx(i)] - dv[idx(0)]);
            }
            let support: Vec<usize> = (0..n).filter(|&i| uv[idx(i)].abs() > threshold).collect();
            let (lo, hi) = match (support.first(), support.last()) {
                (Some(&lo), Some(&hi)) => (lo, hi),
                _ => (n, n),
            };
            for i in (0..n).filter(|&i| lo == n || i < lo || i > hi) {
                leak = leak.max(v[idx(i)].abs());
            }
        }
    }
    Ok(ExactnessReport { antiderivative: DensityField::new(grid.clone(), v)?, max_fiber_integral, support_leak: leak })
}
