use super::SmoothError;
use crate::density::{Axis, DensityField, Grid};

/// A grid foliated by the lines parallel to one coordinate axis. The leafwise
/// differential `d_A` is the derivative along that axis.
#[derive(Debug, Clone, PartialEq)]
pub struct FoliatedGrid {
    grid: Grid,
    leaf_axis: usize,
}

/// Samples of a 1-form: one component per grid axis.
#[derive(Debug, Clone, PartialEq)]
pub struct OneForm {
    pub components: Vec<DensityField>,
}

impl OneForm {
    /// `dx_axis`.
    pub fn coordinate(grid: &Grid, axis: usize) -> Self {
        let components =
            (0..grid.dim()).map(|a| DensityField::constant(grid, if a == axis { 1.0 } else { 0.0 })).collect();
        Self { components }
    }
}

impl FoliatedGrid {
    pub fn new(grid: Grid, leaf_axis: usize) -> Result<Self, SmoothError> {
        if leaf_axis >= grid.dim() {
            return Err(SmoothError::Dimension { expected: leaf_axis + 1, found: grid.dim() });
        }
        if !grid.axis(leaf_axis).periodic && grid.axis(leaf_axis).n < 3 {
            return Err(SmoothError::Density(crate::density::DensityError::BadAxis(*grid.axis(leaf_axis))));
        }
        Ok(Self { grid, leaf_axis })
    }

    /// `[0,1]²` with `n` nodes per axis, foliated by horizontal lines `y = const`
    /// (leaf axis 0 is `x`).
    pub fn horizontal_unit_square(n: usize) -> Result<Self, SmoothError> {
        Self::new(Grid::new(vec![Axis::bounded(0.0, 1.0, n), Axis::bounded(0.0, 1.0, n)])?, 0)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn leaf_axis(&self) -> usize {
        self.leaf_axis
    }

    /// Leafwise derivative `d_A f` by second-order differences: central in the
    /// interior (and around periodic axes), one-sided at the ends of bounded leaves.
    pub fn leaf_derivative(&self, f: &DensityField) -> Result<DensityField, SmoothError> {
        derivative_along(f, self.leaf_axis)
    }

    /// `|μ(d_A ω)|` where `μ(f) = ∫_M f m` for the transverse density `m`.
    pub fn stokes_check(&self, m: &DensityField, omega: &DensityField) -> Result<f64, SmoothError> {
        let d = self.leaf_derivative(omega)?;
        Ok(m.zip_with(&d, |a, b| a * b)?.integrate().abs())
    }

    /// Largest leafwise derivative of `m`, relative to `max |m|`; vanishes for
    /// transverse densities invariant along the leaves.
    pub fn leafwise_variation(&self, m: &DensityField) -> Result<f64, SmoothError> {
        let scale = m.max_abs();
        let d = self.leaf_derivative(m)?.max_abs();
        Ok(if scale > 0.0 { d / scale } else { d })
    }

    /// The Ruelle–Sullivan current `⟨#_* μ, α⟩ = ∫_M α(X) m`, `X` the unit
    /// leaf direction.
    pub fn ruelle_sullivan(&self, m: &DensityField, alpha: &OneForm) -> Result<f64, SmoothError> {
        let component = alpha.components.get(self.leaf_axis).ok_or(SmoothError::Dimension {
            expected: self.grid.dim(),
            found: alpha.components.len(),
        })?;
        Ok(m.zip_with(component, |a, b| a * b)?.integrate())
    }

    /// `dβ` with every component discretized like [`leaf_derivative`](Self::leaf_derivative).
    pub fn exterior_derivative(&self, beta: &DensityField) -> Result<OneForm, SmoothError> {
        let components = (0..self.grid.dim()).map(|a| derivative_along(beta, a)).collect::<Result<_, _>>()?;
        Ok(OneForm { components })
    }
}

/// Second-order finite-difference derivative of grid samples along one axis.
pub fn derivative_along(f: &DensityField, axis: usize) -> Result<DensityField, SmoothError> {
    let grid = f.grid();
    if axis >= grid.dim() {
        return Err(SmoothError::Dimension { expected: axis + 1, found: grid.dim() });
    }
    let ax = grid.axis(axis);
    let shape = grid.shape();
    let n = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let h = ax.spacing();
    if !ax.periodic && n < 3 {
        return Err(SmoothError::Density(crate::density::DensityError::BadAxis(*ax)));
    }
    let v = f.values();
    let mut out = vec![0.0; v.len()];
    for o in 0..outer {
        for j in 0..inner {
            let at = |i: usize| v[(o * n + i) * inner + j];
            for i in 0..n {
                let d = if ax.periodic {
                    (at((i + 1) % n) - at((i + n - 1) % n)) / (2.0 * h)
                } else if i == 0 {
                    (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h)
                } else if i == n - 1 {
                    (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h)
                } else {
                    (at(i + 1) - at(i - 1)) / (2.0 * h)
                };
                out[(o * n + i) * inner + j] = d;
            }
        }
    }
    Ok(DensityField::new(grid.clone(), out)?)
}
