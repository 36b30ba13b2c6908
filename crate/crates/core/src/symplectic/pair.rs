use std::f64::consts::PI;

use super::SymplecticError;
use crate::density::{Axis, DensityField, Grid, GridMap, MeasureFunctional};

/// A compact surface `M` on a grid with the coefficient of its area form `ω`;
/// the pair groupoid `M × M̄` (with `Ω = pr₁^*ω − pr₂^*ω`) is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticPairModel {
    omega: DensityField,
}

impl SymplecticPairModel {
    /// The coefficient may vanish on a null set (chart singularities) but must
    /// be nonnegative with positive total.
    pub fn new(omega: DensityField) -> Result<Self, SymplecticError> {
        if omega.grid().dim() > 2 {
            return Err(SymplecticError::Dimension(omega.grid().dim()));
        }
        if !omega.is_nonnegative() || omega.integrate() <= 0.0 {
            return Err(SymplecticError::NonPositiveArea);
        }
        Ok(Self { omega })
    }

    /// Sphere of radius `r` in the spherical chart `(θ, φ) ∈ [0, π] × [0, 2π)`,
    /// `ω = r² sin θ dθ ∧ dφ`; area `4π r²`.
    pub fn round_sphere(radius: f64, n_theta: usize, n_phi: usize) -> Result<Self, SymplecticError> {
        let grid = Grid::new(vec![Axis::bounded(0.0, PI, n_theta), Axis::circle(n_phi)])?;
        // sin θ at the pole nodes is ~1e-16; clamp so the field is exactly nonnegative
        Self::new(DensityField::from_fn(&grid, |x| radius * radius * x[0].sin().max(0.0)))
    }

    /// The flat torus cell `[0,1)²` with `ω = dx ∧ dy`.
    pub fn flat_torus(n: usize) -> Result<Self, SymplecticError> {
        let grid = Grid::new(vec![Axis::periodic(0.0, 1.0, n), Axis::periodic(0.0, 1.0, n)])?;
        Self::new(DensityField::constant(&grid, 1.0))
    }

    /// The same surface with `ω` replaced by `t ω`.
    pub fn scaled(&self, t: f64) -> Result<Self, SymplecticError> {
        Self::new(self.omega.map(|v| t * v))
    }

    pub fn grid(&self) -> &Grid {
        self.omega.grid()
    }

    pub fn area_form(&self) -> &DensityField {
        &self.omega
    }
}

/// `|ω^top| / top!`; on a surface this is `|ω|`.
pub fn liouville_density(model: &SymplecticPairModel) -> DensityField {
    model.omega.map(f64::abs)
}

/// `ρ_DH(x) = ∫_{s⁻¹(x)} |Ω²|/2!`; the `s`-fiber over `x` is `{x} × M`, so this is
/// `Vol(M) · |ω|(x)`, computed nodewise.
pub fn dh_density(model: &SymplecticPairModel) -> DensityField {
    let liouville = liouville_density(model);
    let volume = liouville.integrate();
    liouville.map(|v| volume * v)
}

/// The same density along the second path: `|Ω²|/2! = |ω|(x) |ω|(y)` on the
/// product grid `M × M`, fiber-integrated over the `y` factor.
pub fn dh_density_via_product(model: &SymplecticPairModel) -> Result<DensityField, SymplecticError> {
    let grid = model.grid();
    let d = grid.dim();
    let mut axes = grid.axes().to_vec();
    axes.extend_from_slice(grid.axes());
    let product = Grid::new(axes)?;
    let liouville = liouville_density(model);
    let n = grid.len();
    let l = liouville.values();
    let values: Vec<f64> = (0..n).flat_map(|i| l.iter().map(move |w| l[i] * w)).collect();
    let density = DensityField::new(product, values)?;
    let fiber: Vec<usize> = (d..2 * d).collect();
    Ok(density.fiber_integrate(&fiber)?)
}

/// `μ_DH` on `B = point`: the pushforward of `ρ_DH` along `M → point`.
pub fn dh_measure_on_point(rho_dh: &DensityField) -> Result<MeasureFunctional, SymplecticError> {
    let mu = MeasureFunctional::from_density(rho_dh);
    Ok(mu.pushforward(&GridMap::to_point(rho_dh.grid()))?)
}
