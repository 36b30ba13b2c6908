use std::f64::consts::TAU;

use super::field::DensityField;
use super::grid::{Axis, Grid};
use super::DensityError;

/// The trivial principal circle bundle `S¹ × B → B`; axis 0 of the total grid is
/// the circle `[0, 2π)`, the remaining axes are the base.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleBundle {
    total: Grid,
    base: Grid,
}

/// Rotation angles used to probe invariance: several node multiples plus
/// off-node angles that exercise the interpolation.
const PROBE_FRACTIONS: [f64; 6] = [0.25, 0.5, 0.137, 0.618, 0.9, 0.031];

impl CircleBundle {
    pub fn new(circle_nodes: usize, base: Grid) -> Result<Self, DensityError> {
        let mut axes = vec![Axis::circle(circle_nodes)];
        axes.extend_from_slice(base.axes());
        Ok(Self { total: Grid::new(axes)?, base })
    }

    pub fn total(&self) -> &Grid {
        &self.total
    }

    pub fn base(&self) -> &Grid {
        &self.base
    }

    /// `Haar ⊗ ρ_B`: the invariant density on the total space whose fiber
    /// integral is `ρ_B`.
    pub fn haar_tensor(&self, base_density: &DensityField) -> Result<DensityField, DensityError> {
        if base_density.grid() != &self.base {
            return Err(DensityError::GridMismatch);
        }
        let n = self.total.axis(0).n;
        let values = (0..n).flat_map(|_| base_density.values().iter().map(|v| v / TAU)).collect();
        DensityField::new(self.total.clone(), values)
    }

    /// Largest change of `rho` under the probe rotations, relative to `max |rho|`.
    /// Rotated values are linearly interpolated along the periodic circle axis.
    pub fn invariance_defect(&self, rho: &DensityField) -> Result<f64, DensityError> {
        if rho.grid() != &self.total {
            return Err(DensityError::GridMismatch);
        }
        let n = self.total.axis(0).n;
        let inner = self.base.len();
        let scale = rho.max_abs();
        if scale == 0.0 {
            return Ok(0.0);
        }
        let v = rho.values();
        let mut worst = 0.0f64;
        for frac in PROBE_FRACTIONS {
            let shift = frac * n as f64;
            for i in 0..n {
                let pos = (i as f64 + shift).rem_euclid(n as f64);
                let lo = pos.floor() as usize % n;
                let hi = (lo + 1) % n;
                let t = pos - pos.floor();
                for j in 0..inner {
                    let rotated = (1.0 - t) * v[lo * inner + j] + t * v[hi * inner + j];
                    worst = worst.max((rotated - v[i * inner + j]).abs());
                }
            }
        }
        Ok(worst / scale)
    }

    /// `π_!: D(P)^{S¹} → D(B)`, after checking invariance against `tolerance`.
    pub fn invariant_decompose(&self, rho: &DensityField, tolerance: f64) -> Result<DensityField, DensityError> {
        let defect = self.invariance_defect(rho)?;
        if defect > tolerance {
            return Err(DensityError::NotInvariant { defect, tolerance });
        }
        rho.fiber_integrate(&[0])
    }
}
