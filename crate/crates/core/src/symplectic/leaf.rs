use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::SymplecticError;
use crate::density::{Axis, DensityField, Grid, MeasureFunctional};
use crate::smooth::foliation::derivative_along;

/// The base `B` of a leaf family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LeafBase {
    /// An interval `[lo, hi]` with `n` nodes.
    Interval { lo: f64, hi: f64, n: usize },
    /// A single leaf at parameter `at`, carrying affine mass `mass`.
    Point { at: f64, mass: f64 },
}

/// Leaf areas `A(t)`: polynomial coefficients `A(t) = Σ c_k t^k` (analytic
/// derivative) or samples at the base nodes (derivative by second-order differences).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AreaProfile {
    Polynomial(Vec<f64>),
    Samples(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeafKind {
    Sphere,
    Torus,
}

fn default_leaf_nodes() -> [usize; 2] {
    [129, 8]
}

/// A regular family of compact symplectic leaves `O_t`, `t ∈ B`, each a copy
/// of the leaf template with Liouville area `A(t)`, and `ι` components of the
/// isotropy groups.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafFamilyModel {
    #[serde(rename = "B")]
    pub base: LeafBase,
    pub area: AreaProfile,
    pub iota: u32,
    pub leaf: LeafKind,
    #[serde(default = "default_leaf_nodes")]
    pub leaf_nodes: [usize; 2],
    /// Lattice density `ℓ` at the base nodes; defaults to `|A′|`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<Vec<f64>>,
}

impl LeafFamilyModel {
    pub fn new(base: LeafBase, area: AreaProfile, iota: u32, leaf: LeafKind) -> Result<Self, SymplecticError> {
        let model = Self { base, area, iota, leaf, leaf_nodes: default_leaf_nodes(), lattice: None };
        model.validate()?;
        Ok(model)
    }

    pub fn from_json(text: &str) -> Result<Self, SymplecticError> {
        let model: Self = serde_json::from_str(text)?;
        model.validate()?;
        Ok(model)
    }

    pub fn with_leaf_nodes(mut self, nodes: [usize; 2]) -> Result<Self, SymplecticError> {
        self.leaf_nodes = nodes;
        self.validate()?;
        Ok(self)
    }

    pub fn with_iota(mut self, iota: u32) -> Result<Self, SymplecticError> {
        self.iota = iota;
        self.validate()?;
        Ok(self)
    }

    pub fn with_lattice(mut self, lattice: Vec<f64>) -> Result<Self, SymplecticError> {
        self.lattice = Some(lattice);
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<(), SymplecticError> {
        if self.iota == 0 {
            return Err(SymplecticError::Iota);
        }
        let n = self.base_grid()?.len();
        if let AreaProfile::Samples(s) = &self.area {
            if s.len() != n {
                return Err(SymplecticError::Length { expected: n, found: s.len() });
            }
        }
        if let Some(l) = &self.lattice {
            if l.len() != n {
                return Err(SymplecticError::Length { expected: n, found: l.len() });
            }
        }
        if let LeafBase::Point { mass, .. } = self.base {
            if !(mass > 0.0) {
                return Err(SymplecticError::DegenerateAffine);
            }
        }
        self.leaf_template()?;
        if self.areas()?.iter().any(|&a| !(a > 0.0)) {
            return Err(SymplecticError::NonPositiveArea);
        }
        Ok(())
    }

    pub fn base_grid(&self) -> Result<Grid, SymplecticError> {
        Ok(match self.base {
            LeafBase::Interval { lo, hi, n } => Grid::new(vec![Axis::bounded(lo, hi, n)])?,
            LeafBase::Point { .. } => Grid::point(),
        })
    }

    /// Parameter value of each base node.
    pub fn parameters(&self) -> Result<Vec<f64>, SymplecticError> {
        Ok(match self.base {
            LeafBase::Interval { .. } => self.base_grid()?.axis(0).nodes(),
            LeafBase::Point { at, .. } => vec![at],
        })
    }

    /// The leaf template: Liouville coefficient normalized to unit discrete area.
    pub fn leaf_template(&self) -> Result<DensityField, SymplecticError> {
        let [a, b] = self.leaf_nodes;
        let raw = match self.leaf {
            LeafKind::Sphere => {
                let grid = Grid::new(vec![Axis::bounded(0.0, PI, a), Axis::circle(b)])?;
                DensityField::from_fn(&grid, |x| x[0].sin().max(0.0))
            }
            LeafKind::Torus => {
                let grid = Grid::new(vec![Axis::periodic(0.0, 1.0, a), Axis::periodic(0.0, 1.0, b)])?;
                DensityField::constant(&grid, 1.0)
            }
        };
        let total = raw.integrate();
        Ok(raw.map(|v| v / total))
    }

    /// `A(t)` at the base nodes.
    pub fn areas(&self) -> Result<Vec<f64>, SymplecticError> {
        let ts = self.parameters()?;
        Ok(match &self.area {
            AreaProfile::Polynomial(c) => ts.iter().map(|&t| polynomial(c, t)).collect(),
            AreaProfile::Samples(s) => s.clone(),
        })
    }

    /// `A′(t)` at the base nodes.
    pub fn area_derivatives(&self) -> Result<Vec<f64>, SymplecticError> {
        let ts = self.parameters()?;
        match &self.area {
            AreaProfile::Polynomial(c) => {
                let d: Vec<f64> = c.iter().enumerate().skip(1).map(|(k, v)| k as f64 * v).collect();
                Ok(ts.iter().map(|&t| polynomial(&d, t)).collect())
            }
            AreaProfile::Samples(s) => match self.base {
                LeafBase::Interval { .. } => {
                    let field = DensityField::new(self.base_grid()?, s.clone())?;
                    Ok(derivative_along(&field, 0)?.into_values())
                }
                LeafBase::Point { .. } => Ok(vec![0.0]),
            },
        }
    }

    /// `ℓ` at the base nodes: the explicit lattice, else `|A′|`; for a point
    /// base, the point mass.
    pub fn lattice_density(&self) -> Result<Vec<f64>, SymplecticError> {
        if let Some(l) = &self.lattice {
            return Ok(l.clone());
        }
        Ok(match self.base {
            LeafBase::Point { mass, .. } => vec![mass],
            LeafBase::Interval { .. } => self.area_derivatives()?.into_iter().map(f64::abs).collect(),
        })
    }

    /// Grid of `M = B × leaf`, base axis first.
    pub fn total_grid(&self) -> Result<Grid, SymplecticError> {
        let mut axes = self.base_grid()?.axes().to_vec();
        axes.extend_from_slice(self.leaf_template()?.grid().axes());
        Ok(Grid::new(axes)?)
    }

    /// `μ_M = ι ℓ(t) dt ⊗ Liouville(O_t)`, the transverse density of the
    /// canonical σ, as a density on the total grid.
    pub fn mu_m(&self) -> Result<DensityField, SymplecticError> {
        let iota = self.iota as f64;
        let (ell, area, template) = (self.lattice_density()?, self.areas()?, self.leaf_template()?);
        let values = (0..ell.len())
            .flat_map(|k| {
                let scale = iota * ell[k] * area[k];
                template.values().iter().map(move |v| scale * v).collect::<Vec<_>>()
            })
            .collect();
        Ok(DensityField::new(self.total_grid()?, values)?)
    }
}

fn polynomial(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * t + v)
}

/// `μ_aff(h) = ∫_B h ℓ dt`. Fails if `ℓ` vanishes on a set of positive
/// measure (two adjacent vanishing nodes) or identically.
pub fn affine_measure(model: &LeafFamilyModel) -> Result<MeasureFunctional, SymplecticError> {
    let ell = model.lattice_density()?;
    let scale = ell.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let threshold = 1e-12 * scale;
    let vanishing: Vec<bool> = ell.iter().map(|v| v.abs() <= threshold).collect();
    if scale == 0.0 || vanishing.windows(2).any(|w| w[0] && w[1]) {
        return Err(SymplecticError::DegenerateAffine);
    }
    if ell.iter().any(|&v| v < 0.0) {
        return Err(SymplecticError::DegenerateAffine);
    }
    let grid = model.base_grid()?;
    let density = DensityField::new(grid, ell)?;
    Ok(MeasureFunctional::from_density(&density))
}

/// Two sides of an identity with their relative difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
}

impl IdentityReport {
    fn new(lhs: f64, rhs: f64) -> Self {
        let rel_err = if lhs != 0.0 { (lhs - rhs).abs() / lhs.abs() } else { (lhs - rhs).abs() };
        Self { lhs, rhs, rel_err }
    }
}

/// `∫_{O_t} f dμ_{O_t}` for every base node: leaf quadrature of `f(t, ·)`
/// against the Liouville density `A(t) · template`.
fn leaf_integrals(model: &LeafFamilyModel, f: &dyn Fn(&[f64]) -> f64) -> Result<Vec<f64>, SymplecticError> {
    let (ts, areas, template) = (model.parameters()?, model.areas()?, model.leaf_template()?);
    let point_base = matches!(model.base, LeafBase::Point { .. });
    Ok(ts
        .iter()
        .zip(&areas)
        .map(|(&t, &a)| {
            DensityField::from_fn(template.grid(), |y| {
                let mut x = if point_base { Vec::new() } else { vec![t] };
                x.extend_from_slice(y);
                f(&x)
            })
            .zip_with(&template, |v, w| a * v * w)
            .expect("template grid")
            .integrate()
        })
        .collect())
}

/// `∫_M f dμ_M` against `∫_B ι (∫_{O_b} f dμ_{O_b}) dμ_aff(b)`. Points of `M`
/// are `(t, leaf coordinates)` (leaf coordinates only for a point base).
pub fn dh_weyl_check(
    model: &LeafFamilyModel,
    mu_m: &DensityField,
    f: &dyn Fn(&[f64]) -> f64,
) -> Result<IdentityReport, SymplecticError> {
    if mu_m.grid() != &model.total_grid()? {
        return Err(SymplecticError::Density(crate::density::DensityError::GridMismatch));
    }
    let lhs = DensityField::from_fn(mu_m.grid(), f).zip_with(mu_m, |a, b| a * b)?.integrate();
    let inner: Vec<f64> = leaf_integrals(model, f)?.into_iter().map(|v| model.iota as f64 * v).collect();
    let rhs = affine_measure(model)?.eval_samples(&inner);
    Ok(IdentityReport::new(lhs, rhs))
}

/// `μ_aff(1)` against `∫_M (ι Vol(O_x))⁻¹ dμ_M`.
pub fn affine_volume(model: &LeafFamilyModel, mu_m: &DensityField) -> Result<IdentityReport, SymplecticError> {
    let direct = affine_measure(model)?.total_mass();
    let grid = model.total_grid()?;
    if mu_m.grid() != &grid {
        return Err(SymplecticError::Density(crate::density::DensityError::GridMismatch));
    }
    let areas = model.areas()?;
    let leaf_len = model.leaf_template()?.grid().len();
    let iota = model.iota as f64;
    let values = mu_m.values().iter().enumerate().map(|(i, m)| m / (iota * areas[i / leaf_len])).collect();
    let via_m = DensityField::new(grid, values)?.integrate();
    Ok(IdentityReport::new(direct, via_m))
}
