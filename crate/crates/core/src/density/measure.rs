use super::field::DensityField;
use super::grid::Grid;
use super::DensityError;

/// A positive linear functional on functions over a grid, stored as point
/// masses at the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureFunctional {
    grid: Grid,
    masses: Vec<f64>,
}

impl MeasureFunctional {
    pub fn new(grid: Grid, masses: Vec<f64>) -> Result<Self, DensityError> {
        if masses.len() != grid.len() {
            return Err(DensityError::Length { expected: grid.len(), found: masses.len() });
        }
        Ok(Self { grid, masses })
    }

    /// The measure `f ↦ ∫ f ρ` by quadrature.
    pub fn from_density(rho: &DensityField) -> Self {
        let grid = rho.grid().clone();
        let masses = rho.values().iter().enumerate().map(|(i, v)| grid.weight(i) * v).collect();
        Self { grid, masses }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn eval(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        self.masses.iter().enumerate().map(|(i, m)| m * f(&self.grid.node(i))).sum()
    }

    pub fn eval_samples(&self, values: &[f64]) -> f64 {
        self.masses.iter().zip(values).map(|(m, v)| m * v).sum()
    }

    pub fn is_positive(&self) -> bool {
        self.masses.iter().all(|&m| m >= 0.0)
    }

    /// `|μ(a f + b g) − a μ(f) − b μ(g)|` on node samples.
    pub fn linearity_defect(&self, f: &[f64], g: &[f64], a: f64, b: f64) -> f64 {
        let combo: Vec<f64> = f.iter().zip(g).map(|(x, y)| a * x + b * y).collect();
        (self.eval_samples(&combo) - a * self.eval_samples(f) - b * self.eval_samples(g)).abs()
    }

    /// `(π_! μ)(f) = μ(f ∘ π)`.
    pub fn pushforward(&self, map: &GridMap) -> Result<Self, DensityError> {
        if map.source != self.grid {
            return Err(DensityError::GridMismatch);
        }
        let mut masses = vec![0.0; map.target.len()];
        for (i, &m) in self.masses.iter().enumerate() {
            masses[map.image[i]] += m;
        }
        Ok(Self { grid: map.target.clone(), masses })
    }
}

/// A map between grids, sending each source node to a target node.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMap {
    source: Grid,
    target: Grid,
    image: Vec<usize>,
}

impl GridMap {
    /// Assigns each source node to the target node nearest to `f(node)`.
    pub fn from_fn(source: &Grid, target: &Grid, f: impl Fn(&[f64]) -> Vec<f64>) -> Self {
        let image = source.nodes().map(|x| target.nearest(&f(&x))).collect();
        Self { source: source.clone(), target: target.clone(), image }
    }

    pub fn identity(grid: &Grid) -> Self {
        Self { source: grid.clone(), target: grid.clone(), image: (0..grid.len()).collect() }
    }

    /// Collapse onto a single point.
    pub fn to_point(grid: &Grid) -> Self {
        Self { source: grid.clone(), target: Grid::point(), image: vec![0; grid.len()] }
    }

    /// Coordinate projection keeping the listed axes.
    pub fn projection(source: &Grid, kept_axes: &[usize]) -> Result<Self, DensityError> {
        if kept_axes.iter().any(|&a| a >= source.dim()) {
            return Err(DensityError::BadProjection(kept_axes.to_vec()));
        }
        let removed: Vec<usize> = (0..source.dim()).filter(|a| !kept_axes.contains(a)).collect();
        let target = source.without_axes(&removed);
        let image = (0..source.len())
            .map(|i| {
                let idx = source.multi_index(i);
                let kept: Vec<usize> = (0..source.dim()).filter(|a| !removed.contains(a)).map(|a| idx[a]).collect();
                target.flat_index(&kept)
            })
            .collect();
        Ok(Self { source: source.clone(), target, image })
    }

    pub fn source(&self) -> &Grid {
        &self.source
    }

    pub fn target(&self) -> &Grid {
        &self.target
    }

    pub fn image(&self, i: usize) -> usize {
        self.image[i]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GridMap) -> Result<Self, DensityError> {
        if self.target != next.source {
            return Err(DensityError::GridMismatch);
        }
        Ok(Self {
            source: self.source.clone(),
            target: next.target.clone(),
            image: self.image.iter().map(|&j| next.image[j]).collect(),
        })
    }
}
