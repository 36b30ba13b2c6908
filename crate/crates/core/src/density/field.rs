use std::io::{Read, Write};

use super::grid::Grid;
use super::DensityError;

/// Grid samples of a density coefficient: the field `f` stands for the density
/// `f |dx_1 … dx_d|` in the grid chart.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityField {
    grid: Grid,
    values: Vec<f64>,
}

impl DensityField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self, DensityError> {
        if values.len() != grid.len() {
            return Err(DensityError::Length { expected: grid.len(), found: values.len() });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = grid.nodes().map(|x| f(&x)).collect();
        Self { grid: grid.clone(), values }
    }

    pub fn constant(grid: &Grid, c: f64) -> Self {
        Self { grid: grid.clone(), values: vec![c; grid.len()] }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self, DensityError> {
        if self.grid != other.grid {
            return Err(DensityError::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { grid: self.grid.clone(), values })
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Quadrature of the density: axes are reduced one at a time from the last to
    /// the first, each reduction a compensated sum in increasing node order.
    pub fn integrate(&self) -> f64 {
        let axes: Vec<usize> = (0..self.grid.dim()).collect();
        self.reduce(&axes).values[0]
    }

    /// Integration along the listed fiber axes; the result lives on the grid of
    /// the remaining axes. Projecting out trailing axes and then integrating
    /// performs exactly the same floating-point operations as [`integrate`](Self::integrate).
    pub fn fiber_integrate(&self, fiber_axes: &[usize]) -> Result<Self, DensityError> {
        let mut axes = fiber_axes.to_vec();
        axes.sort_unstable();
        axes.dedup();
        if axes.len() != fiber_axes.len() || axes.iter().any(|&a| a >= self.grid.dim()) {
            return Err(DensityError::BadProjection(fiber_axes.to_vec()));
        }
        Ok(self.reduce(&axes))
    }

    fn reduce(&self, sorted_axes: &[usize]) -> Self {
        let mut grid = self.grid.clone();
        let mut values = self.values.clone();
        for &axis in sorted_axes.iter().rev() {
            let shape = grid.shape();
            let n = shape[axis];
            let inner: usize = shape[axis + 1..].iter().product();
            let outer: usize = shape[..axis].iter().product();
            let weights = grid.axis(axis).weights();
            let mut out = vec![0.0; outer * inner];
            for o in 0..outer {
                for j in 0..inner {
                    out[o * inner + j] =
                        compensated_sum(weights.iter().enumerate().map(|(i, w)| w * values[(o * n + i) * inner + j]));
                }
            }
            values = out;
            grid = grid.without_axes(&[axis]);
        }
        Self { grid, values }
    }

    /// CSV with header `axis0,…,axisK,value`, one row per node.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), DensityError> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<String> = (0..self.grid.dim()).map(|a| format!("axis{a}")).collect();
        header.push("value".into());
        w.write_record(&header)?;
        for (i, v) in self.values.iter().enumerate() {
            let mut row: Vec<String> =
                self.grid.node(i).iter().map(|x| format!("{x:.16e}")).collect();
            row.push(format!("{v:.16e}"));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads values written by [`write_csv`](Self::write_csv) for a known grid;
    /// node coordinates in the file must match the grid.
    pub fn read_csv<R: Read>(grid: &Grid, reader: R) -> Result<Self, DensityError> {
        let mut r = csv::Reader::from_reader(reader);
        let header = r.headers()?.clone();
        if header.len() != grid.dim() + 1 || header.get(grid.dim()) != Some("value") {
            return Err(DensityError::CsvLayout(format!("unexpected header {header:?}")));
        }
        let mut values = Vec::with_capacity(grid.len());
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let parsed: Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
            let parsed = parsed.map_err(|e| DensityError::CsvLayout(format!("row {i}: {e}")))?;
            if i >= grid.len() {
                return Err(DensityError::Length { expected: grid.len(), found: i + 1 });
            }
            let node = grid.node(i);
            let scale = node.iter().fold(1.0f64, |m, x| m.max(x.abs()));
            if node.iter().zip(&parsed).any(|(a, b)| (a - b).abs() > 1e-12 * scale) {
                return Err(DensityError::CsvLayout(format!("row {i}: coordinates do not match grid")));
            }
            values.push(parsed[grid.dim()]);
        }
        Self::new(grid.clone(), values)
    }
}

/// Neumaier-compensated summation.
fn compensated_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for x in terms {
        let t = sum + x;
        carry += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        sum = t;
    }
    sum + carry
}
