use serde::{Deserialize, Serialize};

use super::DensityError;

/// One coordinate axis: `n` nodes on `[lo, hi]`.
///
/// Bounded axes place nodes at both endpoints and use the trapezoid rule;
/// periodic axes place `n` nodes on `[lo, hi)` and use the rectangle rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub n: usize,
    pub lo: f64,
    pub hi: f64,
    #[serde(default)]
    pub periodic: bool,
}

impl Axis {
    pub fn bounded(lo: f64, hi: f64, n: usize) -> Self {
        Self { n, lo, hi, periodic: false }
    }

    pub fn periodic(lo: f64, hi: f64, n: usize) -> Self {
        Self { n, lo, hi, periodic: true }
    }

    /// `[0, 2π)` with `n` nodes.
    pub fn circle(n: usize) -> Self {
        Self::periodic(0.0, std::f64::consts::TAU, n)
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn spacing(&self) -> f64 {
        if self.periodic {
            self.length() / self.n as f64
        } else {
            self.length() / (self.n - 1) as f64
        }
    }

    pub fn node(&self, i: usize) -> f64 {
        if !self.periodic && i + 1 == self.n {
            return self.hi;
        }
        self.lo + i as f64 * self.spacing()
    }

    pub fn weight(&self, i: usize) -> f64 {
        let h = self.spacing();
        if !self.periodic && (i == 0 || i + 1 == self.n) {
            0.5 * h
        } else {
            h
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.weight(i)).collect()
    }

    /// Index of the node closest to `x`; periodic axes wrap.
    pub fn nearest(&self, x: f64) -> usize {
        let h = self.spacing();
        if self.periodic {
            let t = ((x - self.lo) / h).round().rem_euclid(self.n as f64);
            (t as usize) % self.n
        } else {
            let t = ((x - self.lo) / h).round();
            t.clamp(0.0, (self.n - 1) as f64) as usize
        }
    }

    fn validate(&self) -> Result<(), DensityError> {
        let ok = self.lo.is_finite()
            && self.hi.is_finite()
            && self.hi > self.lo
            && if self.periodic { self.n >= 1 } else { self.n >= 2 };
        if ok {
            Ok(())
        } else {
            Err(DensityError::BadAxis(*self))
        }
    }
}

/// Tensor-product grid; node values are stored with axis 0 most significant.
///
/// A grid with no axes has a single node of weight one (a point).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    axes: Vec<Axis>,
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Result<Self, DensityError> {
        if axes.len() > 4 {
            return Err(DensityError::Dimension(axes.len()));
        }
        for a in &axes {
            a.validate()?;
        }
        Ok(Self { axes })
    }

    pub fn point() -> Self {
        Self { axes: Vec::new() }
    }

    pub fn from_json(text: &str) -> Result<Self, DensityError> {
        #[derive(Deserialize)]
        struct Raw {
            axes: Vec<Axis>,
        }
        let raw: Raw = serde_json::from_str(text)?;
        Self::new(raw.axes)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("grid serializes")
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, a: usize) -> &Axis {
        &self.axes[a]
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.n).collect()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for a in (0..self.dim()).rev() {
            idx[a] = flat % self.axes[a].n;
            flat /= self.axes[a].n;
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.axes).fold(0, |acc, (&i, a)| acc * a.n + i)
    }

    pub fn node(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat).iter().zip(&self.axes).map(|(&i, a)| a.node(i)).collect()
    }

    pub fn nodes(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.len()).map(|i| self.node(i))
    }

    /// Product quadrature weight of a node.
    pub fn weight(&self, flat: usize) -> f64 {
        self.multi_index(flat).iter().zip(&self.axes).map(|(&i, a)| a.weight(i)).product()
    }

    /// Product of axis lengths, the exact value of `Σ weights`.
    pub fn volume(&self) -> f64 {
        self.axes.iter().map(Axis::length).product()
    }

    /// Grid made of the axes not listed in `removed`.
    pub fn without_axes(&self, removed: &[usize]) -> Grid {
        Grid {
            axes: (0..self.dim()).filter(|a| !removed.contains(a)).map(|a| self.axes[a]).collect(),
        }
    }

    /// Flat index of the nearest node to `x`.
    pub fn nearest(&self, x: &[f64]) -> usize {
        let idx: Vec<usize> = self.axes.iter().zip(x).map(|(a, &v)| a.nearest(v)).collect();
        self.flat_index(&idx)
    }
}
