use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::action::{Action, ActionGroupoidModel};
use crate::density::{GroupElement, Grid};

/// A function on `M`, evaluated at arbitrary points of the chart.
pub type PointFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A function `u(g, x)` on the arrows `(g, x)` of an action groupoid.
pub trait ArrowFunction: Sync {
    fn eval(&self, g: &GroupElement, x: &[f64]) -> f64;
}

impl<F: Fn(&GroupElement, &[f64]) -> f64 + Sync> ArrowFunction for F {
    fn eval(&self, g: &GroupElement, x: &[f64]) -> f64 {
        self(g, x)
    }
}

/// Haar data on an action groupoid: a positive weight `w` on `M` whose right
/// translates `→ρ(g, x) = w(a(g, x)) · dHaar(g)` are the `s`-fiber densities.
#[derive(Clone)]
pub struct HaarData {
    weight: PointFn,
}

impl fmt::Debug for HaarData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("HaarData(..)")
    }
}

impl HaarData {
    /// `w ≡ 1`: each `s`-fiber carries the normalized Haar measure.
    pub fn normalized() -> Self {
        Self::constant(1.0)
    }

    pub fn constant(c: f64) -> Self {
        Self::from_fn(move |_| c)
    }

    pub fn from_fn(w: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self { weight: Arc::new(w) }
    }

    pub fn weight(&self, x: &[f64]) -> f64 {
        (self.weight)(x)
    }
}

/// `σ = ρ^∨ ⊗ τ`: Haar data `ρ` together with a density `τ` on `M`, given by its
/// coefficient in the grid chart.
#[derive(Clone, Debug)]
pub struct TransverseDensityData {
    pub rho: HaarData,
    tau: TauFn,
}

#[derive(Clone)]
struct TauFn(PointFn);

impl fmt::Debug for TauFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("τ(..)")
    }
}

impl TransverseDensityData {
    pub fn new(rho: HaarData, tau: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self { rho, tau: TauFn(Arc::new(tau)) }
    }

    /// Lebesgue measure in the model's chart (`r dr dθ` in polar coordinates)
    /// with normalized Haar data.
    pub fn lebesgue(model: &ActionGroupoidModel) -> Self {
        match model.action {
            Action::RotationPolar { .. } => Self::new(HaarData::normalized(), |x| x[0]),
            _ => Self::new(HaarData::normalized(), |_| 1.0),
        }
    }

    pub fn tau(&self, x: &[f64]) -> f64 {
        (self.tau.0)(x)
    }

    /// The invariant-candidate coefficient `σ₀ = τ / w`.
    pub fn sigma0(&self, x: &[f64]) -> f64 {
        self.tau(x) / self.rho.weight(x)
    }

    /// `μ_σ(f·ρ) = ∫_M f τ` by quadrature on `grid`.
    pub fn integrate(&self, grid: &Grid, f: impl Fn(&[f64]) -> f64) -> f64 {
        crate::density::DensityField::from_fn(grid, |x| f(x) * self.tau(x)).integrate()
    }
}

/// A smooth localized test function on arrows:
/// `u(g, x) = bump(x) · (1 + a · χ(g))`, where the bump is a gaussian centred in
/// the grid (wrapped on periodic axes) and `χ` is a bounded function on the group.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrowBump {
    center: Vec<f64>,
    widths: Vec<f64>,
    periodic: Vec<bool>,
    amplitude: f64,
    phase: [f64; 2],
    finite_coefficients: Vec<f64>,
}

impl ArrowBump {
    /// Draws a bump whose centre lies in the middle 30% of each bounded axis and
    /// whose width is 3–5% of the axis length, so that rotated copies of its
    /// numerical support stay inside the grid.
    pub fn random<R: Rng>(grid: &Grid, rng: &mut R) -> Self {
        let mut center = Vec::new();
        let mut widths = Vec::new();
        let mut periodic = Vec::new();
        for a in grid.axes() {
            let len = a.length();
            center.push(if a.periodic { rng.gen_range(a.lo..a.hi) } else { a.lo + len * rng.gen_range(0.35..0.65) });
            widths.push(len * rng.gen_range(0.03..0.05));
            periodic.push(a.periodic);
        }
        Self {
            center,
            widths,
            periodic,
            amplitude: rng.gen_range(0.2..0.9),
            phase: [rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU)],
            finite_coefficients: (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        }
    }

    /// `count` bumps from a seeded generator.
    pub fn family(grid: &Grid, seed: u64, count: usize) -> Vec<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| Self::random(grid, &mut rng)).collect()
    }

    /// The spatial factor alone.
    pub fn bump(&self, x: &[f64]) -> f64 {
        let mut e = 0.0;
        for k in 0..self.center.len() {
            let d = if self.periodic[k] {
                // smooth periodic distance surrogate: 2 sin(Δ/2)
                2.0 * ((x[k] - self.center[k]) / 2.0).sin()
            } else {
                x[k] - self.center[k]
            };
            e += (d / self.widths[k]).powi(2);
        }
        (-0.5 * e).exp()
    }

    fn character(&self, g: &GroupElement) -> f64 {
        match g {
            GroupElement::Angle(a) => (a - self.phase[0]).cos(),
            GroupElement::Angles(a) => (a[0] - self.phase[0]).cos() * (a[1] - self.phase[1]).cos(),
            GroupElement::Finite(k) => self.finite_coefficients[k % self.finite_coefficients.len()],
            GroupElement::Integer(n) => (-(*n as f64).powi(2) / 4.0).exp(),
        }
    }
}

impl ArrowFunction for ArrowBump {
    fn eval(&self, g: &GroupElement, x: &[f64]) -> f64 {
        self.bump(x) * (1.0 + self.amplitude * self.character(g))
    }
}
