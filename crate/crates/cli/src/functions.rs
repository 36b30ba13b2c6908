//! Named families of functions and transverse densities used in scenario files.

use std::f64::consts::PI;

use groupoid_measures::smooth::{Action, ActionGroupoidModel, HaarData, TransverseDensityData};
use serde::Deserialize;

/// Cartesian position of a chart point: polar charts are converted, all
/// other charts are used as is.
pub fn cartesian(model: &ActionGroupoidModel, x: &[f64]) -> Vec<f64> {
    match model.action {
        Action::RotationPolar { .. } => vec![x[0] * x[1].cos(), x[0] * x[1].sin()],
        _ => x.to_vec(),
    }
}

fn polynomial(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * t + v)
}

/// A transverse density `σ = ρ^∨ ⊗ τ` on an action groupoid.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SigmaSpec {
    /// Normalized Haar data and Lebesgue measure of the chart (`r dr dθ` in polar charts).
    #[default]
    Lebesgue,
    /// Constant Haar weight and constant `τ`.
    Constant { weight: f64, tau: f64 },
    /// `w = τ = 1 + a |p|²` in Cartesian position `p`.
    Radial { a: f64 },
    /// Normalized Haar data, `τ = exp(rate · p₀)` (not rotation invariant).
    Tilted { rate: f64 },
    /// `w` and `τ` polynomials (coefficients, lowest first) in the first chart coordinate.
    Polynomial { weight: Vec<f64>, tau: Vec<f64> },
}

impl SigmaSpec {
    pub fn build(&self, model: &ActionGroupoidModel) -> TransverseDensityData {
        let polar = matches!(model.action, Action::RotationPolar { .. });
        match self.clone() {
            Self::Lebesgue => TransverseDensityData::lebesgue(model),
            Self::Constant { weight, tau } => TransverseDensityData::new(HaarData::constant(weight), move |_| tau),
            Self::Radial { a } => {
                let r2 = move |x: &[f64]| 1.0 + a * if polar { x[0] * x[0] } else { x.iter().map(|v| v * v).sum() };
                let jac = move |x: &[f64]| if polar { x[0] } else { 1.0 };
                TransverseDensityData::new(HaarData::from_fn(r2), move |x| r2(x) * jac(x))
            }
            Self::Tilted { rate } => TransverseDensityData::new(HaarData::normalized(), move |x| {
                let p0 = if polar { x[0] * x[1].cos() } else { x[0] };
                let jac = if polar { x[0] } else { 1.0 };
                (rate * p0).exp() * jac
            }),
            Self::Polynomial { weight, tau } => {
                TransverseDensityData::new(HaarData::from_fn(move |x| polynomial(&weight, x[0])), move |x| {
                    polynomial(&tau, x[0])
                })
            }
        }
    }
}

/// A scalar function on `M`, for test functions and cut-off seeds.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    Constant { value: f64 },
    /// `exp(−|p − c|² / (2 w²))` in Cartesian position `p`.
    Gaussian { center: Vec<f64>, width: f64 },
    /// `exp(−((|p| − r0) / w)²)`.
    Radial { r0: f64, width: f64 },
    /// `1 + a cos x₀ + b sin x_last` in chart coordinates.
    Trig { a: f64, b: f64 },
    /// `1 + a sin² x_last · x₀` in chart coordinates.
    AngularSkew { a: f64 },
}

impl FunctionSpec {
    pub fn eval(&self, model: &ActionGroupoidModel, x: &[f64]) -> f64 {
        match self {
            Self::Constant { value } => *value,
            Self::Gaussian { center, width } => {
                let p = cartesian(model, x);
                let d2: f64 = p.iter().zip(center).map(|(a, b)| (a - b).powi(2)).sum();
                (-d2 / (2.0 * width * width)).exp()
            }
            Self::Radial { r0, width } => {
                let r = cartesian(model, x).iter().map(|v| v * v).sum::<f64>().sqrt();
                (-((r - r0) / width).powi(2)).exp()
            }
            Self::Trig { a, b } => 1.0 + a * x[0].cos() + b * x[x.len() - 1].sin(),
            Self::AngularSkew { a } => 1.0 + a * x[x.len() - 1].sin().powi(2) * x[0],
        }
    }

    /// Closed form of `∫_M f τ` for a radial gaussian against `r dr dθ`
    /// (valid when the profile is negligible at the radial ends).
    pub fn polar_integral(&self) -> Option<f64> {
        match self {
            Self::Radial { r0, width } => Some(2.0 * PI * r0 * width * PI.sqrt()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use groupoid_measures::density::{Axis, Grid};

    use super::*;

    fn annulus(n: usize) -> ActionGroupoidModel {
        let grid = Grid::new(vec![Axis::bounded(0.5, 2.5, n), Axis::circle(n)]).unwrap();
        ActionGroupoidModel::new(Action::RotationPolar { nodes: n }, grid).unwrap()
    }

    #[test]
    fn radial_closed_form_matches_quadrature() {
        let model = annulus(129);
        let f = FunctionSpec::Radial { r0: 1.5, width: 0.15 };
        let sigma = SigmaSpec::Lebesgue.build(&model);
        let numeric = sigma.integrate(&model.grid, |x| f.eval(&model, x));
        let exact = f.polar_integral().unwrap();
        assert!((numeric - exact).abs() <= 1e-9 * exact, "{numeric} vs {exact}");
        assert!(FunctionSpec::Constant { value: 1.0 }.polar_integral().is_none());
    }

    #[test]
    fn cartesian_gaussian_is_chart_independent() {
        let polar = annulus(9);
        let plane = ActionGroupoidModel::new(
            Action::Rotation2d { nodes: 8 },
            Grid::new(vec![Axis::bounded(-2.0, 2.0, 5); 2]).unwrap(),
        )
        .unwrap();
        let f = FunctionSpec::Gaussian { center: vec![0.3, -0.2], width: 0.7 };
        let (r, theta) = (1.3f64, 0.9f64);
        let a = f.eval(&polar, &[r, theta]);
        let b = f.eval(&plane, &[r * theta.cos(), r * theta.sin()]);
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn radial_sigma_is_invariant_for_rotations() {
        let model = annulus(9);
        let sigma = SigmaSpec::Radial { a: 0.4 }.build(&model);
        let (x, y) = ([1.2, 0.3], [1.2, 2.3]);
        assert!((sigma.sigma0(&x) - sigma.sigma0(&y)).abs() < 1e-15);
        assert!((sigma.rho.weight(&x) - 1.0 - 0.4 * 1.44).abs() < 1e-15);
    }
}
