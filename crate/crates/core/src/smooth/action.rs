use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::SmoothError;
use crate::density::{Axis, GroupElement, GroupModel, Grid};
use crate::finite::FiniteGroup;

/// The model group actions `Γ ↷ M`, each with an analytic action map and the
/// determinant of its base-direction differential.
///
/// Coordinates are those of the grid chart of `M`: angles live in `[0, 2π)`
/// and are wrapped after acting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Action {
    /// The circle rotating `R²` in Cartesian coordinates `(x, y)`.
    Rotation2d { nodes: usize },
    /// The circle rotating `R²` in polar coordinates `(r, θ)`: `θ ↦ θ + a`.
    RotationPolar { nodes: usize },
    /// The circle acting on itself by translation, coordinate `θ`.
    CircleTranslation { nodes: usize },
    /// The 2-torus acting on itself by translation, coordinates `(θ₁, θ₂)`.
    TorusTranslation { nodes: usize },
    /// `Z/2` acting on `R` by `x ↦ −x`.
    Reflection,
    /// `Z/2` acting on the circle by `θ ↦ θ + π`.
    Antipodal,
    /// The integers acting on `R` by `x ↦ 2ⁿ x` (not proper).
    Scaling,
    /// The trivial group acting on any `M`.
    Trivial,
}

impl Action {
    pub fn group(&self) -> GroupModel {
        match self {
            Self::Rotation2d { nodes } | Self::RotationPolar { nodes } | Self::CircleTranslation { nodes } => {
                GroupModel::Circle { nodes: *nodes }
            }
            Self::TorusTranslation { nodes } => GroupModel::Torus2 { nodes: *nodes },
            Self::Reflection | Self::Antipodal => GroupModel::Finite { table: FiniteGroup::cyclic(2) },
            Self::Scaling => GroupModel::Integers,
            Self::Trivial => GroupModel::trivial(),
        }
    }

    /// Dimension of `M` the action expects, if fixed.
    pub fn base_dim(&self) -> Option<usize> {
        match self {
            Self::Rotation2d { .. } | Self::RotationPolar { .. } | Self::TorusTranslation { .. } => Some(2),
            Self::CircleTranslation { .. } | Self::Reflection | Self::Antipodal | Self::Scaling => Some(1),
            Self::Trivial => None,
        }
    }

    pub fn is_proper(&self) -> bool {
        self.group().is_compact()
    }

    /// `a(g, x)`.
    pub fn act(&self, g: &GroupElement, x: &[f64]) -> Vec<f64> {
        use GroupElement::*;
        match (self, g) {
            (Self::Rotation2d { .. }, Angle(a)) => {
                let (s, c) = a.sin_cos();
                vec![c * x[0] - s * x[1], s * x[0] + c * x[1]]
            }
            (Self::RotationPolar { .. }, Angle(a)) => vec![x[0], (x[1] + a).rem_euclid(TAU)],
            (Self::CircleTranslation { .. }, Angle(a)) => vec![(x[0] + a).rem_euclid(TAU)],
            (Self::TorusTranslation { .. }, Angles(a)) => {
                vec![(x[0] + a[0]).rem_euclid(TAU), (x[1] + a[1]).rem_euclid(TAU)]
            }
            (Self::Reflection, Finite(k)) => vec![if *k == 0 { x[0] } else { -x[0] }],
            (Self::Antipodal, Finite(k)) => vec![if *k == 0 { x[0] } else { (x[0] + PI).rem_euclid(TAU) }],
            (Self::Scaling, Integer(n)) => vec![x[0] * 2f64.powi(*n as i32)],
            (Self::Trivial, Finite(_)) => x.to_vec(),
            _ => panic!("group element {g:?} does not act in {self:?}"),
        }
    }

    /// `J(g, x) = det D_x a(g, ·)`.
    pub fn jacobian(&self, g: &GroupElement, _x: &[f64]) -> f64 {
        match (self, g) {
            (Self::Reflection, GroupElement::Finite(1)) => -1.0,
            (Self::Scaling, GroupElement::Integer(n)) => 2f64.powi(*n as i32),
            _ => 1.0,
        }
    }

    /// A group element drawn from `rng`; for the integers, uniform on `[-4, 4]`.
    pub fn sample_element<R: Rng>(&self, rng: &mut R) -> GroupElement {
        match self.group() {
            GroupModel::Integers => GroupElement::Integer(rng.gen_range(-4..=4)),
            group => group.sample(rng).expect("compact groups can be sampled"),
        }
    }

    /// The concrete orbit space of this action on `m`, when one is modelled.
    pub fn orbit_space(&self, m: &Grid) -> Option<OrbitSpace> {
        let chart = match self {
            Self::Rotation2d { .. } => OrbitChart::Radius,
            Self::RotationPolar { .. } => OrbitChart::PolarRadius,
            Self::CircleTranslation { .. } | Self::TorusTranslation { .. } => OrbitChart::Point,
            Self::Reflection => OrbitChart::AbsoluteValue,
            Self::Antipodal => OrbitChart::HalfCircle,
            Self::Trivial => OrbitChart::Identity,
            Self::Scaling => return None,
        };
        let base = match chart {
            OrbitChart::Radius => {
                let r_max = m.axes().iter().map(|a| a.lo.abs().max(a.hi.abs())).fold(0.0f64, |s, v| s.hypot(v));
                let n = m.shape().into_iter().max().unwrap_or(2);
                Grid::new(vec![Axis::bounded(0.0, r_max, n)]).ok()?
            }
            OrbitChart::PolarRadius => m.without_axes(&[1]),
            OrbitChart::Point => Grid::point(),
            OrbitChart::AbsoluteValue => {
                let a = m.axis(0);
                Grid::new(vec![Axis::bounded(0.0, a.lo.abs().max(a.hi.abs()), a.n.div_ceil(2).max(2))]).ok()?
            }
            OrbitChart::HalfCircle => Grid::new(vec![Axis::periodic(0.0, PI, m.axis(0).n.div_ceil(2))]).ok()?,
            OrbitChart::Identity => m.clone(),
        };
        Some(OrbitSpace { chart, base })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitChart {
    /// `(x, y) ↦ √(x² + y²)`.
    Radius,
    /// `(r, θ) ↦ r`.
    PolarRadius,
    /// Transitive actions: a single orbit.
    Point,
    /// `x ↦ |x|`.
    AbsoluteValue,
    /// `θ ↦ θ mod π`.
    HalfCircle,
    /// Orbits are points.
    Identity,
}

/// A grid on the orbit space `B = M/Γ` with the quotient map and a section.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSpace {
    chart: OrbitChart,
    base: Grid,
}

impl OrbitSpace {
    pub fn chart(&self) -> OrbitChart {
        self.chart
    }

    pub fn grid(&self) -> &Grid {
        &self.base
    }

    /// `π(x)` in the coordinates of the base grid.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        match self.chart {
            OrbitChart::Radius => vec![x[0].hypot(x[1])],
            OrbitChart::PolarRadius => vec![x[0]],
            OrbitChart::Point => vec![],
            OrbitChart::AbsoluteValue => vec![x[0].abs()],
            OrbitChart::HalfCircle => vec![x[0].rem_euclid(PI)],
            OrbitChart::Identity => x.to_vec(),
        }
    }

    /// A point of `M` on the orbit `b` (only meaningful for the point chart
    /// when `M`'s dimension is supplied through `m_dim`).
    pub fn representative(&self, b: &[f64], m_dim: usize) -> Vec<f64> {
        match self.chart {
            OrbitChart::Radius => vec![b[0], 0.0],
            OrbitChart::PolarRadius => vec![b[0], 0.0],
            OrbitChart::Point => vec![0.0; m_dim],
            OrbitChart::AbsoluteValue | OrbitChart::HalfCircle => vec![b[0]],
            OrbitChart::Identity => b.to_vec(),
        }
    }
}

/// An action groupoid `Γ ⋉ M` on a grid over `M`; arrows are pairs
/// `(g, x): x → a(g, x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionGroupoidModel {
    pub action: Action,
    pub grid: Grid,
}

/// Largest violations of the action axioms on sampled points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionAxiomReport {
    pub unit: f64,
    pub associativity: f64,
    pub jacobian_cocycle: f64,
}

impl ActionAxiomReport {
    pub fn max(&self) -> f64 {
        self.unit.max(self.associativity).max(self.jacobian_cocycle)
    }
}

impl ActionGroupoidModel {
    pub fn new(action: Action, grid: Grid) -> Result<Self, SmoothError> {
        if let Some(d) = action.base_dim() {
            if d != grid.dim() {
                return Err(SmoothError::Dimension { expected: d, found: grid.dim() });
            }
        }
        Ok(Self { action, grid })
    }

    pub fn from_json(text: &str) -> Result<Self, SmoothError> {
        let model: Self = serde_json::from_str(text)?;
        Self::new(model.action, model.grid)
    }

    pub fn group(&self) -> GroupModel {
        self.action.group()
    }

    pub fn act(&self, g: &GroupElement, x: &[f64]) -> Vec<f64> {
        self.action.act(g, x)
    }

    pub fn jacobian(&self, g: &GroupElement, x: &[f64]) -> f64 {
        self.action.jacobian(g, x)
    }

    /// Haar quadrature of the (compact) group.
    pub fn quadrature(&self) -> Result<Vec<(GroupElement, f64)>, SmoothError> {
        self.group().haar_quadrature().map_err(|_| SmoothError::NotProper)
    }

    pub fn orbit_space(&self) -> Result<OrbitSpace, SmoothError> {
        self.action.orbit_space(&self.grid).ok_or(SmoothError::NotProper)
    }

    /// Checks `a(e,x) = x`, `a(g,a(h,x)) = a(gh,x)` and
    /// `J(gh,x) = J(g,a(h,x)) J(h,x)` on `samples` seeded triples.
    pub fn check_axioms<R: Rng>(&self, rng: &mut R, samples: usize) -> ActionAxiomReport {
        let group = self.group();
        let mut report = ActionAxiomReport { unit: 0.0, associativity: 0.0, jacobian_cocycle: 0.0 };
        for _ in 0..samples {
            let x = sample_point(&self.grid, rng);
            let g = self.action.sample_element(rng);
            let h = self.action.sample_element(rng);
            let gh = group.mul(&g, &h);
            let e = self.act(&group.identity(), &x);
            report.unit = report.unit.max(point_distance(&self.grid, &e, &x));
            let hx = self.act(&h, &x);
            let lhs = self.act(&g, &hx);
            let rhs = self.act(&gh, &x);
            report.associativity = report.associativity.max(point_distance(&self.grid, &lhs, &rhs));
            let j = self.jacobian(&gh, &x) - self.jacobian(&g, &hx) * self.jacobian(&h, &x);
            report.jacobian_cocycle = report.jacobian_cocycle.max(j.abs());
        }
        report
    }
}

/// A uniformly distributed point of the grid's bounding box.
pub fn sample_point<R: Rng>(grid: &Grid, rng: &mut R) -> Vec<f64> {
    grid.axes().iter().map(|a| rng.gen_range(a.lo..a.hi)).collect()
}

/// Sup-distance between points, measured around the circle on periodic axes.
pub fn point_distance(grid: &Grid, a: &[f64], b: &[f64]) -> f64 {
    let mut d = 0.0f64;
    for (k, (x, y)) in a.iter().zip(b).enumerate() {
        let mut delta = (x - y).abs();
        if let Some(axis) = grid.axes().get(k) {
            if axis.periodic {
                let len = axis.length();
                delta = delta.rem_euclid(len);
                delta = delta.min(len - delta);
            }
        }
        d = d.max(delta);
    }
    d
}
