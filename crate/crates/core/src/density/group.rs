use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::field::DensityField;
use super::grid::{Axis, Grid};
use super::DensityError;
use crate::finite::FiniteGroup;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupElement {
    /// Rotation angle in radians.
    Angle(f64),
    Angles([f64; 2]),
    Finite(usize),
    Integer(i64),
}

/// The model groups: circle, 2-torus, finite groups and (non-compact) the integers.
///
/// Compact models carry the number of quadrature nodes used for Haar integration;
/// the Haar measure is normalized to total mass one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupModel {
    Circle { nodes: usize },
    Torus2 { nodes: usize },
    Finite { table: FiniteGroup },
    Integers,
}

impl GroupModel {
    pub fn cyclic(n: usize) -> Self {
        Self::Finite { table: FiniteGroup::cyclic(n) }
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn is_compact(&self) -> bool {
        !matches!(self, Self::Integers)
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            Self::Circle { .. } => GroupElement::Angle(0.0),
            Self::Torus2 { .. } => GroupElement::Angles([0.0, 0.0]),
            Self::Finite { table } => GroupElement::Finite(table.identity()),
            Self::Integers => GroupElement::Integer(0),
        }
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        use GroupElement::*;
        match (self, a, b) {
            (Self::Circle { .. }, Angle(x), Angle(y)) => Angle((x + y).rem_euclid(TAU)),
            (Self::Torus2 { .. }, Angles(x), Angles(y)) => {
                Angles([(x[0] + y[0]).rem_euclid(TAU), (x[1] + y[1]).rem_euclid(TAU)])
            }
            (Self::Finite { table }, Finite(x), Finite(y)) => Finite(table.mul(*x, *y)),
            (Self::Integers, Integer(x), Integer(y)) => Integer(x + y),
            _ => panic!("group element {a:?} or {b:?} does not belong to {self:?}"),
        }
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        use GroupElement::*;
        match (self, a) {
            (Self::Circle { .. }, Angle(x)) => Angle((-x).rem_euclid(TAU)),
            (Self::Torus2 { .. }, Angles(x)) => Angles([(-x[0]).rem_euclid(TAU), (-x[1]).rem_euclid(TAU)]),
            (Self::Finite { table }, Finite(x)) => Finite(table.inverse(*x)),
            (Self::Integers, Integer(x)) => Integer(-x),
            _ => panic!("group element {a:?} does not belong to {self:?}"),
        }
    }

    /// Quadrature nodes and weights for the normalized Haar measure.
    ///
    /// Circle and torus nodes form a finite subgroup, so Haar quadrature is
    /// exactly invariant under translation by a node.
    pub fn haar_quadrature(&self) -> Result<Vec<(GroupElement, f64)>, DensityError> {
        match self {
            Self::Circle { nodes } => {
                let w = 1.0 / *nodes as f64;
                Ok(circle_angles(*nodes).map(|a| (GroupElement::Angle(a), w)).collect())
            }
            Self::Torus2 { nodes } => {
                let w = 1.0 / (*nodes * *nodes) as f64;
                let mut out = Vec::with_capacity(nodes * nodes);
                for a in circle_angles(*nodes) {
                    for b in circle_angles(*nodes) {
                        out.push((GroupElement::Angles([a, b]), w));
                    }
                }
                Ok(out)
            }
            Self::Finite { table } => {
                let w = 1.0 / table.order() as f64;
                Ok((0..table.order()).map(|g| (GroupElement::Finite(g), w)).collect())
            }
            Self::Integers => Err(DensityError::NotCompact),
        }
    }

    /// The normalized Haar density on the group's own coordinate grid.
    pub fn haar_density(&self) -> Result<DensityField, DensityError> {
        match self {
            Self::Circle { nodes } => {
                let grid = Grid::new(vec![Axis::circle(*nodes)])?;
                Ok(DensityField::constant(&grid, 1.0 / TAU))
            }
            Self::Torus2 { nodes } => {
                let grid = Grid::new(vec![Axis::circle(*nodes), Axis::circle(*nodes)])?;
                Ok(DensityField::constant(&grid, 1.0 / (TAU * TAU)))
            }
            Self::Finite { table } => {
                // counting points 0..order on a periodic axis of unit spacing
                let n = table.order();
                let grid = Grid::new(vec![Axis::periodic(0.0, n as f64, n)])?;
                Ok(DensityField::constant(&grid, 1.0 / n as f64))
            }
            Self::Integers => Err(DensityError::NotCompact),
        }
    }

    /// Uniformly distributed element drawn from `rng` (compact models only).
    pub fn sample<R: rand::Rng>(&self, rng: &mut R) -> Result<GroupElement, DensityError> {
        match self {
            Self::Circle { .. } => Ok(GroupElement::Angle(rng.gen_range(0.0..TAU))),
            Self::Torus2 { .. } => Ok(GroupElement::Angles([rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU)])),
            Self::Finite { table } => Ok(GroupElement::Finite(rng.gen_range(0..table.order()))),
            Self::Integers => Err(DensityError::NotCompact),
        }
    }
}

fn circle_angles(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |j| TAU * j as f64 / n as f64)
}
