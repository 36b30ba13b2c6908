//! Scenario files: a model descriptor, a list of checks and run settings.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use groupoid_measures::density::{Axis, Grid};
use groupoid_measures::finite::constructions::{
    action_groupoid, group_groupoid, pair_groupoid, random_groupoid, swap_groupoid, swap_with_fixed_point,
    unit_groupoid,
};
use groupoid_measures::finite::{FiniteGroup, FiniteGroupoid, GroupoidDescriptor};
use groupoid_measures::smooth::{Action, ActionGroupoidModel, FoliatedGrid, SubmersionGroupoidModel};
use groupoid_measures::symplectic::{LeafFamilyModel, SymplecticPairModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::Value;

use crate::functions::SigmaSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Finite,
    Smooth,
    Symplectic,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Self::Finite => "finite",
            Self::Smooth => "smooth",
            Self::Symplectic => "symplectic",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckCall {
    pub name: String,
    #[serde(default)]
    pub params: Value,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub engine: Engine,
    pub model: ModelSpec,
    pub checks: Vec<CheckCall>,
    /// Per-check tolerance overrides.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupSpec {
    Cyclic(usize),
    Symmetric3,
    Table(Vec<Vec<usize>>),
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        Ok(match self {
            Self::Cyclic(n) if *n >= 1 => FiniteGroup::cyclic(*n),
            Self::Cyclic(_) => bail!("cyclic group needs order ≥ 1"),
            Self::Symmetric3 => FiniteGroup::symmetric3(),
            Self::Table(t) => FiniteGroup::from_table(t.clone())?,
        })
    }
}

/// Model descriptors of all engines; `kind` names are unique across engines.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    // finite engine
    Pair { n: usize },
    Unit { n: usize },
    Group { group: GroupSpec },
    FiniteAction { group: GroupSpec, action: Vec<Vec<usize>> },
    Swap,
    SwapWithFixedPoint,
    Explicit { descriptor: GroupoidDescriptor },
    /// A random groupoid drawn from the scenario seed.
    Generated { max_arrows: usize },
    // smooth engine
    Action {
        action: Action,
        grid: GridSpec,
        #[serde(default)]
        sigma: SigmaSpec,
    },
    Foliation { n: usize },
    Submersion { grid: GridSpec, fiber_axes: Vec<usize> },
    Grid { grid: GridSpec },
    // symplectic engine
    SpherePair { radius: f64, n_theta: usize, n_phi: usize },
    TorusPair { n: usize },
    LeafFamily(LeafFamilyModel),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub axes: Vec<Axis>,
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid> {
        Ok(Grid::new(self.axes.clone())?)
    }
}

impl ModelSpec {
    pub fn engine(&self) -> Engine {
        match self {
            Self::Pair { .. }
            | Self::Unit { .. }
            | Self::Group { .. }
            | Self::FiniteAction { .. }
            | Self::Swap
            | Self::SwapWithFixedPoint
            | Self::Explicit { .. }
            | Self::Generated { .. } => Engine::Finite,
            Self::Action { .. } | Self::Foliation { .. } | Self::Submersion { .. } | Self::Grid { .. } => {
                Engine::Smooth
            }
            Self::SpherePair { .. } | Self::TorusPair { .. } | Self::LeafFamily(_) => Engine::Symplectic,
        }
    }
}

/// A model ready for the checks of its engine.
pub enum Model {
    Finite(FiniteGroupoid),
    Action(ActionGroupoidModel, SigmaSpec),
    Foliation(FoliatedGrid),
    Submersion(SubmersionGroupoidModel),
    Grid(Grid),
    /// A symplectic surface with the closed form of its area.
    Pair(SymplecticPairModel, f64),
    Leaves(LeafFamilyModel),
}

impl Model {
    pub fn build(spec: &ModelSpec, seed: u64) -> Result<Self> {
        let finite = |g: FiniteGroupoid| -> Result<Self> {
            g.ensure_valid()?;
            Ok(Self::Finite(g))
        };
        match spec {
            ModelSpec::Pair { n } if *n >= 1 => finite(pair_groupoid(*n)),
            ModelSpec::Unit { n } if *n >= 1 => finite(unit_groupoid(*n)),
            ModelSpec::Pair { .. } | ModelSpec::Unit { .. } => bail!("groupoid needs at least one object"),
            ModelSpec::Group { group } => finite(group_groupoid(&group.build()?)),
            ModelSpec::FiniteAction { group, action } => finite(action_groupoid(&group.build()?, action)?),
            ModelSpec::Swap => finite(swap_groupoid()),
            ModelSpec::SwapWithFixedPoint => finite(swap_with_fixed_point()),
            ModelSpec::Explicit { descriptor } => finite(FiniteGroupoid::from_descriptor(descriptor)?),
            ModelSpec::Generated { max_arrows } => {
                finite(random_groupoid(&mut ChaCha8Rng::seed_from_u64(seed), *max_arrows))
            }
            ModelSpec::Action { action, grid, sigma } => {
                Ok(Self::Action(ActionGroupoidModel::new(action.clone(), grid.build()?)?, sigma.clone()))
            }
            ModelSpec::Foliation { n } => Ok(Self::Foliation(FoliatedGrid::horizontal_unit_square(*n)?)),
            ModelSpec::Submersion { grid, fiber_axes } => {
                Ok(Self::Submersion(SubmersionGroupoidModel::new(grid.build()?, fiber_axes.clone())?))
            }
            ModelSpec::Grid { grid } => Ok(Self::Grid(grid.build()?)),
            ModelSpec::SpherePair { radius, n_theta, n_phi } => {
                Ok(Self::Pair(SymplecticPairModel::round_sphere(*radius, *n_theta, *n_phi)?, 4.0 * PI * radius * radius))
            }
            ModelSpec::TorusPair { n } => Ok(Self::Pair(SymplecticPairModel::flat_torus(*n)?, 1.0)),
            ModelSpec::LeafFamily(m) => {
                // round-trip through the validating constructor
                Ok(Self::Leaves(LeafFamilyModel::from_json(&serde_json::to_string(m)?)?))
            }
        }
    }
}

/// Parses a scenario, reporting syntax and schema errors with line and column.
pub fn parse_scenario(text: &str, origin: &str) -> Result<Scenario> {
    let scenario: Scenario = serde_json::from_str(text)
        .map_err(|e| anyhow!("{origin}:{}:{}: {e}", e.line(), e.column()))?;
    if scenario.model.engine() != scenario.engine {
        bail!(
            "{origin}: model kind belongs to the {} engine but the scenario declares engine {}",
            scenario.model.engine(),
            scenario.engine
        );
    }
    Ok(scenario)
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_scenario(&text, &path.display().to_string())
}
