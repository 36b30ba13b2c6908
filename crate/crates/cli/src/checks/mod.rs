//! Check implementations, one module per engine.

mod finite;
mod smooth;
mod symplectic;

use anyhow::{anyhow, Result};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use crate::scenario::Model;

/// One comparison produced by a check, before tolerances are applied.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub label: Option<String>,
    pub lhs: f64,
    pub rhs: f64,
}

impl Measurement {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Self { label: None, lhs, rhs }
    }

    pub fn labeled(label: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self { label: Some(label.into()), lhs, rhs }
    }

    /// A lower bound `value ≥ bound`, encoded as `rhs = max(value, bound)` so
    /// that the row passes at tolerance 0 exactly when the bound holds.
    pub fn at_least(label: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::labeled(label, value, if value.is_nan() { bound } else { value.max(bound) })
    }
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub(crate) struct NoParams {}

/// Deserializes check parameters; a missing `params` field counts as `{}`.
pub(crate) fn params<T: DeserializeOwned>(raw: &Value) -> Result<T> {
    let value = if raw.is_null() { Value::Object(Default::default()) } else { raw.clone() };
    serde_json::from_value(value).map_err(|e| anyhow!("invalid params: {e}"))
}

/// Runs the named check on a model. The name must be in the catalog for the
/// model's engine.
pub fn evaluate(name: &str, model: &Model, raw: &Value, seed: u64) -> Result<Vec<Measurement>> {
    match model {
        Model::Finite(g) => finite::evaluate(name, g, raw, seed),
        Model::Pair(..) | Model::Leaves(_) => symplectic::evaluate(name, model, raw),
        _ => smooth::evaluate(name, model, raw, seed),
    }
}
