//! Scenario runner for the groupoid-measures engines.
//!
//! A scenario file names a model, the checks to run on it and optional
//! tolerance overrides; running it yields one comparison row per measured
//! quantity. See [`catalog`] for the available checks.

pub mod catalog;
pub mod checks;
pub mod functions;
pub mod scenario;

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use groupoid_measures::report::{ComparisonRow, Report};
use rayon::prelude::*;

use crate::scenario::{load_scenario, Model, Scenario};

/// Environment variable overriding every scenario seed.
pub const SEED_VAR: &str = "GM_SEED";

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Evaluate scenarios on the rayon thread pool; row order is unchanged.
    pub parallel: bool,
    /// Per-check tolerances taking precedence over scenario files and the catalog.
    pub tolerance_overrides: BTreeMap<String, f64>,
    pub seed_override: Option<u64>,
}

impl RunOptions {
    /// Reads the seed override from [`SEED_VAR`] when set.
    pub fn seed_from_env(mut self) -> Result<Self> {
        if let Ok(text) = std::env::var(SEED_VAR) {
            let seed = text.trim().parse().map_err(|_| anyhow!("{SEED_VAR}=`{text}` is not an unsigned integer"))?;
            self.seed_override = Some(seed);
        }
        Ok(self)
    }
}

/// Checks that every check name and tolerance key is known for the scenario's engine.
pub fn validate(scenario: &Scenario, origin: &str, options: &RunOptions) -> Result<()> {
    let names = catalog::names_for(scenario.engine);
    for call in &scenario.checks {
        if !names.contains(&call.name.as_str()) {
            bail!(
                "{origin}: unknown check `{}` for engine {}; valid checks: {}",
                call.name,
                scenario.engine,
                names.join(", ")
            );
        }
    }
    for key in scenario.tolerances.keys().chain(options.tolerance_overrides.keys()) {
        if catalog::lookup(key).is_none() {
            bail!("{origin}: tolerance for unknown check `{key}`");
        }
    }
    Ok(())
}

/// Runs one validated scenario.
pub fn run_scenario(scenario: &Scenario, options: &RunOptions) -> Result<Vec<ComparisonRow>> {
    let seed = options.seed_override.unwrap_or(scenario.seed);
    let model = Model::build(&scenario.model, seed).with_context(|| format!("scenario `{}`: model", scenario.name))?;
    let mut rows = Vec::new();
    for call in &scenario.checks {
        let info = catalog::lookup(&call.name).expect("validated check name");
        let tolerance = options
            .tolerance_overrides
            .get(info.name)
            .or_else(|| scenario.tolerances.get(info.name))
            .copied()
            .unwrap_or(info.tolerance);
        let measurements = checks::evaluate(info.name, &model, &call.params, seed)
            .with_context(|| format!("scenario `{}`, check `{}`", scenario.name, call.name))?;
        for m in measurements {
            let label = match &m.label {
                Some(l) => format!("{}[{l}]", info.name),
                None => info.name.to_string(),
            };
            rows.push(ComparisonRow::new(&scenario.name, &label, m.lhs, m.rhs, tolerance, info.exact));
        }
    }
    Ok(rows)
}

/// Loads and validates every file before running any, then runs them in order.
pub fn run_files(paths: &[PathBuf], options: &RunOptions) -> Result<Report> {
    let mut scenarios = Vec::with_capacity(paths.len());
    for path in paths {
        let scenario = load_scenario(path)?;
        validate(&scenario, &path.display().to_string(), options)?;
        scenarios.push(scenario);
    }
    let results: Vec<Result<Vec<ComparisonRow>>> = if options.parallel {
        scenarios.par_iter().map(|s| run_scenario(s, options)).collect()
    } else {
        scenarios.iter().map(|s| run_scenario(s, options)).collect()
    };
    let mut report = Report::default();
    for rows in results {
        report.rows.extend(rows?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;

    fn scenario(text: &str) -> Scenario {
        parse_scenario(text, "test").unwrap()
    }

    #[test]
    fn rows_carry_labels_and_tolerance_precedence() {
        let s = scenario(
            r#"{"name": "p3", "engine": "finite", "model": {"kind": "pair", "n": 3},
                "checks": [{"name": "betti", "params": {"expected": [1, 0]}}],
                "tolerances": {"betti": 0.5}}"#,
        );
        let rows = run_scenario(&s, &RunOptions::default()).unwrap();
        assert_eq!(rows.iter().map(|r| r.check.as_str()).collect::<Vec<_>>(), ["betti[b0]", "betti[b1]"]);
        assert!(rows.iter().all(|r| r.pass && r.tolerance == 0.5));
        let options = RunOptions { tolerance_overrides: [("betti".to_string(), 0.25)].into(), ..Default::default() };
        assert!(run_scenario(&s, &options).unwrap().iter().all(|r| r.tolerance == 0.25));
    }

    #[test]
    fn unknown_checks_list_the_engine_catalog() {
        let s = scenario(r#"{"name": "x", "engine": "finite", "model": {"kind": "swap"}, "checks": [{"name": "stokes"}]}"#);
        let err = validate(&s, "f.json", &RunOptions::default()).unwrap_err().to_string();
        assert!(err.contains("unknown check `stokes`") && err.contains("betti_orbits"), "{err}");
    }

    #[test]
    fn engine_and_model_must_agree() {
        let err = parse_scenario(r#"{"name": "x", "engine": "smooth", "model": {"kind": "swap"}, "checks": []}"#, "f")
            .unwrap_err()
            .to_string();
        assert!(err.contains("finite engine"), "{err}");
    }

    #[test]
    fn seed_override_changes_generated_models() {
        let s = scenario(
            r#"{"name": "g", "engine": "finite", "model": {"kind": "generated", "max_arrows": 30},
                "checks": [{"name": "validate"}, {"name": "betti_orbits"}, {"name": "trace_equivalence"}]}"#,
        );
        for seed in 0..4 {
            let rows = run_scenario(&s, &RunOptions { seed_override: Some(seed), ..Default::default() }).unwrap();
            assert!(rows.iter().all(|r| r.pass));
        }
    }
}
