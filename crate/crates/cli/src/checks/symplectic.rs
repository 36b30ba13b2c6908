use anyhow::{bail, ensure, Result};
use groupoid_measures::symplectic::{
    affine_measure, affine_volume, dh_density, dh_density_via_product, dh_measure_on_point, dh_weyl_check,
    liouville_density, LeafBase, LeafFamilyModel, SymplecticPairModel,
};
use serde::Deserialize;
use serde_json::Value;

use super::{params, Measurement, NoParams};
use crate::scenario::Model;

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct MaybeExpected {
    expected: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Expected {
    expected: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Scale {
    t: f64,
}

/// Test functions on the total space of a leaf family.
#[derive(Deserialize, Default, Clone, Copy)]
#[serde(rename_all = "snake_case")]
enum LeafFunction {
    #[default]
    One,
    /// A narrow band in the parameter, modulated along the leaf.
    Band,
    SinT,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct DhWeyl {
    f: Option<LeafFunction>,
    expected: Option<f64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct DhWeylIota {
    f: Option<LeafFunction>,
}

/// The function as a closure on points of `M`: `(t, leaf coordinates)`, or
/// leaf coordinates only over a point base (where `t` is the base point).
fn leaf_function(model: &LeafFamilyModel, f: LeafFunction) -> Result<impl Fn(&[f64]) -> f64> {
    let ts = model.parameters()?;
    let (lo, hi) = (ts[0], ts[ts.len() - 1]);
    let mid = 0.5 * (lo + hi);
    let point = match model.base {
        LeafBase::Point { at, .. } => Some(at),
        LeafBase::Interval { .. } => None,
    };
    Ok(move |x: &[f64]| {
        let (t, y) = match point {
            Some(at) => (at, x),
            None => (x[0], &x[1..]),
        };
        match f {
            LeafFunction::One => 1.0,
            LeafFunction::Band => (-((t - mid) / 0.05).powi(2)).exp() * (1.0 + y[0].cos().powi(2)),
            LeafFunction::SinT => t.sin(),
        }
    })
}

fn pair(name: &str, model: &SymplecticPairModel, area: f64, raw: &Value) -> Result<Vec<Measurement>> {
    Ok(match name {
        "liouville_area" => {
            let p: MaybeExpected = params(raw)?;
            vec![Measurement::new(liouville_density(model).integrate(), p.expected.unwrap_or(area))]
        }
        "liouville_scaling" => {
            let p: Scale = params(raw)?;
            let scaled = liouville_density(&model.scaled(p.t)?).integrate();
            vec![Measurement::new(scaled, p.t.abs() * liouville_density(model).integrate())]
        }
        "dh_mass" => {
            let p: MaybeExpected = params(raw)?;
            let expected = p.expected.unwrap_or(area * area);
            let nodewise = dh_density(model);
            vec![
                Measurement::labeled("nodewise", nodewise.integrate(), expected),
                Measurement::labeled("product", dh_density_via_product(model)?.integrate(), expected),
                Measurement::labeled("point", dh_measure_on_point(&nodewise)?.total_mass(), expected),
            ]
        }
        other => bail!("`{other}` does not apply to symplectic pair models"),
    })
}

fn leaves(name: &str, model: &LeafFamilyModel, raw: &Value) -> Result<Vec<Measurement>> {
    let mu = model.mu_m()?;
    Ok(match name {
        "affine_total" => {
            let p: Expected = params(raw)?;
            vec![Measurement::new(affine_measure(model)?.total_mass(), p.expected)]
        }
        "dh_weyl" => {
            let p: DhWeyl = params(raw)?;
            let f = leaf_function(model, p.f.unwrap_or_default())?;
            let r = dh_weyl_check(model, &mu, &f)?;
            let mut rows = vec![Measurement::labeled("identity", r.lhs, r.rhs)];
            if let Some(e) = p.expected {
                rows.push(Measurement::labeled("expected", r.lhs, e));
            }
            rows
        }
        "dh_weyl_iota" => {
            let p: DhWeylIota = params(raw)?;
            let f = leaf_function(model, p.f.unwrap_or_default())?;
            let base = dh_weyl_check(model, &mu, &f)?;
            // the same μ_M disintegrated with twice as many isotropy components
            let doubled = model.clone().with_iota(model.iota * 2)?;
            let fixed = dh_weyl_check(&doubled, &mu, &f)?;
            // halving the lattice density as well leaves μ_M and the identity intact
            let ell: Vec<f64> = model.lattice_density()?.iter().map(|v| v / 2.0).collect();
            let halved = doubled.with_lattice(ell)?;
            let r = dh_weyl_check(&halved, &halved.mu_m()?, &f)?;
            vec![
                Measurement::labeled("fixed_mu", fixed.rhs, 2.0 * base.rhs),
                Measurement::labeled("halved_identity", r.lhs, r.rhs),
                Measurement::labeled("halved_lhs", r.lhs, base.lhs),
            ]
        }
        "affine_volume" => {
            let p: MaybeExpected = params(raw)?;
            let r = affine_volume(model, &mu)?;
            let mut rows = vec![Measurement::labeled("identity", r.lhs, r.rhs)];
            if let Some(e) = p.expected {
                rows.push(Measurement::labeled("expected", r.lhs, e));
            }
            rows
        }
        "affine_volume_iota" => {
            params::<NoParams>(raw)?;
            let base = affine_volume(model, &mu)?;
            let doubled = model.clone().with_iota(model.iota * 2)?;
            let r = affine_volume(&doubled, &mu)?;
            ensure!(base.rhs.is_finite(), "volume is not finite");
            vec![Measurement::labeled("via_m", r.rhs, base.rhs / 2.0)]
        }
        other => bail!("`{other}` does not apply to leaf family models"),
    })
}

pub fn evaluate(name: &str, model: &Model, raw: &Value) -> Result<Vec<Measurement>> {
    match model {
        Model::Pair(m, area) => pair(name, m, *area, raw),
        Model::Leaves(m) => leaves(name, m, raw),
        _ => unreachable!("dispatched by engine"),
    }
}
