use std::f64::consts::{PI, TAU};

use anyhow::{bail, ensure, Context, Result};
use groupoid_measures::density::{CircleBundle, DensityError, DensityField, GridMap, GroupElement, GroupModel, Grid, MeasureFunctional};
use groupoid_measures::finite::constructions::action_groupoid;
use groupoid_measures::finite::linalg::ratio;
use groupoid_measures::finite::{average_function, HaarWeight, ObjectWeights};
use groupoid_measures::smooth::action::sample_point;
use groupoid_measures::smooth::{
    average_at, averaging, cocycle_additivity_defect, cutoff_construct, exactness_probe, induced_base_measure,
    invariance_defect, inversion_invariance_check, modular_cocycle, orbit_density, orbit_volume, s_fiber_integral_at,
    t_fiber_integral_at, weinstein_volume, weinstein_volume_direct, weyl_check, ActionGroupoidModel, ArrowBump,
    ArrowFunction, Cutoff, FoliatedGrid, OneForm, SmoothError, SubmersionGroupoidModel, TransverseDensityData,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::Value;

use super::{params, Measurement, NoParams};
use crate::functions::FunctionSpec;
use crate::scenario::Model;

/// Seeds whose fiber average is at most this are rejected as not saturating.
const SATURATION_THRESHOLD: f64 = 1e-12;

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Count {
    samples: Option<usize>,
    tests: Option<usize>,
    count: Option<usize>,
    bound: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WithF {
    f: FunctionSpec,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WithSeed {
    seed: FunctionSpec,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Weyl {
    f: FunctionSpec,
    seed: FunctionSpec,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeylSeeds {
    f: FunctionSpec,
    seeds: [FunctionSpec; 2],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Expected {
    expected: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Values {
    values: Vec<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CocycleValue {
    g: i64,
    x: Vec<f64>,
    expected: f64,
}

#[derive(Deserialize, Default, Clone, Copy)]
#[serde(rename_all = "snake_case")]
enum TransverseSpec {
    /// `m = 1 + y`, invariant along horizontal leaves.
    #[default]
    OnePlusY,
    /// `m = eˣ`, varying along the leaves.
    ExpX,
}

impl TransverseSpec {
    fn field(self, grid: &Grid) -> DensityField {
        match self {
            Self::OnePlusY => DensityField::from_fn(grid, |x| 1.0 + x[1]),
            Self::ExpX => DensityField::from_fn(grid, |x| x[0].exp()),
        }
    }
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Foliation {
    m: Option<TransverseSpec>,
    bound: Option<f64>,
}

#[derive(Deserialize, Clone, Copy)]
#[serde(rename_all = "snake_case")]
enum AlphaSpec {
    Dx,
    Dy,
    /// `dβ` for the compactly supported-along-leaves `β` of the Stokes check.
    Exact,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RuelleSullivan {
    alpha: AlphaSpec,
    m: Option<TransverseSpec>,
    expected: f64,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Width {
    width: Option<f64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Bundle {
    circle_nodes: Option<usize>,
    bound: Option<f64>,
}

/// `ω` vanishing at both ends of every leaf of `[0,1]²`, concentrated near `y = 1/2`.
fn stokes_omega(x: &[f64]) -> f64 {
    (PI * x[0]).sin() * x[0].exp() * (-((x[1] - 0.5) / 0.1).powi(2)).exp()
}

fn cutoff(model: &ActionGroupoidModel, sigma: &TransverseDensityData, seed: &FunctionSpec) -> Result<Cutoff> {
    let (m, s) = (model.clone(), seed.clone());
    Ok(cutoff_construct(model, &sigma.rho, move |x| s.eval(&m, x), SATURATION_THRESHOLD)?)
}

fn closure(model: &ActionGroupoidModel, f: &FunctionSpec) -> impl Fn(&[f64]) -> f64 {
    let (m, f) = (model.clone(), f.clone());
    move |x: &[f64]| f.eval(&m, x)
}

/// Element of a discrete model group from an integer.
fn discrete_element(group: &GroupModel, n: i64) -> Result<GroupElement> {
    match group {
        GroupModel::Integers => Ok(GroupElement::Integer(n)),
        GroupModel::Finite { table } => {
            ensure!(n >= 0 && (n as usize) < table.order(), "group element {n} out of range");
            Ok(GroupElement::Finite(n as usize))
        }
        _ => bail!("needs a discrete group"),
    }
}

/// Determinant of the finite-difference Jacobian of `a(g, ·)` at `x`.
fn fd_jacobian(model: &ActionGroupoidModel, g: &GroupElement, x: &[f64]) -> f64 {
    let eps = 1e-6;
    let d = model.grid.dim();
    let mut jac = vec![vec![0.0; d]; d];
    for k in 0..d {
        let (mut plus, mut minus) = (x.to_vec(), x.to_vec());
        plus[k] += eps;
        minus[k] -= eps;
        let (fp, fm) = (model.act(g, &plus), model.act(g, &minus));
        for i in 0..d {
            let mut diff = fp[i] - fm[i];
            if model.grid.axis(i).periodic {
                diff = (diff + PI).rem_euclid(TAU) - PI;
            }
            jac[i][k] = diff / (2.0 * eps);
        }
    }
    match d {
        1 => jac[0][0],
        2 => jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0],
        _ => f64::NAN,
    }
}

fn action(name: &str, model: &ActionGroupoidModel, sigma: &TransverseDensityData, raw: &Value, seed: u64) -> Result<Vec<Measurement>> {
    let quad = || model.quadrature().context("needs a compact group");
    Ok(match name {
        "action_axioms" => {
            let p: Count = params(raw)?;
            let report = model.check_axioms(&mut ChaCha8Rng::seed_from_u64(seed), p.samples.unwrap_or(200));
            vec![Measurement::labeled("max_defect", report.max(), 0.0)]
        }
        "jacobian" => {
            let p: Count = params(raw)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut worst = 0.0f64;
            for _ in 0..p.samples.unwrap_or(20) {
                let x = sample_point(&model.grid, &mut rng);
                let g = model.action.sample_element(&mut rng);
                let analytic = model.jacobian(&g, &x);
                worst = worst.max((fd_jacobian(model, &g, &x) - analytic).abs() / analytic.abs().max(1.0));
            }
            vec![Measurement::labeled("max_rel_defect", worst, 0.0)]
        }
        "haar_mass" => {
            params::<NoParams>(raw)?;
            vec![Measurement::new(model.group().haar_density()?.integrate(), 1.0)]
        }
        "finite_fiber_sums" => {
            // s_! and t_! against a direct sum over the group elements
            let p: Count = params(raw)?;
            let group = model.group();
            let GroupModel::Finite { table } = &group else { bail!("needs a finite group") };
            let order = table.order();
            let mut worst = 0.0f64;
            let quad = quad()?;
            for u in ArrowBump::family(&model.grid, seed, p.tests.unwrap_or(3)) {
                for x in model.grid.nodes() {
                    let (mut s, mut t) = (0.0, 0.0);
                    for k in 0..order {
                        let g = GroupElement::Finite(k);
                        let gx = model.act(&g, &x);
                        s += u.eval(&g, &x) * sigma.rho.weight(&gx) / order as f64;
                        t += u.eval(&GroupElement::Finite(table.inverse(k)), &gx) * sigma.rho.weight(&gx) / order as f64;
                    }
                    worst = worst.max((s_fiber_integral_at(model, &quad, &sigma.rho, &u, &x) - s).abs());
                    worst = worst.max((t_fiber_integral_at(model, &quad, &sigma.rho, &u, &x) - t).abs());
                }
            }
            vec![Measurement::labeled("max_abs_defect", worst, 0.0)]
        }
        "invariance" | "inversion" => {
            let p: Count = params(raw)?;
            let tests = ArrowBump::family(&model.grid, seed, p.tests.unwrap_or(4));
            let d = if name == "invariance" {
                invariance_defect(model, sigma, &tests)?
            } else {
                inversion_invariance_check(model, sigma, &tests)?
            };
            vec![Measurement::labeled("defect", d, 0.0)]
        }
        "invariance_witness" => {
            let p: Count = params(raw)?;
            let bound = p.bound.unwrap_or(1e-3);
            let tests = ArrowBump::family(&model.grid, seed, p.tests.unwrap_or(4));
            vec![
                Measurement::at_least("invariance", invariance_defect(model, sigma, &tests)?, bound),
                Measurement::at_least("inversion", inversion_invariance_check(model, sigma, &tests)?, bound),
            ]
        }
        "averaging_image" => {
            let p: Count = params(raw)?;
            let quad = quad()?;
            let rho = &sigma.rho;
            let mut worst = 0.0f64;
            for u in ArrowBump::family(&model.grid, seed, p.count.unwrap_or(20)) {
                let diff = |y: &[f64]| {
                    s_fiber_integral_at(model, &quad, rho, &u, y) - t_fiber_integral_at(model, &quad, rho, &u, y)
                };
                for x in model.grid.nodes() {
                    worst = worst.max(average_at(model, &quad, rho, &diff, &x).abs());
                }
            }
            vec![Measurement::labeled("max_abs", worst, 0.0)]
        }
        "averaging_orbit" => {
            let p: WithF = params(raw)?;
            let f = closure(model, &p.f);
            let av = averaging(model, &sigma.rho, &f, f64::INFINITY, seed)?;
            vec![Measurement::labeled("orbit_defect", av.orbit_defect, 0.0)]
        }
        "averaging_finite" => {
            let p: Values = params(raw)?;
            let group = model.group();
            let GroupModel::Finite { table } = &group else { bail!("needs a finite group") };
            let grid = &model.grid;
            ensure!(p.values.len() == grid.len(), "values: expected {} entries, found {}", grid.len(), p.values.len());
            // the action permutes the grid nodes; recover the permutations
            let mut perms = Vec::new();
            for k in 0..table.order() {
                let mut perm = Vec::with_capacity(grid.len());
                for (i, x) in grid.nodes().enumerate() {
                    let y = model.act(&GroupElement::Finite(k), &x);
                    let j = grid.nearest(&y);
                    ensure!(
                        groupoid_measures::smooth::action::point_distance(grid, &grid.node(j), &y) < 1e-9,
                        "node {i} is not mapped onto a node"
                    );
                    perm.push(j);
                }
                perms.push(perm);
            }
            let g = action_groupoid(table, &perms)?;
            let haar = HaarWeight::new(vec![ratio(1, table.order() as i64); grid.len()])?;
            let exact = average_function(&g, &haar, &ObjectWeights::from_integers(&p.values))?.as_f64();
            let values = p.values.clone();
            let f = move |x: &[f64]| values[grid.nearest(x)] as f64;
            let quad = quad()?;
            let rho = groupoid_measures::smooth::HaarData::normalized();
            let worst = grid
                .nodes()
                .zip(&exact)
                .map(|(x, e)| (average_at(model, &quad, &rho, &f, &x) - e).abs())
                .fold(0.0f64, f64::max);
            vec![Measurement::labeled("max_abs_defect", worst, 0.0)]
        }
        "cutoff_normalization" => {
            let p: WithSeed = params(raw)?;
            let c = cutoff(model, sigma, &p.seed)?;
            let haar = model.group().haar_quadrature()?;
            let worst = model
                .grid
                .nodes()
                .map(|x| {
                    let total: f64 =
                        haar.iter().map(|(g, om)| { let y = model.act(g, &x); om * c.eval(&y) * sigma.rho.weight(&y) }).sum();
                    (total - 1.0).abs()
                })
                .fold(0.0f64, f64::max);
            vec![Measurement::labeled("max_defect", worst, 0.0)]
        }
        "weyl" => {
            let p: Weyl = params(raw)?;
            let r = weyl_check(model, sigma, &cutoff(model, sigma, &p.seed)?, &closure(model, &p.f))?;
            vec![Measurement::new(r.lhs, r.rhs)]
        }
        "weyl_closed_form" => {
            let p: Weyl = params(raw)?;
            ensure!(
                matches!(model.action, groupoid_measures::smooth::Action::RotationPolar { .. }),
                "needs the polar rotation model"
            );
            let exact = p.f.polar_integral().context("needs a radial function")?;
            let r = weyl_check(model, sigma, &cutoff(model, sigma, &p.seed)?, &closure(model, &p.f))?;
            vec![Measurement::labeled("lhs", r.lhs, exact), Measurement::labeled("rhs", r.rhs, exact)]
        }
        "weyl_seed_independence" => {
            let p: WeylSeeds = params(raw)?;
            let f = closure(model, &p.f);
            let a = weyl_check(model, sigma, &cutoff(model, sigma, &p.seeds[0])?, &f)?;
            let b = weyl_check(model, sigma, &cutoff(model, sigma, &p.seeds[1])?, &f)?;
            vec![Measurement::labeled("rhs", b.rhs, a.rhs)]
        }
        "volume_corollary" => {
            let p: WithSeed = params(raw)?;
            let c = cutoff(model, sigma, &p.seed)?;
            let volume = sigma.integrate(&model.grid, |_| 1.0);
            let orbits = model.orbit_space()?;
            let dim = model.grid.dim();
            let mu_b = induced_base_measure(model, sigma, &c)?;
            let volumes = orbits
                .grid()
                .nodes()
                .map(|b| orbit_volume(model, &sigma.rho, &orbits.representative(&b, dim)))
                .collect::<Result<Vec<f64>, _>>()?;
            let via_b = mu_b.eval_samples(&volumes);
            vec![Measurement::new(via_b, volume)]
        }
        "orbit_independence" => {
            let p: Count = params(raw)?;
            let quad = quad()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut worst = 0.0f64;
            for _ in 0..p.samples.unwrap_or(10) {
                let x = sample_point(&model.grid, &mut rng);
                let (g, _) = &quad[rng.gen_range(0..quad.len())];
                let a = orbit_density(model, &sigma.rho, &x)?;
                let b = orbit_density(model, &sigma.rho, &model.act(g, &x))?;
                worst = worst.max(a.defect(&b, model));
            }
            vec![Measurement::labeled("max_defect", worst, 0.0)]
        }
        "weinstein" => {
            let p: Expected = params(raw)?;
            vec![Measurement::new(weinstein_volume(model, sigma)?, p.expected)]
        }
        "weinstein_direct" => {
            let p: WithSeed = params(raw)?;
            let direct = weinstein_volume_direct(model, sigma, &cutoff(model, sigma, &p.seed)?);
            vec![Measurement::new(direct, weinstein_volume(model, sigma)?)]
        }
        "cocycle_additivity" => {
            let p: Count = params(raw)?;
            vec![Measurement::labeled("max_defect", cocycle_additivity_defect(model, sigma, seed, p.count.unwrap_or(100))?, 0.0)]
        }
        "cocycle_vanishes" => {
            let p: Count = params(raw)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut worst = 0.0f64;
            for _ in 0..p.samples.unwrap_or(100) {
                let x = sample_point(&model.grid, &mut rng);
                let g = model.action.sample_element(&mut rng);
                worst = worst.max(modular_cocycle(model, sigma, &g, &x)?.abs());
            }
            vec![Measurement::labeled("max_abs", worst, 0.0)]
        }
        "cocycle_value" => {
            let p: CocycleValue = params(raw)?;
            ensure!(p.x.len() == model.grid.dim(), "x: expected {} coordinates", model.grid.dim());
            let g = discrete_element(&model.group(), p.g)?;
            let c = modular_cocycle(model, sigma, &g, &p.x)?;
            let fd = (sigma.sigma0(&model.act(&g, &p.x)) * fd_jacobian(model, &g, &p.x).abs() / sigma.sigma0(&p.x)).ln();
            vec![Measurement::labeled("analytic", c, p.expected), Measurement::labeled("finite_difference", fd, p.expected)]
        }
        other => bail!("`{other}` does not apply to action models"),
    })
}

fn foliation(name: &str, fol: &FoliatedGrid, raw: &Value) -> Result<Vec<Measurement>> {
    let grid = fol.grid();
    Ok(match name {
        "stokes" => {
            let p: Foliation = params(raw)?;
            let m = p.m.unwrap_or_default().field(grid);
            vec![Measurement::labeled("abs", fol.stokes_check(&m, &DensityField::from_fn(grid, stokes_omega))?, 0.0)]
        }
        "stokes_order" => {
            let p: Foliation = params(raw)?;
            let intervals = grid.axis(0).n - 1;
            ensure!(intervals.is_multiple_of(2), "needs an even number of intervals");
            let err = |f: &FoliatedGrid| -> Result<f64> {
                let m = p.m.unwrap_or_default().field(f.grid());
                Ok(f.stokes_check(&m, &DensityField::from_fn(f.grid(), stokes_omega))?)
            };
            let coarse = FoliatedGrid::horizontal_unit_square(intervals / 2 + 1)?;
            let order = (err(&coarse)? / err(fol)?).log2();
            vec![Measurement::at_least("order", order, p.bound.unwrap_or(1.8))]
        }
        "stokes_witness" => {
            let p: Foliation = params(raw)?;
            let m = TransverseSpec::ExpX.field(grid);
            let bound = p.bound.unwrap_or(1e-2);
            vec![
                Measurement::at_least("stokes", fol.stokes_check(&m, &DensityField::from_fn(grid, stokes_omega))?, bound),
                Measurement::at_least("leafwise_variation", fol.leafwise_variation(&m)?, bound),
            ]
        }
        "ruelle_sullivan" => {
            let p: RuelleSullivan = params(raw)?;
            let m = p.m.unwrap_or_default().field(grid);
            let alpha = match p.alpha {
                AlphaSpec::Dx => OneForm::coordinate(grid, 0),
                AlphaSpec::Dy => OneForm::coordinate(grid, 1),
                AlphaSpec::Exact => fol.exterior_derivative(&DensityField::from_fn(grid, stokes_omega))?,
            };
            vec![Measurement::new(fol.ruelle_sullivan(&m, &alpha)?, p.expected)]
        }
        other => bail!("`{other}` does not apply to foliation models"),
    })
}

fn submersion(name: &str, model: &SubmersionGroupoidModel, raw: &Value) -> Result<Vec<Measurement>> {
    let p: Width = params(raw)?;
    let s2 = 2.0 * p.width.unwrap_or(0.3).powi(2);
    let [axis] = model.fiber_axes() else { bail!("needs exactly one fiber axis") };
    let axis = *axis;
    let total = model.total();
    let bump = |x: &[f64]| (-x.iter().map(|v| v * v).sum::<f64>() / s2).exp();
    Ok(match name {
        "exactness" => {
            let u = DensityField::from_fn(total, |x| -2.0 * x[axis] / s2 * bump(x));
            let report = exactness_probe(model, &u, groupoid_measures::tolerance::QUADRATURE)?;
            let err = report.antiderivative.zip_with(&DensityField::from_fn(total, bump), |a, b| a - b)?.max_abs();
            vec![Measurement::labeled("max_abs_defect", err, 0.0)]
        }
        "exactness_obstruction" => {
            let lump = DensityField::from_fn(total, |x| (-x[axis] * x[axis] / s2).exp() / (PI * s2).sqrt());
            let outcome = exactness_probe(model, &lump, groupoid_measures::tolerance::QUADRATURE);
            let rejected = matches!(outcome, Err(SmoothError::NonzeroFiberIntegral { .. }));
            vec![Measurement::labeled("rejected", if rejected { 1.0 } else { 0.0 }, 1.0)]
        }
        other => bail!("`{other}` does not apply to submersion models"),
    })
}

/// A fixed smooth non-separable test field.
fn test_field(grid: &Grid) -> DensityField {
    DensityField::from_fn(grid, |x| {
        x.iter().enumerate().map(|(k, v)| ((k + 1) as f64 * v).sin() + 0.3 * v * v).sum::<f64>().exp()
    })
}

fn density(name: &str, grid: &Grid, raw: &Value) -> Result<Vec<Measurement>> {
    Ok(match name {
        "gaussian_integral" => {
            params::<NoParams>(raw)?;
            ensure!(grid.dim() == 1, "needs a one-axis grid");
            let total = DensityField::from_fn(grid, |x| (-x[0] * x[0] / 2.0).exp()).integrate();
            vec![Measurement::new(total, TAU.sqrt())]
        }
        "fubini" => {
            params::<NoParams>(raw)?;
            ensure!(grid.dim() >= 2, "needs at least two axes");
            let rho = test_field(grid);
            let full = rho.integrate();
            let last = grid.dim() - 1;
            vec![
                Measurement::labeled("trailing", rho.fiber_integrate(&[last])?.integrate(), full),
                Measurement::labeled("leading", rho.fiber_integrate(&[0])?.integrate(), full),
            ]
        }
        "projection_composition" => {
            params::<NoParams>(raw)?;
            ensure!(grid.dim() == 3, "needs a three-axis grid");
            let mu = MeasureFunctional::from_density(&test_field(grid));
            let p01 = GridMap::projection(grid, &[0, 1])?;
            let p0 = GridMap::projection(p01.target(), &[0])?;
            let two_step = mu.pushforward(&p01)?.pushforward(&p0)?;
            let composed = mu.pushforward(&p01.then(&p0)?)?;
            let direct = mu.pushforward(&GridMap::projection(grid, &[0])?)?;
            let scale = direct.masses().iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let defect = |a: &MeasureFunctional| {
                a.masses().iter().zip(direct.masses()).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
            };
            vec![Measurement::labeled("two_step", defect(&two_step), 0.0), Measurement::labeled("composed", defect(&composed), 0.0)]
        }
        "bundle_witness" => {
            let p: Bundle = params(raw)?;
            let bundle = CircleBundle::new(p.circle_nodes.unwrap_or(32), grid.clone())?;
            let rho = DensityField::from_fn(bundle.total(), |x| (1.0 + 0.5 * x[0].cos()) * (1.0 + x[1..].iter().sum::<f64>().powi(2)));
            let bound = p.bound.unwrap_or(1e-2);
            let rejected = matches!(bundle.invariant_decompose(&rho, bound), Err(DensityError::NotInvariant { .. }));
            vec![
                Measurement::at_least("defect", bundle.invariance_defect(&rho)?, bound),
                Measurement::labeled("rejected", if rejected { 1.0 } else { 0.0 }, 1.0),
            ]
        }
        other => bail!("`{other}` does not apply to grid models"),
    })
}

pub fn evaluate(name: &str, model: &Model, raw: &Value, seed: u64) -> Result<Vec<Measurement>> {
    match model {
        Model::Action(m, sigma) => action(name, m, &sigma.build(m), raw, seed),
        Model::Foliation(f) => foliation(name, f, raw),
        Model::Submersion(s) => submersion(name, s, raw),
        Model::Grid(g) => density(name, g, raw),
        _ => unreachable!("dispatched by engine"),
    }
}
