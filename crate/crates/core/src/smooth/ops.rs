use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::action::{point_distance, sample_point, ActionGroupoidModel};
use super::data::{ArrowFunction, HaarData, PointFn, TransverseDensityData};
use super::SmoothError;
use crate::density::{DensityField, GridMap, GroupElement, MeasureFunctional};

/// Orbit volumes below this are treated as vanishing.
pub const VOLUME_THRESHOLD: f64 = 1e-12;

/// Points of an orbit closer than this are merged.
pub const POINT_MERGE: f64 = 1e-9;

/// `s_!^ρ(u)(x) = ∫_Γ u(g, x) w(a(g, x)) dHaar(g)`.
pub fn s_fiber_integral_at<U: ArrowFunction + ?Sized>(
    model: &ActionGroupoidModel,
    quad: &[(GroupElement, f64)],
    rho: &HaarData,
    u: &U,
    x: &[f64],
) -> f64 {
    quad.iter().map(|(g, om)| om * u.eval(g, x) * rho.weight(&model.act(g, x))).sum()
}

/// `t_!^ρ(u)(y) = ∫_Γ u(g⁻¹, a(g, y)) w(a(g, y)) dHaar(g)`: the `t`-fiber over
/// `y` is `{(g⁻¹, a(g, y))}` with the density `←ρ = inv^*→ρ`.
pub fn t_fiber_integral_at<U: ArrowFunction + ?Sized>(
    model: &ActionGroupoidModel,
    quad: &[(GroupElement, f64)],
    rho: &HaarData,
    u: &U,
    y: &[f64],
) -> f64 {
    let group = model.group();
    quad.iter()
        .map(|(g, om)| {
            let gy = model.act(g, y);
            om * u.eval(&group.inverse(g), &gy) * rho.weight(&gy)
        })
        .sum()
}

/// `s_!^ρ(u)` sampled at the nodes of the model grid.
pub fn s_fiber_integrate<U: ArrowFunction + ?Sized>(
    model: &ActionGroupoidModel,
    rho: &HaarData,
    u: &U,
) -> Result<DensityField, SmoothError> {
    let quad = model.quadrature()?;
    Ok(DensityField::from_fn(&model.grid, |x| s_fiber_integral_at(model, &quad, rho, u, x)))
}

/// `t_!^ρ(u)` sampled at the nodes of the model grid.
pub fn t_fiber_integrate<U: ArrowFunction + ?Sized>(
    model: &ActionGroupoidModel,
    rho: &HaarData,
    u: &U,
) -> Result<DensityField, SmoothError> {
    let quad = model.quadrature()?;
    Ok(DensityField::from_fn(&model.grid, |x| t_fiber_integral_at(model, &quad, rho, u, x)))
}

/// `max_{u ∈ U} |μ_σ(s_! u) − μ_σ(t_! u)|`.
pub fn invariance_defect<U: ArrowFunction>(
    model: &ActionGroupoidModel,
    sigma: &TransverseDensityData,
    tests: &[U],
) -> Result<f64, SmoothError> {
    let quad = model.quadrature()?;
    let mut worst = 0.0f64;
    for u in tests {
        let s = sigma.integrate(&model.grid, |x| s_fiber_integral_at(model, &quad, &sigma.rho, u, x));
        let t = sigma.integrate(&model.grid, |x| t_fiber_integral_at(model, &quad, &sigma.rho, u, x));
        worst = worst.max((s - t).abs());
    }
    Ok(worst)
}

/// `μ_{ρ_G}(u) = ∫_M (∫_{s⁻¹(x)} u d→ρ) τ`.
pub fn groupoid_measure<U: ArrowFunction + ?Sized>(
    model: &ActionGroupoidModel,
    sigma: &TransverseDensityData,
    u: &U,
) -> Result<f64, SmoothError> {
    let quad = model.quadrature()?;
    Ok(sigma.integrate(&model.grid, |x| s_fiber_integral_at(model, &quad, &sigma.rho, u, x)))
}

/// `max_{u ∈ U} |μ_{ρ_G}(u) − μ_{ρ_G}(u ∘ inv)|`, where
/// `inv(g, x) = (g⁻¹, a(g, x))`.
pub fn inversion_invariance_check<U: ArrowFunction>(
    model: &ActionGroupoidModel,
    sigma: &TransverseDensityData,
    tests: &[U],
) -> Result<f64, SmoothError> {
    let group = model.group();
    let mut worst = 0.0f64;
    for u in tests {
        let direct = groupoid_measure(model, sigma, u)?;
        let inverted = |g: &GroupElement, x: &[f64]| u.eval(&group.inverse(g), &model.act(g, x));
        let flipped = groupoid_measure(model, sigma, &inverted)?;
        worst = worst.max((direct - flipped).abs());
    }
    Ok(worst)
}

/// `Av(h ρ)(x) = ∫_{s⁻¹(x)} h(t(g)) d→ρ(g) = ∫_Γ h(a(g, x)) w(a(g, x)) dHaar(g)`.
pub fn average_at(
    model: &ActionGroupoidModel,
    quad: &[(GroupElement, f64)],
    rho: &HaarData,
    h: &dyn Fn(&[f64]) -> f64,
    x: &[f64],
) -> f64 {
    quad.iter()
        .map(|(g, om)| {
            let gx = model.act(g, x);
            om * h(&gx) * rho.weight(&gx)
        })
        .sum()
}

/// The average of a section as a function on the orbit-space grid, with the
/// measured orbit-constancy defect.
#[derive(Debug, Clone, PartialEq)]
pub struct Averaged {
    pub values: DensityField,
    pub orbit_defect: f64,
}

/// Number of off-node group elements used to probe orbit constancy.
const ORBIT_PROBES: usize = 3;

/// Averages `h ρ` onto the orbit space. Orbit constancy is checked at every
/// grid node against the orbit representative and against translates by
/// sampled (generally off-node) group elements; the defect is relative to
/// `max |Av|`.
pub fn averaging(
    model: &ActionGroupoidModel,
    rho: &HaarData,
    h: &dyn Fn(&[f64]) -> f64,
    tolerance: f64,
    seed: u64,
) -> Result<Averaged, SmoothError> {
    let quad = model.quadrature()?;
    let orbits = model.orbit_space()?;
    let dim = model.grid.dim();
    let values =
        DensityField::from_fn(orbits.grid(), |b| average_at(model, &quad, rho, h, &orbits.representative(b, dim)));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probes: Vec<GroupElement> = (0..ORBIT_PROBES).map(|_| model.action.sample_element(&mut rng)).collect();
    let mut defect = 0.0f64;
    let mut scale = values.max_abs();
    for x in model.grid.nodes() {
        let here = average_at(model, &quad, rho, h, &x);
        scale = scale.max(here.abs());
        let rep = average_at(model, &quad, rho, h, &orbits.representative(&orbits.project(&x), dim));
        defect = defect.max((here - rep).abs());
        for g in &probes {
            let moved = average_at(model, &quad, rho, h, &model.act(g, &x));
            defect = defect.max((here - moved).abs());
        }
    }
    let orbit_defect = if scale > 0.0 { defect / scale } else { defect };
    if orbit_defect > tolerance {
        return Err(SmoothError::NotOrbitConstant { defect: orbit_defect, tolerance });
    }
    Ok(Averaged { values, orbit_defect })
}

/// A cut-off function `c = φ / A`, `A(x) = ∫_{s⁻¹(x)} φ(t(g)) d→ρ(g)`, so that
/// `∫_{s⁻¹(x)} c(t(g)) d→ρ(g) = 1`.
#[derive(Clone)]
pub struct Cutoff {
    model: ActionGroupoidModel,
    quad: Vec<(GroupElement, f64)>,
    rho: HaarData,
    phi: PointFn,
}

impl std::fmt::Debug for Cutoff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Cutoff").field("model", &self.model).finish_non_exhaustive()
    }
}

impl Cutoff {
    /// `A(x)`: the `s`-fiber average of the seed.
    pub fn seed_average(&self, x: &[f64]) -> f64 {
        average_at(&self.model, &self.quad, &self.rho, &*self.phi, x)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.phi)(x) / self.seed_average(x)
    }

    /// `∫_{s⁻¹(x)} c(t(g)) d→ρ(g)`, recomputed from `c`.
    pub fn normalization_at(&self, x: &[f64]) -> f64 {
        average_at(&self.model, &self.quad, &self.rho, &|y| self.eval(y), x)
    }

    /// `max_x |normalization(x) − 1|` over the grid nodes.
    pub fn normalization_defect(&self) -> f64 {
        self.model.grid.nodes().fold(0.0f64, |m, x| m.max((self.normalization_at(&x) - 1.0).abs()))
    }
}

/// Builds the cut-off from a seed `φ ≥ 0`; fails if the saturation of
/// `supp φ` misses a grid node (fiber mass at most `threshold`).
pub fn cutoff_construct(
    model: &ActionGroupoidModel,
    rho: &HaarData,
    phi: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    threshold: f64,
) -> Result<Cutoff, SmoothError> {
    let cutoff = Cutoff { model: model.clone(), quad: model.quadrature()?, rho: rho.clone(), phi: std::sync::Arc::new(phi) };
    for (i, x) in model.grid.nodes().enumerate() {
        let mass = cutoff.seed_average(&x);
        if mass <= threshold {
            return Err(SmoothError::Saturation { node: i, mass });
        }
    }
    Ok(cutoff)
}

/// Both sides of `∫_M f dμ_τ = ∫_B (∫_{O_b} f dμ_{ρ_O}) dμ_σ(b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylReport {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
}

/// `∫_{O_x} f dμ_{ρ_O} = ∫_Γ f(a(g, x)) w(a(g, x)) dHaar(g)`.
pub fn orbit_integral(
    model: &ActionGroupoidModel,
    quad: &[(GroupElement, f64)],
    rho: &HaarData,
    f: &dyn Fn(&[f64]) -> f64,
    x: &[f64],
) -> f64 {
    average_at(model, quad, rho, f, x)
}

/// Weyl-type disintegration. The right-hand side uses `μ_σ(h) = ∫_M c · (h∘π) τ`
/// with `h` the orbit integral of `f`. Invariance of `σ` is a precondition.
pub fn weyl_check(
    model: &ActionGroupoidModel,
    sigma: &TransverseDensityData,
    cutoff: &Cutoff,
    f: &dyn Fn(&[f64]) -> f64,
) -> Result<WeylReport, SmoothError> {
    let quad = model.quadrature()?;
    let lhs = sigma.integrate(&model.grid, f);
    let rhs = sigma.integrate(&model.grid, |x| cutoff.eval(x) * orbit_integral(model, &quad, &sigma.rho, f, x));
    let rel_err = if lhs != 0.0 { (lhs - rhs).abs() / lhs.abs() } else { (lhs - rhs).abs() };
    Ok(WeylReport { lhs, rhs, rel_err })
}

/// The induced measure `μ_σ` on the orbit-space grid: the pushforward of
/// `c τ` along the quotient map.
pub fn induced_base_measure(
    model: &ActionGroupoidModel,
    sigma: &TransverseDensityData,
    cutoff: &Cutoff,
) -> Result<MeasureFunctional, SmoothError> {
    let orbits = model.orbit_space()?;
    let density = DensityField::from_fn(&model.grid, |x| cutoff.eval(x) * sigma.tau(x));
    let quotient = GridMap::from_fn(&model.grid, orbits.grid(), |x| orbits.project(x));
    Ok(MeasureFunctional::from_density(&density).pushforward(&quotient)?)
}

/// A finite atomic measure on an orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitDensity {
    pub points: Vec<Vec<f64>>,
    pub masses: Vec<f64>,
}

impl OrbitDensity {
    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// Largest mass discrepancy between the two atomic measures, matching atoms
    /// within [`POINT_MERGE`]; unmatched atoms count in full.
    pub fn defect(&self, other: &Self, model: &ActionGroupoidModel) -> f64 {
        let one_way = |a: &Self, b: &Self| {
            a.points.iter().zip(&a.masses).fold(0.0f64, |worst, (p, m)| {
                let matched: f64 = b
                    .points
                    .iter()
                    .zip(&b.masses)
                    .filter(|(q, _)| point_distance(&model.grid, p, q) <= POINT_MERGE)
                    .map(|(_, m)| m)
                    .sum();
                worst.max((m - matched).abs())
            })
        };
        one_way(self, other).max(one_way(other, self))
    }
}

/// `μ_{O_x} = t_!(μ^x)`: atoms `a(g_j, x)` with masses `ω_j w(a(g_j, x))`,
/// coincident atoms merged.
pub fn orbit_density(model: &ActionGroupoidModel, rho: &HaarData, x: &[f64]) -> Result<OrbitDensity, SmoothError> {
    let mut out = OrbitDensity { points: Vec::new(), masses: Vec::new() };
    for (g, om) in model.quadrature()? {
        let y = model.act(&g, x);
        let m = om * rho.weight(&y);
        match out.points.iter().position(|p| point_distance(&model.grid, p, &y) <= POINT_MERGE) {
            Some(k) => out.masses[k] += m,
            None => {
                out.points.push(y);
                out.masses.push(m);
            }
        }
    }
    Ok(out)
}

/// `Vol(O_x, μ_{O_x})`.
pub fn orbit_volume(model: &ActionGroupoidModel, rho: &HaarData, x: &[f64]) -> Result<f64, SmoothError> {
    let quad = model.quadrature()?;
    Ok(average_at(model, &quad, rho, &|_| 1.0, x))
}

/// `Vol(B, μ_σ) = ∫_M Vol(O_x)⁻¹ dμ_τ(x)`.
pub fn weinstein_volume(model: &ActionGroupoidModel, sigma: &TransverseDensityData) -> Result<f64, SmoothError> {
    let quad = model.quadrature()?;
    let mut volumes = Vec::with_capacity(model.grid.len());
    for (i, x) in model.grid.nodes().enumerate() {
        let v = average_at(model, &quad, &sigma.rho, &|_| 1.0, &x);
        if v <= VOLUME_THRESHOLD {
            return Err(SmoothError::ZeroOrbitVolume { node: i, volume: v });
        }
        volumes.push(v);
    }
    let integrand = DensityField::from_fn(&model.grid, |x| sigma.tau(x));
    Ok(integrand.zip_with(&DensityField::new(model.grid.clone(), volumes)?, |t, v| t / v)?.integrate())
}

/// `μ_σ(1) = ∫_M c τ`, the direct definition of the volume of `B`.
pub fn weinstein_volume_direct(model: &ActionGroupoidModel, sigma: &TransverseDensityData, cutoff: &Cutoff) -> f64 {
    sigma.integrate(&model.grid, |x| cutoff.eval(x))
}

/// `c_σ(g, x) = ln(σ₀(a(g,x)) |J(g,x)| / σ₀(x))` with `σ₀ = τ / w`. The adjoint
/// factor through `D(𝔤*)` is trivial for the abelian and finite model groups.
pub fn modular_cocycle(
    model: &ActionGroupoidModel,
    sigma: &TransverseDensityData,
    g: &GroupElement,
    x: &[f64],
) -> Result<f64, SmoothError> {
    let y = model.act(g, x);
    let (sx, sy) = (sigma.sigma0(x), sigma.sigma0(&y));
    if !(sx > 0.0) {
        return Err(SmoothError::DegenerateDensity { point: x.to_vec() });
    }
    if !(sy > 0.0) {
        return Err(SmoothError::DegenerateDensity { point: y });
    }
    Ok((sy * model.jacobian(g, x).abs() / sx).ln())
}

/// `max |c(gh, x) − c(g, a(h,x)) − c(h, x)|` over `count` seeded composable
/// pairs, sampled uniformly over group × group × the grid box.
pub fn cocycle_additivity_defect(
    model: &ActionGroupoidModel,
    sigma: &TransverseDensityData,
    seed: u64,
    count: usize,
) -> Result<f64, SmoothError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let group = model.group();
    let mut worst = 0.0f64;
    for _ in 0..count {
        let x = sample_point(&model.grid, &mut rng);
        let g = model.action.sample_element(&mut rng);
        let h = model.action.sample_element(&mut rng);
        let hx = model.act(&h, &x);
        let lhs = modular_cocycle(model, sigma, &group.mul(&g, &h), &x)?;
        let rhs = modular_cocycle(model, sigma, &g, &hx)? + modular_cocycle(model, sigma, &h, &x)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}
