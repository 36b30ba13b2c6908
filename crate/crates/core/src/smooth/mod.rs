//! Parametrized proper groupoids and transverse-measure operations on them.
//!
//! Action groupoids `Γ ⋉ M` are built from an [`Action`] of a circle, torus,
//! finite group or the integers on a grid over `M`. Haar data is a weight `w`
//! on `M` with `→ρ(g, x) = w(a(g, x)) dHaar(g)` on the `s`-fiber over `x`; a
//! transverse density `σ = ρ^∨ ⊗ τ` pairs it with a density `τ` on `M`. With
//! these conventions `σ` is invariant exactly when `σ₀ = τ / w` is an invariant
//! density on `M`, which is also the quantity entering the modular cocycle.
//!
//! Functions on `M` and on arrows are evaluated pointwise rather than
//! interpolated, so identities that rely only on the node subgroup of the
//! Haar quadrature (averaging, cut-off normalization) hold to rounding.

pub mod action;
pub mod data;
pub mod foliation;
pub mod ops;
pub mod submersion;

use thiserror::Error;

pub use action::{Action, ActionAxiomReport, ActionGroupoidModel, OrbitChart, OrbitSpace};
pub use data::{ArrowBump, ArrowFunction, HaarData, PointFn, TransverseDensityData};
pub use foliation::{FoliatedGrid, OneForm};
pub use ops::{
    average_at, averaging, cocycle_additivity_defect, cutoff_construct, groupoid_measure, induced_base_measure,
    invariance_defect, inversion_invariance_check, modular_cocycle, orbit_density, orbit_integral, orbit_volume,
    s_fiber_integral_at, s_fiber_integrate, t_fiber_integral_at, t_fiber_integrate, weinstein_volume,
    weinstein_volume_direct, weyl_check, Averaged, Cutoff, OrbitDensity, WeylReport,
};
pub use submersion::{exactness_probe, ExactnessReport, SubmersionGroupoidModel};

use crate::density::DensityError;

#[derive(Debug, Error)]
pub enum SmoothError {
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error("model descriptor: {0}")]
    Json(#[from] serde_json::Error),
    #[error("expected dimension {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("operation requires a proper model with a compact group")]
    NotProper,
    #[error("saturation failure: seed fiber mass {mass:.3e} at node {node}")]
    Saturation { node: usize, mass: f64 },
    #[error("average is not constant on orbits: defect {defect:.3e} exceeds {tolerance:.3e}")]
    NotOrbitConstant { defect: f64, tolerance: f64 },
    #[error("orbit volume {volume:.3e} at node {node} is below threshold")]
    ZeroOrbitVolume { node: usize, volume: f64 },
    #[error("transverse density vanishes at {point:?}")]
    DegenerateDensity { point: Vec<f64> },
    #[error("nonzero fiber integral {value:.3e} on fiber {fiber}")]
    NonzeroFiberIntegral { fiber: usize, value: f64 },
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{LN_2, PI, TAU};

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::density::{Axis, DensityField, GroupElement, Grid};
    use crate::finite::{self, FiniteGroup};

    fn square(half: f64, n: usize) -> Grid {
        Grid::new(vec![Axis::bounded(-half, half, n); 2]).unwrap()
    }

    fn rotation(n_group: usize, half: f64, n: usize) -> ActionGroupoidModel {
        ActionGroupoidModel::new(Action::Rotation2d { nodes: n_group }, square(half, n)).unwrap()
    }

    fn annulus(n: usize) -> ActionGroupoidModel {
        let grid = Grid::new(vec![Axis::bounded(1.0, 2.0, n), Axis::circle(n)]).unwrap();
        ActionGroupoidModel::new(Action::RotationPolar { nodes: n }, grid).unwrap()
    }

    fn circle(action: Action, n: usize) -> ActionGroupoidModel {
        ActionGroupoidModel::new(action, Grid::new(vec![Axis::circle(n)]).unwrap()).unwrap()
    }

    fn reflection_line(n: usize) -> ActionGroupoidModel {
        ActionGroupoidModel::new(Action::Reflection, Grid::new(vec![Axis::bounded(-1.0, 1.0, n)]).unwrap()).unwrap()
    }

    fn every_model() -> Vec<ActionGroupoidModel> {
        vec![
            rotation(16, 2.0, 9),
            annulus(16),
            circle(Action::CircleTranslation { nodes: 12 }, 12),
            ActionGroupoidModel::new(
                Action::TorusTranslation { nodes: 6 },
                Grid::new(vec![Axis::circle(6), Axis::circle(6)]).unwrap(),
            )
            .unwrap(),
            reflection_line(5),
            circle(Action::Antipodal, 8),
            ActionGroupoidModel::new(Action::Scaling, Grid::new(vec![Axis::bounded(0.5, 3.0, 9)]).unwrap()).unwrap(),
            ActionGroupoidModel::new(Action::Trivial, square(1.0, 5)).unwrap(),
        ]
    }

    #[test]
    fn action_axioms_hold_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for model in every_model() {
            let report = model.check_axioms(&mut rng, 200);
            assert!(report.max() <= 1e-9, "{:?}: {report:?}", model.action);
        }
    }

    #[test]
    fn jacobians_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for model in every_model() {
            for _ in 0..20 {
                let x = action::sample_point(&model.grid, &mut rng);
                let g = model.action.sample_element(&mut rng);
                let eps = 1e-6;
                let d = model.grid.dim();
                let mut jac = vec![vec![0.0; d]; d];
                for k in 0..d {
                    let mut plus = x.clone();
                    let mut minus = x.clone();
                    plus[k] += eps;
                    minus[k] -= eps;
                    let (fp, fm) = (model.act(&g, &plus), model.act(&g, &minus));
                    for i in 0..d {
                        let mut diff = fp[i] - fm[i];
                        if model.grid.axis(i).periodic {
                            diff = (diff + PI).rem_euclid(TAU) - PI;
                        }
                        jac[i][k] = diff / (2.0 * eps);
                    }
                }
                let det = if d == 1 { jac[0][0] } else { jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0] };
                let analytic = model.jacobian(&g, &x);
                assert!((det - analytic).abs() <= 1e-6 * analytic.abs().max(1.0), "{:?} {g:?}", model.action);
            }
        }
    }

    #[test]
    fn models_round_trip_through_json() {
        for model in every_model() {
            let text = serde_json::to_string(&model).unwrap();
            assert_eq!(ActionGroupoidModel::from_json(&text).unwrap(), model);
        }
        let bad = r#"{"action":{"kind":"rotation2d","nodes":8},"grid":{"axes":[{"n":4,"lo":0.0,"hi":1.0}]}}"#;
        assert!(matches!(ActionGroupoidModel::from_json(bad), Err(SmoothError::Dimension { .. })));
    }

    #[test]
    fn s_fiber_integration_examples() {
        let model = rotation(32, 2.0, 9);
        let one = s_fiber_integrate(&model, &HaarData::normalized(), &|_: &GroupElement, _: &[f64]| 1.0).unwrap();
        assert!(one.values().iter().all(|v| (v - 1.0).abs() < 1e-14));

        // Z/2 acting on {±1}·x: two explicit terms, each with Haar weight 1/2.
        let refl = reflection_line(5);
        let w = |x: &[f64]| 2.0 + x[0];
        let rho = HaarData::from_fn(w);
        let u = |g: &GroupElement, x: &[f64]| match g {
            GroupElement::Finite(0) => x[0] * x[0] + 1.0,
            _ => 3.0 * x[0],
        };
        let s = s_fiber_integrate(&refl, &rho, &u).unwrap();
        let t = t_fiber_integrate(&refl, &rho, &u).unwrap();
        for (i, x) in refl.grid.nodes().enumerate() {
            let x = x[0];
            let s_hand = 0.5 * (x * x + 1.0) * (2.0 + x) + 0.5 * (3.0 * x) * (2.0 - x);
            // t-fiber over y: the arrows (e, y) and (σ, −y), weighted by w at their sources
            let t_hand = 0.5 * (x * x + 1.0) * (2.0 + x) + 0.5 * (3.0 * -x) * (2.0 - x);
            assert!((s.values()[i] - s_hand).abs() < 1e-14);
            assert!((t.values()[i] - t_hand).abs() < 1e-14);
        }

        let heavy = HaarData::constant(3.0);
        let u1 = |_: &GroupElement, x: &[f64]| x[0].sin() + x[1];
        let s = s_fiber_integrate(&model, &heavy, &u1).unwrap();
        for (i, x) in model.grid.nodes().enumerate() {
            assert!((s.values()[i] - 3.0 * (x[0].sin() + x[1])).abs() < 1e-13);
        }
    }

    #[test]
    fn invariance_defect_examples() {
        let model = rotation(48, 4.0, 81);
        let tests = ArrowBump::family(&model.grid, 3, 4);
        let lebesgue = TransverseDensityData::lebesgue(&model);
        let d = invariance_defect(&model, &lebesgue, &tests).unwrap(); assert!(d < 1e-6, "{d}");
        let tilted = TransverseDensityData::new(HaarData::normalized(), |x| x[0].exp());
        assert!(invariance_defect(&model, &tilted, &tests).unwrap() > 0.01);

        let trivial = ActionGroupoidModel::new(Action::Trivial, square(1.0, 9)).unwrap();
        let sigma = TransverseDensityData::new(HaarData::from_fn(|x| 1.0 + x[0] * x[0]), |x| 2.0 + x[1]);
        let tests = ArrowBump::family(&trivial.grid, 5, 3);
        assert_eq!(invariance_defect(&trivial, &sigma, &tests).unwrap(), 0.0);
    }

    #[test]
    fn weighted_haar_data_is_invariant_when_tau_over_w_is() {
        // σ₀ = τ / w invariant: w = 1 + r², τ = (1 + r²)·Lebesgue.
        let model = rotation(48, 4.0, 81);
        let r2 = |x: &[f64]| 1.0 + x[0] * x[0] + x[1] * x[1];
        let sigma = TransverseDensityData::new(HaarData::from_fn(r2), r2);
        let tests = ArrowBump::family(&model.grid, 9, 3);
        assert!(invariance_defect(&model, &sigma, &tests).unwrap() < 1e-6);
        assert!(inversion_invariance_check(&model, &sigma, &tests).unwrap() < 1e-6);
    }

    #[test]
    fn inversion_check_examples() {
        let model = rotation(48, 4.0, 81);
        let tests = ArrowBump::family(&model.grid, 3, 4);
        let lebesgue = TransverseDensityData::lebesgue(&model);
        assert!(inversion_invariance_check(&model, &lebesgue, &tests).unwrap() < 1e-6);
        let tilted = TransverseDensityData::new(HaarData::normalized(), |x| x[0].exp());
        assert!(inversion_invariance_check(&model, &tilted, &tests).unwrap() > 1e-3);

        let refl = reflection_line(9);
        let counting = TransverseDensityData::new(HaarData::constant(2.0), |_| 1.0);
        let tests = ArrowBump::family(&refl.grid, 1, 5);
        assert!(inversion_invariance_check(&refl, &counting, &tests).unwrap() <= 1e-15);
    }

    #[test]
    fn averaging_examples() {
        let model = rotation(64, 2.0, 33);
        let rho = HaarData::normalized();
        let profile = |r: f64| (-(r - 1.0).powi(2) * 4.0).exp();
        let radial = move |x: &[f64]| profile(x[0].hypot(x[1]));
        let av = averaging(&model, &rho, &radial, 1e-9, 1).unwrap();
        for (b, v) in av.values.grid().nodes().zip(av.values.values()) {
            assert!((v - profile(b[0])).abs() < 1e-12);
        }
        assert!(av.orbit_defect < 1e-12);

        let skew = |x: &[f64]| (x[0] - 0.3).exp();
        let smeared = averaging(&model, &rho, &skew, 1e-6, 1).unwrap();
        assert!(smeared.orbit_defect < 1e-6);

        let scaling =
            ActionGroupoidModel::new(Action::Scaling, Grid::new(vec![Axis::bounded(1.0, 2.0, 5)]).unwrap()).unwrap();
        assert!(matches!(averaging(&scaling, &rho, &skew, 1e-6, 1), Err(SmoothError::NotProper)));
    }

    #[test]
    fn averaging_kills_image_of_s_minus_t() {
        let model = rotation(32, 2.0, 17);
        let quad = model.quadrature().unwrap();
        let rho = HaarData::from_fn(|x| 1.0 + 0.3 * x[0]);
        for u in ArrowBump::family(&model.grid, 17, 5) {
            let diff = |y: &[f64]| {
                s_fiber_integral_at(&model, &quad, &rho, &u, y) - t_fiber_integral_at(&model, &quad, &rho, &u, y)
            };
            let worst = model.grid.nodes().map(|x| average_at(&model, &quad, &rho, &diff, &x).abs()).fold(0.0, f64::max);
            assert!(worst < 1e-12, "{worst}");
        }
    }

    #[test]
    fn averaging_agrees_with_the_finite_engine() {
        let refl = reflection_line(5);
        let values = [3i64, -1, 4, 1, -5];
        let f = move |x: &[f64]| values[((x[0] + 1.0) * 2.0).round() as usize] as f64;
        let quad = refl.quadrature().unwrap();
        let rho = HaarData::normalized();

        let group = FiniteGroup::cyclic(2);
        let perm = vec![(0..5).collect::<Vec<_>>(), (0..5).rev().collect()];
        let g = finite::constructions::action_groupoid(&group, &perm).unwrap();
        let haar = finite::HaarWeight::new(vec![finite::linalg::ratio(1, 2); 5]).unwrap();
        let exact = finite::average_function(&g, &haar, &finite::ObjectWeights::from_integers(&values)).unwrap();
        for (i, x) in refl.grid.nodes().enumerate() {
            assert_eq!(average_at(&refl, &quad, &rho, &f, &x), exact.as_f64()[i]);
        }
    }

    #[test]
    fn cutoff_examples() {
        let circ = circle(Action::CircleTranslation { nodes: 24 }, 24);
        let c = cutoff_construct(&circ, &HaarData::normalized(), |_| 1.0, 1e-12).unwrap();
        assert!(circ.grid.nodes().all(|x| (c.eval(&x) - 1.0).abs() < 1e-15));

        let model = rotation(64, 2.0, 33);
        let rho = HaarData::normalized();
        let c = cutoff_construct(&model, &rho, |x| (-(x[0] - 0.5).powi(2) - x[1].powi(2)).exp(), 1e-12).unwrap();
        // independent per-node recomputation of ∫_{s⁻¹(x)} c(t(g)) dμ^x
        let quad = model.quadrature().unwrap();
        for x in model.grid.nodes() {
            let total: f64 = quad.iter().map(|(g, om)| om * c.eval(&model.act(g, &x))).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
        assert!(c.normalization_defect() < 1e-12);

        let off = cutoff_construct(&model, &rho, |x| (x[0].hypot(x[1]) - 0.5).max(0.0), 1e-12);
        assert!(matches!(off, Err(SmoothError::Saturation { .. })));
    }

    #[test]
    fn weyl_formula_on_annulus() {
        let model = annulus(64);
        let sigma = TransverseDensityData::lebesgue(&model);
        let bump = |x: &[f64]| {
            let (px, py) = (x[0] * x[1].cos(), x[0] * x[1].sin());
            (-((px - 1.5).powi(2) + py * py) / (2.0 * 0.08f64.powi(2))).exp()
        };
        let seed_a = cutoff_construct(&model, &sigma.rho, |x| (-(x[0] * x[1].cos() - 1.5).powi(2)).exp(), 1e-12).unwrap();
        let seed_b = cutoff_construct(&model, &sigma.rho, |x| 1.0 + 0.9 * x[1].sin().powi(2) * x[0], 1e-12).unwrap();
        let a = weyl_check(&model, &sigma, &seed_a, &bump).unwrap();
        let b = weyl_check(&model, &sigma, &seed_b, &bump).unwrap();
        assert!(a.rel_err < 1e-6 && b.rel_err < 1e-6);
        assert!((a.rhs - b.rhs).abs() <= 2e-6 * a.rhs.abs());

        // radial f: polar closed form 2π ∫ r e^{-((r-1.5)/0.1)²} dr = 2π · 1.5 · 0.1 √π
        let radial = |x: &[f64]| (-((x[0] - 1.5) / 0.1).powi(2)).exp();
        let fine = annulus(256);
        let fine_sigma = TransverseDensityData::lebesgue(&fine);
        let c = cutoff_construct(&fine, &fine_sigma.rho, |x| 1.0 + x[1].cos().powi(2), 1e-12).unwrap();
        let r = weyl_check(&fine, &fine_sigma, &c, &radial).unwrap();
        let exact = TAU * 1.5 * 0.1 * PI.sqrt();
        assert!((r.lhs - exact).abs() / exact < 1e-6);
        assert!(r.rel_err < 1e-6);

        // f ≡ 1: lhs = Vol(M, τ), rhs through the base measure on B
        let ones = weyl_check(&model, &sigma, &seed_a, &|_| 1.0).unwrap();
        let vol = DensityField::from_fn(&model.grid, |x| x[0]).integrate();
        assert!((ones.lhs - vol).abs() < 1e-12 * vol);
        let mu_b = induced_base_measure(&model, &sigma, &seed_a).unwrap();
        let via_b = mu_b.eval(|b| orbit_volume(&model, &sigma.rho, &[b[0], 0.0]).unwrap());
        assert!((via_b - vol).abs() < 1e-9 * vol);
    }

    #[test]
    fn weyl_formula_is_an_identity_for_the_trivial_group() {
        let model = ActionGroupoidModel::new(Action::Trivial, square(1.0, 17)).unwrap();
        let sigma = TransverseDensityData::new(HaarData::from_fn(|x| 2.0 + x[0]), |x| 1.0 + x[1] * x[1]);
        let c = cutoff_construct(&model, &sigma.rho, |x| 1.0 + x[0] * x[0], 1e-12).unwrap();
        let r = weyl_check(&model, &sigma, &c, &|x| (x[0] * 3.0).sin() + 2.0).unwrap();
        assert!(r.rel_err < 1e-14);
    }

    #[test]
    fn orbit_density_examples() {
        let model = rotation(64, 2.0, 9);
        let rho = HaarData::normalized();
        let orbit = orbit_density(&model, &rho, &[0.0, 1.5]).unwrap();
        assert_eq!(orbit.points.len(), 64);
        assert!((orbit.total_mass() - 1.0).abs() < 1e-14);
        assert!(orbit.masses.iter().all(|m| (m - 1.0 / 64.0).abs() < 1e-16));
        assert!(orbit.points.iter().all(|p| (p[0].hypot(p[1]) - 1.5).abs() < 1e-14));

        let origin = orbit_density(&model, &rho, &[0.0, 0.0]).unwrap();
        assert_eq!(origin.points.len(), 1);
        assert!((origin.masses[0] - 1.0).abs() < 1e-14);

        let quad = model.quadrature().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let x = action::sample_point(&model.grid, &mut rng);
            let (g, _) = &quad[rand::Rng::gen_range(&mut rng, 0..quad.len())];
            let a = orbit_density(&model, &rho, &x).unwrap();
            let b = orbit_density(&model, &rho, &model.act(g, &x)).unwrap();
            assert!(a.defect(&b, &model) < 1e-9);
        }
    }

    #[test]
    fn weinstein_volume_examples() {
        let trivial = ActionGroupoidModel::new(Action::Trivial, square(1.0, 9)).unwrap();
        let sigma = TransverseDensityData::new(HaarData::normalized(), |x| 1.0 + x[0] * x[0]);
        let vol = sigma.integrate(&trivial.grid, |_| 1.0);
        assert!((weinstein_volume(&trivial, &sigma).unwrap() - vol).abs() < 1e-14);

        let antipodal = circle(Action::Antipodal, 64);
        let counting = TransverseDensityData::new(HaarData::constant(2.0), |_| 1.0);
        assert!((weinstein_volume(&antipodal, &counting).unwrap() - PI).abs() < 1e-9);
        let c = cutoff_construct(&antipodal, &counting.rho, |x| 1.0 + 0.5 * x[0].cos(), 1e-12).unwrap();
        assert!((weinstein_volume_direct(&antipodal, &counting, &c) - PI).abs() < 1e-9);

        let circ = circle(Action::CircleTranslation { nodes: 32 }, 32);
        let haar = TransverseDensityData::new(HaarData::normalized(), |_| 1.0 / TAU);
        assert!((weinstein_volume(&circ, &haar).unwrap() - 1.0).abs() < 1e-12);
        let c = cutoff_construct(&circ, &haar.rho, |x| 2.0 + x[0].sin(), 1e-12).unwrap();
        assert!((weinstein_volume_direct(&circ, &haar, &c) - 1.0).abs() < 1e-12);

        let model = annulus(64);
        let leb = TransverseDensityData::lebesgue(&model);
        let c = cutoff_construct(&model, &leb.rho, |x| (x[0] * x[1].cos()).exp(), 1e-12).unwrap();
        let formula = weinstein_volume(&model, &leb).unwrap();
        assert!((formula - weinstein_volume_direct(&model, &leb, &c)).abs() < 1e-6 * formula);

        let degenerate = TransverseDensityData::new(HaarData::constant(0.0), |_| 1.0);
        assert!(matches!(weinstein_volume(&circ, &degenerate), Err(SmoothError::ZeroOrbitVolume { .. })));
    }

    #[test]
    fn modular_cocycle_examples() {
        let model = rotation(64, 2.0, 9);
        let leb = TransverseDensityData::lebesgue(&model);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let x = action::sample_point(&model.grid, &mut rng);
            let g = model.action.sample_element(&mut rng);
            assert!(modular_cocycle(&model, &leb, &g, &x).unwrap().abs() <= 1e-12);
        }

        let scaling =
            ActionGroupoidModel::new(Action::Scaling, Grid::new(vec![Axis::bounded(0.5, 3.0, 9)]).unwrap()).unwrap();
        let leb = TransverseDensityData::new(HaarData::normalized(), |_| 1.0);
        for n in -3..=3 {
            let g = GroupElement::Integer(n);
            let c = modular_cocycle(&scaling, &leb, &g, &[1.3]).unwrap();
            assert!((c - n as f64 * LN_2).abs() < 1e-12);
            let fd = (scaling.act(&g, &[1.3 + 1e-6])[0] - scaling.act(&g, &[1.3 - 1e-6])[0]) / 2e-6;
            assert!((fd.ln() - c).abs() < 1e-6);
        }
        assert!(cocycle_additivity_defect(&scaling, &leb, 5, 100).unwrap() < 1e-9);
        let skewed = TransverseDensityData::new(HaarData::from_fn(|x| 1.0 + x[0]), |x| x[0].powi(2) + 0.1);
        assert!(cocycle_additivity_defect(&scaling, &skewed, 6, 100).unwrap() < 1e-9);
        let tilted = TransverseDensityData::new(HaarData::normalized(), |x| x[0].exp());
        assert!(cocycle_additivity_defect(&model, &tilted, 7, 100).unwrap() < 1e-9);

        let vanishing = TransverseDensityData::new(HaarData::normalized(), |x| x[0]);
        let err = modular_cocycle(&scaling, &vanishing, &GroupElement::Integer(1), &[0.0]);
        assert!(matches!(err, Err(SmoothError::DegenerateDensity { .. })));
    }

    fn stokes_omega(x: &[f64]) -> f64 {
        (PI * x[0]).sin() * x[0].exp() * (-((x[1] - 0.5) / 0.1).powi(2)).exp()
    }

    #[test]
    fn stokes_check_examples() {
        let err = |n: usize| {
            let fol = FoliatedGrid::horizontal_unit_square(n + 1).unwrap();
            let m = DensityField::from_fn(fol.grid(), |x| 1.0 + x[1]);
            let omega = DensityField::from_fn(fol.grid(), stokes_omega);
            fol.stokes_check(&m, &omega).unwrap()
        };
        let (coarse, fine) = (err(128), err(256));
        assert!(fine < 1e-4, "{fine}");
        assert!((coarse / fine).log2() >= 1.8);

        let fol = FoliatedGrid::horizontal_unit_square(65).unwrap();
        let m = DensityField::from_fn(fol.grid(), |x| 1.0 + x[1]);
        assert_eq!(fol.stokes_check(&m, &DensityField::constant(fol.grid(), 0.0)).unwrap(), 0.0);
        assert_eq!(fol.leafwise_variation(&m).unwrap(), 0.0);

        let witness = DensityField::from_fn(fol.grid(), |x| x[0].exp());
        let omega = DensityField::from_fn(fol.grid(), stokes_omega);
        assert!(fol.stokes_check(&witness, &omega).unwrap() > 1e-2);
        assert!(fol.leafwise_variation(&witness).unwrap() > 0.1);
    }

    #[test]
    fn ruelle_sullivan_examples() {
        let fol = FoliatedGrid::horizontal_unit_square(257).unwrap();
        let m = DensityField::from_fn(fol.grid(), |x| 1.0 + x[1]);
        let dx = OneForm::coordinate(fol.grid(), 0);
        assert!((fol.ruelle_sullivan(&m, &dx).unwrap() - 1.5).abs() < 1e-12);
        let dy = OneForm::coordinate(fol.grid(), 1);
        assert_eq!(fol.ruelle_sullivan(&m, &dy).unwrap(), 0.0);
        let beta = DensityField::from_fn(fol.grid(), stokes_omega);
        let exact = fol.exterior_derivative(&beta).unwrap();
        assert!(fol.ruelle_sullivan(&m, &exact).unwrap().abs() < 1e-4);
    }

    #[test]
    fn exactness_probe_examples() {
        let total = Grid::new(vec![Axis::bounded(-1.0, 1.0, 33), Axis::bounded(-3.0, 3.0, 513)]).unwrap();
        let model = SubmersionGroupoidModel::new(total.clone(), vec![1]).unwrap();
        assert!(model.is_surjective().unwrap());
        let s2 = 2.0 * 0.3f64.powi(2);
        let bump = |x: &[f64]| (-(x[0] * x[0] + x[1] * x[1]) / s2).exp();
        let u = DensityField::from_fn(&total, |x| -2.0 * x[1] / s2 * bump(x));
        let report = exactness_probe(&model, &u, 1e-6).unwrap();
        let analytic = DensityField::from_fn(&total, bump);
        let err = report.antiderivative.zip_with(&analytic, |a, b| a - b).unwrap().max_abs();
        assert!(err < 1e-6, "{err} leak {}", report.support_leak);
        assert!(report.is_compactly_supported(1e-6));

        let zero = exactness_probe(&model, &DensityField::constant(&total, 0.0), 1e-6).unwrap();
        assert_eq!(zero.antiderivative.max_abs(), 0.0);

        let lump = DensityField::from_fn(&total, |x| (-x[1] * x[1] / s2).exp() / (PI * s2).sqrt());
        assert!(matches!(exactness_probe(&model, &lump, 1e-6), Err(SmoothError::NonzeroFiberIntegral { .. })));
    }
}
