//! Symplectic groupoids: Liouville densities, the Duistermaat–Heckman density
//! of a pair groupoid, and affine measures of regular leaf families with the
//! associated Weyl-type and volume identities.
//!
//! Conventions: the lattice density of a leaf family is `ℓ(t) = |A′(t)|` (no
//! `2π` factor) unless supplied explicitly, and the transverse density of the
//! canonical σ is `μ_M = ι ℓ(t) dt ⊗ Liouville(O_t)`. Leaf integrals use one
//! leaf template normalized to unit discrete area and rescaled by `A(t)`.

pub mod leaf;
pub mod pair;

use thiserror::Error;

pub use leaf::{
    affine_measure, affine_volume, dh_weyl_check, AreaProfile, IdentityReport, LeafBase, LeafFamilyModel, LeafKind,
};
pub use pair::{dh_density, dh_density_via_product, dh_measure_on_point, liouville_density, SymplecticPairModel};

use crate::density::DensityError;
use crate::smooth::SmoothError;

#[derive(Debug, Error)]
pub enum SymplecticError {
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Smooth(#[from] SmoothError),
    #[error("model descriptor: {0}")]
    Json(#[from] serde_json::Error),
    #[error("surface grids must have dimension at most 2, found {0}")]
    Dimension(usize),
    #[error("area density must be nonnegative with positive total, and leaf areas positive")]
    NonPositiveArea,
    #[error("component count ι must be at least 1")]
    Iota,
    #[error("expected {expected} values, found {found}")]
    Length { expected: usize, found: usize },
    #[error("degenerate affine structure: lattice density vanishes on a set of positive measure")]
    DegenerateAffine,
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::density::DensityField;

    fn sphere_family(n: usize) -> LeafFamilyModel {
        LeafFamilyModel::new(
            LeafBase::Interval { lo: 1.0, hi: 2.0, n },
            AreaProfile::Polynomial(vec![0.0, 4.0 * PI]),
            1,
            LeafKind::Sphere,
        )
        .unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn liouville_examples() {
        let sphere = SymplecticPairModel::round_sphere(1.0, 1025, 2).unwrap();
        let area = liouville_density(&sphere).integrate();
        assert!(rel(area, 4.0 * PI) < 1e-6, "{area}");
        let scaled = liouville_density(&sphere.scaled(2.5).unwrap()).integrate();
        assert!(rel(scaled, 2.5 * area) < 1e-14);
        let torus = SymplecticPairModel::flat_torus(16).unwrap();
        assert!((liouville_density(&torus).integrate() - 1.0).abs() < 1e-14);
        assert!(sphere.scaled(-1.0).is_err());
    }

    #[test]
    fn dh_density_examples() {
        let sphere = SymplecticPairModel::round_sphere(1.0, 1025, 2).unwrap();
        let target = 16.0 * PI * PI;
        let nodewise = dh_density(&sphere).integrate();
        let product = dh_density_via_product(&sphere).unwrap();
        let pushed = dh_measure_on_point(&product).unwrap();
        assert!(rel(nodewise, target) < 1e-5);
        assert!(rel(pushed.masses()[0], target) < 1e-5);
        assert!(rel(pushed.masses()[0], nodewise) < 1e-12);

        let torus = SymplecticPairModel::flat_torus(8).unwrap();
        assert!((dh_density(&torus).integrate() - 1.0).abs() < 1e-14);
        assert!((dh_density_via_product(&torus).unwrap().integrate() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn affine_measure_examples() {
        let family = sphere_family(65);
        let mu = affine_measure(&family).unwrap();
        assert!(rel(mu.total_mass(), 4.0 * PI) < 1e-12);
        assert_eq!(mu.eval(|_| 0.0), 0.0);
        assert!(mu.is_positive());

        let flat = LeafFamilyModel::new(
            LeafBase::Interval { lo: 0.0, hi: 1.0, n: 9 },
            AreaProfile::Polynomial(vec![3.0]),
            1,
            LeafKind::Torus,
        )
        .unwrap();
        assert!(matches!(affine_measure(&flat), Err(SymplecticError::DegenerateAffine)));

        let scaled = LeafFamilyModel { area: AreaProfile::Polynomial(vec![0.0, 12.0 * PI]), ..family.clone() };
        assert!(rel(affine_measure(&scaled).unwrap().total_mass(), 3.0 * mu.total_mass()) < 1e-14);

        let ts = family.parameters().unwrap();
        let sampled = LeafFamilyModel {
            area: AreaProfile::Samples(ts.iter().map(|t| 4.0 * PI * t).collect()),
            ..family.clone()
        };
        assert!(rel(affine_measure(&sampled).unwrap().total_mass(), 4.0 * PI) < 1e-12);
    }

    #[test]
    fn dh_weyl_examples() {
        let family = sphere_family(65);
        let ones = dh_weyl_check(&family, &family.mu_m().unwrap(), &|_| 1.0).unwrap();
        assert!(rel(ones.lhs, 24.0 * PI * PI) < 1e-12);
        assert!(ones.rel_err < 1e-12);

        // ι = 2 with the lattice halved: same μ_M, identity preserved
        let ell = family.lattice_density().unwrap();
        let doubled = family.clone().with_iota(2).unwrap().with_lattice(ell.iter().map(|v| v / 2.0).collect()).unwrap();
        let mu = doubled.mu_m().unwrap();
        let r = dh_weyl_check(&doubled, &mu, &|_| 1.0).unwrap();
        assert!(r.rel_err < 1e-12 && rel(r.lhs, ones.lhs) < 1e-12);

        // ι ↦ 2ι with μ_M held fixed doubles the right-hand side
        let twice = family.clone().with_iota(2).unwrap();
        let r = dh_weyl_check(&twice, &family.mu_m().unwrap(), &|_| 1.0).unwrap();
        assert!(rel(r.rhs, 2.0 * ones.rhs) < 1e-12);

        let band = |x: &[f64]| (-((x[0] - 1.5) / 0.05).powi(2)).exp() * (1.0 + x[1].cos().powi(2));
        let r = dh_weyl_check(&family, &family.mu_m().unwrap(), &band).unwrap();
        assert!(r.rel_err < 1e-6);
    }

    #[test]
    fn dh_weyl_converges_to_closed_form() {
        // ∫_1^2 sin t · 4πt · 4π dt
        let exact = 16.0 * PI * PI * ((2f64.sin() - 2.0 * 2f64.cos()) - (1f64.sin() - 1f64.cos()));
        let err = |n: usize| {
            let family = sphere_family(n);
            let r = dh_weyl_check(&family, &family.mu_m().unwrap(), &|x| x[0].sin()).unwrap();
            assert!(r.rel_err < 1e-12);
            (r.lhs - exact).abs()
        };
        assert!((err(33) / err(65)).log2() >= 1.8);
    }

    #[test]
    fn affine_volume_examples() {
        let family = sphere_family(65);
        let mu = family.mu_m().unwrap();
        let r = affine_volume(&family, &mu).unwrap();
        assert!(rel(r.lhs, 4.0 * PI) < 1e-6 && r.rel_err < 1e-6);

        let twice = family.clone().with_iota(2).unwrap();
        let r2 = affine_volume(&twice, &mu).unwrap();
        assert!(rel(r2.rhs, r.rhs / 2.0) < 1e-14);

        let single = LeafFamilyModel::new(
            LeafBase::Point { at: 0.0, mass: 2.5 },
            AreaProfile::Polynomial(vec![7.0]),
            3,
            LeafKind::Torus,
        )
        .unwrap();
        let r = affine_volume(&single, &single.mu_m().unwrap()).unwrap();
        assert!((r.lhs - 2.5).abs() < 1e-14 && (r.rhs - 2.5).abs() < 1e-12);
        let w = dh_weyl_check(&single, &single.mu_m().unwrap(), &|y| 1.0 + y[0]).unwrap();
        assert!(w.rel_err < 1e-12);
    }

    #[test]
    fn leaf_family_json() {
        let text = r#"{"B":{"lo":1.0,"hi":2.0,"n":17},"area":{"polynomial":[0.0,12.566370614359172]},"iota":1,"leaf":"sphere"}"#;
        let model = LeafFamilyModel::from_json(text).unwrap();
        assert_eq!(model.leaf_nodes, [129, 8]);
        let again = LeafFamilyModel::from_json(&serde_json::to_string(&model).unwrap()).unwrap();
        assert_eq!(again, model);
        let point = r#"{"B":{"at":0.5,"mass":1.0},"area":{"samples":[2.0]},"iota":2,"leaf":"torus"}"#;
        assert!(LeafFamilyModel::from_json(point).is_ok());
        let bad = r#"{"B":{"lo":1.0,"hi":2.0,"n":3},"area":{"samples":[1.0]},"iota":1,"leaf":"torus"}"#;
        assert!(matches!(LeafFamilyModel::from_json(bad), Err(SymplecticError::Length { .. })));
        let zero = r#"{"B":{"lo":1.0,"hi":2.0,"n":3},"area":{"polynomial":[1.0]},"iota":0,"leaf":"torus"}"#;
        assert!(matches!(LeafFamilyModel::from_json(zero), Err(SymplecticError::Iota)));
        let _ = DensityField::constant(&model.total_grid().unwrap(), 0.0);
    }
}
