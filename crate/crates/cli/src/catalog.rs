//! The catalog of named checks with their engine, parameters and default tolerance.

use groupoid_measures::tolerance::{ANALYTIC, DISCRETE_DERIVATIVE, GRID_WEIGHTS, QUADRATURE};

use crate::scenario::Engine;

#[derive(Debug, Clone, Copy)]
pub struct CheckInfo {
    pub name: &'static str,
    pub engine: Engine,
    /// Model kinds the check applies to.
    pub models: &'static str,
    /// Parameters, `?` marking optional ones.
    pub params: &'static str,
    pub tolerance: f64,
    /// Exact checks also pass on `abs_err = 0` regardless of tolerance.
    pub exact: bool,
}

const fn exact(name: &'static str, models: &'static str, params: &'static str) -> CheckInfo {
    CheckInfo { name, engine: Engine::Finite, models, params, tolerance: 0.0, exact: true }
}

const fn smooth(name: &'static str, models: &'static str, params: &'static str, tolerance: f64) -> CheckInfo {
    CheckInfo { name, engine: Engine::Smooth, models, params, tolerance, exact: false }
}

const fn symplectic(name: &'static str, models: &'static str, params: &'static str, tolerance: f64) -> CheckInfo {
    CheckInfo { name, engine: Engine::Symplectic, models, params, tolerance, exact: false }
}

/// Lower-bound checks report `rhs = max(lhs, bound)` and therefore use tolerance 0.
const LOWER_BOUND: f64 = 0.0;

const FINITE_MODELS: &str = "any finite";
const ACTION: &str = "action";
const PAIRS: &str = "sphere_pair|torus_pair";

pub const CATALOG: &[CheckInfo] = &[
    exact("validate", FINITE_MODELS, "-"),
    exact("orbits", FINITE_MODELS, "expected: [[object]]"),
    exact("s_shriek", FINITE_MODELS, "u?: [q per arrow] (default 1), expected: [q per object]"),
    exact("t_shriek", FINITE_MODELS, "u?: [q per arrow] (default 1), expected: [q per object]"),
    exact("coinvariants", FINITE_MODELS, "expected?: dim"),
    exact("transverse_cone", FINITE_MODELS, "expected?: [[q per object]] basis"),
    exact("convolution", FINITE_MODELS, "u, v: [q per arrow], expected: [q per arrow]"),
    exact("trace", FINITE_MODELS, "w: [q per object], expected: bool"),
    exact("trace_equivalence", FINITE_MODELS, "samples?: n (default 20)"),
    exact("nerve_size", FINITE_MODELS, "k, expected"),
    exact("boundary_squares", FINITE_MODELS, "kmax?: n (default 3)"),
    exact("boundary_rank", FINITE_MODELS, "k, expected"),
    exact("betti", FINITE_MODELS, "expected: [betti_0, ...]"),
    exact("betti_orbits", FINITE_MODELS, "-"),
    exact("restriction", FINITE_MODELS, "subset: [object], kmax?: n (default 2), isotropy?: order at subset[0]"),
    exact("morita_subsets", FINITE_MODELS, "samples?: n (default 5), kmax?: n (default 2)"),
    exact("average", FINITE_MODELS, "rho?: [q per object] (default 1/|s-fiber|), f: [q per object], expected: [q]"),
    smooth("action_axioms", ACTION, "samples?: n (default 200)", ANALYTIC),
    smooth("jacobian", ACTION, "samples?: n (default 20)", QUADRATURE),
    smooth("haar_mass", ACTION, "-", GRID_WEIGHTS),
    smooth("finite_fiber_sums", "action (finite group)", "tests?: n (default 3)", 1e-13),
    smooth("invariance", ACTION, "tests?: n (default 4)", QUADRATURE),
    smooth("inversion", ACTION, "tests?: n (default 4)", QUADRATURE),
    smooth("invariance_witness", ACTION, "tests?: n (default 4), bound?: b (default 1e-3)", LOWER_BOUND),
    smooth("averaging_image", ACTION, "count?: n (default 20)", QUADRATURE),
    smooth("averaging_orbit", ACTION, "f: function", ANALYTIC),
    smooth("averaging_finite", "action (finite group)", "values: [integer per node]", 1e-12),
    smooth("cutoff_normalization", ACTION, "seed: function", ANALYTIC),
    smooth("weyl", ACTION, "f: function, seed: function", QUADRATURE),
    smooth("weyl_closed_form", "action (rotation_polar)", "f: radial function, seed: function", QUADRATURE),
    smooth("weyl_seed_independence", ACTION, "f: function, seeds: [function, function]", 2e-6),
    smooth("volume_corollary", ACTION, "seed: function", QUADRATURE),
    smooth("orbit_independence", ACTION, "samples?: n (default 10)", ANALYTIC),
    smooth("weinstein", ACTION, "expected", ANALYTIC),
    smooth("weinstein_direct", ACTION, "seed: function", QUADRATURE),
    smooth("cocycle_additivity", ACTION, "count?: n (default 100)", ANALYTIC),
    smooth("cocycle_vanishes", ACTION, "samples?: n (default 100)", 1e-12),
    smooth("cocycle_value", ACTION, "g: integer, x: [coordinates], expected", ANALYTIC),
    smooth("stokes", "foliation", "m?: one_plus_y|exp_x", DISCRETE_DERIVATIVE),
    smooth("stokes_order", "foliation", "m?: one_plus_y|exp_x, bound?: order (default 1.8; against half the intervals)", LOWER_BOUND),
    smooth("stokes_witness", "foliation", "bound?: b (default 1e-2; uses m = exp_x)", LOWER_BOUND),
    smooth("ruelle_sullivan", "foliation", "alpha: dx|dy|exact, expected", DISCRETE_DERIVATIVE),
    smooth("exactness", "submersion", "width?: w (default 0.3)", QUADRATURE),
    smooth("exactness_obstruction", "submersion", "width?: w (default 0.3)", 0.0),
    smooth("gaussian_integral", "grid (1 axis)", "-", QUADRATURE),
    smooth("fubini", "grid", "-", GRID_WEIGHTS),
    smooth("projection_composition", "grid (3 axes)", "-", GRID_WEIGHTS),
    smooth("bundle_witness", "grid", "circle_nodes?: n (default 32), bound?: b (default 1e-2)", LOWER_BOUND),
    symplectic("liouville_area", PAIRS, "expected?: area (default closed form)", QUADRATURE),
    symplectic("liouville_scaling", PAIRS, "t", GRID_WEIGHTS),
    symplectic("dh_mass", PAIRS, "expected?: mass (default area²)", 1e-5),
    symplectic("affine_total", "leaf_family", "expected", QUADRATURE),
    symplectic("dh_weyl", "leaf_family", "f?: one|band|sin_t, expected?", QUADRATURE),
    symplectic("dh_weyl_iota", "leaf_family", "f?: one|band|sin_t", GRID_WEIGHTS),
    symplectic("affine_volume", "leaf_family", "expected?", QUADRATURE),
    symplectic("affine_volume_iota", "leaf_family", "-", GRID_WEIGHTS),
];

pub fn lookup(name: &str) -> Option<&'static CheckInfo> {
    CATALOG.iter().find(|c| c.name == name)
}

pub fn names_for(engine: Engine) -> Vec<&'static str> {
    CATALOG.iter().filter(|c| c.engine == engine).map(|c| c.name).collect()
}

/// One catalog line: name, engine, parameters and default tolerance.
pub fn catalog_line(c: &CheckInfo) -> String {
    let tol = if c.exact { "exact".to_string() } else { format!("{:e}", c.tolerance) };
    format!("{:<24} {:<11} {:<8} {} [{}]", c.name, c.engine.name(), tol, c.params, c.models)
}

/// Catalog lines, optionally filtered by engine name (an unknown name selects nothing).
pub fn list(engine: Option<&str>) -> Vec<String> {
    CATALOG.iter().filter(|c| engine.is_none_or(|e| c.engine.name() == e)).map(catalog_line).collect()
}
