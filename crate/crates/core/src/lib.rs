//! Transverse measures and densities on groupoids.
//!
//! Two engines share this crate:
//!
//! * [`finite`] works over exact rationals on finite groupoids: the `s_!`/`t_!`
//!   calculus, coinvariants, transverse-measure cones, convolution traces,
//!   nerve homology and Morita restriction checks.
//! * [`density`], [`smooth`] and [`symplectic`] work by quadrature on
//!   parametrized proper groupoids: averaging, cut-off functions, Weyl-type
//!   disintegration, orbit and Weinstein volumes, modular cocycles,
//!   Stokes/current checks, Liouville, Duistermaat-Heckman and affine measures.
//!
//! [`report`] holds the comparison rows every check produces.

// Index loops mirror the formulas; negated comparisons deliberately reject NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod density;
pub mod finite;
pub mod report;
pub mod smooth;
pub mod symplectic;
pub mod tolerance;
