//! Asymptotic predictions: the arctic ellipse, the edge parameters, the Airy
//! kernel and its Fredholm determinants, thinned and thickened generating
//! functionals, the Poisson regime, and the bulk Gibbs kernel.
//!
//! Algebraic quantities are computed exactly in `Q(sqrt(1 + a^2))`; only
//! cube roots, `Ai`, and quadratures use floating point.

pub mod airy;
pub mod edge;
pub mod finite;
pub mod functional;
pub mod gibbs;
pub mod surd;

use thiserror::Error;

use crate::kernelcalc::KernelError;

pub use airy::{
    airy_ai, airy_ai_prime, airy_kernel, airy_kernel_closed, airy_kernel_diagonal, airy_row_integral, fredholm_fixed,
    fredholm_gap, GapMode, GapValue, AIRY_RANGE, GAP_TRUNCATION,
};
pub use edge::{
    edge_params, ellipse_distance, ellipse_residual, ellipse_residual_exact, omega_discriminant, omega_map, poisson_constant,
    poisson_density, poisson_prediction, EdgeParams, EdgeRegime, ExactEdgeParams, GibbsPoint, PoissonPrediction,
};
pub use finite::{edge_line, edge_position, scaled_finite_kernel};
pub use functional::{thickened_gen_functional, thinned_gen_functional, DiscreteKernel};
pub use gibbs::{
    black_offset, bulk_limit_entry, gibbs_dimer_probabilities, gibbs_inverse_entry, gibbs_kasteleyn_entry, magnetic_factor,
    orientation_sign, white_offset, BulkPrefactor,
};
pub use surd::Surd;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScalingError {
    #[error("slope k = {k} is in neither edge regime for a = {a}")]
    OutOfRange { k: f64, a: f64 },
    #[error("weight {0} must be positive and finite")]
    InvalidWeight(f64),
    #[error("({xi1}, {xi2}) is not inside the liquid region (discriminant {discriminant})")]
    OutsideLiquidRegion { xi1: f64, xi2: f64, discriminant: f64 },
    #[error("Ai({0}) requested outside [-40, 40]")]
    AiryOutOfRange(f64),
    #[error("{what} did not converge (last change {change:e})")]
    NotConverged { what: &'static str, change: f64 },
    #[error("invalid parameter {0:?}")]
    InvalidGapParameter(GapMode),
    #[error("P vanishes on the torus for magnetic field {field:?}")]
    PoleOnContour { field: [f64; 2] },
    #[error("rescaled position {position} falls outside 1..={n}")]
    OffLattice { position: i64, n: usize },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}
