//! Finite-order line kernels rescaled at the north edge of the ellipse.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::edge::{edge_params, EdgeParams, EdgeRegime};
use super::ScalingError;
use crate::kernelcalc::line_kernel_residue;

/// Position of a rescaled coordinate on the line `r = [(1 - k^2 u) n]`:
/// `[u n - lambda n^(1/3) xi]`.
pub fn edge_position(params: &EdgeParams, n: usize, xi: f64) -> i64 {
    let nf = n as f64;
    (params.u * nf - params.lambda * nf.cbrt() * xi).floor() as i64
}

pub fn edge_line(params: &EdgeParams, n: usize) -> i64 {
    ((1.0 - params.k * params.k * params.u) * n as f64).floor() as i64
}

/// `lambda n^(1/3) z_c^(x1 - x2) L(x1, x2)` at the positions of `xi` and
/// `eta`, with the line kernel evaluated exactly. Its limit is
/// `alpha K_Ai(xi, eta)`.
///
/// The line kernel's diagonal is a probability, so the positive scale is
/// the one that can converge to the positive diagonal `alpha K_Ai(xi, xi)`.
pub fn scaled_finite_kernel(n: usize, a: f64, k: f64, xi: f64, eta: f64) -> Result<f64, ScalingError> {
    let params = edge_params(k, a)?;
    if params.regime != EdgeRegime::North {
        return Err(ScalingError::OutOfRange { k, a });
    }
    let x1 = edge_position(&params, n, xi);
    let x2 = edge_position(&params, n, eta);
    let r = edge_line(&params, n);
    for x in [x1, x2] {
        if x < 1 || x > n as i64 {
            return Err(ScalingError::OffLattice { position: x, n });
        }
    }
    let ar = BigRational::from_float(a).ok_or(ScalingError::InvalidWeight(a))?;
    let l = line_kernel_residue(n, &ar, x1, x2, r)?;
    let l = l.to_f64().unwrap_or(f64::NAN);
    Ok(params.lambda * (n as f64).cbrt() * params.z_c.powi((x1 - x2) as i32) * l)
}
