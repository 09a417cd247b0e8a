//! The translation-invariant Gibbs measures of the two-periodic Aztec
//! lattice with one fundamental domain of two white and two black vertices.
//!
//! White `(2 a1 + 1, 2 a2)` and black `(2 b1, 2 b2 + 1)` carry the offsets
//! `a` and `b`. The characteristic polynomial is
//! `P(z, w) = ai - 1/z + 1/w - ai/(wz)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::airy::legendre;
use super::{GibbsPoint, ScalingError};
use crate::exactdimer::kasteleyn_entry;
use crate::lattice::{DimerKind, Vertex};

/// `(2 pi i)^-2` times the double unit-circle integral of
/// `z^(a1-b1) w^(b2-a2) / P(z e^Bx, w e^By) dw/w dz/z`.
///
/// `P` is affine in `1/w`, so the inner integral is a single residue whose
/// form depends on which of its two coefficients is larger. The outer
/// integrand is therefore analytic on the arcs between the (at most two)
/// angles where they are equal, and each arc gets its own Gauss-Legendre rule.
pub fn gibbs_inverse_entry(alpha: [i64; 2], beta: [i64; 2], field: [f64; 2], a: f64) -> Result<Complex64, ScalingError> {
    let p = alpha[0] - beta[0];
    let q = beta[1] - alpha[1];
    let rho = field[0].exp();
    let ey = field[1].exp();
    let outer = |theta: f64| {
        let z = Complex64::from_polar(1.0, theta);
        let big_z = z * rho;
        let ai = Complex64::new(0.0, a);
        // P = A + C / w on |w| = 1
        let ca = ai - big_z.inv();
        let cc = (Complex64::new(1.0, 0.0) - ai / big_z) / ey;
        // coefficient of w^-q in 1 / (A + C/w)
        let inner = if cc.norm() < ca.norm() {
            if q >= 0 {
                (-cc / ca).powi(q as i32) / ca
            } else {
                Complex64::new(0.0, 0.0)
            }
        } else if q <= -1 {
            (-ca / cc).powi((-q - 1) as i32) / cc
        } else {
            Complex64::new(0.0, 0.0)
        };
        z.powi(p as i32) * inner
    };
    // |A| = |C| exactly when sin(theta) = s
    let e2 = ey.powi(-2);
    let s = ((rho * rho + a * a) * e2 - a * a * rho * rho - 1.0) / (2.0 * a * rho * (1.0 + e2));
    if (s.abs() - 1.0).abs() < 1e-12 {
        return Err(ScalingError::PoleOnContour { field });
    }
    let arcs: Vec<(f64, f64)> = if s.abs() < 1.0 {
        let t1 = s.asin();
        let t2 = PI - t1;
        vec![(t1, t2), (t2, t1 + 2.0 * PI)]
    } else {
        vec![(0.0, 2.0 * PI)]
    };
    let integrate = |m: usize| {
        let rule = legendre(m);
        let mut total = Complex64::new(0.0, 0.0);
        for &(lo, hi) in &arcs {
            let half = 0.5 * (hi - lo);
            for &(x, w) in &rule {
                total += outer(lo + half * (x + 1.0)) * (w * half);
            }
        }
        total / (2.0 * PI)
    };
    let mut m = 32;
    let mut prev = integrate(m);
    let mut change = f64::INFINITY;
    while m < 8192 {
        m *= 2;
        let next = integrate(m);
        change = (next - prev).norm();
        prev = next;
        if change < 1e-13 * next.norm().max(1.0) {
            return Ok(next);
        }
    }
    Err(ScalingError::NotConverged {
        what: "Gibbs inverse Kasteleyn entry",
        change,
    })
}

/// Kasteleyn entry with the orientation used for the Gibbs measures: the
/// finite-diamond entry, negated at blacks with `b1 + b2 = 3 (mod 4)`.
pub fn gibbs_kasteleyn_entry(b: Vertex, w: Vertex, a: f64) -> Complex64 {
    kasteleyn_entry(b, w, &a) * orientation_sign(b)
}

/// Offsets of a white or black vertex in the fundamental-domain lattice.
pub fn white_offset(w: Vertex) -> [i64; 2] {
    [(w.x1 - 1).div_euclid(2), w.x2.div_euclid(2)]
}

pub fn black_offset(b: Vertex) -> [i64; 2] {
    [b.x1.div_euclid(2), (b.x2 - 1).div_euclid(2)]
}

/// Factor `e^(Bx (a1 - b1) + By (b2 - a2))` carried by `K(b, w)` under the
/// magnetic field `B`.
pub fn magnetic_factor(alpha: [i64; 2], beta: [i64; 2], field: [f64; 2]) -> f64 {
    (field[0] * (alpha[0] - beta[0]) as f64 + field[1] * (beta[1] - alpha[1]) as f64).exp()
}

/// Probabilities of the four dimers at the white vertex `(1, 0)` under the
/// Gibbs measure with field `B`, in [`DimerKind::ALL`] order: the magnetic
/// edge weight times `K_mu^-1(w, b)`.
pub fn gibbs_dimer_probabilities(field: [f64; 2], a: f64) -> Result<[(DimerKind, f64); 4], ScalingError> {
    let w = Vertex::new(1, 0).expect("white vertex");
    let alpha = white_offset(w);
    let mut out = [(DimerKind::North, 0.0); 4];
    for (slot, kind) in out.iter_mut().zip(DimerKind::ALL) {
        let b = w.shifted(kind.step(), -1);
        let beta = black_offset(b);
        let inv = gibbs_inverse_entry(alpha, beta, field, a)?;
        let p = gibbs_kasteleyn_entry(b, w, a) * magnetic_factor(alpha, beta, field) * inv;
        *slot = (kind, p.re);
    }
    Ok(out)
}

/// The two prefactors that can multiply `K_mu^-1` in the bulk limit of the
/// finite inverse Kasteleyn matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BulkPrefactor {
    /// `r1^(b1 - a1) r2^(a2 - b2)`
    Reciprocal,
    /// `r1^(a1 + b1) r2^(a2 - b2)`
    Mixed,
}

impl BulkPrefactor {
    pub const ALL: [BulkPrefactor; 2] = [BulkPrefactor::Reciprocal, BulkPrefactor::Mixed];

    pub fn value(self, point: &GibbsPoint, alpha: [i64; 2], beta: [i64; 2]) -> f64 {
        let e1 = match self {
            BulkPrefactor::Reciprocal => beta[0] - alpha[0],
            BulkPrefactor::Mixed => alpha[0] + beta[0],
        };
        point.r1.powi(e1 as i32) * point.r2.powi((alpha[1] - beta[1]) as i32)
    }
}

impl GibbsPoint {
    /// The field `(-log r1, -log r2)` of the limiting Gibbs measure, in the
    /// convention of [`gibbs_inverse_entry`].
    pub fn magnetic_field(&self) -> [f64; 2] {
        [-self.r1.ln(), -self.r2.ln()]
    }
}

/// Predicted limit of `s(b) K_n^-1(w, b)` for white `w = (2[xi1 n] + 2a1 + 1,
/// 2[xi2 n] + 2a2)` and black `b = (2[xi1 n] + 2b1, 2[xi2 n] + 2b2 + 1)`,
/// where `s(b)` is the orientation change of [`gibbs_kasteleyn_entry`].
pub fn bulk_limit_entry(
    point: &GibbsPoint,
    a: f64,
    alpha: [i64; 2],
    beta: [i64; 2],
    prefactor: BulkPrefactor,
) -> Result<Complex64, ScalingError> {
    let k = gibbs_inverse_entry(alpha, beta, point.magnetic_field(), a)?;
    Ok(k * prefactor.value(point, alpha, beta))
}

/// `-1` where the Gibbs orientation differs from the finite one.
pub fn orientation_sign(b: Vertex) -> f64 {
    if (b.x1 + b.x2).rem_euclid(4) == 3 {
        -1.0
    } else {
        1.0
    }
}
