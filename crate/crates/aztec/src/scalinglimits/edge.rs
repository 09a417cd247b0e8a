//! The arctic ellipse, the edge parameters along it, the bulk saddle point,
//! and the Poisson-regime constants.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::surd::Surd;
use super::ScalingError;

/// `(v-u)^2/(1-p) + (u+v-1)^2/p - 1` with `p = 1/(1+a^2)`.
pub fn ellipse_residual(u: f64, v: f64, a: f64) -> f64 {
    let p = 1.0 / (1.0 + a * a);
    (v - u).powi(2) / (1.0 - p) + (u + v - 1.0).powi(2) / p - 1.0
}

/// [`ellipse_residual`] for surd coordinates and a rational weight.
pub fn ellipse_residual_exact(u: &Surd, v: &Surd, a: &BigRational) -> Surd {
    let one = BigRational::one();
    let d = &u.d;
    let a2 = a * a;
    // 1/(1-p) = (1+a^2)/a^2, 1/p = 1+a^2
    let diff = v - u;
    let sum = &(u + v) - &Surd::rational(one.clone(), d);
    let e = &(&diff * &diff).scale(&((&one + &a2) / &a2)) + &(&sum * &sum).scale(&(&one + &a2));
    &e - &Surd::rational(one, d)
}

/// Euclidean distance from `(u, v)` to the ellipse in rescaled units.
///
/// In `d = v - u`, `s = u + v - 1` the ellipse is `d = sqrt(1-p) cos t`,
/// `s = sqrt(p) sin t`, and those axes are `sqrt(2)` times the `(u, v)`
/// lengths. The nearest parameter is bracketed on a grid and refined by
/// golden-section search.
pub fn ellipse_distance(u: f64, v: f64, a: f64) -> f64 {
    let p = 1.0 / (1.0 + a * a);
    let (ax, bx) = ((1.0 - p).sqrt(), p.sqrt());
    let (d, s) = (v - u, u + v - 1.0);
    let dist2 = |t: f64| (ax * t.cos() - d).powi(2) + (bx * t.sin() - s).powi(2);
    const GRID: usize = 720;
    let step = 2.0 * PI / GRID as f64;
    let best = (0..GRID)
        .map(|i| i as f64 * step)
        .min_by(|x, y| dist2(*x).total_cmp(&dist2(*y)))
        .unwrap_or(0.0);
    let (mut lo, mut hi) = (best - step, best + step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if dist2(m1) < dist2(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    dist2(0.5 * (lo + hi)).sqrt() / 2f64.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeRegime {
    North,
    South,
}

/// Edge parameters in `Q(sqrt(1+a^2))` for rational `k` and `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactEdgeParams {
    pub k: BigRational,
    pub a: BigRational,
    pub regime: EdgeRegime,
    pub u: Surd,
    pub v: Surd,
    pub z_c: Surd,
    pub alpha: Surd,
    pub beta: Surd,
    pub lambda_cubed: Surd,
}

impl ExactEdgeParams {
    pub fn new(k: BigRational, a: BigRational) -> Result<Self, ScalingError> {
        if !a.is_positive() {
            return Err(ScalingError::InvalidWeight(rat_f64(&a)));
        }
        let one = BigRational::one();
        let a2 = &a * &a;
        let d = &one + &a2;
        let k2 = &k * &k;
        // north: k > 0; south: -sqrt(d)/a < k < -a/sqrt(d)
        let regime = if k.is_positive() {
            EdgeRegime::North
        } else if k.is_negative() && &k2 * &d > a2 && &a2 * &k2 < d {
            EdgeRegime::South
        } else {
            return Err(ScalingError::OutOfRange {
                k: rat_f64(&k),
                a: rat_f64(&a),
            });
        };
        let s = Surd::root(&d);
        let rat = |x: BigRational| Surd::rational(x, &d);
        let ks = s.scale(&k);
        // (1+a^2)(1+k^2) + 2 a k sqrt(1+a^2)
        let denom_u = &rat(&d * (&one + &k2)) + &ks.scale(&(&a + &a));
        let u = denom_u.recip();
        let v = &rat(one.clone()) - &u.scale(&k2);
        let a_plus = &rat(a.clone()) + &ks;
        let z_c = a_plus.recip();
        let beta = -&a_plus.scale(&a);
        let alpha = (&rat(one.clone()) - &beta).recip();
        // (1+a^2)(a k^2 + k sqrt(1+a^2)) ((1+a^2)(1+k^2) + 2ak sqrt(1+a^2))
        let middle = &rat(&a * &k2) + &ks;
        let den = &middle.scale(&d) * &denom_u;
        let mut lambda_cubed = &(&a_plus * &a_plus).scale(&a) / &den;
        if regime == EdgeRegime::South {
            lambda_cubed = -&lambda_cubed;
        }
        Ok(ExactEdgeParams {
            k,
            a,
            regime,
            u,
            v,
            z_c,
            alpha,
            beta,
            lambda_cubed,
        })
    }

    /// `g'`, `g''`, `g'''` at `z`, for
    /// `g(z) = (1 - k^2 u) log(a+z) + k^2 u log(az-1) - u log z`.
    pub fn saddle_derivatives(&self, z: &Surd) -> [Surd; 3] {
        let d = &self.u.d;
        let one = Surd::rational(BigRational::one(), d);
        let a = Surd::rational(self.a.clone(), d);
        let k2 = &self.k * &self.k;
        let c1 = &one - &self.u.scale(&k2);
        let c2 = self.u.scale(&k2);
        let c3 = self.u.clone();
        let p = (&a + z).recip();
        let q = &a / &(&(&a * z) - &one);
        let r = z.recip();
        // d^m/dz^m log(a+z) = (-1)^(m-1) (m-1)! p^m, and likewise for the others
        let term = |m: u32, coef: i64| {
            let s = &(&(&c1 * &p.powi(m)) + &(&c2 * &q.powi(m))) - &(&c3 * &r.powi(m));
            s.scale(&BigRational::from_integer(coef.into()))
        };
        [term(1, 1), term(2, -1), term(3, 2)]
    }
}

fn rat_f64(x: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN)
}

/// Floating-point view of [`ExactEdgeParams`]; `lambda` is the real cube root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeParams {
    pub k: f64,
    pub a: f64,
    pub regime: EdgeRegime,
    pub u: f64,
    pub v: f64,
    pub z_c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
}

impl From<&ExactEdgeParams> for EdgeParams {
    fn from(e: &ExactEdgeParams) -> Self {
        EdgeParams {
            k: rat_f64(&e.k),
            a: rat_f64(&e.a),
            regime: e.regime,
            u: e.u.to_f64(),
            v: e.v.to_f64(),
            z_c: e.z_c.to_f64(),
            alpha: e.alpha.to_f64(),
            beta: e.beta.to_f64(),
            lambda: e.lambda_cubed.to_f64().cbrt(),
        }
    }
}

/// Edge parameters for float inputs, computed exactly from the dyadic
/// rationals the floats store.
pub fn edge_params(k: f64, a: f64) -> Result<EdgeParams, ScalingError> {
    let (Some(kr), Some(ar)) = (BigRational::from_float(k), BigRational::from_float(a)) else {
        return Err(ScalingError::OutOfRange { k, a });
    };
    Ok(EdgeParams::from(&ExactEdgeParams::new(kr, ar)?))
}

/// The saddle point `z_xi` of the bulk analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GibbsPoint {
    pub xi1: f64,
    pub xi2: f64,
    pub z_xi: Complex64,
    pub r1: f64,
    pub r2: f64,
}

/// The root of `a^2 xi1 - xi1 + xi2 + a^2 xi2 - a^2 + i sqrt(D)` over
/// `2a(1 - xi1)`, with
/// `D = 4a^2 (1-xi1) xi1 - (xi2 - xi1 + a^2 (xi2 + xi1 - 1))^2`.
pub fn omega_map(xi1: f64, xi2: f64, a: f64) -> Result<GibbsPoint, ScalingError> {
    if !(xi1 > 0.0 && xi1 < 1.0 && xi2 > 0.0 && xi2 < 1.0) || a <= 0.0 {
        return Err(ScalingError::OutsideLiquidRegion {
            xi1,
            xi2,
            discriminant: f64::NAN,
        });
    }
    let a2 = a * a;
    let disc = 4.0 * a2 * (1.0 - xi1) * xi1 - (xi2 - xi1 + a2 * (xi2 + xi1 - 1.0)).powi(2);
    if disc <= 0.0 {
        return Err(ScalingError::OutsideLiquidRegion {
            xi1,
            xi2,
            discriminant: disc,
        });
    }
    let re = a2 * xi1 - xi1 + xi2 + a2 * xi2 - a2;
    let z_xi = Complex64::new(re, disc.sqrt()) / (2.0 * a * (1.0 - xi1));
    Ok(GibbsPoint {
        xi1,
        xi2,
        z_xi,
        r1: (xi1 / (1.0 - xi1)).sqrt(),
        r2: (xi2 / (1.0 - xi2)).sqrt(),
    })
}

/// The discriminant under the root in [`omega_map`], for boundary checks.
pub fn omega_discriminant(xi1: f64, xi2: f64, a: f64) -> f64 {
    let a2 = a * a;
    4.0 * a2 * (1.0 - xi1) * xi1 - (xi2 - xi1 + a2 * (xi2 + xi1 - 1.0)).powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonPrediction {
    /// `sqrt((1 - xi)_+)`
    pub density: f64,
    /// `pi^(2/3) (1 + 1/k)^(1/3) a^(2/3)`
    pub c: f64,
}

pub fn poisson_density(xi: f64) -> f64 {
    (1.0 - xi).max(0.0).sqrt()
}

pub fn poisson_constant(k: f64, a: f64) -> f64 {
    PI.powf(2.0 / 3.0) * (1.0 + 1.0 / k).cbrt() * a.powf(2.0 / 3.0)
}

pub fn poisson_prediction(k: f64, a: f64, xi: f64) -> Result<PoissonPrediction, ScalingError> {
    if k.partial_cmp(&0.0) != Some(Ordering::Greater) {
        return Err(ScalingError::OutOfRange { k, a });
    }
    Ok(PoissonPrediction {
        density: poisson_density(xi),
        c: poisson_constant(k, a),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn centre_and_corner() {
        for a in [0.5, 1.0, 2.0] {
            assert_eq!(ellipse_residual(0.5, 0.5, a), -1.0);
        }
        assert!(ellipse_residual(1.0, 1.0, 1.0) > 0.0);
    }

    #[test]
    fn distances_to_the_ellipse() {
        // two tangency points with the sides, and the centre, whose distance
        // is the shorter semi-axis
        for a in [0.5, 1.0, 2.0] {
            let p = 1.0 / (1.0 + a * a);
            assert!(ellipse_distance(0.0, 1.0 - p, a) < 1e-9);
            assert!(ellipse_distance(1.0 - p, 0.0, a) < 1e-9);
            let short = p.sqrt().min((1.0 - p).sqrt()) / 2f64.sqrt();
            assert!((ellipse_distance(0.5, 0.5, a) - short).abs() < 1e-9);
        }
        let e = edge_params(0.7, 1.3).unwrap();
        assert!(ellipse_distance(e.u, e.v, 1.3) < 1e-9);
        assert!((ellipse_distance(1.0, 1.0, 1.0) - (2f64.sqrt() / 2.0 - 0.5)).abs() < 1e-9);
    }

    #[test]
    fn edge_points_lie_on_the_ellipse_exactly() {
        for k in [r(1, 2), r(1, 1), r(2, 1)] {
            for a in [r(1, 2), r(1, 1), r(2, 1)] {
                let e = ExactEdgeParams::new(k.clone(), a.clone()).unwrap();
                assert!(ellipse_residual_exact(&e.u, &e.v, &a).is_zero(), "k={k} a={a}");
                assert!(e.u.is_positive());
            }
        }
    }

    #[test]
    fn values_at_unit_weight() {
        let e = ExactEdgeParams::new(r(1, 1), r(1, 1)).unwrap();
        let d = r(2, 1);
        let s = Surd::root(&d);
        let one = Surd::rational(r(1, 1), &d);
        let two = Surd::rational(r(2, 1), &d);
        assert_eq!(e.u, (&Surd::rational(r(4, 1), &d) + &s.scale(&r(2, 1))).recip());
        assert_eq!(e.z_c, (&one + &s).recip());
        assert_eq!(e.alpha, (&two + &s).recip());
        let lc = &(&one + &s) / &(&Surd::rational(r(8, 1), &d) + &s.scale(&r(4, 1)));
        assert_eq!(e.lambda_cubed, lc);
        let f = EdgeParams::from(&e);
        assert!((f.lambda - lc.to_f64().cbrt()).abs() < 1e-15);

        let south = ExactEdgeParams::new(r(-1, 1), r(1, 1)).unwrap();
        assert_eq!(south.regime, EdgeRegime::South);
        assert_eq!(south.beta, &s - &one);
    }

    #[test]
    fn out_of_range_slopes() {
        assert!(edge_params(0.0, 1.0).is_err());
        // -a/sqrt(1+a^2) = -0.707 at a = 1
        assert!(edge_params(-0.5, 1.0).is_err());
        assert!(edge_params(-1.5, 1.0).is_err());
        assert!(edge_params(-1.0, 1.0).is_ok());
    }

    #[test]
    fn saddle_is_a_double_zero() {
        for (kn, kd) in [(1, 2), (1, 1), (3, 1), (-1, 1), (-6, 5)] {
            for a in [r(1, 2), r(1, 1), r(2, 1)] {
                let Ok(e) = ExactEdgeParams::new(r(kn, kd), a.clone()) else {
                    continue;
                };
                let [g1, g2, g3] = e.saddle_derivatives(&e.z_c);
                assert!(g1.is_zero() && g2.is_zero(), "k={kn}/{kd} a={a}");
                assert!(!g3.is_zero());
                let one = Surd::rational(r(1, 1), &e.alpha.d);
                assert_eq!(&e.alpha * &(&one - &e.beta), one);
            }
        }
    }

    #[test]
    fn omega_map_at_the_figure_point() {
        let g = omega_map(0.5, (2.0 + 2f64.sqrt()) / 4.0, 1.0).unwrap();
        let want = Complex64::from_polar(1.0, PI / 4.0);
        assert!((g.z_xi - want).norm() < 1e-14);
        assert!(omega_map(0.95, 0.95, 1.0).is_err());
    }

    #[test]
    fn poisson_plug_ins() {
        assert_eq!(poisson_density(1.0), 0.0);
        assert_eq!(poisson_density(0.0), 1.0);
        assert_eq!(poisson_density(-3.0), 2.0);
        assert_eq!(poisson_density(4.0), 0.0);
        let c = poisson_prediction(1.0, 1.0, 0.0).unwrap().c;
        assert!((c - PI.powf(2.0 / 3.0) * 2f64.cbrt()).abs() < 1e-14);
        assert!(poisson_prediction(-1.0, 1.0, 0.0).is_err());
    }
}
