//! The Airy function, the Airy kernel, and Fredholm determinants of it.
//!
//! `Ai` is summed from its Maclaurin series in double-double for
//! `-12 <= x <= 6` and from the standard asymptotic expansions outside.
//! Near `x = 8` the series cancels against the growing solution by a factor
//! of about `1e13`, which the double-double sum and constants absorb.

use std::f64::consts::{FRAC_PI_4, PI};
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_traits::{One, Zero};
use twofloat::TwoFloat;

use super::ScalingError;
use crate::dd::Dd;
use crate::exactdimer::DenseMatrix;

pub const AIRY_RANGE: f64 = 40.0;
/// `Ai(0)` and `-Ai'(0)` as double-double (high, low) pairs.
const AI0: (f64, f64) = (0.355_028_053_887_817_2, 2.052_336_324_362_12e-17);
const MINUS_AIP0: (f64, f64) = (0.258_819_403_792_806_8, -2.522_243_111_610_832e-17);
const SERIES_MIN: f64 = -12.0;
const SERIES_MAX: f64 = 8.0;
/// Beyond this `Ai(s)^2` and the kernel are below `1e-34`.
const KERNEL_CUTOFF: f64 = 14.0;

/// `(Ai(x), Ai'(x))` for any `x >= -AIRY_RANGE`; underflows to zero far right.
fn airy_pair(x: f64) -> (f64, f64) {
    if x > SERIES_MAX {
        asymptotic_right(x)
    } else if x < SERIES_MIN {
        asymptotic_left(-x)
    } else {
        series(x)
    }
}

fn series(x: f64) -> (f64, f64) {
    let xd = Dd::new(x);
    let x3 = xd * xd * xd;
    // f = sum x^(3k) / prod (3j-1)(3j), g = sum x^(3k+1) / prod (3j)(3j+1)
    let (mut f, mut g) = (Dd::one(), xd);
    let (mut tf, mut tg) = (Dd::one(), xd);
    let (mut df, mut dg) = (Dd::zero(), Dd::one());
    let (mut tdf, mut tdg) = (Dd::zero(), Dd::one());
    let mut k = 1.0;
    loop {
        tf = tf * x3 / Dd::new((3.0 * k - 1.0) * (3.0 * k));
        tg = tg * x3 / Dd::new((3.0 * k) * (3.0 * k + 1.0));
        tdf = if k == 1.0 {
            xd * xd / Dd::new(2.0)
        } else {
            tdf * x3 / Dd::new((3.0 * k - 3.0) * (3.0 * k - 1.0))
        };
        tdg = tdg * x3 / Dd::new((3.0 * k - 2.0) * (3.0 * k));
        f = f + tf;
        g = g + tg;
        df = df + tdf;
        dg = dg + tdg;
        let small = |t: Dd| t.abs().hi() < 1e-36;
        if k > 3.0 && small(tf) && small(tg) && small(tdf) && small(tdg) {
            break;
        }
        k += 1.0;
    }
    let c1 = Dd(TwoFloat::new_add(AI0.0, AI0.1));
    let c2 = Dd(TwoFloat::new_add(MINUS_AIP0.0, MINUS_AIP0.1));
    ((c1 * f - c2 * g).to_f64(), (c1 * df - c2 * dg).to_f64())
}

/// `u_k` and `v_k` of the asymptotic expansions.
fn asymptotic_coefficients(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0];
    let mut v = vec![1.0];
    for k in 1..count {
        let kf = k as f64;
        let next = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(next);
        v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * next);
    }
    (u, v)
}

/// Sums `sum_k sign(k) c_k zeta^-k` over `ks` until the terms stop shrinking.
fn truncated(coef: &[f64], zeta: f64, ks: impl Iterator<Item = usize>, alternate: bool) -> f64 {
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    for (j, k) in ks.enumerate() {
        let t = coef[k] * zeta.powi(-(k as i32));
        if t.abs() >= last {
            break;
        }
        last = t.abs();
        sum += if alternate && j % 2 == 1 { -t } else { t };
        if t.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

const ASYMPTOTIC_TERMS: usize = 40;

fn asymptotic_right(x: f64) -> (f64, f64) {
    let (u, v) = asymptotic_coefficients(ASYMPTOTIC_TERMS);
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    let su = truncated(&u, zeta, 0..ASYMPTOTIC_TERMS, true);
    let sv = truncated(&v, zeta, 0..ASYMPTOTIC_TERMS, true);
    let q = x.powf(0.25);
    (e / q * su, -e * q * sv)
}

/// `(Ai(-t), Ai'(-t))` for large `t`.
fn asymptotic_left(t: f64) -> (f64, f64) {
    let (u, v) = asymptotic_coefficients(ASYMPTOTIC_TERMS);
    let zeta = 2.0 / 3.0 * t.powf(1.5);
    let (s, c) = (zeta - FRAC_PI_4).sin_cos();
    let half = ASYMPTOTIC_TERMS / 2;
    let ue = truncated(&u, zeta, (0..half).map(|k| 2 * k), true);
    let uo = truncated(&u, zeta, (0..half).map(|k| 2 * k + 1), true);
    let ve = truncated(&v, zeta, (0..half).map(|k| 2 * k), true);
    let vo = truncated(&v, zeta, (0..half).map(|k| 2 * k + 1), true);
    let q = t.powf(0.25);
    let rp = PI.sqrt();
    ((c * ue + s * uo) / (rp * q), q / rp * (s * ve - c * vo))
}

fn check_range(x: f64) -> Result<(), ScalingError> {
    if x.is_finite() && x.abs() <= AIRY_RANGE {
        Ok(())
    } else {
        Err(ScalingError::AiryOutOfRange(x))
    }
}

pub fn airy_ai(x: f64) -> Result<f64, ScalingError> {
    check_range(x)?;
    Ok(airy_pair(x).0)
}

pub fn airy_ai_prime(x: f64) -> Result<f64, ScalingError> {
    check_range(x)?;
    Ok(airy_pair(x).1)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub(crate) fn legendre(m: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(m).expect("at least one node"));
    rule.as_node_weight_pairs().to_vec()
}

/// Integrates `f` over `[lo, hi]` on unit panels with `m` nodes each.
fn panels(lo: f64, hi: f64, width: f64, rule: &[(f64, f64)], mut f: impl FnMut(f64) -> f64) -> f64 {
    let count = ((hi - lo) / width).ceil().max(1.0) as usize;
    let h = (hi - lo) / count as f64;
    let mut total = 0.0;
    for p in 0..count {
        let a = lo + p as f64 * h;
        let mid = a + 0.5 * h;
        let mut s = 0.0;
        for &(x, w) in rule {
            s += w * f(mid + 0.5 * h * x);
        }
        total += 0.5 * h * s;
    }
    total
}

/// `K_Ai(x, y) = int_0^inf Ai(x+t) Ai(y+t) dt`, by Gauss-Legendre panels up
/// to the point where both factors are below `1e-17`; the neglected tail is
/// smaller than `1e-30`. The result is checked against a finer rule.
pub fn airy_kernel(x: f64, y: f64) -> Result<f64, ScalingError> {
    check_range(x)?;
    check_range(y)?;
    let upper = (KERNEL_CUTOFF - x.min(y)).max(1.0);
    let f = |t: f64| airy_pair(x + t).0 * airy_pair(y + t).0;
    let coarse = panels(0.0, upper, 1.0, &legendre(20), f);
    let fine = panels(0.0, upper, 0.5, &legendre(24), f);
    if (coarse - fine).abs() > 1e-12 {
        return Err(ScalingError::NotConverged {
            what: "Airy kernel quadrature",
            change: (coarse - fine).abs(),
        });
    }
    Ok(fine)
}

/// `K_Ai(x, x) = Ai'(x)^2 - x Ai(x)^2`.
pub fn airy_kernel_diagonal(x: f64) -> f64 {
    let (a, ap) = airy_pair(x);
    ap * ap - x * a * a
}

/// The closed form `(Ai(x) Ai'(y) - Ai'(x) Ai(y)) / (x - y)`, with a Taylor
/// expansion about the diagonal for `|x - y| < 1e-4`.
pub fn airy_kernel_closed(x: f64, y: f64) -> f64 {
    let h = y - x;
    if h.abs() < 1e-4 {
        let (a, ap) = airy_pair(x);
        return (ap * ap - x * a * a) - h * a * a / 2.0 - h * h / 6.0 * (a * ap + x * x * a * a - x * ap * ap);
    }
    let (ax, apx) = airy_pair(x);
    let (ay, apy) = airy_pair(y);
    (ax * apy - apx * ay) / (x - y)
}

/// Where the row integral switches from quadrature to the averaged tail.
const ROW_TAIL_START: f64 = 2000.0;

/// `int K_Ai(x, y)^2 dy` over the real line.
///
/// Quadrature covers `[-2000, 14]`. Below that, `Ai(y)^2` and `Ai'(y)^2` are
/// replaced by their period averages `|y|^(-1/2)/(2 pi)` and
/// `|y|^(1/2)/(2 pi)`; the oscillating remainder integrates to `O(2000^-2)`.
pub fn airy_row_integral(x: f64) -> Result<f64, ScalingError> {
    check_range(x)?;
    let rule = legendre(32);
    let body = panels(-ROW_TAIL_START, KERNEL_CUTOFF.max(x + 1.0), 0.5, &rule, |y| airy_kernel_closed(x, y).powi(2));
    let (a, ap) = airy_pair(x);
    let l = ROW_TAIL_START;
    // t = L / s^2 maps [L, inf) onto (0, 1]
    let tail_rule = legendre(40);
    let ta = panels(0.0, 1.0, 1.0, &tail_rule, |s| 2.0 * l.powf(1.5) / (x * s * s + l).powi(2));
    let tb = panels(0.0, 1.0, 1.0, &tail_rule, |s| 2.0 * l.sqrt() * s * s / (x * s * s + l).powi(2));
    Ok(body + (a * a * ta + ap * ap * tb) / (2.0 * PI))
}

/// The Airy kernel family whose gap probabilities [`fredholm_gap`] computes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GapMode {
    /// `det(I - alpha K_Ai)`: each point kept with probability `alpha`.
    Thinned { alpha: f64 },
    /// Points repeated geometrically with ratio `beta`. On an interval the
    /// multiplier `phi / (1 - beta + beta phi)` at `phi = 1` is 1, so the
    /// determinant is that of `K_Ai` itself.
    Thickened { beta: f64 },
}

impl GapMode {
    fn multiplier(self) -> Result<f64, ScalingError> {
        match self {
            GapMode::Thinned { alpha } if (0.0..=1.0).contains(&alpha) => Ok(alpha),
            GapMode::Thickened { beta } if (0.0..1.0).contains(&beta) => Ok(1.0),
            _ => Err(ScalingError::InvalidGapParameter(self)),
        }
    }
}

/// Default truncation length of `[xi, inf)`; `K_Ai(s, s) < 1e-10` past `xi + 16`
/// for every `xi >= -16`.
pub const GAP_TRUNCATION: f64 = 16.0;

/// Fredholm determinant on `[start, end]` by Gauss-Legendre Nystrom with `m` nodes.
pub fn fredholm_fixed(mode: GapMode, start: f64, end: f64, m: usize) -> Result<f64, ScalingError> {
    let c = mode.multiplier()?;
    check_range(start)?;
    check_range(end)?;
    let rule = legendre(m);
    let half = 0.5 * (end - start);
    let pts: Vec<(f64, f64)> = rule.iter().map(|&(x, w)| (start + half * (x + 1.0), (w * half).sqrt())).collect();
    let mat = DenseMatrix::from_fn(m, m, |i, j| {
        let (xi, wi) = pts[i];
        let (xj, wj) = pts[j];
        let kij = if i == j { airy_kernel_diagonal(xi) } else { airy_kernel_closed(xi, xj) };
        let id = if i == j { 1.0 } else { 0.0 };
        id - c * wi * kij * wj
    });
    Ok(mat.determinant())
}

/// Result of [`fredholm_gap`] with the resolution it converged at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapValue {
    pub value: f64,
    pub nodes: usize,
    pub change: f64,
}

/// Gap probability of the Airy family on `[start, end]`, or on
/// `[start, start + GAP_TRUNCATION]` when `end` is `None`. Nodes double from
/// 16 until successive values agree to `1e-6`.
pub fn fredholm_gap(mode: GapMode, start: f64, end: Option<f64>) -> Result<GapValue, ScalingError> {
    let end = end.unwrap_or(start + GAP_TRUNCATION).min(AIRY_RANGE);
    if end <= start {
        return Ok(GapValue {
            value: 1.0,
            nodes: 0,
            change: 0.0,
        });
    }
    let mut m = 16;
    let mut prev = fredholm_fixed(mode, start, end, m)?;
    let mut change = f64::INFINITY;
    while m < 512 {
        m *= 2;
        let next = fredholm_fixed(mode, start, end, m)?;
        change = (next - prev).abs();
        prev = next;
        if change < 1e-6 {
            return Ok(GapValue { value: next, nodes: m, change });
        }
    }
    Err(ScalingError::NotConverged {
        what: "Fredholm determinant",
        change,
    })
}
