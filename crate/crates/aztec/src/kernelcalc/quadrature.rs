//! Trapezoidal rule on circles with node doubling and precision escalation.
//!
//! For an integrand analytic in an annulus around the circle the rule
//! converges geometrically, so the difference between successive doublings
//! is a usable error estimate. Rounding is estimated from the size of the
//! summands; when it exceeds the tolerance in double precision the whole
//! evaluation is repeated in double-double (106-bit) arithmetic, and only if
//! that fails too does it stop with `PrecisionExhausted`.

use std::fmt::Debug;

use std::ops::Neg;

use num_complex::Complex;
use num_traits::Num;

use crate::dd::Dd;

use super::KernelError;

const MIN_NODES: usize = 16;
pub const MAX_NODES: usize = 1 << 14;
pub const MAX_NODES_2D: usize = 1 << 10;

/// Real types the quadrature can run in.
pub trait QuadFloat: Copy + Num + Neg<Output = Self> + PartialOrd + Debug {
    const BITS: u32;
    fn of(v: f64) -> Self;
    fn as_f64(self) -> f64;
    fn sqrt(self) -> Self;
}

impl QuadFloat for f64 {
    const BITS: u32 = 53;
    fn of(v: f64) -> Self {
        v
    }
    fn as_f64(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
}

impl QuadFloat for Dd {
    const BITS: u32 = 106;
    fn of(v: f64) -> Self {
        Dd::new(v)
    }
    fn as_f64(self) -> f64 {
        self.to_f64()
    }
    fn sqrt(self) -> Self {
        Dd::sqrt(self)
    }
}

fn unit_roundoff<F: QuadFloat>() -> f64 {
    (-(F::BITS as f64)).exp2()
}

pub trait Integrand1 {
    fn eval<F: QuadFloat>(&self, z: Complex<F>) -> Complex<F>;
}

pub trait Integrand2 {
    fn eval<F: QuadFloat>(&self, w: Complex<F>, z: Complex<F>) -> Complex<F>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: f64,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: f64, radius: f64) -> Self {
        Circle { center, radius }
    }

    /// Nodes `c + r e^(i pi (2k+1)/n)` with weights `dz / (2 pi i)`, for `n`
    /// a power of two.
    fn nodes<F: QuadFloat>(&self, n: usize) -> Vec<(Complex<F>, Complex<F>)> {
        let c = Complex::new(F::of(self.center), F::zero());
        let r = F::of(self.radius);
        let scale = F::one() / F::of(n as f64);
        odd_roots(n)
            .into_iter()
            .map(|u: Complex<F>| {
                let e = u.scale(r);
                (c + e, e.scale(scale))
            })
            .collect()
    }
}

/// `e^(i pi (2k+1)/n)` for `k < n`, `n = 2^p`, accurate to the working
/// precision: angles `pi/2^j` come from half-angle steps starting at `i`,
/// and each root is a product of at most `p + 1` of them.
fn odd_roots<F: QuadFloat>(n: usize) -> Vec<Complex<F>> {
    assert!(n.is_power_of_two() && n >= 2, "node count must be a power of two");
    let p = n.trailing_zeros() as usize;
    let two = F::of(2.0);
    // halves[j] = e^(i pi / 2^j)
    let mut halves: Vec<Complex<F>> = vec![Complex::new(-F::one(), F::zero()), Complex::new(F::zero(), F::one())];
    while halves.len() <= p {
        let last = halves[halves.len() - 1];
        let cos = ((F::one() + last.re) / two).sqrt();
        let sin = last.im / (two * cos);
        halves.push(Complex::new(cos, sin));
    }
    // bit b of m = 2k+1 contributes e^(i pi 2^b / 2^p)
    (0..n)
        .map(|k| {
            let m = 2 * k + 1;
            let mut acc = Complex::new(F::one(), F::zero());
            for b in 0..=p {
                if (m >> b) & 1 == 1 {
                    acc = acc * halves[p - b];
                }
            }
            acc
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex<f64>,
    /// Rounding residue of `value` when computed in double-double, so that
    /// nearly equal integrals can be subtracted without losing it.
    pub value_lo: Complex<f64>,
    pub error: f64,
    pub nodes: usize,
    pub precision_bits: u32,
}

fn to_c64<F: QuadFloat>(z: Complex<F>) -> Complex<f64> {
    Complex::new(z.re.as_f64(), z.im.as_f64())
}

fn lo_c64<F: QuadFloat>(z: Complex<F>) -> Complex<f64> {
    let hi = to_c64(z);
    to_c64(z - Complex::new(F::of(hi.re), F::of(hi.im)))
}

impl Quadrature {
    fn dd(&self) -> Complex<Dd> {
        Complex::new(
            Dd::new(self.value.re) + Dd::new(self.value_lo.re),
            Dd::new(self.value.im) + Dd::new(self.value_lo.im),
        )
    }

    /// `self - other`, formed before rounding to double.
    pub fn sub(&self, other: &Quadrature) -> Quadrature {
        let d = self.dd() - other.dd();
        Quadrature {
            value: to_c64(d),
            value_lo: lo_c64(d),
            error: self.error + other.error,
            nodes: self.nodes.max(other.nodes),
            precision_bits: self.precision_bits.min(other.precision_bits),
        }
    }

    pub fn scale(&self, c: Complex<f64>) -> Quadrature {
        let cd = Complex::new(Dd::new(c.re), Dd::new(c.im));
        let v = self.dd() * cd;
        Quadrature {
            value: to_c64(v),
            value_lo: lo_c64(v),
            error: self.error * c.norm(),
            ..*self
        }
    }
}

/// `(1 / 2 pi i)` times the integral of `f` over `c`.
pub fn contour_integral<I: Integrand1>(c: Circle, tol: f64, f: &I) -> Result<Quadrature, KernelError> {
    escalate(|| single::<f64, I>(c, tol, f), || single::<Dd, I>(c, tol, f))
}

/// `(1 / 2 pi i)^2` times the iterated integral over `outer` (variable `w`)
/// and `inner` (variable `z`) of `f(w, z)`. The circles must not meet.
pub fn double_contour_integral<I: Integrand2>(
    outer: Circle,
    inner: Circle,
    tol: f64,
    f: &I,
) -> Result<Quadrature, KernelError> {
    escalate(
        || double::<f64, I>(outer, inner, tol, f),
        || double::<Dd, I>(outer, inner, tol, f),
    )
}

fn escalate(
    low: impl FnOnce() -> Result<Quadrature, KernelError>,
    high: impl FnOnce() -> Result<Quadrature, KernelError>,
) -> Result<Quadrature, KernelError> {
    match low() {
        Err(KernelError::PrecisionExhausted { .. }) => high(),
        other => other,
    }
}

fn single<F: QuadFloat, I: Integrand1>(c: Circle, tol: f64, f: &I) -> Result<Quadrature, KernelError> {
    doubling::<F>(tol, MAX_NODES, |n| {
        let mut sum = Complex::new(F::zero(), F::zero());
        let mut mag = 0.0;
        for (z, dz) in c.nodes::<F>(n) {
            let t = f.eval(z) * dz;
            mag += to_c64(t).norm();
            sum = sum + t;
        }
        (sum, mag)
    })
}

fn double<F: QuadFloat, I: Integrand2>(outer: Circle, inner: Circle, tol: f64, f: &I) -> Result<Quadrature, KernelError> {
    doubling::<F>(tol, MAX_NODES_2D, |n| {
        let zs = inner.nodes::<F>(n);
        let mut sum = Complex::new(F::zero(), F::zero());
        let mut mag = 0.0;
        for (w, dw) in outer.nodes::<F>(n) {
            for &(z, dz) in &zs {
                let t = f.eval(w, z) * dw * dz;
                mag += to_c64(t).norm();
                sum = sum + t;
            }
        }
        (sum, mag)
    })
}

fn doubling<F: QuadFloat>(
    tol: f64,
    max_nodes: usize,
    mut rule: impl FnMut(usize) -> (Complex<F>, f64),
) -> Result<Quadrature, KernelError> {
    let mut n = MIN_NODES;
    let (mut prev, _) = rule(n);
    let mut prev_diff = f64::INFINITY;
    loop {
        n *= 2;
        let (cur, mag) = rule(n);
        // Each summand carries a few units of relative error, and the errors
        // are smooth in the node angle, so they add up rather than cancel.
        let round = 8.0 * unit_roundoff::<F>() * mag;
        if round > tol {
            return Err(KernelError::PrecisionExhausted {
                tolerance: tol,
                achievable: round,
            });
        }
        let diff = to_c64(cur - prev).norm();
        if diff <= tol {
            return Ok(Quadrature {
                value: to_c64(cur),
                value_lo: lo_c64(cur),
                error: diff.max(round),
                nodes: n,
                precision_bits: F::BITS,
            });
        }
        let stalled = n >= 8 * MIN_NODES && diff >= prev_diff;
        if stalled || n >= max_nodes {
            return Err(KernelError::PrecisionExhausted {
                tolerance: tol,
                achievable: diff,
            });
        }
        prev = cur;
        prev_diff = diff;
    }
}

/// Trapezoidal value at a fixed node count, for convergence studies.
pub fn double_contour_fixed<F: QuadFloat, I: Integrand2>(outer: Circle, inner: Circle, n: usize, f: &I) -> Complex<f64> {
    let zs = inner.nodes::<F>(n);
    let mut sum = Complex::new(F::zero(), F::zero());
    for (w, dw) in outer.nodes::<F>(n) {
        for &(z, dz) in &zs {
            sum = sum + f.eval(w, z) * dw * dz;
        }
    }
    to_c64(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c<F: QuadFloat>(v: f64) -> Complex<F> {
        Complex::new(F::of(v), F::zero())
    }

    struct SimplePole;
    impl Integrand1 for SimplePole {
        fn eval<F: QuadFloat>(&self, z: Complex<F>) -> Complex<F> {
            Complex::new(F::one(), F::zero()) / (z * (z - c(2.0)))
        }
    }

    struct Nested;
    impl Integrand2 for Nested {
        fn eval<F: QuadFloat>(&self, w: Complex<F>, z: Complex<F>) -> Complex<F> {
            Complex::new(F::one(), F::zero()) / (z * (w - z) * (w - c(1.0)))
        }
    }

    struct Huge(f64);
    impl Integrand1 for Huge {
        fn eval<F: QuadFloat>(&self, z: Complex<F>) -> Complex<F> {
            (z * c(self.0)).powi(8) / z
        }
    }

    #[test]
    fn roots_are_accurate() {
        let r: Vec<Complex<Dd>> = odd_roots(64);
        for (k, u) in r.iter().enumerate() {
            let m = 2 * k + 1;
            let theta = std::f64::consts::PI * m as f64 / 64.0;
            assert!((u.re.as_f64() - theta.cos()).abs() < 1e-15);
            assert!((u.im.as_f64() - theta.sin()).abs() < 1e-15);
            let norm = u.re * u.re + u.im * u.im - Dd::new(1.0);
            assert!(norm.as_f64().abs() < 1e-30);
        }
    }

    #[test]
    fn simple_residues() {
        let q = contour_integral(Circle::new(0.0, 0.5), 1e-13, &SimplePole).unwrap();
        assert!((q.value - Complex::new(-0.5, 0.0)).norm() < 1e-13);
        assert_eq!(q.precision_bits, 53);
    }

    #[test]
    fn nested_circles() {
        // inner residue 1 / (w (w - 1)); outer residue at w = 1 is 1
        let q = double_contour_integral(Circle::new(1.0, 0.5), Circle::new(0.0, 0.25), 1e-12, &Nested).unwrap();
        assert!((q.value - Complex::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn difference_keeps_low_part() {
        let a = Quadrature {
            value: Complex::new(1.0, 0.0),
            value_lo: Complex::new(1e-20, 0.0),
            error: 0.0,
            nodes: 16,
            precision_bits: 106,
        };
        let b = Quadrature { value_lo: Complex::new(0.0, 0.0), ..a };
        assert_eq!(a.sub(&b).value, Complex::new(1e-20, 0.0));
    }

    #[test]
    fn escalates_then_gives_up() {
        // summands of size 1e8 cancelling to 0
        let q = contour_integral(Circle::new(0.0, 1.0), 1e-12, &Huge(10.0)).unwrap();
        assert_eq!(q.precision_bits, 106);
        assert!(q.value.norm() < 1e-12);
        let r = contour_integral(Circle::new(0.0, 1.0), 1e-12, &Huge(1e4));
        assert!(matches!(r, Err(KernelError::PrecisionExhausted { .. })));
    }
}
