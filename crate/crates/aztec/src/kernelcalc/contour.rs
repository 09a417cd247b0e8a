//! The integrands of the kernel formulas on explicit circles, for the
//! numeric regime.

use num_complex::{Complex, Complex64};

use crate::dd::Dd;
use crate::lattice::{Color, Vertex};

use super::quadrature::{contour_integral, double_contour_fixed, double_contour_integral, Circle, Integrand1, Integrand2, QuadFloat, Quadrature};
use super::{check_color, decode, half, quarter_sign, KernelError};

fn k<F: QuadFloat>(v: f64) -> Complex<F> {
    Complex::new(F::of(v), F::zero())
}

fn pw<F: QuadFloat>(z: Complex<F>, e: i64) -> Complex<F> {
    z.powi(e as i32)
}

/// Circles for `f1` and the line kernel: `|w - 1/a| = rho_w` and
/// `|z| = rho_z` with `rho_z + rho_w = 0.8/a`, split in proportion to the pole
/// orders at the origin and at `1/a` so that neither factor dominates the
/// summands.
fn split_circles(a: f64, z_order: i64, w_order: i64) -> (Circle, Circle) {
    let (pz, pw) = (z_order.max(1) as f64, w_order.max(1) as f64);
    let total = 0.8 / a;
    let rz = total * pz / (pz + pw);
    (Circle::new(1.0 / a, total - rz), Circle::new(0.0, rz))
}

/// `w^ew (a+z)^p1 (az-1)^p2 / (z^zx (w-z) (aw-1)^qa (a+w)^qb)`
struct DoubleResidueIntegrand {
    a: f64,
    zx: i64,
    p1: i64,
    p2: i64,
    ew: i64,
    qa: i64,
    qb: i64,
}

impl Integrand2 for DoubleResidueIntegrand {
    fn eval<F: QuadFloat>(&self, w: Complex<F>, z: Complex<F>) -> Complex<F> {
        let a = k::<F>(self.a);
        let one = k::<F>(1.0);
        pw(w, self.ew) * pw(a + z, self.p1) * pw(a * z - one, self.p2)
            / (pw(z, self.zx) * (w - z) * pw(a * w - one, self.qa) * pw(a + w, self.qb))
    }
}

fn f1_integrand(n: usize, a: f64, x: Vertex, y: Vertex) -> DoubleResidueIntegrand {
    let n = n as i64;
    DoubleResidueIntegrand {
        a,
        zx: (x.x1 + 1) / 2,
        p1: half(x.x2),
        p2: n - half(x.x2),
        ew: half(y.x1),
        qa: n - (y.x2 - 1) / 2,
        qb: (y.x2 + 1) / 2,
    }
}

pub fn f1_quadrature(n: usize, a: f64, x: Vertex, y: Vertex, tol: f64) -> Result<Quadrature, KernelError> {
    check_color(x, Color::White)?;
    check_color(y, Color::Black)?;
    let f = f1_integrand(n, a, x, y);
    let (cw, cz) = split_circles(a, f.zx, f.qa);
    let q = double_contour_integral(cw, cz, tol, &f)?;
    Ok(q.scale(quarter_sign::<f64>(x.x1 + x.x2 + y.x1 + y.x2)))
}

/// `f1` by the trapezoidal rule with `nodes` points per circle, in
/// double-double, without any convergence control.
pub fn f1_fixed_nodes(n: usize, a: f64, x: Vertex, y: Vertex, nodes: usize) -> Result<Complex64, KernelError> {
    check_color(x, Color::White)?;
    check_color(y, Color::Black)?;
    let f = f1_integrand(n, a, x, y);
    let (cw, cz) = split_circles(a, f.zx, f.qa);
    Ok(double_contour_fixed::<Dd, _>(cw, cz, nodes, &f) * quarter_sign::<f64>(x.x1 + x.x2 + y.x1 + y.x2))
}

/// `z^p (z + 1/a)^q / (z + 1/a + a)^(p+1)`
struct F2Integrand {
    a: f64,
    p: i64,
    q: i64,
}

impl Integrand1 for F2Integrand {
    fn eval<F: QuadFloat>(&self, z: Complex<F>) -> Complex<F> {
        let inv = k::<F>(1.0) / k::<F>(self.a);
        pw(z, self.p) * pw(z + inv, self.q) / pw(z + inv + k(self.a), self.p + 1)
    }
}

pub fn f2_quadrature(_n: usize, a: f64, x: Vertex, y: Vertex, tol: f64) -> Result<Quadrature, KernelError> {
    check_color(x, Color::White)?;
    check_color(y, Color::Black)?;
    let f = F2Integrand {
        a,
        p: (y.x2 - x.x2 - 1) / 2,
        q: (y.x1 - x.x1 - 1) / 2,
    };
    // poles at 0 and possibly -1/a; the third factor sits further out
    let r = contour_integral(Circle::new(0.0, 0.5 / a), tol, &f)?;
    Ok(r.scale(quarter_sign::<f64>(x.x1 + x.x2 + y.x1 + y.x2) * a.powi(f.p as i32)))
}

pub fn line_kernel_quadrature(n: usize, a: f64, x1: i64, x2: i64, r: i64, tol: f64) -> Result<Quadrature, KernelError> {
    let n = n as i64;
    let f = DoubleResidueIntegrand {
        a,
        zx: x1,
        p1: r,
        p2: n - r,
        ew: x2,
        qa: n - r,
        qb: r + 1,
    };
    let (cw, cz) = split_circles(a, x1, n - r);
    let q = double_contour_integral(cw, cz, tol, &f)?;
    Ok(q.scale(Complex64::new(-1.0, 0.0)))
}

/// Circles about the origin with `a < r1 < 1/a` exist only for `a < 1`, so
/// the `w` circle is centred at `-a/2` instead: it encloses `0` and `-a`,
/// excludes `1/a`, and contains the `z` circle.
fn particle_circles(a: f64) -> (Circle, Circle) {
    let big = 0.5 * (a + 1.0 / a);
    (Circle::new(-0.5 * a, big), Circle::new(0.0, 0.25 / a))
}

struct ParticleIntegrand {
    a: f64,
    n: i64,
    u2: i64,
    v2: i64,
    r: i64,
    s: i64,
    e1: i64,
    e2: i64,
}

impl Integrand2 for ParticleIntegrand {
    fn eval<F: QuadFloat>(&self, w: Complex<F>, z: Complex<F>) -> Complex<F> {
        let a = k::<F>(self.a);
        let one = k::<F>(1.0);
        pw(z, self.v2) / pw(w, self.u2) * pw(one - a * z, self.n - self.s + self.e2) * pw(one + a / z, self.s)
            / (pw(one - a * w, self.n - self.r + self.e1) * pw(one + a / w, self.r))
            / ((w - z) * z)
    }
}

struct PhiIntegrand {
    a: f64,
    d2: i64,
    r: i64,
    s: i64,
    e: i64,
}

impl Integrand1 for PhiIntegrand {
    fn eval<F: QuadFloat>(&self, z: Complex<F>) -> Complex<F> {
        let a = k::<F>(self.a);
        let one = k::<F>(1.0);
        pw(z, self.d2) * pw(one - a * z, self.e) / pw(one + a / z, self.r - self.s) / z
    }
}

pub fn particle_parts_quadrature(
    n: usize,
    a: f64,
    (u1, u2): (i64, i64),
    (v1, v2): (i64, i64),
    tol: f64,
) -> Result<(Quadrature, Quadrature), KernelError> {
    let (e1, r) = decode(u1);
    let (e2, s) = decode(v1);
    let (cw, cz) = particle_circles(a);
    let f = ParticleIntegrand {
        a,
        n: n as i64,
        u2,
        v2,
        r,
        s,
        e1,
        e2,
    };
    let kt = double_contour_integral(cw, cz, tol, &f)?;
    let phi = if u1 < v1 {
        let g = PhiIntegrand {
            a,
            d2: v2 - u2,
            r,
            s,
            e: r - s + e2 - e1,
        };
        contour_integral(cw, tol, &g)?
    } else {
        Quadrature {
            value: Complex64::new(0.0, 0.0),
            value_lo: Complex64::new(0.0, 0.0),
            error: 0.0,
            nodes: 0,
            precision_bits: 53,
        }
    };
    Ok((kt, phi))
}
