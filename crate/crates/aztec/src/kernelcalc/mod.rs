//! Closed-form inverse Kasteleyn entries, Kenyon correlations, the south
//! domino line kernel, its hole dual, and the red/blue particle kernel.
//!
//! Every quantity is a contour integral that can be evaluated two ways:
//! exactly, as iterated residues over rationals (`Regime::Exact`), or by the
//! trapezoidal rule on circles in double precision (`Regime::Numeric`).
//!
//! The exact path works for any weight: a float weight is converted to the
//! dyadic rational it stores, so the result is the exact value for that
//! double. This is also how large orders are handled, where the integrands
//! grow like `e^(O(n))` and double-precision quadrature cancels away.

pub mod contour;
pub mod quadrature;
pub mod series;

use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactdimer::scalar::{i_pow, powi, to_complex64, ExactComplex, Real};
use crate::exactdimer::{kasteleyn_entry, DenseMatrix};
use crate::lattice::{AztecDiamond, Color, Dimer, Vertex, Weight};
use contour::{f1_quadrature, f2_quadrature, line_kernel_quadrature, particle_parts_quadrature};
use quadrature::Quadrature;

const F64_PRECISION_BITS: u32 = 53;
use series::{binomial_product, Factored};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("series known below exponent {order}, coefficient of exponent {needed} requested")]
    TruncationTooShort { needed: i64, order: i64 },
    #[error("residue_at_zero needs a series centred at the origin")]
    NotCenteredAtZero,
    #[error("quadrature cannot reach tolerance {tolerance:e}; best achievable {achievable:e}")]
    PrecisionExhausted { tolerance: f64, achievable: f64 },
    #[error("vertex ({}, {}) has the wrong colour for this argument", .0.x1, .0.x2)]
    WrongColor(Vertex),
    #[error("vertex ({}, {}) is not in the diamond", .0.x1, .0.x2)]
    OutsideDiamond(Vertex),
    #[error("line index {r} is outside 1..={max}")]
    InvalidLine { r: i64, max: i64 },
    #[error("position {x} is outside 1..={n}")]
    InvalidPosition { x: i64, n: i64 },
    #[error("particle coordinates ({u1}, {u2}) do not decode to a vertex")]
    InvalidParticle { u1: i64, u2: i64 },
    #[error("weight must be positive and finite")]
    BadWeight,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    Exact,
    Numeric { tolerance: f64 },
}

impl Default for Regime {
    fn default() -> Self {
        Regime::Exact
    }
}

pub const DEFAULT_TOLERANCE: f64 = 1e-13;

impl Regime {
    pub fn numeric() -> Self {
        Regime::Numeric {
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum KernelEntry {
    Exact(ExactComplex),
    /// `error` is a heuristic bound: the last doubling difference, or the
    /// estimated rounding error if that is larger.
    Numeric {
        value: Complex64,
        error: f64,
        precision_bits: u32,
    },
}

impl KernelEntry {
    pub fn value(&self) -> Complex64 {
        match self {
            KernelEntry::Exact(z) => to_complex64(z),
            KernelEntry::Numeric { value, .. } => *value,
        }
    }

    pub fn exact(&self) -> Option<&ExactComplex> {
        match self {
            KernelEntry::Exact(z) => Some(z),
            KernelEntry::Numeric { .. } => None,
        }
    }

    pub fn error(&self) -> f64 {
        match self {
            KernelEntry::Exact(_) => 0.0,
            KernelEntry::Numeric { error, .. } => *error,
        }
    }

    fn from_quadrature(q: Quadrature) -> Self {
        KernelEntry::Numeric {
            value: q.value,
            error: q.error,
            precision_bits: q.precision_bits,
        }
    }

    pub fn precision_bits(&self) -> Option<u32> {
        match self {
            KernelEntry::Exact(_) => None,
            KernelEntry::Numeric { precision_bits, .. } => Some(*precision_bits),
        }
    }

    fn zip(
        &self,
        other: &KernelEntry,
        exact: impl Fn(&ExactComplex, &ExactComplex) -> ExactComplex,
        num: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> KernelEntry {
        match (self, other) {
            (KernelEntry::Exact(a), KernelEntry::Exact(b)) => KernelEntry::Exact(exact(a, b)),
            _ => KernelEntry::Numeric {
                value: num(self.value(), other.value()),
                error: self.error() + other.error(),
                precision_bits: F64_PRECISION_BITS,
            },
        }
    }

    pub fn sub(&self, other: &KernelEntry) -> KernelEntry {
        self.zip(other, |a, b| a - b, |a, b| a - b)
    }

    pub fn add(&self, other: &KernelEntry) -> KernelEntry {
        self.zip(other, |a, b| a + b, |a, b| a + b)
    }

    pub fn scale(&self, c: &ExactComplex) -> KernelEntry {
        match self {
            KernelEntry::Exact(z) => KernelEntry::Exact(z * c),
            KernelEntry::Numeric {
                value,
                error,
                precision_bits,
            } => {
                let c = to_complex64(c);
                KernelEntry::Numeric {
                    value: value * c,
                    error: error * c.norm(),
                    precision_bits: *precision_bits,
                }
            }
        }
    }

    fn zero_like(regime: Regime) -> KernelEntry {
        match regime {
            Regime::Exact => KernelEntry::Exact(Complex::zero()),
            Regime::Numeric { .. } => KernelEntry::Numeric {
                value: Complex64::zero(),
                error: 0.0,
                precision_bits: F64_PRECISION_BITS,
            },
        }
    }
}

/// The weight as an exact rational; a float weight becomes the dyadic
/// rational it stores.
pub fn exact_weight(diamond: &AztecDiamond) -> Result<BigRational, KernelError> {
    match diamond.weight() {
        Weight::Exact(q) => Ok(q.clone()),
        Weight::Float(f) => BigRational::from_float(*f).ok_or(KernelError::BadWeight),
    }
}

pub(crate) fn check_color(v: Vertex, c: Color) -> Result<(), KernelError> {
    if v.color() == c {
        Ok(())
    } else {
        Err(KernelError::WrongColor(v))
    }
}

pub(crate) fn half(v: i64) -> i64 {
    debug_assert!(v % 2 == 0, "odd exponent {v}");
    v / 2
}

/// `Res_{w=1/a} Res_{z=0}` of
/// `z^-(m+1) P(z) w^ew / ((w - z) (aw - 1)^big_a (a + w)^big_b)`
/// where `P(z) = (a + z)^p1 (az - 1)^p2`.
///
/// The inner residue is `sum_{j<=m} p_j w^(j-m-1)`; the outer one is a
/// Taylor coefficient at `1/a`.
fn double_residue<T: Real>(a: &T, m: i64, p1: i64, p2: i64, ew: i64, big_a: i64, big_b: i64) -> Result<T, KernelError> {
    if m < 0 || big_a <= 0 {
        return Ok(T::zero());
    }
    let poly = binomial_product(a, p1, a, p2, (m + 1) as usize);
    let f = Factored {
        scale: powi(a, -big_a),
        poly,
        factors: vec![
            (T::zero(), ew - m - 1),
            (T::one() / a.clone(), -big_a),
            (-a.clone(), -big_b),
        ],
    };
    f.residue_at(&(T::one() / a.clone()))
}

/// `(-1)^(sum/4)`, read as `i^(sum/2)`.
pub(crate) fn quarter_sign<T: Real>(sum: i64) -> Complex<T> {
    i_pow(half(sum))
}

/// `f1` by residues over any real field.
pub fn f1_residue<T: Real>(n: usize, a: &T, x: Vertex, y: Vertex) -> Result<Complex<T>, KernelError> {
    check_color(x, Color::White)?;
    check_color(y, Color::Black)?;
    let n = n as i64;
    let m = (x.x1 - 1) / 2;
    if x.x1 < 1 {
        return Ok(Complex::zero());
    }
    let d = double_residue(
        a,
        m,
        half(x.x2),
        n - half(x.x2),
        half(y.x1),
        n - (y.x2 - 1) / 2,
        (y.x2 + 1) / 2,
    )?;
    Ok(quarter_sign::<T>(x.x1 + x.x2 + y.x1 + y.x2) * d)
}

/// `f2` by its residue at the origin.
pub fn f2_residue<T: Real>(_n: usize, a: &T, x: Vertex, y: Vertex) -> Result<Complex<T>, KernelError> {
    check_color(x, Color::White)?;
    check_color(y, Color::Black)?;
    let p = (y.x2 - x.x2 - 1) / 2;
    let q = (y.x1 - x.x1 - 1) / 2;
    if p >= 0 {
        return Ok(Complex::zero());
    }
    let inv_a = T::one() / a.clone();
    let f = Factored {
        scale: powi(a, p),
        poly: vec![T::one()],
        factors: vec![
            (T::zero(), p),
            (-inv_a.clone(), q),
            (-(inv_a + a.clone()), -(p + 1)),
        ],
    };
    let r = f.residue_at(&T::zero())?;
    Ok(quarter_sign::<T>(x.x1 + x.x2 + y.x1 + y.x2) * r)
}

pub fn inverse_residue<T: Real>(n: usize, a: &T, x: Vertex, y: Vertex) -> Result<Complex<T>, KernelError> {
    let v = f1_residue(n, a, x, y)?;
    if x.x1 >= y.x1 + 1 {
        Ok(v - f2_residue(n, a, x, y)?)
    } else {
        Ok(v)
    }
}

/// `L(x1, x2)` on line `r` by residues.
pub fn line_kernel_residue<T: Real>(n: usize, a: &T, x1: i64, x2: i64, r: i64) -> Result<T, KernelError> {
    let n = n as i64;
    Ok(-double_residue(a, x1 - 1, r, n - r, x2, n - r, r + 1)?)
}

/// Decode a particle coordinate `u1 = 2r - eps`.
pub(crate) fn decode(u1: i64) -> (i64, i64) {
    let eps = u1.rem_euclid(2);
    (eps, (u1 + eps) / 2)
}

/// `(K~_n, phi)` by residues: the `w` contour encloses `0` and `-a` but not
/// `1/a`, the `z` contour only the origin.
pub fn particle_parts_residue<T: Real>(
    n: usize,
    a: &T,
    (u1, u2): (i64, i64),
    (v1, v2): (i64, i64),
) -> Result<(T, T), KernelError> {
    let n = n as i64;
    let (e1, r) = decode(u1);
    let (e2, s) = decode(v1);
    let inv_a = T::one() / a.clone();
    let neg_a = -a.clone();
    let zero = T::zero();

    // z side: z^(v2-1) (1 + a/z)^s (1 - az)^(n-s+e2) = z^-(m+1) (z+a)^s (1-az)^(n-s+e2)
    let m = s - v2;
    let n1 = n - r + e1;
    let kt = if m < 0 {
        T::zero()
    } else {
        // (1 - az)^k = (-1)^k (az - 1)^k
        let k2 = n - s + e2;
        let sign = if k2 % 2 == 0 { T::one() } else { -T::one() };
        let poly = binomial_product(a, s, a, k2, (m + 1) as usize);
        let f = Factored {
            scale: sign * powi(&neg_a, -n1),
            poly,
            factors: vec![
                (zero.clone(), r - u2 - m - 1),
                (neg_a.clone(), -r),
                (inv_a.clone(), -n1),
            ],
        };
        f.residue_at(&zero)? + f.residue_at(&neg_a)?
    };

    let phi = if u1 < v1 {
        let e = r - s + e2 - e1;
        let f = Factored {
            scale: powi(&neg_a, e),
            poly: vec![T::one()],
            factors: vec![
                (zero.clone(), v2 - u2 - 1 + r - s),
                (neg_a.clone(), s - r),
                (inv_a, e),
            ],
        };
        f.residue_at(&zero)? + f.residue_at(&neg_a)?
    } else {
        T::zero()
    };
    Ok((kt, phi))
}

// ---- public operations -------------------------------------------------

fn float_weight(diamond: &AztecDiamond) -> f64 {
    diamond.weight().to_f64()
}

fn in_diamond(d: &AztecDiamond, v: Vertex) -> Result<(), KernelError> {
    if d.contains(v) {
        Ok(())
    } else {
        Err(KernelError::OutsideDiamond(v))
    }
}

pub fn f1(x: Vertex, y: Vertex, diamond: &AztecDiamond, regime: Regime) -> Result<KernelEntry, KernelError> {
    match regime {
        Regime::Exact => Ok(KernelEntry::Exact(f1_residue(diamond.n(), &exact_weight(diamond)?, x, y)?)),
        Regime::Numeric { tolerance } => Ok(KernelEntry::from_quadrature(f1_quadrature(
            diamond.n(),
            float_weight(diamond),
            x,
            y,
            tolerance,
        )?)),
    }
}

pub fn f2(x: Vertex, y: Vertex, diamond: &AztecDiamond, regime: Regime) -> Result<KernelEntry, KernelError> {
    match regime {
        Regime::Exact => Ok(KernelEntry::Exact(f2_residue(diamond.n(), &exact_weight(diamond)?, x, y)?)),
        Regime::Numeric { tolerance } => Ok(KernelEntry::from_quadrature(f2_quadrature(
            diamond.n(),
            float_weight(diamond),
            x,
            y,
            tolerance,
        )?)),
    }
}

/// `K^-1(x, y)`: `f1` when `x1 < y1 + 1`, `f1 - f2` otherwise.
pub fn inverse_entry(x: Vertex, y: Vertex, diamond: &AztecDiamond, regime: Regime) -> Result<KernelEntry, KernelError> {
    in_diamond(diamond, x)?;
    in_diamond(diamond, y)?;
    let below = x.x1 >= y.x1 + 1;
    match regime {
        Regime::Exact => {
            let v = f1(x, y, diamond, regime)?;
            Ok(if below { v.sub(&f2(x, y, diamond, regime)?) } else { v })
        }
        Regime::Numeric { tolerance } => {
            // f1 and f2 can nearly cancel, so subtract before rounding
            let a = float_weight(diamond);
            let v = f1_quadrature(diamond.n(), a, x, y, tolerance)?;
            let v = if below {
                v.sub(&f2_quadrature(diamond.n(), a, x, y, tolerance)?)
            } else {
                v
            };
            Ok(KernelEntry::from_quadrature(v))
        }
    }
}

/// Every entry of `K^-1`, indexed white x black in canonical order.
pub fn inverse_matrix(diamond: &AztecDiamond, regime: Regime) -> Result<Vec<Vec<KernelEntry>>, KernelError> {
    let blacks = diamond.black_vertices();
    diamond
        .white_vertices()
        .into_iter()
        .map(|w| blacks.iter().map(|&b| inverse_entry(w, b, diamond, regime)).collect())
        .collect()
}

fn determinant(entries: Vec<Vec<KernelEntry>>, regime: Regime) -> KernelEntry {
    let m = entries.len();
    match regime {
        Regime::Exact => {
            let mat = DenseMatrix::from_fn(m, m, |i, j| entries[i][j].exact().cloned().expect("exact regime"));
            KernelEntry::Exact(mat.determinant())
        }
        Regime::Numeric { .. } => {
            let mat = DenseMatrix::from_fn(m, m, |i, j| entries[i][j].value());
            let err = entries.iter().flatten().map(KernelEntry::error).fold(0.0, f64::max);
            let big = entries.iter().flatten().map(|e| e.value().norm()).fold(0.0, f64::max) + err;
            // First-order perturbation of an m x m determinant (Hadamard-style).
            let factorial: f64 = (1..=m).map(|k| k as f64).product();
            KernelEntry::Numeric {
                value: mat.determinant(),
                error: factorial * m as f64 * big.powi(m as i32 - 1) * err,
                precision_bits: F64_PRECISION_BITS,
            }
        }
    }
}

fn kasteleyn_weight(diamond: &AztecDiamond, d: &Dimer, regime: Regime) -> Result<ExactComplex, KernelError> {
    let _ = regime;
    Ok(kasteleyn_entry(d.black, d.white, &exact_weight(diamond)?))
}

/// Joint probability that all `edges` are covered:
/// `det(K(b_i, w_i) K^-1(w_j, b_i))`.
pub fn correlation_probability(edges: &[Dimer], diamond: &AztecDiamond, regime: Regime) -> Result<KernelEntry, KernelError> {
    let mut rows = Vec::with_capacity(edges.len());
    for ei in edges {
        let k = kasteleyn_weight(diamond, ei, regime)?;
        let mut row = Vec::with_capacity(edges.len());
        for ej in edges {
            row.push(inverse_entry(ej.white, ei.black, diamond, regime)?.scale(&k));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Ok(match regime {
            Regime::Exact => KernelEntry::Exact(Complex::one()),
            Regime::Numeric { .. } => KernelEntry::Numeric {
                value: Complex64::one(),
                error: 0.0,
                precision_bits: F64_PRECISION_BITS,
            },
        });
    }
    Ok(determinant(rows, regime))
}

fn check_line(diamond: &AztecDiamond, x1: i64, x2: i64, r: i64) -> Result<(), KernelError> {
    let n = diamond.n() as i64;
    if r < 1 || r > n - 1 {
        return Err(KernelError::InvalidLine { r, max: n - 1 });
    }
    for x in [x1, x2] {
        if x < 1 || x > n {
            return Err(KernelError::InvalidPosition { x, n });
        }
    }
    Ok(())
}

/// Kernel of the south dominos `((2s, 2r+1), (2s-1, 2r))` on line `r`.
pub fn south_line_kernel(x1: i64, x2: i64, r: i64, diamond: &AztecDiamond, regime: Regime) -> Result<KernelEntry, KernelError> {
    check_line(diamond, x1, x2, r)?;
    match regime {
        Regime::Exact => {
            let v = line_kernel_residue(diamond.n(), &exact_weight(diamond)?, x1, x2, r)?;
            Ok(KernelEntry::Exact(Complex::new(v, BigRational::zero())))
        }
        Regime::Numeric { tolerance } => Ok(KernelEntry::from_quadrature(line_kernel_quadrature(
            diamond.n(),
            float_weight(diamond),
            x1,
            x2,
            r,
            tolerance,
        )?)),
    }
}

/// `delta(x1, x2) - z_c^(x1 - x2) L(x1, x2)`.
pub fn hole_kernel(
    x1: i64,
    x2: i64,
    r: i64,
    diamond: &AztecDiamond,
    z_c: &Weight,
    regime: Regime,
) -> Result<KernelEntry, KernelError> {
    let l = south_line_kernel(x1, x2, r, diamond, regime)?;
    let delta = if x1 == x2 { 1 } else { 0 };
    match (&l, z_c.as_rational()) {
        (KernelEntry::Exact(v), Some(zc)) => {
            let f = powi(zc, x1 - x2);
            let d = BigRational::from_integer(delta.into());
            Ok(KernelEntry::Exact(Complex::new(d, BigRational::zero()) - v * f))
        }
        _ => {
            let f = z_c.to_f64().powi((x1 - x2) as i32);
            Ok(KernelEntry::Numeric {
                value: Complex64::new(delta as f64, 0.0) - l.value() * f,
                error: l.error() * f.abs() + f64::EPSILON * (1.0 + l.value().norm() * f.abs()),
                precision_bits: F64_PRECISION_BITS,
            })
        }
    }
}

fn particle_vertex(u1: i64, u2: i64) -> Result<Vertex, KernelError> {
    // u1 = x2, u2 = (x2 - x1 + 1) / 2
    let x1 = u1 - 2 * u2 + 1;
    Vertex::new(x1, u1).map_err(|_| KernelError::InvalidParticle { u1, u2 })
}

/// `K_n(u1, u2; v1, v2) = K~_n - phi`.
pub fn particle_kernel(
    u: (i64, i64),
    v: (i64, i64),
    diamond: &AztecDiamond,
    regime: Regime,
) -> Result<KernelEntry, KernelError> {
    for (p1, p2) in [u, v] {
        in_diamond(diamond, particle_vertex(p1, p2)?)?;
    }
    match regime {
        Regime::Exact => {
            let (kt, phi) = particle_parts_residue(diamond.n(), &exact_weight(diamond)?, u, v)?;
            Ok(KernelEntry::Exact(Complex::new(kt - phi, BigRational::zero())))
        }
        Regime::Numeric { tolerance } => {
            let (kt, phi) = particle_parts_quadrature(diamond.n(), float_weight(diamond), u, v, tolerance)?;
            Ok(KernelEntry::from_quadrature(kt.sub(&phi)))
        }
    }
}

/// The phase relating `K^-1` to `K_n`: `(-1)^((x1 - x2 + y1 - y2 + shift) / 4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParticlePhase {
    /// `shift = 0`
    Unshifted,
    /// `shift = 2`
    Shifted,
}

/// `K^-1(x, y)` predicted from the particle kernel:
/// `-(-1)^((x1 - x2 + y1 - y2 + shift)/4) K_n(y2, (y2-y1+1)/2; x2, (x2-x1+1)/2)`.
pub fn inverse_from_particle_kernel(
    x: Vertex,
    y: Vertex,
    diamond: &AztecDiamond,
    regime: Regime,
    phase: ParticlePhase,
) -> Result<KernelEntry, KernelError> {
    check_color(x, Color::White)?;
    check_color(y, Color::Black)?;
    let shift = match phase {
        ParticlePhase::Unshifted => 0,
        ParticlePhase::Shifted => 2,
    };
    let k = particle_kernel(
        (y.x2, (y.x2 - y.x1 + 1) / 2),
        (x.x2, (x.x2 - x.x1 + 1) / 2),
        diamond,
        regime,
    )?;
    let phase: ExactComplex = -quarter_sign::<BigRational>(x.x1 - x.x2 + y.x1 - y.x2 + shift);
    Ok(k.scale(&phase))
}

/// `(K K^-1)(x, y)` written out over the four neighbours of the black
/// vertex `x`; neighbours outside the diamond carry `K = 0` and drop out.
pub fn five_term(x: Vertex, y: Vertex, diamond: &AztecDiamond, regime: Regime) -> Result<KernelEntry, KernelError> {
    in_diamond(diamond, x)?;
    let mut acc = KernelEntry::zero_like(regime);
    for d in diamond.dimers_at(x) {
        let k = kasteleyn_entry(x, d.white, &exact_weight(diamond)?);
        acc = acc.add(&inverse_entry(d.white, y, diamond, regime)?.scale(&k));
    }
    Ok(acc)
}
