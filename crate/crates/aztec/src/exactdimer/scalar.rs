//! Scalar fields used by the Kasteleyn machinery.
//!
//! Exact work happens in `Complex<BigRational>` (the imaginary unit is a pair
//! of rationals, never a float); the floating regime uses `Complex<f64>`.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::lattice::Weight;

pub type ExactComplex = Complex<BigRational>;

/// A field we can run Gaussian elimination over.
pub trait Field: Num + Neg<Output = Self> + Clone + Debug {
    /// Pivot preference. Exact fields only need a nonzero pivot, so they
    /// report 1 for every nonzero element and elimination takes the first.
    fn pivot_size(&self) -> f64;
}

impl Field for f64 {
    fn pivot_size(&self) -> f64 {
        self.abs()
    }
}

impl Field for Complex64 {
    fn pivot_size(&self) -> f64 {
        self.norm()
    }
}

impl Field for BigRational {
    fn pivot_size(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
}

impl Field for ExactComplex {
    fn pivot_size(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
}

/// Real scalars that carry the weight `a`: exact rationals or doubles.
pub trait Real: Field + PartialOrd + Signed + Send + Sync + 'static {
    fn from_weight(a: &Weight) -> Option<Self>;
    fn of_int(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn is_exact() -> bool;
}

impl Real for f64 {
    fn from_weight(a: &Weight) -> Option<Self> {
        Some(a.to_f64())
    }
    fn of_int(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_exact() -> bool {
        false
    }
}

impl Real for BigRational {
    fn from_weight(a: &Weight) -> Option<Self> {
        a.as_rational().cloned()
    }
    fn of_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_exact() -> bool {
        true
    }
}

/// `i^k` for any integer `k`.
pub fn i_pow<T: Real>(k: i64) -> Complex<T> {
    let (z, o) = (T::zero(), T::one());
    match k.rem_euclid(4) {
        0 => Complex::new(o, z),
        1 => Complex::new(z, o),
        2 => Complex::new(-o, z),
        _ => Complex::new(z, -o),
    }
}

/// `base^e` for a possibly negative exponent.
pub fn powi<T: Real>(base: &T, e: i64) -> T {
    let p = num_traits::pow(base.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        T::one() / p
    } else {
        p
    }
}

/// Lossy view of an exact complex value.
pub fn to_complex64(z: &ExactComplex) -> Complex64 {
    Complex64::new(Real::to_f64(&z.re), Real::to_f64(&z.im))
}

pub fn to_complex64_of<T: Real>(z: &Complex<T>) -> Complex64 {
    Complex64::new(z.re.to_f64(), z.im.to_f64())
}

/// Generalized binomial coefficients `C(e, 0..len)` for any integer `e`.
pub fn binomials<T: Real>(e: i64, len: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(len);
    let mut c = T::one();
    for j in 0..len as i64 {
        out.push(c.clone());
        c = c * T::of_int(e - j) / T::of_int(j + 1);
    }
    out
}

pub fn one_exact() -> ExactComplex {
    Complex::new(BigRational::one(), BigRational::zero())
}
