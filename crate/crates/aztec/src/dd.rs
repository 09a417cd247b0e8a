//! Double-double reals: `twofloat` arithmetic with a corrected quotient.
//!
//! `TwoFloat / TwoFloat` in twofloat 0.8.4 forms the reciprocal residual
//! `1 - b * (1/b)` without a fused multiply-add, which rounds it to zero and
//! leaves quotients accurate only to double precision. `Dd` reuses the
//! library's (exact) sum and product and divides by long division.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_traits::{Num, One, Zero};
use twofloat::TwoFloat;

#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct Dd(pub TwoFloat);

impl Dd {
    pub fn new(v: f64) -> Self {
        Dd(TwoFloat::from(v))
    }

    pub fn hi(self) -> f64 {
        self.0.hi()
    }

    pub fn to_f64(self) -> f64 {
        self.0.hi() + self.0.lo()
    }

    pub fn sqrt(self) -> Self {
        Dd(self.0.sqrt())
    }

    pub fn abs(self) -> Self {
        Dd(self.0.abs())
    }

    pub fn recip(self) -> Self {
        Dd::one() / self
    }

    pub fn powi(self, e: i32) -> Self {
        let mut base = if e < 0 { self.recip() } else { self };
        let mut e = e.unsigned_abs();
        let mut acc = Dd::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

impl From<f64> for Dd {
    fn from(v: f64) -> Self {
        Dd::new(v)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, rhs: Dd) -> Dd {
        Dd(self.0 + rhs.0)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, rhs: Dd) -> Dd {
        Dd(self.0 - rhs.0)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, rhs: Dd) -> Dd {
        Dd(self.0 * rhs.0)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        let b = rhs.0;
        let q1 = self.0.hi() / b.hi();
        let r = self.0 - b * q1;
        let q2 = r.hi() / b.hi();
        let r = r - b * q2;
        let q3 = r.hi() / b.hi();
        Dd(TwoFloat::new_add(q1, q2) + q3)
    }
}

impl Rem for Dd {
    type Output = Dd;
    fn rem(self, rhs: Dd) -> Dd {
        let q = (self / rhs).0.trunc();
        Dd(self.0 - q * rhs.0)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd(-self.0)
    }
}

impl Zero for Dd {
    fn zero() -> Self {
        Dd(TwoFloat::from(0.0))
    }
    fn is_zero(&self) -> bool {
        self.0.hi() == 0.0 && self.0.lo() == 0.0
    }
}

impl One for Dd {
    fn one() -> Self {
        Dd(TwoFloat::from(1.0))
    }
}

impl Num for Dd {
    type FromStrRadixErr = <TwoFloat as Num>::FromStrRadixErr;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        TwoFloat::from_str_radix(s, radix).map(Dd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(x: Dd) -> f64 {
        x.abs().to_f64()
    }

    #[test]
    fn quotients_are_double_double_accurate() {
        let third = Dd::new(1.0) / Dd::new(3.0);
        assert!(residual(third * Dd::new(3.0) - Dd::one()) < 1e-31);
        let x = Dd::new(0.1) + Dd::new(1e-20);
        let y = Dd::new(7.3) - Dd::new(3e-19);
        assert!(residual((x / y) * y - x) < 1e-32);
    }

    #[test]
    fn powers_and_roots() {
        let r = Dd::new(2.0).sqrt();
        assert!(residual(r * r - Dd::new(2.0)) < 1e-30);
        let p = Dd::new(1.1).powi(-7) * Dd::new(1.1).powi(7);
        assert!(residual(p - Dd::one()) < 1e-30);
    }
}
