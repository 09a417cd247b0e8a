//! Exact arithmetic in `Q(sqrt(d))` for a fixed positive rational radicand.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// `p + q sqrt(d)`. Operands of a binary operation must share `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Surd {
    pub p: BigRational,
    pub q: BigRational,
    pub d: BigRational,
}

impl Surd {
    pub fn rational(p: BigRational, d: &BigRational) -> Self {
        Surd {
            p,
            q: BigRational::zero(),
            d: d.clone(),
        }
    }

    /// `sqrt(d)` itself, stored as a rational when `d` is a rational square so
    /// that the conjugate of a nonzero element is never zero.
    pub fn root(d: &BigRational) -> Self {
        match rational_sqrt(d) {
            Some(r) => Surd::rational(r, d),
            None => Surd {
                p: BigRational::zero(),
                q: BigRational::from_integer(1.into()),
                d: d.clone(),
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// Exact sign, comparing `p^2` with `q^2 d` when the parts disagree.
    pub fn signum(&self) -> Ordering {
        let sp = self.p.cmp(&BigRational::zero());
        let sq = self.q.cmp(&BigRational::zero());
        if sq == Ordering::Equal || sp == sq {
            return if sp == Ordering::Equal { sq } else { sp };
        }
        if sp == Ordering::Equal {
            return sq;
        }
        match (&self.p * &self.p).cmp(&(&self.q * &self.q * &self.d)) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn conjugate(&self) -> Self {
        Surd {
            p: self.p.clone(),
            q: -&self.q,
            d: self.d.clone(),
        }
    }

    /// `p^2 - q^2 d`, rational.
    pub fn norm(&self) -> BigRational {
        &self.p * &self.p - &self.q * &self.q * &self.d
    }

    pub fn recip(&self) -> Self {
        let n = self.norm();
        assert!(!n.is_zero(), "reciprocal of zero in Q(sqrt(d))");
        Surd {
            p: &self.p / &n,
            q: -&self.q / &n,
            d: self.d.clone(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Surd {
            p: &self.p * c,
            q: &self.q * c,
            d: self.d.clone(),
        }
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut acc = Surd::rational(BigRational::from_integer(1.into()), &self.d);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        p + q * d.sqrt()
    }

    fn check(&self, other: &Surd) {
        assert_eq!(self.d, other.d, "surds with different radicands");
    }
}

fn rational_sqrt(d: &BigRational) -> Option<BigRational> {
    let exact = |x: &BigInt| {
        let r = x.sqrt();
        (&r * &r == *x).then_some(r)
    };
    if d.is_negative() {
        return None;
    }
    Some(BigRational::new(exact(d.numer())?, exact(d.denom())?))
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({})", self.p, self.q, self.d)
    }
}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        self.check(rhs);
        Surd {
            p: &self.p + &rhs.p,
            q: &self.q + &rhs.q,
            d: self.d.clone(),
        }
    }
}

impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        self + &(-rhs)
    }
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        self.check(rhs);
        Surd {
            p: &self.p * &rhs.p + &self.q * &rhs.q * &self.d,
            q: &self.p * &rhs.q + &self.q * &rhs.p,
            d: self.d.clone(),
        }
    }
}

impl Div for &Surd {
    type Output = Surd;
    fn div(self, rhs: &Surd) -> Surd {
        self * &rhs.recip()
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            p: -&self.p,
            q: -&self.q,
            d: self.d.clone(),
        }
    }
}
