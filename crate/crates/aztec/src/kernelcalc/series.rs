//! Truncated Laurent series and residues of products of linear factors.

use crate::exactdimer::scalar::{binomials, powi, Real};

use super::KernelError;

/// `sum_j coeffs[j] (z - center)^(valuation + j)`, known for exponents below
/// `valuation + coeffs.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSeries<T> {
    center: T,
    valuation: i64,
    coeffs: Vec<T>,
}

impl<T: Real> LaurentSeries<T> {
    pub fn new(center: T, valuation: i64, coeffs: Vec<T>) -> Self {
        LaurentSeries {
            center,
            valuation,
            coeffs,
        }
    }

    pub fn center(&self) -> &T {
        &self.center
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    /// First exponent whose coefficient is not known.
    pub fn order(&self) -> i64 {
        self.valuation + self.coeffs.len() as i64
    }

    /// `(z - center)^e`, known up to exponent `order`.
    pub fn monomial(center: T, e: i64, order: i64) -> Self {
        let len = (order - e).max(0) as usize;
        let mut coeffs = vec![T::zero(); len];
        if len > 0 {
            coeffs[0] = T::one();
        }
        LaurentSeries::new(center, e, coeffs)
    }

    /// `(z - root)^e` expanded around `center`, known below exponent `order`.
    pub fn linear_power(center: T, root: &T, e: i64, order: i64) -> Self {
        if center == *root {
            return Self::monomial(center, e, order);
        }
        let d = center.clone() - root.clone();
        let len = order.max(0) as usize;
        let mut coeffs = binomials::<T>(e, len);
        let mut scale = powi(&d, e);
        for c in coeffs.iter_mut() {
            *c = c.clone() * scale.clone();
            scale = scale / d.clone();
        }
        LaurentSeries::new(center, 0, coeffs)
    }

    /// A polynomial given by its coefficients in `z`, re-expanded around
    /// `center` and truncated below exponent `order`.
    pub fn from_polynomial(center: T, poly: &[T], order: i64) -> Self {
        let len = order.max(0) as usize;
        // Horner in the shifted variable: p(c + t) = (...(p_m (c+t) + p_{m-1})...).
        let mut acc: Vec<T> = vec![T::zero(); len];
        for p in poly.iter().rev() {
            if len == 0 {
                break;
            }
            for k in (0..len).rev() {
                let lower = if k > 0 { acc[k - 1].clone() } else { T::zero() };
                acc[k] = acc[k].clone() * center.clone() + lower;
            }
            acc[0] = acc[0].clone() + p.clone();
        }
        LaurentSeries::new(center, 0, acc)
    }

    pub fn scale(mut self, c: &T) -> Self {
        for v in self.coeffs.iter_mut() {
            *v = v.clone() * c.clone();
        }
        self
    }

    /// Product, truncated to what both factors determine.
    pub fn mul(&self, other: &Self) -> Self {
        debug_assert!(self.center == other.center, "series centred at different points");
        let valuation = self.valuation + other.valuation;
        let order = (self.order() + other.valuation).min(other.order() + self.valuation);
        let len = (order - valuation).max(0) as usize;
        let mut coeffs = vec![T::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        LaurentSeries::new(self.center.clone(), valuation, coeffs)
    }

    pub fn coefficient(&self, e: i64) -> Result<T, KernelError> {
        if e >= self.order() {
            return Err(KernelError::TruncationTooShort {
                needed: e,
                order: self.order(),
            });
        }
        if e < self.valuation {
            return Ok(T::zero());
        }
        Ok(self.coeffs[(e - self.valuation) as usize].clone())
    }

    /// Coefficient of `(z - center)^-1`.
    pub fn residue(&self) -> Result<T, KernelError> {
        self.coefficient(-1)
    }
}

/// Coefficient of `z^-1` for a series centred at the origin.
pub fn residue_at_zero<T: Real>(s: &LaurentSeries<T>) -> Result<T, KernelError> {
    if !s.center().is_zero() {
        return Err(KernelError::NotCenteredAtZero);
    }
    s.residue()
}

/// `scale * poly(z) * prod (z - root)^exp` with real roots and integer
/// exponents: every integrand in this crate reduces to this shape once the
/// inner residue is taken.
#[derive(Debug, Clone)]
pub struct Factored<T> {
    pub scale: T,
    pub poly: Vec<T>,
    pub factors: Vec<(T, i64)>,
}

impl<T: Real> Factored<T> {
    pub fn residue_at(&self, point: &T) -> Result<T, KernelError> {
        let v: i64 = self
            .factors
            .iter()
            .filter(|(root, _)| root == point)
            .map(|(_, e)| *e)
            .sum();
        // All other pieces are Taylor series, so only -v coefficients matter.
        let len = -v;
        if len <= 0 {
            return Ok(T::zero());
        }
        let mut acc = LaurentSeries::from_polynomial(point.clone(), &self.poly, len);
        for (root, e) in &self.factors {
            if root == point || *e == 0 {
                continue;
            }
            acc = acc.mul(&LaurentSeries::linear_power(point.clone(), root, *e, len));
        }
        let full = LaurentSeries::new(point.clone(), v, acc.coeffs);
        Ok(full.residue()? * self.scale.clone())
    }
}

/// First `len` coefficients of `(c1 + z)^e1 * (c2 z - 1)^e2`, for
/// nonnegative exponents.
pub fn binomial_product<T: Real>(c1: &T, e1: i64, c2: &T, e2: i64, len: usize) -> Vec<T> {
    let zero = T::zero();
    let p = LaurentSeries::linear_power(zero.clone(), &-c1.clone(), e1, len as i64);
    // (c2 z - 1)^e2 = (-1)^e2 (1 - c2 z)^e2
    let mut q = binomials::<T>(e2, len);
    let mut s = if e2 % 2 == 0 { T::one() } else { -T::one() };
    for c in q.iter_mut() {
        *c = c.clone() * s.clone();
        s = -s * c2.clone();
    }
    let q = LaurentSeries::new(zero, 0, q);
    p.mul(&q).coeffs
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn lemma_residues() {
        for a in [q(1, 1), q(1, 2), q(3, 1)] {
            let c = a.clone().recip() + a.clone();
            let s = LaurentSeries::monomial(q(0, 1), -1, 4)
                .mul(&LaurentSeries::linear_power(q(0, 1), &-c.clone(), -1, 4));
            let want = a.clone() / (q(1, 1) + a.clone() * a.clone());
            assert_eq!(residue_at_zero(&s).unwrap(), want);
            let k = 2;
            let s = LaurentSeries::monomial(q(0, 1), k - 1, 6)
                .mul(&LaurentSeries::linear_power(q(0, 1), &-c, -1 - k, 6));
            assert_eq!(residue_at_zero(&s).unwrap(), q(0, 1));
        }
        let s = LaurentSeries::monomial(q(0, 1), -1, 0);
        assert_eq!(residue_at_zero(&s).unwrap(), q(1, 1));
    }

    #[test]
    fn truncation_is_reported() {
        let s = LaurentSeries::monomial(q(0, 1), -3, -2);
        assert!(matches!(
            residue_at_zero(&s),
            Err(KernelError::TruncationTooShort { needed: -1, order: -2 })
        ));
        let off = LaurentSeries::monomial(q(1, 1), -1, 3);
        assert_eq!(residue_at_zero(&off), Err(KernelError::NotCenteredAtZero));
    }

    #[test]
    fn taylor_shift() {
        // z^2 + 1 around z = 2: 5 + 4t + t^2
        let s = LaurentSeries::from_polynomial(q(2, 1), &[q(1, 1), q(0, 1), q(1, 1)], 5);
        let c: Vec<_> = (0..5).map(|e| s.coefficient(e).unwrap()).collect();
        assert_eq!(c, vec![q(5, 1), q(4, 1), q(1, 1), q(0, 1), q(0, 1)]);
    }

    #[test]
    fn factored_residue_of_simple_poles() {
        // 1 / ((z - 1)(z + 2)) has residue 1/3 at 1 and -1/3 at -2.
        let f = Factored {
            scale: q(1, 1),
            poly: vec![q(1, 1)],
            factors: vec![(q(1, 1), -1), (q(-2, 1), -1)],
        };
        assert_eq!(f.residue_at(&q(1, 1)).unwrap(), q(1, 3));
        assert_eq!(f.residue_at(&q(-2, 1)).unwrap(), q(-1, 3));
        // z^3 / (z - 1)^3: residue is C(3,2) = 3.
        let g = Factored {
            scale: q(1, 1),
            poly: vec![q(0, 1), q(0, 1), q(0, 1), q(1, 1)],
            factors: vec![(q(1, 1), -3)],
        };
        assert_eq!(g.residue_at(&q(1, 1)).unwrap(), q(3, 1));
    }

    #[test]
    fn binomial_product_matches_expansion() {
        // (2 + z)(3z - 1)^2 = (2 + z)(1 - 6z + 9z^2) = 2 - 11z + 12z^2 + 9z^3
        let c = binomial_product(&q(2, 1), 1, &q(3, 1), 2, 5);
        assert_eq!(c, vec![q(2, 1), q(-11, 1), q(12, 1), q(9, 1), q(0, 1)]);
    }
}
