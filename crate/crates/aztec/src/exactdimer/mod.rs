//! Kasteleyn matrix of the Aztec diamond, brute-force tiling enumeration and
//! direct linear-algebra oracles.

pub mod linalg;
pub mod scalar;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::lattice::{AztecDiamond, Color, Dimer, DimerKind, Tiling, Vertex};
pub use linalg::DenseMatrix;
pub use scalar::{ExactComplex, Field, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error("enumeration is limited to n <= {max}, got n = {n}")]
    TooLarge { n: usize, max: usize },
    #[error("Kasteleyn matrix is singular")]
    Singular,
    #[error("weight {0} is not rational; the exact regime needs a rational weight")]
    InexactWeight(String),
    #[error("determinant is not a unit multiple of a real number")]
    NotUnitMultiple,
}

pub const MAX_ENUMERATION_ORDER: usize = 5;

/// `K(b, w)` for adjacent vertices, zero otherwise.
///
/// With `s = (-1)^((x1 + x2 - 1) / 2)` at `b = (x1, x2)`: north `s`, south
/// `-s`, west `s a i`, east `-s a i`.
pub fn kasteleyn_entry<T: Real>(b: Vertex, w: Vertex, a: &T) -> Complex<T> {
    let s = if ((b.x1 + b.x2 - 1) / 2).rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    };
    let d = (w.x1 - b.x1, w.x2 - b.x2);
    let kind = DimerKind::ALL.into_iter().find(|k| k.step() == d);
    match kind {
        Some(DimerKind::North) => Complex::new(s, T::zero()),
        Some(DimerKind::South) => Complex::new(-s, T::zero()),
        Some(DimerKind::West) => Complex::new(T::zero(), s * a.clone()),
        Some(DimerKind::East) => Complex::new(T::zero(), -s * a.clone()),
        None => Complex::new(T::zero(), T::zero()),
    }
}

/// Rows are black vertices and columns white vertices, both in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct KasteleynMatrix<T: Real> {
    pub diamond: AztecDiamond,
    pub whites: Vec<Vertex>,
    pub blacks: Vec<Vertex>,
    pub entries: DenseMatrix<Complex<T>>,
}

impl<T: Real> KasteleynMatrix<T>
where
    Complex<T>: Field,
{
    pub fn entry(&self, b: Vertex, w: Vertex) -> Complex<T> {
        match (self.diamond.black_index(b), self.diamond.white_index(w)) {
            (Some(i), Some(j)) => self.entries[(i, j)].clone(),
            _ => Complex::new(T::zero(), T::zero()),
        }
    }

    /// Product of the four entries around the face centred at `(c1, c2)`,
    /// when all four corners are vertices.
    pub fn face_product(&self, c1: i64, c2: i64) -> Option<Complex<T>> {
        let corners = [(c1 + 1, c2), (c1, c2 + 1), (c1 - 1, c2), (c1, c2 - 1)];
        let vs: Vec<Vertex> = corners.iter().map(|&(x1, x2)| Vertex { x1, x2 }).collect();
        if !vs.iter().all(|v| self.diamond.contains(*v)) {
            return None;
        }
        let mut prod = Complex::new(T::one(), T::zero());
        for k in 0..4 {
            let (p, q) = (vs[k], vs[(k + 1) % 4]);
            let (b, w) = if p.color() == Color::Black { (p, q) } else { (q, p) };
            prod = prod * self.entry(b, w);
        }
        Some(prod)
    }
}

pub fn weight_scalar<T: Real>(diamond: &AztecDiamond) -> Result<T, ExactError> {
    T::from_weight(diamond.weight())
        .ok_or_else(|| ExactError::InexactWeight(diamond.weight().to_string()))
}

pub fn build_kasteleyn<T: Real>(diamond: &AztecDiamond) -> Result<KasteleynMatrix<T>, ExactError>
where
    Complex<T>: Field,
{
    let a = weight_scalar::<T>(diamond)?;
    let whites = diamond.white_vertices();
    let blacks = diamond.black_vertices();
    let mut entries = DenseMatrix::zeros(blacks.len(), whites.len());
    for (i, &b) in blacks.iter().enumerate() {
        for d in diamond.dimers_at(b) {
            let j = diamond.white_index(d.white).expect("neighbour inside");
            entries[(i, j)] = kasteleyn_entry(b, d.white, &a);
        }
    }
    Ok(KasteleynMatrix {
        diamond: diamond.clone(),
        whites,
        blacks,
        entries,
    })
}

/// `|z|` for a value known to be real or purely imaginary, which is the case
/// for every Kasteleyn determinant.
fn unit_multiple_abs<T: Real>(z: &Complex<T>) -> Result<T, ExactError> {
    if z.im.is_zero() {
        Ok(z.re.abs())
    } else if z.re.is_zero() {
        Ok(z.im.abs())
    } else if !T::is_exact() {
        Ok(T::from_weight(&crate::lattice::Weight::Float(
            (z.re.to_f64().powi(2) + z.im.to_f64().powi(2)).sqrt(),
        ))
        .expect("float regime"))
    } else {
        Err(ExactError::NotUnitMultiple)
    }
}

/// `|det K|`, the weighted number of tilings.
pub fn partition_function<T: Real>(diamond: &AztecDiamond) -> Result<T, ExactError>
where
    Complex<T>: Field,
{
    let k = build_kasteleyn::<T>(diamond)?;
    unit_multiple_abs(&k.entries.determinant())
}

/// `(1 + a^2)^(n(n+1)/2)`.
pub fn partition_closed_form<T: Real>(diamond: &AztecDiamond) -> Result<T, ExactError> {
    let a = weight_scalar::<T>(diamond)?;
    let base = T::one() + a.clone() * a;
    let e = diamond.half_size() / 2;
    Ok(num_traits::pow(base, e))
}

/// All perfect matchings, by depth-first search that always matches the first
/// uncovered vertex in row-major order.
pub fn enumerate_tilings(diamond: &AztecDiamond) -> Result<Vec<Tiling>, ExactError> {
    let n = diamond.n();
    if n > MAX_ENUMERATION_ORDER {
        return Err(ExactError::TooLarge {
            n,
            max: MAX_ENUMERATION_ORDER,
        });
    }
    let mut order: Vec<Vertex> = diamond
        .white_vertices()
        .into_iter()
        .chain(diamond.black_vertices())
        .collect();
    order.sort_by_key(|v| (v.x2, v.x1));
    let pos = |v: Vertex| order.binary_search_by_key(&(v.x2, v.x1), |u| (u.x2, u.x1)).ok();
    let neighbours: Vec<Vec<(usize, Dimer)>> = order
        .iter()
        .map(|&v| {
            let ds = match v.color() {
                Color::Black => diamond.dimers_at(v),
                Color::White => diamond.dimers_at_white(v),
            };
            ds.into_iter()
                .map(|d| {
                    let other = if v.color() == Color::Black { d.white } else { d.black };
                    (pos(other).expect("neighbour inside"), d)
                })
                .collect()
        })
        .collect();

    let mut covered = vec![false; order.len()];
    let mut stack: Vec<Dimer> = Vec::with_capacity(diamond.half_size());
    let mut out = Vec::new();
    fn search(
        start: usize,
        covered: &mut [bool],
        neighbours: &[Vec<(usize, Dimer)>],
        stack: &mut Vec<Dimer>,
        out: &mut Vec<Tiling>,
        n: usize,
    ) {
        let Some(v) = (start..covered.len()).find(|&i| !covered[i]) else {
            out.push(Tiling::from_dimers(n, stack.clone()));
            return;
        };
        covered[v] = true;
        for &(u, d) in &neighbours[v] {
            if !covered[u] {
                covered[u] = true;
                stack.push(d);
                search(v + 1, covered, neighbours, stack, out, n);
                stack.pop();
                covered[u] = false;
            }
        }
        covered[v] = false;
    }
    search(0, &mut covered, &neighbours, &mut stack, &mut out, n);
    Ok(out)
}

/// `a^(#east + #west)`.
pub fn tiling_weight<T: Real>(t: &Tiling, a: &T) -> T {
    num_traits::pow(a.clone(), t.vertical_count())
}

/// Exact (or floating) inverse, indexed white x black.
pub fn invert_direct<T: Real>(k: &KasteleynMatrix<T>) -> Result<DenseMatrix<Complex<T>>, ExactError>
where
    Complex<T>: Field,
{
    k.entries.inverse().ok_or(ExactError::Singular)
}

/// Direct inverse together with lookup by vertex.
pub struct DirectInverse<T: Real> {
    pub diamond: AztecDiamond,
    pub inverse: DenseMatrix<Complex<T>>,
}

impl<T: Real> DirectInverse<T>
where
    Complex<T>: Field,
{
    pub fn new(diamond: &AztecDiamond) -> Result<Self, ExactError> {
        let k = build_kasteleyn::<T>(diamond)?;
        Ok(DirectInverse {
            diamond: diamond.clone(),
            inverse: invert_direct(&k)?,
        })
    }

    pub fn get(&self, w: Vertex, b: Vertex) -> Complex<T> {
        match (self.diamond.white_index(w), self.diamond.black_index(b)) {
            (Some(i), Some(j)) => self.inverse[(i, j)].clone(),
            _ => Complex::new(T::zero(), T::zero()),
        }
    }
}

/// Exact Kasteleyn matrix with rational weight `numer/denom`, for tests.
pub fn exact_kasteleyn(n: usize, numer: i64, denom: i64) -> KasteleynMatrix<BigRational> {
    let d = AztecDiamond::with_ratio(n, numer, denom).expect("valid diamond");
    build_kasteleyn(&d).expect("rational weight")
}

pub fn exact_one() -> ExactComplex {
    Complex::new(BigRational::one(), BigRational::zero())
}
