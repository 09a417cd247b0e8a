//! Kasteleyn coordinates of the Aztec diamond graph.
//!
//! White vertices sit at (odd, even) points and black vertices at (even, odd)
//! points of the square `[0, 2n]^2`. Faces of the graph are the remaining
//! (even-sum) points; a face point is the shared corner of up to four tiles.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Unit step from a black vertex to its north neighbour.
pub const E1: (i64, i64) = (1, 1);
/// Unit step from a black vertex to its east neighbour.
pub const E2: (i64, i64) = (-1, 1);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error("weight must be positive, got {0}")]
    NonPositiveWeight(String),
    #[error("cannot parse weight {0:?}")]
    BadWeight(String),
    #[error("({0}, {1}) is not a vertex position: coordinates must have odd sum")]
    EvenParity(i64, i64),
    #[error("black ({0}) and white ({1}) vertices are not adjacent")]
    NotAdjacent(Vertex, Vertex),
    #[error("expected a black and a white vertex, got {0} and {1}")]
    WrongColors(Vertex, Vertex),
}

/// Weight of a vertical domino; horizontal dominos carry weight 1.
///
/// A rational weight keeps every downstream computation exact.
#[derive(Debug, Clone, PartialEq)]
pub enum Weight {
    Exact(BigRational),
    Float(f64),
}

impl Weight {
    pub fn from_ratio(numer: i64, denom: i64) -> Result<Self, LatticeError> {
        if denom == 0 {
            return Err(LatticeError::BadWeight(format!("{numer}/{denom}")));
        }
        let q = BigRational::new(BigInt::from(numer), BigInt::from(denom));
        if !q.is_positive() {
            return Err(LatticeError::NonPositiveWeight(q.to_string()));
        }
        Ok(Weight::Exact(q))
    }

    pub fn from_f64(a: f64) -> Result<Self, LatticeError> {
        if !(a.is_finite() && a > 0.0) {
            return Err(LatticeError::NonPositiveWeight(a.to_string()));
        }
        Ok(Weight::Float(a))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Weight::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Weight::Float(a) => *a,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Weight::Exact(q) => Some(q),
            Weight::Float(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Weight::Exact(_))
    }
}

impl FromStr for Weight {
    type Err = LatticeError;

    /// Accepts `p/q`, an integer, or a decimal. Only decimals select the
    /// floating regime.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || LatticeError::BadWeight(s.to_string());
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            let r = BigRational::new(p, q);
            if !r.is_positive() {
                return Err(LatticeError::NonPositiveWeight(s.to_string()));
            }
            return Ok(Weight::Exact(r));
        }
        if let Ok(p) = s.parse::<BigInt>() {
            if !p.is_positive() {
                return Err(LatticeError::NonPositiveWeight(s.to_string()));
            }
            return Ok(Weight::Exact(BigRational::from_integer(p)));
        }
        let a: f64 = s.parse().map_err(|_| bad())?;
        Weight::from_f64(a)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Exact(q) => write!(f, "{q}"),
            Weight::Float(a) => write!(f, "{a:?}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    White,
    Black,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub x1: i64,
    pub x2: i64,
}

impl Vertex {
    pub fn new(x1: i64, x2: i64) -> Result<Self, LatticeError> {
        if (x1 + x2).rem_euclid(2) != 1 {
            return Err(LatticeError::EvenParity(x1, x2));
        }
        Ok(Vertex { x1, x2 })
    }

    pub fn color(&self) -> Color {
        if self.x1.rem_euclid(2) == 1 {
            Color::White
        } else {
            Color::Black
        }
    }

    pub fn shifted(&self, step: (i64, i64), sign: i64) -> Vertex {
        Vertex {
            x1: self.x1 + sign * step.0,
            x2: self.x2 + sign * step.1,
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x1, self.x2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DimerKind {
    North,
    East,
    South,
    West,
}

impl DimerKind {
    pub const ALL: [DimerKind; 4] = [
        DimerKind::North,
        DimerKind::East,
        DimerKind::South,
        DimerKind::West,
    ];

    /// East and west dominos are the vertical ones, weighted by `a`.
    pub fn is_vertical(&self) -> bool {
        matches!(self, DimerKind::East | DimerKind::West)
    }

    /// Offset of the white vertex from the black one.
    pub fn step(&self) -> (i64, i64) {
        match self {
            DimerKind::North => E1,
            DimerKind::East => E2,
            DimerKind::South => (-E1.0, -E1.1),
            DimerKind::West => (-E2.0, -E2.1),
        }
    }

    pub fn letter(&self) -> char {
        match self {
            DimerKind::North => 'N',
            DimerKind::East => 'E',
            DimerKind::South => 'S',
            DimerKind::West => 'W',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'N' => Some(DimerKind::North),
            'E' => Some(DimerKind::East),
            'S' => Some(DimerKind::South),
            'W' => Some(DimerKind::West),
            _ => None,
        }
    }
}

pub fn classify_dimer(b: Vertex, w: Vertex) -> Result<DimerKind, LatticeError> {
    if b.color() != Color::Black || w.color() != Color::White {
        return Err(LatticeError::WrongColors(b, w));
    }
    let d = (w.x1 - b.x1, w.x2 - b.x2);
    DimerKind::ALL
        .into_iter()
        .find(|k| k.step() == d)
        .ok_or(LatticeError::NotAdjacent(b, w))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dimer {
    pub black: Vertex,
    pub white: Vertex,
    pub kind: DimerKind,
}

impl Dimer {
    pub fn new(black: Vertex, white: Vertex) -> Result<Self, LatticeError> {
        let kind = classify_dimer(black, white)?;
        Ok(Dimer { black, white, kind })
    }

    /// The dimer of the given kind at a black vertex.
    pub fn at(black: Vertex, kind: DimerKind) -> Self {
        Dimer {
            black,
            white: black.shifted(kind.step(), 1),
            kind,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AztecDiamond {
    n: usize,
    a: Weight,
}

impl AztecDiamond {
    pub fn new(n: usize, a: Weight) -> Result<Self, LatticeError> {
        if n == 0 {
            return Err(LatticeError::ZeroOrder);
        }
        if a.to_f64().partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(LatticeError::NonPositiveWeight(a.to_string()));
        }
        Ok(AztecDiamond { n, a })
    }

    /// Order with a rational weight `numer/denom`.
    pub fn with_ratio(n: usize, numer: i64, denom: i64) -> Result<Self, LatticeError> {
        Self::new(n, Weight::from_ratio(numer, denom)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self) -> &Weight {
        &self.a
    }

    /// Number of vertices of each colour.
    pub fn half_size(&self) -> usize {
        self.n * (self.n + 1)
    }

    fn side(&self) -> i64 {
        2 * self.n as i64
    }

    pub fn contains(&self, v: Vertex) -> bool {
        let m = self.side();
        match v.color() {
            Color::White => (1..m).contains(&v.x1) && (0..=m).contains(&v.x2),
            Color::Black => (0..=m).contains(&v.x1) && (1..m).contains(&v.x2),
        }
    }

    /// Row-major position of a white vertex (increasing `x2`, then `x1`).
    pub fn white_index(&self, v: Vertex) -> Option<usize> {
        if v.color() != Color::White || !self.contains(v) {
            return None;
        }
        Some((v.x2 / 2) as usize * self.n + ((v.x1 - 1) / 2) as usize)
    }

    /// Row-major position of a black vertex.
    pub fn black_index(&self, v: Vertex) -> Option<usize> {
        if v.color() != Color::Black || !self.contains(v) {
            return None;
        }
        Some(((v.x2 - 1) / 2) as usize * (self.n + 1) + (v.x1 / 2) as usize)
    }

    pub fn white_vertices(&self) -> Vec<Vertex> {
        let m = self.side();
        (0..=m)
            .step_by(2)
            .flat_map(|x2| (1..m).step_by(2).map(move |x1| Vertex { x1, x2 }))
            .collect()
    }

    pub fn black_vertices(&self) -> Vec<Vertex> {
        let m = self.side();
        (1..m)
            .step_by(2)
            .flat_map(|x2| (0..=m).step_by(2).map(move |x1| Vertex { x1, x2 }))
            .collect()
    }

    /// Every graph edge, grouped by black vertex in canonical order.
    pub fn edges(&self) -> Vec<Dimer> {
        self.black_vertices()
            .into_iter()
            .flat_map(|b| self.dimers_at(b))
            .collect()
    }

    /// Graph edges incident to a black vertex.
    pub fn dimers_at(&self, b: Vertex) -> Vec<Dimer> {
        DimerKind::ALL
            .into_iter()
            .map(|k| Dimer::at(b, k))
            .filter(|d| self.contains(d.white))
            .collect()
    }

    /// Graph edges incident to a white vertex.
    pub fn dimers_at_white(&self, w: Vertex) -> Vec<Dimer> {
        DimerKind::ALL
            .into_iter()
            .map(|k| Dimer::at(w.shifted(k.step(), -1), k))
            .filter(|d| self.contains(d.black))
            .collect()
    }
}

pub fn vertices(diamond: &AztecDiamond) -> (Vec<Vertex>, Vec<Vertex>) {
    (diamond.white_vertices(), diamond.black_vertices())
}

/// Particle coordinates `(x2, (x2 - x1 + 1) / 2)`; both are integers for
/// every vertex position.
pub fn particle_coords(v: Vertex) -> (i64, i64) {
    (v.x2, (v.x2 - v.x1 + 1) / 2)
}

/// A perfect matching, stored with dimers sorted by black vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tiling {
    n: usize,
    dimers: Vec<Dimer>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub uncovered: Vec<Vertex>,
    pub doubly_covered: Vec<Vertex>,
    /// Dimers with an endpoint outside the diamond.
    pub foreign: Vec<Dimer>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.uncovered.is_empty() && self.doubly_covered.is_empty() && self.foreign.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        write!(
            f,
            "{} uncovered, {} doubly covered, {} outside the diamond",
            self.uncovered.len(),
            self.doubly_covered.len(),
            self.foreign.len()
        )
    }
}

impl Tiling {
    /// Wraps a dimer list without checking the matching property; see
    /// [`Tiling::validate`].
    pub fn from_dimers(n: usize, mut dimers: Vec<Dimer>) -> Self {
        dimers.sort_by_key(|d| (d.black.x1, d.black.x2, d.kind));
        Tiling { n, dimers }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dimers(&self) -> &[Dimer] {
        &self.dimers
    }

    pub fn count(&self, kind: DimerKind) -> usize {
        self.dimers.iter().filter(|d| d.kind == kind).count()
    }

    pub fn vertical_count(&self) -> usize {
        self.dimers.iter().filter(|d| d.kind.is_vertical()).count()
    }

    /// Dimer kind at every black vertex, indexed like
    /// [`AztecDiamond::black_index`]. Requires a valid tiling.
    pub fn kinds_by_black(&self) -> Vec<DimerKind> {
        let n = self.n;
        let mut out = vec![DimerKind::North; n * (n + 1)];
        for d in &self.dimers {
            let i = ((d.black.x2 - 1) / 2) as usize * (n + 1) + (d.black.x1 / 2) as usize;
            out[i] = d.kind;
        }
        out
    }

    pub fn contains(&self, d: &Dimer) -> bool {
        self.dimers
            .binary_search_by_key(&(d.black.x1, d.black.x2, d.kind), |e| {
                (e.black.x1, e.black.x2, e.kind)
            })
            .is_ok()
    }

    pub fn validate(&self) -> ValidationReport {
        let Ok(diamond) = AztecDiamond::new(self.n.max(1), Weight::Float(1.0)) else {
            return ValidationReport::default();
        };
        let mut cover: BTreeMap<Vertex, usize> = diamond
            .white_vertices()
            .into_iter()
            .chain(diamond.black_vertices())
            .map(|v| (v, 0))
            .collect();
        let mut report = ValidationReport::default();
        for d in &self.dimers {
            if !diamond.contains(d.black) || !diamond.contains(d.white) {
                report.foreign.push(*d);
                continue;
            }
            *cover.get_mut(&d.black).expect("vertex in diamond") += 1;
            *cover.get_mut(&d.white).expect("vertex in diamond") += 1;
        }
        for (v, c) in cover {
            match c {
                0 => report.uncovered.push(v),
                1 => {}
                _ => report.doubly_covered.push(v),
            }
        }
        report
    }
}

pub fn validate_tiling(t: &Tiling) -> ValidationReport {
    t.validate()
}

/// Blue particles sit on the white endpoint and red particles on the black
/// endpoint of every south and west dimer.
pub fn particles_of_tiling(t: &Tiling) -> (BTreeSet<Vertex>, BTreeSet<Vertex>) {
    let mut blue = BTreeSet::new();
    let mut red = BTreeSet::new();
    for d in t.dimers() {
        if matches!(d.kind, DimerKind::South | DimerKind::West) {
            blue.insert(d.white);
            red.insert(d.black);
        }
    }
    (blue, red)
}

/// A face of the graph, identified by the even-sum lattice point it
/// surrounds. Boundary faces are the corners on the rim of the diamond.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub x1: i64,
    pub x2: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightField {
    pub heights: BTreeMap<Face, i64>,
}

impl HeightField {
    pub fn get(&self, f: Face) -> Option<i64> {
        self.heights.get(&f).copied()
    }
}

const FACE_STEPS: [(i64, i64); 4] = [(1, 1), (-1, 1), (1, -1), (-1, -1)];

/// Height change walking from face `f` to `f + d` (`d` a diagonal step).
///
/// The walk crosses the edge between the vertex positions `f + (d1, 0)` and
/// `f + (0, d2)`; the change is +-3 across a dimer and -+1 otherwise, with the
/// upper sign when the vertex on the left is black.
fn height_step(
    diamond: &AztecDiamond,
    covered: &BTreeSet<(Vertex, Vertex)>,
    f: Face,
    d: (i64, i64),
) -> Option<i64> {
    let p = Vertex { x1: f.x1 + d.0, x2: f.x2 };
    let q = Vertex { x1: f.x1, x2: f.x2 + d.1 };
    if !diamond.contains(p) && !diamond.contains(q) {
        return None;
    }
    let left = if d.0 * d.1 > 0 { q } else { p };
    let (b, w) = if p.color() == Color::Black { (p, q) } else { (q, p) };
    let sign = if left.color() == Color::Black { 1 } else { -1 };
    Some(if covered.contains(&(b, w)) { 3 * sign } else { -sign })
}

/// Integrates the height rule from the face at `(0, 0)`, the bottom corner of
/// the diamond, which gets height 0.
///
/// Panics if two paths disagree, which a valid tiling cannot produce.
pub fn height_function(t: &Tiling) -> HeightField {
    let diamond = AztecDiamond::new(t.n().max(1), Weight::Float(1.0)).expect("n >= 1");
    let covered: BTreeSet<(Vertex, Vertex)> =
        t.dimers().iter().map(|d| (d.black, d.white)).collect();
    let mut heights = BTreeMap::new();
    let start = Face { x1: 0, x2: 0 };
    heights.insert(start, 0i64);
    let mut queue = VecDeque::from([start]);
    while let Some(f) = queue.pop_front() {
        let h = heights[&f];
        for d in FACE_STEPS {
            let Some(dh) = height_step(&diamond, &covered, f, d) else {
                continue;
            };
            let g = Face { x1: f.x1 + d.0, x2: f.x2 + d.1 };
            match heights.get(&g) {
                Some(&hg) => assert_eq!(hg, h + dh, "height function inconsistent at {g:?}"),
                None => {
                    heights.insert(g, h + dh);
                    queue.push_back(g);
                }
            }
        }
    }
    HeightField { heights }
}

/// Signed height increments around the four faces touching an interior vertex,
/// walked counter-clockwise. Zero for every valid tiling.
pub fn height_circulation(t: &Tiling, v: Vertex) -> i64 {
    let diamond = AztecDiamond::new(t.n().max(1), Weight::Float(1.0)).expect("n >= 1");
    let covered: BTreeSet<(Vertex, Vertex)> =
        t.dimers().iter().map(|d| (d.black, d.white)).collect();
    let ring = [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 0)];
    ring.windows(2)
        .map(|w| {
            let f = Face { x1: v.x1 + w[0].0, x2: v.x2 + w[0].1 };
            let d = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            height_step(&diamond, &covered, f, d).unwrap_or(0)
        })
        .sum()
}
