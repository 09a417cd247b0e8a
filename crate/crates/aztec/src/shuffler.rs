//! Biased domino shuffling and the statistics read off sampled tilings.
//!
//! The sampler grows a tiling of order `k` into one of order `k + 1` in three
//! steps: opposing pairs of dominos are deleted, every remaining domino slides
//! one unit in its direction of travel, and the empty 2x2 blocks left behind
//! are filled with two horizontal dominos (probability `1/(1+a^2)`) or two
//! vertical ones (probability `a^2/(1+a^2)`). After `n` steps the tiling is
//! distributed proportionally to `a^(#vertical)`.
//!
//! Internally squares are indexed by their lower-left corner `(i, j)`, with
//! the order-`k` diamond being `|i + 1/2| + |j + 1/2| <= k`. A domino's direction
//! follows from the parity of `i + j + k` at its lower-left square, and
//! coincides with its kind in Kasteleyn coordinates.
//!
//! Randomness: sample `i` of a run with seed `s` uses
//! `ChaCha8Rng::seed_from_u64(s)` switched to stream `i`, so every sample can be
//! regenerated on its own and samples can be drawn in any order or in parallel.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

use crate::exactdimer::{enumerate_tilings, tiling_weight, ExactError};
use crate::lattice::{AztecDiamond, Dimer, DimerKind, LatticeError, Tiling, Vertex, Weight};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShuffleError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("line index {r} is outside 1..={max}")]
    InvalidLine { r: i64, max: i64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub n: usize,
    pub a: Weight,
    pub seed: u64,
    pub count: usize,
}

impl SamplerConfig {
    pub fn new(n: usize, a: Weight, seed: u64, count: usize) -> Result<Self, ShuffleError> {
        AztecDiamond::new(n, a.clone())?;
        Ok(SamplerConfig { n, a, seed, count })
    }

    pub fn diamond(&self) -> AztecDiamond {
        AztecDiamond::new(self.n, self.a.clone()).expect("validated in SamplerConfig::new")
    }

    fn horizontal_probability(&self) -> f64 {
        let a = self.a.to_f64();
        1.0 / (1.0 + a * a)
    }
}

pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

// Square contents: which neighbour holds the other half of the domino.
const EMPTY: u8 = 0;
const RIGHT: u8 = 1;
const LEFT: u8 = 2;
const UP: u8 = 3;
const DOWN: u8 = 4;

struct Grid {
    half: i64,
    cells: Vec<u8>,
}

impl Grid {
    fn new(n: usize) -> Self {
        let side = 2 * n + 2;
        Grid {
            half: n as i64 + 1,
            cells: vec![EMPTY; side * side],
        }
    }

    fn idx(&self, i: i64, j: i64) -> usize {
        ((j + self.half) * 2 * self.half + (i + self.half)) as usize
    }

    fn get(&self, i: i64, j: i64) -> u8 {
        self.cells[self.idx(i, j)]
    }
}

/// Squares of the order-`k` diamond, row by row from the bottom.
fn diamond_rows(k: i64) -> impl Iterator<Item = (i64, std::ops::RangeInclusive<i64>)> {
    (-k..k).map(move |j| {
        let w = if j >= 0 { k - j } else { k + j + 1 };
        (j, -w..=w - 1)
    })
}

fn shuffle_step(old: &Grid, next: &mut Grid, k: i64, p_horizontal: f64, rng: &mut impl Rng) {
    for (j, row) in diamond_rows(k + 1) {
        let start = next.idx(*row.start(), j);
        next.cells[start..start + (row.end() - row.start() + 1) as usize].fill(EMPTY);
    }
    let stride = (2 * old.half) as usize;
    let src = &old.cells;
    for (j, row) in diamond_rows(k) {
        let start = old.idx(*row.start(), j);
        let mut even = (row.start() + j + k).rem_euclid(2) == 0;
        for c in start..start + (row.end() - row.start() + 1) as usize {
            match src[c] {
                RIGHT => {
                    if even {
                        // north-moving; deleted if a south-moving domino sits on top
                        if src[c + stride] != RIGHT {
                            next.cells[c + stride] = RIGHT;
                            next.cells[c + stride + 1] = LEFT;
                        }
                    } else if src[c - stride] != RIGHT {
                        next.cells[c - stride] = RIGHT;
                        next.cells[c - stride + 1] = LEFT;
                    }
                }
                UP => {
                    if even {
                        // east-moving; deleted if a west-moving domino is to its right
                        if src[c + 1] != UP {
                            next.cells[c + 1] = UP;
                            next.cells[c + 1 + stride] = DOWN;
                        }
                    } else if src[c - 1] != UP {
                        next.cells[c - 1] = UP;
                        next.cells[c - 1 + stride] = DOWN;
                    }
                }
                _ => {}
            }
            even = !even;
        }
    }
    for (j, row) in diamond_rows(k + 1) {
        let start = next.idx(*row.start(), j);
        for c in start..start + (row.end() - row.start() + 1) as usize {
            if next.cells[c] != EMPTY {
                continue;
            }
            debug_assert!(next.cells[c + 1] == EMPTY && next.cells[c + stride] == EMPTY);
            let block = if rng.random::<f64>() < p_horizontal {
                [RIGHT, LEFT, RIGHT, LEFT]
            } else {
                [UP, UP, DOWN, DOWN]
            };
            next.cells[c] = block[0];
            next.cells[c + 1] = block[1];
            next.cells[c + stride] = block[2];
            next.cells[c + stride + 1] = block[3];
        }
    }
}

/// Kasteleyn coordinates of the square with lower-left corner `(i, j)`.
fn square_vertex(n: i64, i: i64, j: i64) -> Vertex {
    Vertex::new(i - j + n, i + j + 1 + n).expect("square centres have odd coordinate sum")
}

fn grid_to_tiling(g: &Grid, n: usize) -> Tiling {
    let nn = n as i64;
    let mut dimers = Vec::with_capacity(n * (n + 1));
    for (j, row) in diamond_rows(nn) {
        for i in row {
            let other = match g.get(i, j) {
                RIGHT => (i + 1, j),
                UP => (i, j + 1),
                _ => continue,
            };
            let p = square_vertex(nn, i, j);
            let q = square_vertex(nn, other.0, other.1);
            let (b, w) = if p.x1 % 2 == 0 { (p, q) } else { (q, p) };
            dimers.push(Dimer::new(b, w).expect("adjacent squares of opposite colour"));
        }
    }
    Tiling::from_dimers(n, dimers)
}

/// Sample number `index` of the run described by `config`.
pub fn sample_at(config: &SamplerConfig, index: u64) -> Tiling {
    let mut rng = sample_rng(config.seed, index);
    let p = config.horizontal_probability();
    let mut grid = Grid::new(config.n);
    let mut spare = Grid::new(config.n);
    for k in 0..config.n as i64 {
        shuffle_step(&grid, &mut spare, k, p, &mut rng);
        std::mem::swap(&mut grid, &mut spare);
    }
    grid_to_tiling(&grid, config.n)
}

/// The first sample of the run.
pub fn sample_tiling(config: &SamplerConfig) -> Tiling {
    sample_at(config, 0)
}

/// All `count` samples, in index order.
pub fn sample_tilings(config: &SamplerConfig) -> Vec<Tiling> {
    (0..config.count as u64)
        .into_par_iter()
        .map(|i| sample_at(config, i))
        .collect()
}

/// Runs `f` on every sample and merges the results with `merge`; samples are
/// generated in parallel and never all held in memory.
pub fn fold_samples<T, F, M>(config: &SamplerConfig, identity: impl Fn() -> T + Sync + Send, f: F, merge: M) -> T
where
    T: Send,
    F: Fn(&mut T, u64, &Tiling) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    (0..config.count as u64)
        .into_par_iter()
        .fold(&identity, |mut acc, i| {
            let t = sample_at(config, i);
            f(&mut acc, i, &t);
            acc
        })
        .reduce(&identity, merge)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeFrequency {
    pub frequency: f64,
    /// Binomial standard error `sqrt(f (1 - f) / count)`.
    pub std_error: f64,
}

pub fn empirical_edge_frequencies(config: &SamplerConfig) -> BTreeMap<Dimer, EdgeFrequency> {
    if config.count == 0 {
        return BTreeMap::new();
    }
    let counts = fold_samples(
        config,
        BTreeMap::<Dimer, u64>::new,
        |acc, _, t| {
            for d in t.dimers() {
                *acc.entry(*d).or_default() += 1;
            }
        },
        |mut a, b| {
            for (d, c) in b {
                *a.entry(d).or_default() += c;
            }
            a
        },
    );
    let total = config.count as f64;
    config
        .diamond()
        .edges()
        .into_iter()
        .map(|d| {
            let f = counts.get(&d).copied().unwrap_or(0) as f64 / total;
            (
                d,
                EdgeFrequency {
                    frequency: f,
                    std_error: (f * (1.0 - f) / total).sqrt(),
                },
            )
        })
        .collect()
}

/// A maximal run of consecutive holes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HoleCluster {
    pub start: i64,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineStatistics {
    pub r: i64,
    pub positions: Vec<i64>,
    pub holes: Vec<HoleCluster>,
}

impl LineStatistics {
    pub fn hole_positions(&self) -> impl Iterator<Item = i64> + '_ {
        self.holes.iter().flat_map(|c| c.start..c.start + c.len as i64)
    }
}

/// South dominos `((2s, 2r+1), (2s-1, 2r))` on the line `y = r`, for
/// `1 <= r <= n - 1` (for `r = n` the black vertex leaves the diamond).
pub fn south_line_statistics(t: &Tiling, r: i64) -> Result<LineStatistics, ShuffleError> {
    let n = t.n() as i64;
    if !(1..n).contains(&r) {
        return Err(ShuffleError::InvalidLine { r, max: n - 1 });
    }
    let positions: Vec<i64> = (1..=n)
        .filter(|&s| {
            let b = Vertex::new(2 * s, 2 * r + 1).expect("black vertex");
            t.contains(&Dimer::at(b, DimerKind::South))
        })
        .collect();
    let mut holes: Vec<HoleCluster> = Vec::new();
    let mut next = positions.iter().peekable();
    for s in 1..=n {
        if next.peek() == Some(&&s) {
            next.next();
            continue;
        }
        match holes.last_mut() {
            Some(c) if c.start + c.len as i64 == s => c.len += 1,
            _ => holes.push(HoleCluster { start: s, len: 1 }),
        }
    }
    Ok(LineStatistics { r, positions, holes })
}

/// Per-vertex dimer kinds on the `(2n+1)^2` square of Kasteleyn coordinates.
struct KindMap {
    side: i64,
    kinds: Vec<Option<DimerKind>>,
}

impl KindMap {
    fn new(t: &Tiling) -> Self {
        let side = 2 * t.n() as i64 + 1;
        let mut kinds = vec![None; (side * side) as usize];
        for d in t.dimers() {
            for v in [d.black, d.white] {
                kinds[(v.x2 * side + v.x1) as usize] = Some(d.kind);
            }
        }
        KindMap { side, kinds }
    }

    fn get(&self, x1: i64, x2: i64) -> Option<DimerKind> {
        if x1 < 0 || x2 < 0 || x1 >= self.side || x2 >= self.side {
            return None;
        }
        self.kinds[(x2 * self.side + x1) as usize]
    }
}

/// The outermost deviation from the frozen phase along each end of each
/// diagonal line, rescaled to `[0, 1]^2`.
///
/// Diagonal lines are `x1 + x2 = c` and `x1 - x2 = c`. Walking inward from an
/// end, the dimer kind at the first vertex is the phase of the frozen region
/// the line starts in; the first vertex with a different kind marks the
/// boundary. A line covered by a single kind throughout yields no point.
pub fn frozen_boundary_points(t: &Tiling) -> Vec<(f64, f64)> {
    let n = t.n() as i64;
    let map = KindMap::new(t);
    let scale = 1.0 / (2 * n) as f64;
    let mut out = Vec::new();
    let mut scan = |line: Vec<(i64, i64)>| {
        for dir in [false, true] {
            let mut it: Box<dyn Iterator<Item = &(i64, i64)>> =
                if dir { Box::new(line.iter().rev()) } else { Box::new(line.iter()) };
            let Some(&(x1, x2)) = it.next() else { continue };
            let phase = map.get(x1, x2);
            if let Some(&(y1, y2)) = it.find(|&&(y1, y2)| map.get(y1, y2) != phase) {
                out.push((y1 as f64 * scale, y2 as f64 * scale));
            }
        }
    };
    let inside = |x1: i64, x2: i64| map.get(x1, x2).is_some();
    for c in (1..4 * n).step_by(2) {
        scan((0..=2 * n).map(|x1| (x1, c - x1)).filter(|&(a, b)| inside(a, b)).collect());
    }
    for c in (-(2 * n) + 1..2 * n).step_by(2) {
        scan((0..=2 * n).map(|x1| (x1, x1 - c)).filter(|&(a, b)| inside(a, b)).collect());
    }
    out
}

/// Boundary points of every sample of the run.
pub fn frozen_boundary_estimate(config: &SamplerConfig) -> Vec<(f64, f64)> {
    fold_samples(
        config,
        Vec::new,
        |acc, _, t| acc.extend(frozen_boundary_points(t)),
        |mut a, b| {
            a.extend(b);
            a
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareOutcome {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Sampled tilings that matched no enumerated tiling.
    pub unmatched: u64,
}

/// Pearson's test of the sampled tiling frequencies against `a^(#vertical)/Z`
/// over all tilings of the diamond, which must be small enough to enumerate.
pub fn tiling_chi_square(config: &SamplerConfig) -> Result<ChiSquareOutcome, ShuffleError> {
    let diamond = config.diamond();
    let tilings = enumerate_tilings(&diamond)?;
    let a = config.a.to_f64();
    let weights: Vec<f64> = tilings.iter().map(|t| tiling_weight(t, &a)).collect();
    let z: f64 = weights.iter().sum();
    let index: BTreeMap<Vec<DimerKind>, usize> =
        tilings.iter().enumerate().map(|(i, t)| (t.kinds_by_black(), i)).collect();
    let m = tilings.len();
    let (counts, unmatched) = fold_samples(
        config,
        || (vec![0u64; m], 0u64),
        |acc, _, t| match index.get(&t.kinds_by_black()) {
            Some(&i) if t.validate().is_ok() => acc.0[i] += 1,
            _ => acc.1 += 1,
        },
        |mut a, b| {
            for (x, y) in a.0.iter_mut().zip(b.0) {
                *x += y;
            }
            (a.0, a.1 + b.1)
        },
    );
    let total = config.count as f64;
    let statistic: f64 = counts
        .iter()
        .zip(&weights)
        .map(|(&c, &w)| {
            let e = total * w / z;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    let dof = m.saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64).expect("positive dof").sf(statistic)
    };
    Ok(ChiSquareOutcome {
        statistic,
        dof,
        p_value,
        unmatched,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(n: usize, p: i64, q: i64, seed: u64, count: usize) -> SamplerConfig {
        SamplerConfig::new(n, Weight::from_ratio(p, q).unwrap(), seed, count).unwrap()
    }

    #[test]
    fn samples_are_valid_tilings() {
        for n in [1, 2, 5, 17, 40] {
            for (p, q) in [(1, 1), (1, 2), (3, 1)] {
                let c = config(n, p, q, 11, 3);
                for t in sample_tilings(&c) {
                    assert!(t.validate().is_ok(), "n={n}: {}", t.validate());
                    assert_eq!(t.dimers().len(), n * (n + 1));
                }
            }
        }
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let c = config(30, 1, 2, 99, 4);
        assert_eq!(sample_tilings(&c), sample_tilings(&c));
        assert_eq!(sample_at(&c, 2), sample_tilings(&c)[2]);
        assert_ne!(sample_at(&c, 0), sample_at(&c, 1));
    }

    #[test]
    fn vertical_pair_frequency_at_order_one() {
        for (p, q, want) in [(1, 1, 0.5), (2, 1, 0.8)] {
            let c = config(1, p, q, 5, 100_000);
            let freq = empirical_edge_frequencies(&c);
            let west = Dimer::at(Vertex::new(0, 1).unwrap(), DimerKind::West);
            let f = freq[&west].frequency;
            let sigma = (want * (1.0 - want) / 100_000.0f64).sqrt();
            assert!((f - want).abs() < 4.0 * sigma, "a={p}/{q}: {f}");
        }
    }

    #[test]
    fn zero_samples_give_empty_map() {
        assert!(empirical_edge_frequencies(&config(3, 1, 1, 0, 0)).is_empty());
    }

    #[test]
    fn chi_square_small_orders() {
        let out = tiling_chi_square(&config(2, 1, 2, 3, 50_000)).unwrap();
        assert_eq!(out.dof, 7);
        assert_eq!(out.unmatched, 0);
        assert!(out.p_value > 1e-3, "{out:?}");
    }

    #[test]
    fn line_statistics_partition_the_line() {
        let c = config(12, 1, 1, 4, 5);
        for t in sample_tilings(&c) {
            for r in 1..12 {
                let s = south_line_statistics(&t, r).unwrap();
                let mut all: Vec<i64> = s.positions.iter().copied().chain(s.hole_positions()).collect();
                all.sort();
                assert_eq!(all, (1..=12).collect::<Vec<_>>());
                for w in s.holes.windows(2) {
                    assert!(w[0].start + (w[0].len as i64) < w[1].start);
                }
            }
        }
        let t = sample_tiling(&c);
        assert!(matches!(
            south_line_statistics(&t, 12),
            Err(ShuffleError::InvalidLine { r: 12, max: 11 })
        ));
    }

    #[test]
    fn line_statistics_on_a_constructed_tiling() {
        // n = 2, every dimer horizontal: north dimers on the upper half, south
        // on the lower half of the diamond (in Kasteleyn coordinates x2 >= x1
        // versus x2 < x1).
        let d = AztecDiamond::with_ratio(2, 1, 1).unwrap();
        let t = crate::exactdimer::enumerate_tilings(&d)
            .unwrap()
            .into_iter()
            .find(|t| t.vertical_count() == 0 && t.count(DimerKind::South) == 3)
            .unwrap();
        let s = south_line_statistics(&t, 1).unwrap();
        let direct: Vec<i64> = t
            .dimers()
            .iter()
            .filter(|d| d.kind == DimerKind::South && d.black.x2 == 3)
            .map(|d| d.black.x1 / 2)
            .collect();
        assert_eq!(s.positions, direct);
    }

    #[test]
    fn frozen_corners_have_no_boundary_on_short_diagonals() {
        let c = config(64, 1, 1, 8, 1);
        let t = sample_tiling(&c);
        let pts = frozen_boundary_points(&t);
        assert!(!pts.is_empty());
        // the ellipse stays away from the four corners
        for (u, v) in pts {
            for (cu, cv) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)] {
                let d: f64 = (u - cu) * (u - cu) + (v - cv) * (v - cv);
                assert!(d.sqrt() > 0.05, "({u}, {v})");
            }
        }
    }
}
