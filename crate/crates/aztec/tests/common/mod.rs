//! Brute-force oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use aztec::exactdimer::DenseMatrix;
use aztec::scalinglimits::DiscreteKernel;
use rand::Rng;

/// A symmetric kernel `U diag(ev) U^T` with eigenvalues in `[0, 1]`, so
/// that it defines a determinantal process on `m` points.
pub fn random_projection_like_kernel<R: Rng>(rng: &mut R, m: usize) -> DiscreteKernel {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while basis.len() < m {
        let mut v: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
        for b in &basis {
            let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    let ev: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..1.0)).collect();
    let mat = DenseMatrix::from_fn(m, m, |i, j| (0..m).map(|k| ev[k] * basis[k][i] * basis[k][j]).sum());
    DiscreteKernel::new((0..m as i64).collect(), mat)
}

/// `P(X = S)` for every subset `S` (bitmask) of the kernel's points:
/// `(-1)^|S^c| det(K - 1_{S^c})`.
pub fn subset_probabilities(k: &DiscreteKernel) -> Vec<f64> {
    let m = k.len();
    (0..1usize << m)
        .map(|s| {
            let out = m - s.count_ones() as usize;
            let mat = DenseMatrix::from_fn(m, m, |i, j| {
                let absent = s >> i & 1 == 0;
                k.matrix[(i, j)] - if i == j && absent { 1.0 } else { 0.0 }
            });
            let sign = if out % 2 == 0 { 1.0 } else { -1.0 };
            sign * mat.determinant()
        })
        .collect()
}

/// `E prod_{x kept} (1 - phi(x))`, summing over every configuration and
/// every way of keeping each point independently with probability `alpha`.
pub fn thinned_oracle(k: &DiscreteKernel, phi: &[f64], alpha: f64) -> f64 {
    let probs = subset_probabilities(k);
    let mut total = 0.0;
    for (s, p) in probs.iter().enumerate() {
        // every kept subset t of s
        let mut t = s;
        loop {
            let mut weight = *p;
            for (i, f) in phi.iter().enumerate() {
                if s >> i & 1 == 1 {
                    weight *= if t >> i & 1 == 1 { alpha * (1.0 - f) } else { 1.0 - alpha };
                }
            }
            total += weight;
            if t == 0 {
                break;
            }
            t = (t - 1) & s;
        }
    }
    total
}

/// Multiplicity cutoff for [`thickened_oracle`] and the probability mass it
/// drops, per point, which is `beta^cutoff`.
pub fn thickening_cutoff(beta: f64, tail: f64) -> usize {
    if beta == 0.0 {
        1
    } else {
        (tail.ln() / beta.ln()).ceil() as usize
    }
}

/// `E prod_x (1 - phi(x))^m(x)` with geometric multiplicities
/// `P(m = j) = (1 - beta) beta^(j - 1)`, summed over every configuration and
/// multiplicity assignment up to the cutoff. The sum over assignments
/// factorizes over points, so it is taken point by point.
pub fn thickened_oracle(k: &DiscreteKernel, phi: &[f64], beta: f64, cutoff: usize) -> f64 {
    let probs = subset_probabilities(k);
    let per_point: Vec<f64> = phi
        .iter()
        .map(|f| (1..=cutoff).map(|j| (1.0 - beta) * beta.powi(j as i32 - 1) * (1.0 - f).powi(j as i32)).sum())
        .collect();
    probs
        .iter()
        .enumerate()
        .map(|(s, p)| p * (0..phi.len()).filter(|i| s >> i & 1 == 1).map(|i| per_point[i]).product::<f64>())
        .sum()
}
