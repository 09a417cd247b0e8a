//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as part of `cargo test`; `cargo test -p aztec --test acceptance -- 3 7`
//! runs only the listed criteria. Exits with status 1 if any selected
//! criterion fails.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use aztec::exactdimer::{
    enumerate_tilings, partition_closed_form, partition_function, tiling_weight, DirectInverse, ExactComplex,
};
use aztec::kernelcalc::{
    correlation_probability, five_term, inverse_entry, inverse_from_particle_kernel, KernelEntry, ParticlePhase, Regime,
};
use aztec::lattice::{AztecDiamond, Dimer, Tiling, Vertex, Weight};
use aztec::scalinglimits::{
    airy_ai, airy_kernel, airy_kernel_diagonal, airy_row_integral, bulk_limit_entry, edge_line, edge_params,
    ellipse_distance, omega_map, orientation_sign, poisson_constant, poisson_density, poisson_prediction,
    scaled_finite_kernel, thickened_gen_functional, thinned_gen_functional, BulkPrefactor,
};
use aztec::shuffler::{fold_samples, frozen_boundary_estimate, south_line_statistics, tiling_chi_square, SamplerConfig};
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

const WEIGHTS: [(i64, i64); 3] = [(1, 1), (1, 2), (2, 1)];

// Tolerances and sizes, one block per criterion.
const C5_TOLERANCE: f64 = 1e-10;
const C6_SAMPLES: usize = 1_000_000;
const C6_SIGNIFICANCE: f64 = 1e-3;
const C7_INSTANCES: usize = 100;
const C7_TOLERANCE: f64 = 1e-10;
const C8_IDENTITY_TOLERANCE: f64 = 1e-6;
const C8_ODE_TOLERANCE: f64 = 1e-8;
const C8_STENCIL_STEP: f64 = 5e-3;
const C9_ORDERS: (usize, usize) = (200, 800);
const C9_TOLERANCE: f64 = 0.05;
const C10_ORDER: usize = 512;
const C10_SAMPLES: usize = 200;
const C10_SEED: u64 = 2024;
const C10_SIGNIFICANCE: f64 = 1e-3;
const C11_ORDER: usize = 256;
const C11_SAMPLES: usize = 100;
const C11_SEED: u64 = 11;
const C11_DISTANCE: f64 = 0.05;
const C11_FRACTION: f64 = 0.95;
const C12_ORDER: usize = 400;
const C12_TOLERANCE: f64 = 1e-2;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn diamond(n: usize, (p, q): (i64, i64)) -> AztecDiamond {
    AztecDiamond::with_ratio(n, p, q).unwrap()
}

fn rational(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn exact(e: KernelEntry) -> ExactComplex {
    e.exact().expect("exact regime").clone()
}

fn c1_inverse_exactness() -> Outcome {
    let mut checked = 0;
    for n in 1..=4 {
        for w in WEIGHTS {
            let d = diamond(n, w);
            let direct = DirectInverse::<BigRational>::new(&d).unwrap();
            for x in d.white_vertices() {
                for y in d.black_vertices() {
                    let formula = exact(inverse_entry(x, y, &d, Regime::Exact).unwrap());
                    if formula != direct.get(x, y) {
                        return outcome(false, format!("n={n} a={}/{} w={x} b={y}", w.0, w.1));
                    }
                    checked += 1;
                }
            }
        }
    }
    outcome(true, format!("{checked} entries equal, n<=4, a in {{1, 1/2, 2}}"))
}

fn c2_five_term() -> Outcome {
    let mut checked = 0;
    for n in 1..=4 {
        for w in WEIGHTS {
            let d = diamond(n, w);
            let blacks = d.black_vertices();
            for &x in &blacks {
                for &y in &blacks {
                    let v = exact(five_term(x, y, &d, Regime::Exact).unwrap());
                    let want = if x == y { Complex::one() } else { Complex::zero() };
                    if v != want {
                        return outcome(false, format!("n={n} x={x} y={y}: {v}"));
                    }
                    checked += 1;
                }
            }
        }
    }
    outcome(true, format!("{checked} pairs give the identity exactly"))
}

fn c3_partition() -> Outcome {
    for w in WEIGHTS {
        let a = rational(w.0, w.1);
        for n in 1..=8 {
            let d = diamond(n, w);
            let det: BigRational = partition_function(&d).unwrap();
            let base = BigRational::one() + &a * &a;
            let closed = (0..n * (n + 1) / 2).fold(BigRational::one(), |acc, _| acc * &base);
            if det != closed || det != partition_closed_form::<BigRational>(&d).unwrap() {
                return outcome(false, format!("n={n} a={a}: |det K| = {det}, closed form {closed}"));
            }
            if w == (1, 1) && det != BigRational::from_integer(BigInt::from(2).pow((n * (n + 1) / 2) as u32)) {
                return outcome(false, format!("n={n}: {det} is not 2^(n(n+1)/2)"));
            }
            if n <= 3 {
                let sum: BigRational = enumerate_tilings(&d).unwrap().iter().map(|t| tiling_weight(t, &a)).sum();
                if sum != det {
                    return outcome(false, format!("n={n} a={a}: enumeration {sum} vs {det}"));
                }
            }
        }
    }
    outcome(true, "closed form for n<=8, enumeration for n<=3, 2^(n(n+1)/2) at a=1")
}

fn enumerated_probability(tilings: &[Tiling], weights: &[BigRational], z: &BigRational, edges: &[Dimer]) -> BigRational {
    let hit: BigRational = tilings
        .iter()
        .zip(weights)
        .filter(|(t, _)| edges.iter().all(|e| t.contains(e)))
        .map(|(_, w)| w.clone())
        .sum();
    hit / z
}

fn c4_kenyon() -> Outcome {
    let mut pairs = 0;
    for w in WEIGHTS {
        let d = diamond(2, w);
        let a = rational(w.0, w.1);
        let tilings = enumerate_tilings(&d).unwrap();
        let weights: Vec<BigRational> = tilings.iter().map(|t| tiling_weight(t, &a)).collect();
        let z: BigRational = weights.iter().cloned().sum();
        let edges = d.edges();
        let mut single = BTreeMap::new();
        for (i, e) in edges.iter().enumerate() {
            let p = exact(correlation_probability(&[*e], &d, Regime::Exact).unwrap());
            if p.re != enumerated_probability(&tilings, &weights, &z, &[*e]) || !p.im.is_zero() {
                return outcome(false, format!("a={a} single edge {e:?}"));
            }
            single.insert(*e, p.re);
            for f in &edges[i + 1..] {
                let p = exact(correlation_probability(&[*e, *f], &d, Regime::Exact).unwrap());
                if p.re != enumerated_probability(&tilings, &weights, &z, &[*e, *f]) || !p.im.is_zero() {
                    return outcome(false, format!("a={a} pair {e:?} {f:?}"));
                }
                pairs += 1;
            }
        }
        for v in d.black_vertices().into_iter().chain(d.white_vertices()) {
            let total: BigRational =
                single.iter().filter(|(e, _)| e.black == v || e.white == v).map(|(_, p)| p.clone()).sum();
            if !total.is_one() {
                return outcome(false, format!("a={a} vertex {v}: probabilities sum to {total}"));
            }
        }
    }
    outcome(true, format!("all single edges and {pairs} pairs exact; vertex sums are 1"))
}

fn c5_particle_kernel() -> Outcome {
    let mut worst: f64 = 0.0;
    for w in WEIGHTS {
        let d = diamond(2, w);
        let numeric = AztecDiamond::new(2, Weight::from_f64(w.0 as f64 / w.1 as f64).unwrap()).unwrap();
        for x in d.white_vertices() {
            for y in d.black_vertices() {
                let want = exact(inverse_entry(x, y, &d, Regime::Exact).unwrap());
                let got = exact(inverse_from_particle_kernel(x, y, &d, Regime::Exact, ParticlePhase::Shifted).unwrap());
                if got != want {
                    return outcome(false, format!("a={}/{} w={x} b={y}: exact {got} vs {want}", w.0, w.1));
                }
                let num = inverse_from_particle_kernel(x, y, &numeric, Regime::numeric(), ParticlePhase::Shifted).unwrap();
                let direct = Complex64::new(
                    num_traits::ToPrimitive::to_f64(&want.re).unwrap(),
                    num_traits::ToPrimitive::to_f64(&want.im).unwrap(),
                );
                worst = worst.max((num.value() - direct).norm());
            }
        }
    }
    outcome(
        worst <= C5_TOLERANCE,
        format!("exact equality at n=2; numeric contours max error {worst:.1e} (tol {C5_TOLERANCE:.0e})"),
    )
}

fn c6_sampler() -> Outcome {
    let mut lowest = 1.0f64;
    let mut parts = Vec::new();
    for n in 1..=3 {
        for w in WEIGHTS {
            let c = SamplerConfig::new(n, Weight::from_ratio(w.0, w.1).unwrap(), 600 + n as u64, C6_SAMPLES).unwrap();
            let r = tiling_chi_square(&c).unwrap();
            if r.unmatched > 0 {
                return outcome(false, format!("n={n}: {} samples are not tilings", r.unmatched));
            }
            lowest = lowest.min(r.p_value);
            parts.push(format!("{:.2}", r.p_value));
        }
    }
    outcome(
        lowest > C6_SIGNIFICANCE,
        format!("{C6_SAMPLES} samples per case, p-values [{}], min {lowest:.3} > {C6_SIGNIFICANCE:.0e}", parts.join(" ")),
    )
}

fn c7_functionals() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for i in 0..C7_INSTANCES {
        let m = 1 + i % 6;
        let k = common::random_projection_like_kernel(&mut rng, m);
        let phi: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..1.0)).collect();
        let alpha = rng.random_range(0.0..=1.0);
        let beta = rng.random_range(0.0..0.6);
        worst = worst.max((thinned_gen_functional(&k, &phi, alpha) - common::thinned_oracle(&k, &phi, alpha)).abs());
        let cutoff = common::thickening_cutoff(beta, 1e-15);
        let want = common::thickened_oracle(&k, &phi, beta, cutoff);
        worst = worst.max((thickened_gen_functional(&k, &phi, beta) - want).abs());
    }
    outcome(
        worst < C7_TOLERANCE,
        format!("{C7_INSTANCES} random kernels of size 1..6, max error {worst:.1e}"),
    )
}

fn c8_airy() -> Outcome {
    let mut identity: f64 = 0.0;
    let mut ode: f64 = 0.0;
    let h = C8_STENCIL_STEP;
    for i in 0..=18 {
        let x = -6.0 + 0.5 * i as f64;
        let closed = airy_kernel_diagonal(x);
        identity = identity.max((airy_kernel(x, x).unwrap() - closed).abs());
        identity = identity.max((airy_row_integral(x).unwrap() - closed).abs());
        let f = |y: f64| airy_ai(y).unwrap();
        let d2 = (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h);
        ode = ode.max((d2 - x * f(x)).abs());
    }
    outcome(
        identity < C8_IDENTITY_TOLERANCE && ode < C8_ODE_TOLERANCE,
        format!("x in [-6, 3]: identity deviation {identity:.1e}, ODE residual {ode:.1e}"),
    )
}

fn c9_edge_kernel() -> Outcome {
    let (a, k) = (1.0, 1.0);
    let alpha = edge_params(k, a).unwrap().alpha;
    let grid: Vec<f64> = (-2..=2).map(f64::from).collect();
    let deviation = |n: usize| -> Result<f64, String> {
        let mut worst: f64 = 0.0;
        for &xi in &grid {
            for &eta in &grid {
                let finite = scaled_finite_kernel(n, a, k, xi, eta).map_err(|e| e.to_string())?;
                let limit = alpha * airy_kernel(xi, eta).map_err(|e| e.to_string())?;
                worst = worst.max((finite - limit).abs());
            }
        }
        Ok(worst)
    };
    match (deviation(C9_ORDERS.0), deviation(C9_ORDERS.1)) {
        (Ok(small), Ok(large)) => outcome(
            large < C9_TOLERANCE && large < small,
            format!(
                "max deviation on {{-2..2}}^2: {small:.4} at n={}, {large:.4} at n={} (tol {C9_TOLERANCE})",
                C9_ORDERS.0, C9_ORDERS.1
            ),
        ),
        (Err(e), _) | (_, Err(e)) => outcome(false, e),
    }
}

/// The outermost hole cluster of each sample on the edge line, against
/// geometric(beta) over sizes 1, 2, 3, >= 4.
fn c10_hole_clusters() -> Outcome {
    let (a, k) = (1.0, -1.0);
    let params = edge_params(k, a).unwrap();
    let beta = 2f64.sqrt() - 1.0;
    if (params.beta - beta).abs() > 1e-14 {
        return outcome(false, format!("beta = {} is not sqrt(2) - 1", params.beta));
    }
    let r = edge_line(&params, C10_ORDER);
    let config = SamplerConfig::new(C10_ORDER, Weight::from_ratio(1, 1).unwrap(), C10_SEED, C10_SAMPLES).unwrap();
    let counts = fold_samples(
        &config,
        || [0u64; 4],
        |acc, _, t| {
            let stats = south_line_statistics(t, r).unwrap();
            if let Some(c) = stats.holes.last() {
                acc[c.len.min(4) - 1] += 1;
            }
        },
        |mut x, y| {
            x.iter_mut().zip(y).for_each(|(p, q)| *p += q);
            x
        },
    );
    let total: u64 = counts.iter().sum();
    let probs = [1.0 - beta, (1.0 - beta) * beta, (1.0 - beta) * beta * beta, beta.powi(3)];
    let stat: f64 = counts
        .iter()
        .zip(probs)
        .map(|(&c, p)| {
            let e = total as f64 * p;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    let p = ChiSquared::new(3.0).unwrap().sf(stat);
    outcome(
        total == C10_SAMPLES as u64 && p > C10_SIGNIFICANCE,
        format!("line r={r}, sizes 1/2/3/>=4 = {counts:?}, chi2={stat:.2}, p={p:.3} (significance {C10_SIGNIFICANCE:.0e})"),
    )
}

fn c11_arctic_ellipse() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (p, q) in [(1, 1), (1, 2)] {
        let config = SamplerConfig::new(C11_ORDER, Weight::from_ratio(p, q).unwrap(), C11_SEED, C11_SAMPLES).unwrap();
        let a = p as f64 / q as f64;
        let points = frozen_boundary_estimate(&config);
        let near = points.iter().filter(|&&(u, v)| ellipse_distance(u, v, a) <= C11_DISTANCE).count();
        let fraction = near as f64 / points.len().max(1) as f64;
        pass &= !points.is_empty() && fraction >= C11_FRACTION;
        parts.push(format!("a={p}/{q}: {fraction:.4} of {} points", points.len()));
    }
    outcome(pass, format!("within {C11_DISTANCE}: {}", parts.join(", ")))
}

/// Finite `s(b) K_n^-1(w, b)` near two bulk points against both prefactor
/// conventions: the centre, where they coincide, and an asymmetric point,
/// where exactly one may pass.
fn c12_gibbs_bulk() -> Outcome {
    let a = 1.0;
    let d = diamond(C12_ORDER, (1, 1));
    let whites = [[0, 0], [1, 0], [0, 1], [2, 1]];
    let blacks = [[0, 0], [1, 0], [0, -1], [-1, 1], [1, 1]];
    let mut parts = Vec::new();
    let mut passing_at_asymmetric = Vec::new();
    let mut centre_ok = false;
    for (xi1, xi2) in [(0.5, 0.5), (0.4, 0.58)] {
        let point = omega_map(xi1, xi2, a).unwrap();
        let (c1, c2) = ((xi1 * C12_ORDER as f64).floor() as i64, (xi2 * C12_ORDER as f64).floor() as i64);
        let mut worst = [0.0f64; 2];
        for al in whites {
            for be in blacks {
                let w = Vertex::new(2 * c1 + 2 * al[0] + 1, 2 * c2 + 2 * al[1]).unwrap();
                let b = Vertex::new(2 * c1 + 2 * be[0], 2 * c2 + 2 * be[1] + 1).unwrap();
                let finite = inverse_entry(w, b, &d, Regime::Exact).unwrap().value() * orientation_sign(b);
                for (slot, pf) in worst.iter_mut().zip(BulkPrefactor::ALL) {
                    let limit = bulk_limit_entry(&point, a, al, be, pf).unwrap();
                    *slot = slot.max((finite - limit).norm());
                }
            }
        }
        parts.push(format!("xi=({xi1},{xi2}): reciprocal {:.1e}, mixed {:.1e}", worst[0], worst[1]));
        let passing: Vec<BulkPrefactor> =
            BulkPrefactor::ALL.into_iter().zip(worst).filter(|(_, e)| *e < C12_TOLERANCE).map(|(p, _)| p).collect();
        if (xi1, xi2) == (0.5, 0.5) {
            centre_ok = passing.len() == 2;
        } else {
            passing_at_asymmetric = passing;
        }
    }
    let pass = centre_ok && passing_at_asymmetric == [BulkPrefactor::Reciprocal];
    outcome(
        pass,
        format!("n={C12_ORDER}, tol {C12_TOLERANCE:.0e}; {}; passing off-centre: {passing_at_asymmetric:?}", parts.join("; ")),
    )
}

fn c13_poisson() -> Outcome {
    let density_cases = [(0.0, 1.0), (0.75, 0.5), (-3.0, 2.0), (1.0, 0.0), (2.5, 0.0), (-0.44, 1.2)];
    let mut pass = density_cases.iter().all(|&(xi, want)| (poisson_density(xi) - want).abs() <= 1e-15);
    // c(a) = pi^(2/3) (1 + 1/k)^(1/3) a^(2/3), cubed: pi^2 (1 + 1/k) a^2
    for (k, a) in [(1.0, 1.0), (0.5, 8.0), (3.0, 27.0), (2.0, 0.25)] {
        let c = poisson_constant(k, a);
        let cubed = std::f64::consts::PI.powi(2) * (1.0 + 1.0 / k) * a * a;
        pass &= (c.powi(3) / cubed - 1.0).abs() < 1e-14;
        let pred = poisson_prediction(k, a, 0.75).unwrap();
        pass &= pred.c == c && pred.density == 0.5;
    }
    pass &= poisson_prediction(0.0, 1.0, 0.0).is_err() && poisson_prediction(-1.0, 1.0, 0.0).is_err();
    // for large a the Poisson scale over the Airy scale tends to
    // pi^(2/3) a^(4/3) (1 + k)^(2/3)
    let mut ratio_error: f64 = 0.0;
    for k in [0.5, 1.0, 2.0] {
        let a = 1e4;
        let lambda = edge_params(k, a).unwrap().lambda;
        let want = std::f64::consts::PI.powf(2.0 / 3.0) * a.powf(4.0 / 3.0) * (1.0 + k).powf(2.0 / 3.0);
        ratio_error = ratio_error.max((poisson_constant(k, a) / lambda / want - 1.0).abs());
    }
    pass &= ratio_error < 1e-3;
    outcome(
        pass,
        format!("rho and c(a) plug-ins exact to rounding; c/lambda large-a ratio error {ratio_error:.1e}; a(n)->infinity regime not simulated"),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome);

const CRITERIA: [Criterion; 13] = [
    (1, "inverse Kasteleyn formula is exact", c1_inverse_exactness),
    (2, "five-term identity", c2_five_term),
    (3, "partition function", c3_partition),
    (4, "edge probabilities at n=2", c4_kenyon),
    (5, "particle kernel relation", c5_particle_kernel),
    (6, "sampler chi-square", c6_sampler),
    (7, "thinned/thickened functionals", c7_functionals),
    (8, "Airy numerics", c8_airy),
    (9, "north edge kernel convergence", c9_edge_kernel),
    (10, "south edge hole clusters", c10_hole_clusters),
    (11, "arctic ellipse", c11_arctic_ellipse),
    (12, "Gibbs bulk limit", c12_gibbs_bulk),
    (13, "Poisson regime plug-ins", c13_poisson),
];

fn main() -> ExitCode {
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (id, name, run) in CRITERIA {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        ran += 1;
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {id:>2} {} {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
