//! Subcommand implementations. Each writes its report to `out`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use aztec::exactdimer::{
    enumerate_tilings, partition_closed_form, partition_function, tiling_weight, DirectInverse, MAX_ENUMERATION_ORDER,
};
use aztec::kernelcalc::{
    correlation_probability, five_term, inverse_entry, south_line_kernel, KernelEntry, KernelError, Regime,
};
use aztec::lattice::{AztecDiamond, Color, Dimer, DimerKind, Tiling, Vertex, Weight};
use aztec::scalinglimits::{
    airy_kernel_diagonal, airy_row_integral, edge_line, edge_params, ellipse_residual_exact, gibbs_dimer_probabilities,
    omega_map, poisson_constant, poisson_density, EdgeRegime, ExactEdgeParams, ScalingError,
};
use aztec::shuffler::{fold_samples, sample_at, south_line_statistics, tiling_chi_square, SamplerConfig};
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::cli::{
    BulkStatsArgs, Command, DiamondArgs, EdgeStatsArgs, ExactCommand, RenderArgs, SampleArgs, Suite, ValidateArgs,
};
use crate::svg::render_svg;
use crate::table::StatsTable;
use crate::tiling_file::TilingFile;

/// Failures with a dedicated exit status; anything else exits with 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    ValidationFailed(String),
}

pub fn run(command: Command, out: &mut impl Write) -> Result<()> {
    match command {
        Command::Sample(args) => cmd_sample(args, out),
        Command::Render(args) => cmd_render(args, out),
        Command::Exact { what } => cmd_exact(what, out),
        Command::Validate(args) => cmd_validate(args, out),
        Command::EdgeStats(args) => cmd_edge_stats(args, out),
        Command::BulkStats(args) => cmd_bulk_stats(args, out),
    }
}

fn usage(message: impl Into<String>) -> anyhow::Error {
    CliError::Usage(message.into()).into()
}

/// Bad coordinates and out-of-range parameters are the caller's mistake.
fn kernel_error(e: KernelError) -> anyhow::Error {
    match e {
        KernelError::WrongColor(_)
        | KernelError::OutsideDiamond(_)
        | KernelError::InvalidLine { .. }
        | KernelError::InvalidPosition { .. }
        | KernelError::InvalidParticle { .. } => usage(e.to_string()),
        e => e.into(),
    }
}

fn scaling_error(e: ScalingError) -> anyhow::Error {
    match e {
        ScalingError::OutOfRange { .. } | ScalingError::OutsideLiquidRegion { .. } | ScalingError::InvalidWeight(_) => {
            usage(e.to_string())
        }
        e => e.into(),
    }
}

fn diamond(args: &DiamondArgs) -> Result<AztecDiamond> {
    AztecDiamond::new(args.n, args.a.clone()).map_err(|e| usage(e.to_string()))
}

fn regime(a: &Weight) -> Regime {
    if a.is_exact() {
        Regime::Exact
    } else {
        Regime::numeric()
    }
}

/// `re`, `im` and `error` cells; exact values print as `p/q`.
fn entry_cells(e: &KernelEntry) -> [String; 3] {
    match e {
        KernelEntry::Exact(z) => [z.re.to_string(), z.im.to_string(), "0".to_string()],
        KernelEntry::Numeric { value, error, .. } => [value.re.to_string(), value.im.to_string(), error.to_string()],
    }
}

pub fn sample_file_name(n: usize, seed: u64, index: u64) -> String {
    format!("tiling_n{n}_seed{seed}_{index:05}.txt")
}

/// Samples are drawn in parallel a batch at a time and written in index
/// order.
fn cmd_sample(args: SampleArgs, out: &mut impl Write) -> Result<()> {
    const BATCH: u64 = 64;
    let d = &args.diamond;
    let config = SamplerConfig::new(d.n, d.a.clone(), args.seed, args.count).map_err(|e| usage(e.to_string()))?;
    fs::create_dir_all(&args.out_dir).with_context(|| format!("creating {}", args.out_dir.display()))?;
    let count = args.count as u64;
    for start in (0..count).step_by(BATCH as usize) {
        let files: Vec<String> = (start..(start + BATCH).min(count))
            .into_par_iter()
            .map(|i| {
                TilingFile {
                    a: d.a.clone(),
                    seed: Some(args.seed),
                    index: Some(i),
                    tiling: sample_at(&config, i),
                }
                .render()
            })
            .collect();
        for (i, text) in (start..).zip(files) {
            let path = args.out_dir.join(sample_file_name(d.n, args.seed, i));
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            writeln!(out, "{}", path.display())?;
        }
    }
    Ok(())
}

pub fn read_tiling_file(path: &Path) -> Result<TilingFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    TilingFile::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn cmd_render(args: RenderArgs, out: &mut impl Write) -> Result<()> {
    let file = read_tiling_file(&args.input)?;
    if args.height {
        let report = file.tiling.validate();
        if !report.is_ok() {
            return Err(CliError::ValidationFailed(format!(
                "{} is not a tiling ({report}); heights are undefined",
                args.input.display()
            ))
            .into());
        }
    }
    let svg = render_svg(&file.tiling, args.height);
    fs::write(&args.out, svg).with_context(|| format!("writing {}", args.out.display()))?;
    writeln!(out, "{}", args.out.display())?;
    Ok(())
}

fn cmd_exact(what: ExactCommand, out: &mut impl Write) -> Result<()> {
    let table = match what {
        ExactCommand::Partition(args) => {
            let d = diamond(&args)?;
            let mut t = StatsTable::new(args.n, &args.a, &["partition"]);
            let z = match &args.a {
                Weight::Exact(_) => partition_function::<num_rational::BigRational>(&d)?.to_string(),
                Weight::Float(_) => partition_function::<f64>(&d)?.to_string(),
            };
            t.push(vec![z]);
            t
        }
        ExactCommand::Inverse(args) => {
            let d = diamond(&args)?;
            let regime = regime(&args.a);
            let mut t = StatsTable::new(args.n, &args.a, &["w_x1", "w_x2", "b_x1", "b_x2", "re", "im", "error"]);
            for w in d.white_vertices() {
                for b in d.black_vertices() {
                    let e = inverse_entry(w, b, &d, regime).map_err(kernel_error)?;
                    let mut row = vec![w.x1.to_string(), w.x2.to_string(), b.x1.to_string(), b.x2.to_string()];
                    row.extend(entry_cells(&e));
                    t.push(row);
                }
            }
            t
        }
        ExactCommand::EdgeProb { diamond: args, edges } => {
            let d = diamond(&args)?;
            let mut dimers = Vec::with_capacity(edges.len());
            for &(x1, x2, kind) in &edges {
                let black = Vertex::new(x1, x2)
                    .ok()
                    .filter(|v| v.color() == Color::Black && d.contains(*v))
                    .ok_or_else(|| usage(format!("({x1}, {x2}) is not a black vertex of the diamond")))?;
                let dimer = Dimer::at(black, kind);
                if !d.contains(dimer.white) {
                    return Err(usage(format!("the {kind:?} dimer at ({x1}, {x2}) leaves the diamond")));
                }
                dimers.push(dimer);
            }
            let p = correlation_probability(&dimers, &d, regime(&args.a)).map_err(kernel_error)?;
            let label: Vec<String> = edges.iter().map(|(x1, x2, k)| format!("{x1},{x2},{}", k.letter())).collect();
            let [re, _, err] = entry_cells(&p);
            let mut t = StatsTable::new(args.n, &args.a, &["edges", "probability", "error"]);
            t.push(vec![label.join(";"), re, err]);
            t
        }
        ExactCommand::LineKernel { diamond: args, r, x1, x2 } => {
            let d = diamond(&args)?;
            let regime = regime(&args.a);
            let all: Vec<i64> = (1..=args.n as i64).collect();
            let rows = x1.map_or(all.clone(), |x| vec![x]);
            let cols = x2.map_or(all, |x| vec![x]);
            let mut t = StatsTable::new(args.n, &args.a, &["r", "x1", "x2", "value", "error"]);
            for &p in &rows {
                for &q in &cols {
                    let e = south_line_kernel(p, q, r, &d, regime).map_err(kernel_error)?;
                    let [re, _, err] = entry_cells(&e);
                    t.push(vec![r.to_string(), p.to_string(), q.to_string(), re, err]);
                }
            }
            t
        }
    };
    table.write(out)
}

struct SuiteOutcome {
    checked: usize,
    counterexample: Option<String>,
}

impl SuiteOutcome {
    fn pass(checked: usize) -> Self {
        SuiteOutcome {
            checked,
            counterexample: None,
        }
    }

    fn fail(checked: usize, counterexample: String) -> Self {
        SuiteOutcome {
            checked,
            counterexample: Some(counterexample),
        }
    }
}

/// Relative tolerance for suites run with a decimal weight.
const FLOAT_TOLERANCE: f64 = 1e-9;

fn close(x: num_complex::Complex64, y: num_complex::Complex64) -> bool {
    (x - y).norm() <= FLOAT_TOLERANCE * y.norm().max(1.0)
}

fn suite_inverse(d: &AztecDiamond) -> Result<SuiteOutcome> {
    let regime = regime(d.weight());
    let direct: Box<dyn Fn(Vertex, Vertex) -> KernelEntry> = if d.weight().is_exact() {
        let inv = DirectInverse::<num_rational::BigRational>::new(d)?;
        Box::new(move |w, b| KernelEntry::Exact(inv.get(w, b)))
    } else {
        let inv = DirectInverse::<f64>::new(d)?;
        Box::new(move |w, b| KernelEntry::Numeric {
            value: inv.get(w, b),
            error: 0.0,
            precision_bits: 53,
        })
    };
    let mut checked = 0;
    for w in d.white_vertices() {
        for b in d.black_vertices() {
            let formula = inverse_entry(w, b, d, regime).map_err(kernel_error)?;
            let expected = direct(w, b);
            let ok = match (formula.exact(), expected.exact()) {
                (Some(x), Some(y)) => x == y,
                _ => close(formula.value(), expected.value()),
            };
            checked += 1;
            if !ok {
                return Ok(SuiteOutcome::fail(
                    checked,
                    format!("w={w} b={b} formula={} direct={}", formula.value(), expected.value()),
                ));
            }
        }
    }
    Ok(SuiteOutcome::pass(checked))
}

fn suite_fiveterm(d: &AztecDiamond) -> Result<SuiteOutcome> {
    let regime = regime(d.weight());
    let blacks = d.black_vertices();
    let mut checked = 0;
    for &x in &blacks {
        for &y in &blacks {
            let v = five_term(x, y, d, regime).map_err(kernel_error)?;
            let delta = if x == y { 1.0 } else { 0.0 };
            let ok = match v.exact() {
                Some(z) => z.im.is_zero() && if x == y { z.re.is_one() } else { z.re.is_zero() },
                None => close(v.value(), num_complex::Complex64::new(delta, 0.0)),
            };
            checked += 1;
            if !ok {
                return Ok(SuiteOutcome::fail(checked, format!("x={x} y={y} value={} expected={delta}", v.value())));
            }
        }
    }
    Ok(SuiteOutcome::pass(checked))
}

fn suite_partition(d: &AztecDiamond) -> Result<SuiteOutcome> {
    let enumerate = d.n() <= MAX_ENUMERATION_ORDER;
    let (det, closed, sum) = match d.weight() {
        Weight::Exact(a) => {
            let det = partition_function::<num_rational::BigRational>(d)?;
            let closed = partition_closed_form::<num_rational::BigRational>(d)?;
            let sum = if enumerate {
                let s: num_rational::BigRational = enumerate_tilings(d)?.iter().map(|t| tiling_weight(t, a)).sum();
                Some(s == det)
            } else {
                None
            };
            if det != closed {
                return Ok(SuiteOutcome::fail(1, format!("|det K|={det} closed form={closed}")));
            }
            (det.to_string(), closed.to_string(), sum)
        }
        Weight::Float(a) => {
            let det = partition_function::<f64>(d)?;
            let closed = partition_closed_form::<f64>(d)?;
            let rel = |x: f64, y: f64| (x - y).abs() <= FLOAT_TOLERANCE * y.abs();
            let sum = if enumerate {
                let s: f64 = enumerate_tilings(d)?.iter().map(|t| tiling_weight(t, a)).sum();
                Some(rel(s, det))
            } else {
                None
            };
            if !rel(det, closed) {
                return Ok(SuiteOutcome::fail(1, format!("|det K|={det} closed form={closed}")));
            }
            (det.to_string(), closed.to_string(), sum)
        }
    };
    match sum {
        Some(false) => Ok(SuiteOutcome::fail(2, format!("|det K|={det} differs from the enumerated sum (closed form {closed})"))),
        Some(true) => Ok(SuiteOutcome::pass(2)),
        None => Ok(SuiteOutcome::pass(1)),
    }
}

/// Largest order whose tilings are few enough for a chi-square test at
/// desk-scale sample counts.
const SAMPLER_MAX_ORDER: usize = 4;
const SAMPLER_SIGNIFICANCE: f64 = 1e-3;

fn suite_sampler(d: &AztecDiamond, samples: usize, seed: u64) -> Result<SuiteOutcome> {
    if d.n() > SAMPLER_MAX_ORDER {
        return Err(usage(format!("the sampler suite enumerates all tilings; use n <= {SAMPLER_MAX_ORDER}")));
    }
    let config = SamplerConfig::new(d.n(), d.weight().clone(), seed, samples)?;
    let c = tiling_chi_square(&config)?;
    if c.unmatched > 0 || c.p_value < SAMPLER_SIGNIFICANCE {
        return Ok(SuiteOutcome::fail(
            samples,
            format!(
                "chi2={} dof={} p={} unmatched={} (significance {SAMPLER_SIGNIFICANCE})",
                c.statistic, c.dof, c.p_value, c.unmatched
            ),
        ));
    }
    Ok(SuiteOutcome::pass(samples))
}

/// Weight-dependent limit quantities: exact edge identities for a few
/// slopes, the Airy diagonal identity, and Gibbs probabilities summing to 1.
fn suite_asymptotics(d: &AztecDiamond) -> Result<SuiteOutcome> {
    use num_rational::BigRational;
    let a = d.weight().to_f64();
    let ar = match d.weight() {
        Weight::Exact(q) => q.clone(),
        Weight::Float(x) => BigRational::from_float(*x).context("weight is not finite")?,
    };
    let mut checked = 0;
    for (p, q) in [(1, 2), (1, 1), (2, 1), (-1, 1)] {
        let k = BigRational::new(p.into(), q.into());
        let e = ExactEdgeParams::new(k, ar.clone())?;
        let g = e.saddle_derivatives(&e.z_c);
        let on_ellipse = ellipse_residual_exact(&e.u, &e.v, &ar).is_zero();
        checked += 1;
        if !(g[0].is_zero() && g[1].is_zero() && !g[2].is_zero() && on_ellipse) {
            return Ok(SuiteOutcome::fail(checked, format!("edge identities fail at k={p}/{q}")));
        }
    }
    for x in [-4.0, -1.0, 0.0, 2.0] {
        let lhs = airy_kernel_diagonal(x);
        let rhs = airy_row_integral(x)?;
        checked += 1;
        if (lhs - rhs).abs() > 1e-6 {
            return Ok(SuiteOutcome::fail(checked, format!("K_Ai({x},{x}): closed form {lhs}, row integral {rhs}")));
        }
    }
    for (x1, x2) in [(0.5, 0.5), (0.4, 0.58)] {
        let point = omega_map(x1, x2, a)?;
        let probs = gibbs_dimer_probabilities(point.magnetic_field(), a)?;
        let total: f64 = probs.iter().map(|(_, p)| p).sum();
        checked += 1;
        if (total - 1.0).abs() > FLOAT_TOLERANCE || probs.iter().any(|(_, p)| !(0.0..=1.0).contains(p)) {
            return Ok(SuiteOutcome::fail(checked, format!("Gibbs probabilities at ({x1}, {x2}): {probs:?}")));
        }
    }
    Ok(SuiteOutcome::pass(checked))
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Inverse => "inverse",
        Suite::Fiveterm => "fiveterm",
        Suite::Partition => "partition",
        Suite::Sampler => "sampler",
        Suite::Asymptotics => "asymptotics",
    }
}

/// Prints `suite=<name> status=<pass|fail> checked=<count>` per suite (with
/// `counterexample=` on failure), then `result=<pass|fail>`.
fn cmd_validate(args: ValidateArgs, out: &mut impl Write) -> Result<()> {
    let d = diamond(&args.diamond)?;
    let mut suites = args.suites.clone();
    if suites.is_empty() {
        suites = vec![Suite::Inverse, Suite::Fiveterm, Suite::Partition, Suite::Sampler, Suite::Asymptotics];
    }
    suites.sort();
    suites.dedup();
    let mut all_pass = true;
    for s in suites {
        let outcome = match s {
            Suite::Inverse => suite_inverse(&d)?,
            Suite::Fiveterm => suite_fiveterm(&d)?,
            Suite::Partition => suite_partition(&d)?,
            Suite::Sampler => suite_sampler(&d, args.samples, args.seed)?,
            Suite::Asymptotics => suite_asymptotics(&d)?,
        };
        let name = suite_name(s);
        match &outcome.counterexample {
            None => writeln!(out, "suite={name} status=pass checked={}", outcome.checked)?,
            Some(c) => {
                all_pass = false;
                writeln!(out, "suite={name} status=fail checked={} counterexample=\"{c}\"", outcome.checked)?;
            }
        }
    }
    writeln!(out, "result={}", if all_pass { "pass" } else { "fail" })?;
    if all_pass {
        Ok(())
    } else {
        Err(CliError::ValidationFailed("one or more suites failed".to_string()).into())
    }
}

/// Simpson average of `f` over `[lo, hi]`.
fn bin_average(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    const PANELS: usize = 8;
    let h = (hi - lo) / PANELS as f64;
    let mut s = f(lo) + f(hi);
    for i in 1..PANELS {
        s += f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0 / (hi - lo)
}

/// North edge: south-domino positions on the line through the tangency
/// point, rescaled to `xi = (u n - x - 1/2) / (lambda n^(1/3))`, binned, with
/// the thinned Airy intensity `alpha K_Ai(xi, xi)` alongside. South edge:
/// holes, rescaled to `xi = (x + 1/2 - u n) / (lambda n^(1/3))`, whose
/// thickened intensity has the same form with `alpha = 1 / (1 - beta) > 1`. With `--holes`, the size of the outermost
/// hole cluster of each sample against geometric(`beta`). With `--poisson`,
/// north positions rescaled to `(u n + c n^(1/3) - x - 1/2) / (c n^(1/3))`
/// against the density `sqrt((1 - xi)_+)`.
fn cmd_edge_stats(args: EdgeStatsArgs, out: &mut impl Write) -> Result<()> {
    let d = &args.diamond;
    let p = edge_params(args.k, d.a.to_f64()).map_err(scaling_error)?;
    let r = edge_line(&p, d.n);
    if !(1..d.n as i64).contains(&r) {
        return Err(usage(format!("the edge line r={r} is outside 1..={}; increase n", d.n - 1)));
    }
    if args.holes && p.regime != EdgeRegime::South {
        return Err(usage("--holes needs a south-edge slope (k < 0)"));
    }
    if args.poisson && p.regime != EdgeRegime::North {
        return Err(usage("--poisson needs a north-edge slope (k > 0)"));
    }
    if !(args.bin_width > 0.0 && args.xi_max > args.xi_min) {
        return Err(usage("need xi-min < xi-max and a positive bin width"));
    }
    let bins = ((args.xi_max - args.xi_min) / args.bin_width).ceil() as usize;
    let config = SamplerConfig::new(d.n, d.a.clone(), args.seed, args.samples).map_err(|e| usage(e.to_string()))?;
    let nf = d.n as f64;
    let (centre, scale) = if args.poisson {
        let c = poisson_constant(args.k, d.a.to_f64()) * nf.cbrt();
        (p.u * nf + c, c)
    } else {
        (p.u * nf, p.lambda * nf.cbrt())
    };
    let south = p.regime == EdgeRegime::South;
    let (counts, clusters) = fold_samples(
        &config,
        || (vec![0u64; bins], Vec::<usize>::new()),
        |acc, _, t| {
            let stats = south_line_statistics(t, r).expect("line checked above");
            let points: Vec<i64> = if south { stats.hole_positions().collect() } else { stats.positions.clone() };
            for x in points {
                let offset = x as f64 + 0.5 - centre;
                let xi = if south { offset / scale } else { -offset / scale };
                if xi >= args.xi_min && xi < args.xi_max {
                    acc.0[((xi - args.xi_min) / args.bin_width) as usize] += 1;
                }
            }
            if let Some(c) = stats.holes.last() {
                acc.1.push(c.len);
            }
        },
        |mut a, b| {
            a.0.iter_mut().zip(b.0).for_each(|(x, y)| *x += y);
            a.1.extend(b.1);
            a
        },
    );

    let mut table = if args.holes {
        let mut t = StatsTable::new(d.n, &d.a, &["size", "count", "frequency", "predicted_frequency"]);
        let total = clusters.len();
        let largest = clusters.iter().copied().max().unwrap_or(0).max(4);
        for m in 1..=largest {
            let c = clusters.iter().filter(|&&l| l == m).count();
            let predicted = (1.0 - p.beta) * p.beta.powi(m as i32 - 1);
            let freq = if total == 0 { 0.0 } else { c as f64 / total as f64 };
            t.push(vec![m.to_string(), c.to_string(), freq.to_string(), predicted.to_string()]);
        }
        t
    } else {
        let mut t = StatsTable::new(
            d.n,
            &d.a,
            &["xi_lo", "xi_hi", "count", "empirical_intensity", "predicted_intensity"],
        );
        for (i, &c) in counts.iter().enumerate() {
            let lo = args.xi_min + i as f64 * args.bin_width;
            let hi = lo + args.bin_width;
            let empirical = c as f64 / (args.samples.max(1) as f64 * args.bin_width);
            let predicted = if args.poisson {
                bin_average(poisson_density, lo, hi)
            } else {
                p.alpha * bin_average(airy_kernel_diagonal, lo, hi)
            };
            t.push(vec![lo.to_string(), hi.to_string(), c.to_string(), empirical.to_string(), predicted.to_string()]);
        }
        t
    };
    table.k = Some(args.k);
    table.samples = args.samples;
    table.write(out)
}

/// Pools the dimer kinds at the white vertices `(2(c1+i)+1, 2(c2+j))`,
/// `|i|, |j| <= window`, around `c = [xi n]`, and compares them with the Gibbs
/// measure at the point's magnetic field.
fn cmd_bulk_stats(args: BulkStatsArgs, out: &mut impl Write) -> Result<()> {
    let d = &args.diamond;
    let dm = diamond(d)?;
    let (xi1, xi2) = args.xi;
    let a = d.a.to_f64();
    let point = omega_map(xi1, xi2, a).map_err(scaling_error)?;
    let predicted = gibbs_dimer_probabilities(point.magnetic_field(), a).map_err(scaling_error)?;
    if args.window < 0 {
        return Err(usage("window must be non-negative"));
    }
    let (c1, c2) = ((xi1 * d.n as f64).floor() as i64, (xi2 * d.n as f64).floor() as i64);
    let mut whites = Vec::new();
    for i in -args.window..=args.window {
        for j in -args.window..=args.window {
            let w = Vertex::new(2 * (c1 + i) + 1, 2 * (c2 + j)).expect("white position");
            if !dm.contains(w) {
                return Err(usage(format!("the window around {w} leaves the diamond; shrink --window or grow --n")));
            }
            whites.push(w);
        }
    }
    let config = SamplerConfig::new(d.n, d.a.clone(), args.seed, args.samples).map_err(|e| usage(e.to_string()))?;
    let counts = fold_samples(
        &config,
        || [0u64; 4],
        |acc, _, t| {
            for &w in &whites {
                let k = kind_at_white(t, w).expect("a valid tiling covers every white vertex");
                acc[DimerKind::ALL.iter().position(|&x| x == k).expect("kind")] += 1;
            }
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    );
    let total = (args.samples * whites.len()) as f64;
    let mut t = StatsTable::new(d.n, &d.a, &["kind", "count", "frequency", "std_error", "predicted"]);
    for (&(kind, prediction), &c) in predicted.iter().zip(&counts) {
        let f = if total > 0.0 { c as f64 / total } else { 0.0 };
        let se = if total > 0.0 { (f * (1.0 - f) / total).sqrt() } else { 0.0 };
        t.push(vec![
            kind.letter().to_string(),
            c.to_string(),
            f.to_string(),
            se.to_string(),
            prediction.to_string(),
        ]);
    }
    t.samples = args.samples;
    t.write(out)
}

fn kind_at_white(t: &Tiling, w: Vertex) -> Option<DimerKind> {
    DimerKind::ALL
        .into_iter()
        .find(|&k| t.contains(&Dimer::at(w.shifted(k.step(), -1), k)))
}

/// Paths written by `sample`, in index order.
pub fn sample_paths(dir: &Path, n: usize, seed: u64, count: usize) -> Vec<PathBuf> {
    (0..count as u64).map(|i| dir.join(sample_file_name(n, seed, i))).collect()
}
