use aztec::exactdimer::{enumerate_tilings, exact_one, tiling_weight, DirectInverse, ExactComplex};
use aztec::kernelcalc::*;
use aztec::lattice::{AztecDiamond, Dimer};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

const WEIGHTS: [(i64, i64); 3] = [(1, 1), (1, 2), (2, 1)];

fn exact(e: KernelEntry) -> ExactComplex {
    e.exact().expect("exact regime").clone()
}

#[test]
fn inverse_formula_equals_direct_inverse() {
    for (p, r) in WEIGHTS {
        for n in 1..=4 {
            let d = AztecDiamond::with_ratio(n, p, r).unwrap();
            let direct = DirectInverse::<BigRational>::new(&d).unwrap();
            for w in d.white_vertices() {
                for b in d.black_vertices() {
                    assert_eq!(exact(inverse_entry(w, b, &d, Regime::Exact).unwrap()), direct.get(w, b), "n={n} a={p}/{r}");
                }
            }
        }
    }
}

#[test]
fn five_term_relation_on_all_pairs() {
    for (p, r) in WEIGHTS {
        for n in 1..=4 {
            let d = AztecDiamond::with_ratio(n, p, r).unwrap();
            let blacks = d.black_vertices();
            // blacks on both side columns are included
            assert!(blacks.iter().any(|b| b.x1 == 0) && blacks.iter().any(|b| b.x1 == 2 * n as i64));
            for &x in &blacks {
                for &y in &blacks {
                    let want = if x == y { exact_one() } else { Complex::zero() };
                    assert_eq!(exact(five_term(x, y, &d, Regime::Exact).unwrap()), want);
                }
            }
        }
    }
}

fn enumerated_probability(d: &AztecDiamond, covered: &[Dimer], uncovered: &[Dimer]) -> BigRational {
    let a = d.weight().as_rational().unwrap().clone();
    let all = enumerate_tilings(d).unwrap();
    let z: BigRational = all.iter().map(|t| tiling_weight(t, &a)).sum();
    let hit: BigRational = all
        .iter()
        .filter(|t| covered.iter().all(|e| t.contains(e)) && uncovered.iter().all(|e| !t.contains(e)))
        .map(|t| tiling_weight(t, &a))
        .sum();
    hit / z
}

#[test]
fn inclusion_exclusion_over_edge_patterns() {
    for (p, r) in WEIGHTS {
        let d = AztecDiamond::with_ratio(2, p, r).unwrap();
        let edges = d.edges();
        let set = [edges[0], edges[5], edges[9], edges[14]];
        let m = set.len();
        let joint: Vec<BigRational> = (0..1usize << m)
            .map(|mask| {
                let chosen: Vec<Dimer> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| set[i]).collect();
                let c = exact(correlation_probability(&chosen, &d, Regime::Exact).unwrap());
                assert!(c.im.is_zero());
                c.re
            })
            .collect();
        let mut total = BigRational::zero();
        for pattern in 0..1usize << m {
            // P(exactly `pattern`) from the joint probabilities of its supersets
            let mut prob = BigRational::zero();
            for sup in (0..1usize << m).filter(|s| s & pattern == pattern) {
                let extra = (sup & !pattern).count_ones();
                if extra % 2 == 0 {
                    prob += &joint[sup];
                } else {
                    prob -= &joint[sup];
                }
            }
            let covered: Vec<Dimer> = (0..m).filter(|i| pattern >> i & 1 == 1).map(|i| set[i]).collect();
            let uncovered: Vec<Dimer> = (0..m).filter(|i| pattern >> i & 1 == 0).map(|i| set[i]).collect();
            assert_eq!(prob, enumerated_probability(&d, &covered, &uncovered));
            total += prob;
        }
        assert!(total.is_one());
    }
}

#[test]
fn edges_at_a_vertex_are_covered_once() {
    for (p, r) in WEIGHTS {
        for n in 1..=3 {
            let d = AztecDiamond::with_ratio(n, p, r).unwrap();
            for b in d.black_vertices() {
                let s: BigRational = d
                    .dimers_at(b)
                    .iter()
                    .map(|e| exact(correlation_probability(&[*e], &d, Regime::Exact).unwrap()).re)
                    .sum();
                assert!(s.is_one());
            }
            for w in d.white_vertices() {
                let s: BigRational = d
                    .dimers_at_white(w)
                    .iter()
                    .map(|e| exact(correlation_probability(&[*e], &d, Regime::Exact).unwrap()).re)
                    .sum();
                assert!(s.is_one());
            }
        }
    }
}

#[test]
fn numeric_regime_matches_exact_for_non_unit_weights() {
    for (p, r) in [(1, 2), (2, 1)] {
        let d = AztecDiamond::with_ratio(4, p, r).unwrap();
        for w in d.white_vertices() {
            for b in d.black_vertices() {
                let e = inverse_entry(w, b, &d, Regime::Exact).unwrap().value();
                let q = inverse_entry(w, b, &d, Regime::numeric()).unwrap();
                assert!((e - q.value()).norm() < 1e-12, "a={p}/{r} {w:?} {b:?}");
            }
        }
    }
}
