use aztec::exactdimer::enumerate_tilings;
use aztec::lattice::*;
use aztec::shuffler::{sample_at, SamplerConfig};
use proptest::prelude::*;

fn check_structure(t: &Tiling) {
    assert!(t.validate().is_ok());
    assert_eq!(t.count(DimerKind::North), t.count(DimerKind::South));
    assert_eq!(t.count(DimerKind::East), t.count(DimerKind::West));
    let (blue, red) = particles_of_tiling(t);
    let sw = t.count(DimerKind::South) + t.count(DimerKind::West);
    assert_eq!(blue.len(), sw);
    assert_eq!(red.len(), sw);
    for d in t.dimers() {
        let on_sw = matches!(d.kind, DimerKind::South | DimerKind::West);
        assert_eq!(blue.contains(&d.white), on_sw);
    }
}

fn check_heights(t: &Tiling) {
    // height_function panics when two paths disagree
    let h = height_function(t);
    let n = t.n() as i64;
    assert_eq!(h.heights.len() as i64, (n + 1) * (n + 1) + n * n + 4 * n);
    if n > 12 {
        return;
    }
    let d = AztecDiamond::new(t.n(), Weight::Float(1.0)).unwrap();
    for v in d.white_vertices().into_iter().chain(d.black_vertices()) {
        assert_eq!(height_circulation(t, v), 0, "{v:?}");
    }
}

#[test]
fn vertex_counts() {
    for n in 1..=6 {
        let d = AztecDiamond::with_ratio(n, 1, 1).unwrap();
        assert_eq!(d.white_vertices().len(), n * (n + 1));
        assert_eq!(d.black_vertices().len(), n * (n + 1));
        assert_eq!(d.edges().len(), 4 * n * n);
    }
}

#[test]
fn enumerated_tilings_balance_opposite_kinds() {
    for n in 1..=3 {
        let d = AztecDiamond::with_ratio(n, 1, 1).unwrap();
        let all = enumerate_tilings(&d).unwrap();
        assert_eq!(all.len(), 1 << (n * (n + 1) / 2));
        for t in &all {
            check_structure(t);
            check_heights(t);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sampled_tilings_have_consistent_heights(n in 1usize..=64, seed in any::<u64>(), a in prop::sample::select(vec![(1, 1), (1, 2), (2, 1), (3, 7)])) {
        let cfg = SamplerConfig::new(n, Weight::from_ratio(a.0, a.1).unwrap(), seed, 1).unwrap();
        let t = sample_at(&cfg, 0);
        check_structure(&t);
        check_heights(&t);
    }
}
