use std::collections::HashSet;
use std::f64::consts::PI;

use dixmier::{dixmier_estimate, Run};
use model_triples::{
    c_p, circle_singular_values, circle_volume_check, connes_distance, lp_distance, sphere_volume, torus_lattice,
    torus_singular_values, torus_volume_check, volume_identity, CircleSpec, MetricGraph, ModelError, SpinOffset,
    TorusSpec,
};
use proptest::prelude::*;

const SCHEDULE: [u64; 4] = [10_000, 100_000, 1_000_000, 10_000_000];

fn first_runs(seq: &dixmier::SingularValueSeq, n: usize) -> Vec<Run> {
    seq.validated().take(n).map(|r| r.unwrap().1).collect()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * b.abs().max(1.0)
}

#[test]
fn circle_spectra_have_multiplicity_two() {
    let periodic = circle_singular_values(CircleSpec::default()).unwrap();
    let runs = first_runs(&periodic, 3);
    for (run, expected) in runs.iter().zip([1.0, 0.5, 1.0 / 3.0]) {
        assert!(close(run.value, expected) && run.multiplicity == 2);
    }
    assert_eq!(periodic.kernel_dim(), 1);
    let anti = CircleSpec { spin_offset: SpinOffset::Half, radius: 1.0 };
    let runs = first_runs(&circle_singular_values(anti).unwrap(), 3);
    for (run, expected) in runs.iter().zip([2.0, 2.0 / 3.0, 0.4]) {
        assert!(close(run.value, expected) && run.multiplicity == 2);
    }
    assert!(circle_singular_values(CircleSpec { spin_offset: SpinOffset::Zero, radius: -1.0 }).is_err());
}

#[test]
fn circle_volume_is_two() {
    for offset in [SpinOffset::Zero, SpinOffset::Half] {
        let check = circle_volume_check(CircleSpec { spin_offset: offset, radius: 1.0 }, &SCHEDULE).unwrap();
        assert!(close(check.c_p_vol, 2.0));
        assert!((check.ratio - 1.0).abs() < 0.02, "{check:?}");
    }
}

#[test]
fn torus_first_shell() {
    let t = TorusSpec::unit(2).unwrap();
    let seq = torus_singular_values(&t);
    assert_eq!(seq.kernel_dim(), 2);
    let runs = first_runs(&seq, 2);
    assert_eq!(runs[0], Run::new(1.0, 8));
    assert!(close(runs[1].value, 1.0 / 2f64.sqrt()) && runs[1].multiplicity == 8);
}

#[test]
fn torus_lattice_ties_break_lexicographically() {
    let t = TorusSpec::unit(2).unwrap();
    let shell: Vec<Vec<i64>> = torus_lattice(&t).skip(1).take(4).map(|(_, k)| k).collect();
    assert_eq!(shell, vec![vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, 0]]);
}

fn brute_count(t: &TorusSpec, radius_sq: f64, offsets: &[f64]) -> usize {
    let p = t.p();
    let bound = 2 + radius_sq.sqrt().ceil() as i64 * t.radii().iter().fold(1.0f64, |a, &r| a.max(r)).ceil() as i64;
    let mut count = 0;
    let mut k = vec![-bound; p];
    loop {
        let norm: f64 = (0..p).map(|a| ((k[a] as f64 + offsets[a]) / t.radii()[a]).powi(2)).sum();
        if norm <= radius_sq {
            count += 1;
        }
        let mut axis = 0;
        while axis < p {
            k[axis] += 1;
            if k[axis] <= bound {
                break;
            }
            k[axis] = -bound;
            axis += 1;
        }
        if axis == p {
            return count;
        }
    }
}

#[test]
fn torus_enumeration_matches_direct_counts() {
    let cases = [
        (vec![1.0, 1.0], vec![SpinOffset::Zero, SpinOffset::Zero]),
        (vec![1.0, 2.5], vec![SpinOffset::Half, SpinOffset::Zero]),
        (vec![1.0, 1.0, 1.0], vec![SpinOffset::Zero, SpinOffset::Half, SpinOffset::Zero]),
        (vec![0.7, 1.0, 1.3, 1.0], vec![SpinOffset::Zero; 4]),
    ];
    for (radii, offsets) in cases {
        let offs: Vec<f64> = offsets.iter().map(|o| o.value()).collect();
        let t = TorusSpec::new(radii, offsets).unwrap();
        let radius_sq = 9.0;
        let points: Vec<(f64, Vec<i64>)> = torus_lattice(&t).take_while(|(n, _)| *n <= radius_sq).collect();
        assert_eq!(points.len(), brute_count(&t, radius_sq, &offs), "{t:?}");
        let distinct: HashSet<&Vec<i64>> = points.iter().map(|(_, k)| k).collect();
        assert_eq!(distinct.len(), points.len());
        assert!(points.windows(2).all(|w| (w[0].0, &w[0].1) < (w[1].0, &w[1].1)));

        let spinor = t.spinor_dim();
        let nonzero = points.iter().filter(|(n, _)| *n > 0.0).count() as u64;
        let from_runs: u64 = torus_singular_values(&t)
            .validated()
            .map(|r| r.unwrap().1)
            .take_while(|r| r.value >= 1.0 / 3.0 - 1e-12)
            .map(|r| r.multiplicity)
            .sum();
        assert_eq!(from_runs, nonzero * spinor);
    }
}

#[test]
fn flat_torus_volume_is_two_pi() {
    let check = torus_volume_check(&TorusSpec::unit(2).unwrap(), &SCHEDULE).unwrap();
    assert!(close(check.c_p_vol, 2.0 * PI));
    assert!((check.ratio - 1.0).abs() < 0.02, "{check:?}");
}

#[test]
fn spin_structure_does_not_change_the_volume() {
    let schedule = [10_000, 100_000, 1_000_000];
    let a = torus_volume_check(&TorusSpec::unit(2).unwrap(), &schedule).unwrap();
    let t = TorusSpec::new(vec![1.0, 1.0], vec![SpinOffset::Half, SpinOffset::Half]).unwrap();
    let b = torus_volume_check(&t, &schedule).unwrap();
    let slack = a.estimate.error_bar + b.estimate.error_bar + 1e-3 * a.estimate.value;
    assert!((a.estimate.value - b.estimate.value).abs() < slack);
}

#[test]
fn doubling_radii_quadruples_the_area() {
    let schedule = [10_000, 100_000, 1_000_000];
    let unit = torus_singular_values(&TorusSpec::unit(2).unwrap()).powered(2.0);
    let big = torus_singular_values(&TorusSpec::new(vec![2.0, 2.0], vec![SpinOffset::Zero; 2]).unwrap()).powered(2.0);
    let a = dixmier_estimate(&unit, &schedule).unwrap();
    let b = dixmier_estimate(&big, &schedule).unwrap();
    assert!((b.value / a.value - 4.0).abs() < 0.01, "{} {}", a.value, b.value);
}

#[test]
fn torus_validation() {
    assert!(TorusSpec::unit(1).is_err());
    assert!(TorusSpec::unit(5).is_err());
    assert!(TorusSpec::new(vec![1.0, 0.0], vec![SpinOffset::Zero; 2]).is_err());
    assert!(TorusSpec::new(vec![1.0, 1.0], vec![SpinOffset::Zero]).is_err());
}

#[test]
fn volume_constant_identity() {
    for p in 1..=12 {
        let id = volume_identity(p).unwrap();
        assert!(id.equal && id.relative_error <= 1e-12, "{id:?}");
    }
    assert!(close(c_p(1), 1.0 / PI));
    assert!(close(c_p(2), 1.0 / (2.0 * PI)));
    assert!(close(c_p(4), 1.0 / (8.0 * PI * PI)));
    assert!(close(sphere_volume(2), 2.0 * PI));
    assert!(close(sphere_volume(3), 4.0 * PI));
    assert!(volume_identity(0).is_err() && volume_identity(13).is_err());
}

#[test]
fn small_graph_distances() {
    let edge = MetricGraph::new(2, vec![(0, 1, 1.0)]).unwrap();
    assert_eq!(connes_distance(&edge, 0, 1).unwrap(), 1.0);
    let square = MetricGraph::new(4, (0..4).map(|k| (k, (k + 1) % 4, PI / 2.0)).collect()).unwrap();
    assert!((connes_distance(&square, 0, 2).unwrap() - PI).abs() < 1e-12);
    assert!((lp_distance(&square, 0, 2).unwrap() - PI).abs() < 1e-9);
}

#[test]
fn discretized_circle_recovers_geodesic_distance() {
    let g = MetricGraph::discretized_circle(200, 1.0).unwrap();
    let d = connes_distance(&g, 0, 100).unwrap();
    assert!((d - PI).abs() <= PI / 200.0, "{d}");
    assert!((lp_distance(&g, 0, 100).unwrap() - d).abs() < 1e-9);
}

#[test]
fn linear_program_matches_shortest_paths() {
    for seed in 0..100u64 {
        let n = 2 + (seed as usize * 7) % 49;
        let g = MetricGraph::random_connected(seed, n, n / 2).unwrap();
        assert!(g.is_connected());
        let (x, y) = (0, n - 1);
        let dual = connes_distance(&g, x, y).unwrap();
        let primal = lp_distance(&g, x, y).unwrap();
        assert!((primal - dual).abs() < 1e-9, "seed {seed}: {primal} vs {dual}");
    }
}

#[test]
fn disconnected_pairs_are_unbounded() {
    let g = MetricGraph::new(4, vec![(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
    assert!(!g.is_connected());
    assert_eq!(connes_distance(&g, 0, 3), Err(ModelError::Disconnected(0, 3)));
    assert_eq!(lp_distance(&g, 0, 3), Err(ModelError::Disconnected(0, 3)));
    assert!(MetricGraph::new(2, vec![(0, 1, 0.0)]).is_err());
}

#[test]
fn named_edges() {
    let edges = vec![("a".to_string(), "b".to_string(), 1.5), ("b".to_string(), "c".to_string(), 2.0)];
    let g = MetricGraph::from_named_edges(&edges).unwrap();
    let (a, c) = (g.vertex("a").unwrap(), g.vertex("c").unwrap());
    assert_eq!(connes_distance(&g, a, c).unwrap(), 3.5);
    assert!(g.vertex("z").is_err());
}

proptest! {
    #[test]
    fn spectral_distance_is_a_metric(seed in 0u64..10_000, n in 2usize..20, x in 0usize..20, y in 0usize..20, z in 0usize..20) {
        let g = MetricGraph::random_connected(seed, n, n).unwrap();
        let (x, y, z) = (x % n, y % n, z % n);
        let d = |a, b| connes_distance(&g, a, b).unwrap();
        prop_assert!((d(x, y) - d(y, x)).abs() < 1e-12);
        prop_assert!(d(x, z) <= d(x, y) + d(y, z) + 1e-12);
        prop_assert_eq!(d(x, y) == 0.0, x == y);
    }
}

#[cfg(feature = "experimental")]
#[test]
fn sphere_counting_function_follows_weyl_law() {
    let seq = model_triples::sphere_singular_values();
    let mut count = 0u64;
    let mut fits = Vec::new();
    for (lambda, run) in seq.validated().map(|r| r.unwrap().1).take(2000).enumerate() {
        count += run.multiplicity;
        fits.push(count as f64 / ((lambda + 1) as f64).powi(2));
    }
    assert!((fits.last().unwrap() - 2.0).abs() < 2e-3);
    let est = dixmier_estimate(&seq.powered(2.0), &[10_000, 100_000, 1_000_000]).unwrap();
    assert!((est.value - c_p(2) * 4.0 * PI).abs() < 0.02 * 2.0);
}
