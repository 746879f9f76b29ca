mod common;

use dirichlet_ds::chisq::chi_square_sf;
use dirichlet_ds::ds::{
    merge_categories, merge_weights, CategoryCounts, DirichletDs, DsWeights, Partition, Weakening,
};
use dirichlet_ds::geometry::{contains, lower_distance, upper_distance};
use dirichlet_ds::ks::ks_two_sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;

#[test]
fn lower_distance_matches_face_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..300 {
        let d = rng.random_range(2..=9);
        let poly = common::random_polytope(d, &mut rng);
        let t = common::random_target(d, &mut rng);
        let fast = lower_distance(&poly, &t).unwrap();
        let slow = common::lower_distance_by_faces(&poly, t.as_slice());
        assert!((fast - slow).abs() < 1e-9, "d={d}: {fast} vs {slow}");
        assert_eq!(contains(&poly, &t).unwrap(), fast <= 1e-9);
    }
}

#[test]
fn upper_distance_bounds_interior_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..50 {
        let d = rng.random_range(2..=8);
        let poly = common::random_polytope(d, &mut rng);
        let t = common::random_target(d, &mut rng);
        let u = upper_distance(&poly, &t).unwrap();
        let sampled = common::max_interior_distance(&poly, t.as_slice(), 4000, &mut rng);
        assert!(sampled <= u + 1e-12);
        assert!(u - sampled < 1e-3, "{u} vs {sampled}");
    }
}

#[test]
fn chi_square_tail_matches_quadrature() {
    for df in [1, 2, 3, 4, 7, 8, 15, 35] {
        for x in [0.05, 0.5, 1.0, 2.706, 10.0 / 3.0, 6.0, 12.0, 25.0, 60.0] {
            let a = chi_square_sf(x, df).unwrap();
            let b = common::chi_square_sf_by_quadrature(x, df);
            assert!((a - b).abs() < 1e-8, "x={x} df={df}: {a} vs {b}");
        }
    }
    let p = common::chi_square_sf_by_quadrature(2.706, 1);
    assert!((p - 0.100).abs() < 1e-3);
}

fn column(draws: &[DsWeights], i: Option<usize>) -> Vec<f64> {
    draws
        .iter()
        .map(|w| i.map_or(w.slack(), |i| w.lower_bounds()[i]))
        .collect()
}

fn draws(counts: &[u64], r: u64, n: usize, seed: u64) -> Vec<DsWeights> {
    let ds = DirichletDs::new(&CategoryCounts::new(counts.to_vec()).unwrap(), Weakening(r));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| ds.sample(&mut rng)).collect()
}

#[test]
fn moments_for_several_counts_and_weakenings() {
    let n = 100_000;
    for (counts, r) in [(vec![3u64, 5, 2], 0u64), (vec![0, 1, 9, 4], 2), (vec![12, 1], 5)] {
        let sample = draws(&counts, r, n, 31 + r);
        let mut alpha = vec![1.0 + r as f64];
        alpha.extend(counts.iter().map(|&z| z as f64));
        let moments = common::dirichlet_moments(&alpha);
        for (c, (mean, var)) in moments.iter().enumerate() {
            let col = column(&sample, c.checked_sub(1));
            let got = col.iter().sum::<f64>() / n as f64;
            let se = (var / n as f64).sqrt();
            assert!(
                (got - mean).abs() <= 4.0 * se + 1e-15,
                "counts={counts:?} r={r} component {c}: {got} vs {mean} (se {se})"
            );
        }
    }
}

#[test]
fn empty_categories_do_not_change_the_others() {
    let base = draws(&[3, 5, 2], 0, 20_000, 1);
    let padded = draws(&[3, 0, 5, 2, 0], 0, 20_000, 2);
    assert!(padded.iter().all(|w| w.lower_bounds()[1] == 0.0 && w.lower_bounds()[4] == 0.0));
    for (a, b) in [(None, None), (Some(0), Some(0)), (Some(1), Some(2)), (Some(2), Some(3))] {
        let p = ks_two_sample(&column(&base, a), &column(&padded, b)).unwrap().p_value;
        assert!(p > 0.001, "{a:?}/{b:?}: p = {p}");
    }
}

#[test]
fn merged_draws_match_direct_draws() {
    let counts = CategoryCounts::new(vec![4, 1, 0, 6, 2]).unwrap();
    let groups = Partition::new(vec![vec![0, 2], vec![1, 3, 4]], 5).unwrap();
    let merged_counts = merge_categories(&counts, &groups).unwrap();
    assert_eq!(merged_counts.as_slice(), &[4, 9]);

    let ds = DirichletDs::new(&counts, Weakening(1));
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let merged: Vec<DsWeights> =
        (0..20_000).map(|_| merge_weights(&ds.sample(&mut rng), &groups).unwrap()).collect();
    let direct = draws(merged_counts.as_slice(), 1, 20_000, 11);
    for c in [None, Some(0), Some(1)] {
        let p = ks_two_sample(&column(&merged, c), &column(&direct, c)).unwrap().p_value;
        assert!(p > 0.001, "{c:?}: p = {p}");
    }
}

#[test]
fn weakening_raises_mean_slack() {
    let means: Vec<f64> = [0u64, 1, 5]
        .iter()
        .map(|&r| {
            let s = draws(&[3, 5, 2], r, 100_000, 50 + r);
            s.iter().map(DsWeights::slack).sum::<f64>() / s.len() as f64
        })
        .collect();
    assert!(means[0] < means[1] && means[1] < means[2], "{means:?}");
}
