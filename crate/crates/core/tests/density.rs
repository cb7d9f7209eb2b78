mod common;

use common::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use th_core::density::{
    annihilating_null_space, best_approximation_error, character_matrix, extract_concentration_set, is_dense_coset,
    is_dense_rank, ApproxStatus, DensityOptions, Extraction,
};
use th_core::measure::DiscreteMeasure;
use th_core::sweep::{random_group, random_subgroup, random_support};
use th_core::transversal::is_partial_transversal;
use th_core::{annihilator, make_group, quotient, Error, GroupElement, GroupSpec, Limits, PointSet, QuotientMap, Subgroup};

fn opts() -> DensityOptions {
    DensityOptions::default()
}

fn unit(spec: &GroupSpec, pts: &[u64]) -> DiscreteMeasure {
    DiscreteMeasure::nonnegative(spec, pts.iter().map(|&p| (el(spec, &[p]), 1.0)).collect()).unwrap()
}

fn z6_setup() -> (GroupSpec, Subgroup, QuotientMap) {
    let spec = make_group(&[6]).unwrap();
    let h = Subgroup::from_generators(&spec, &[el(&spec, &[2])]).unwrap();
    let q = quotient(&spec, &annihilator(&spec, &h).unwrap()).unwrap();
    (spec, h, q)
}

#[test]
fn character_matrix_examples() {
    let (spec, h, _) = z6_setup();
    let cm = character_matrix(&unit(&spec, &[0, 3]), &h, &Limits::default()).unwrap();
    for v in cm.entries().iter() {
        assert!((v - 1.0).norm() < 1e-15);
    }
    let cm = character_matrix(&unit(&spec, &[0, 1]), &h, &Limits::default()).unwrap();
    let w = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
    let expect = [[Complex64::new(1.0, 0.0); 3], [Complex64::new(1.0, 0.0), w, w * w]];
    for i in 0..2 {
        for j in 0..3 {
            assert!((cm.entries()[(i, j)] - expect[i][j]).norm() < 1e-12);
        }
    }
    let cm = character_matrix(&unit(&spec, &[1, 2, 5]), &Subgroup::trivial(&spec), &Limits::default()).unwrap();
    assert_eq!(cm.entries().ncols(), 1);
}

#[test]
fn density_examples() {
    let (spec, h, q) = z6_setup();
    let v = is_dense_rank(&unit(&spec, &[0, 3]), &h, 2.0, &opts()).unwrap();
    assert!(!v.dense);
    assert_eq!((v.rank, v.support_size), (1, 2));
    let v = is_dense_rank(&unit(&spec, &[0, 1]), &h, 2.0, &opts()).unwrap();
    assert!(v.dense);
    assert_eq!(v.rank, 2);
    let all: Vec<u64> = (0..6).collect();
    assert!(is_dense_rank(&unit(&spec, &all), &Subgroup::whole(&spec), 1.0, &opts()).unwrap().dense);

    let v = is_dense_coset(&unit(&spec, &[0, 3]), &q).unwrap();
    assert!(!v.dense);
    assert!(is_dense_coset(&unit(&spec, &[0, 1]), &q).unwrap().dense);
    assert!(is_dense_coset(&unit(&spec, &[5]), &q).unwrap().dense);

    assert!(matches!(is_dense_rank(&unit(&spec, &[0]), &h, 0.0, &opts()), Err(Error::InvalidAlpha(_))));
    assert!(matches!(is_dense_rank(&unit(&spec, &[]), &h, 1.0, &opts()), Err(Error::EmptyMeasure)));
}

#[test]
fn regression_instance() {
    let (spec, h, q) = z6_setup();
    let f = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let out = best_approximation_error(&unit(&spec, &[0, 3]), &h, &f, 2.0, &opts()).unwrap();
    assert!((out.error - 0.5f64.sqrt()).abs() <= 1e-10);
    let one = [Complex64::new(1.0, 0.0); 2];
    assert!(best_approximation_error(&unit(&spec, &[0, 3]), &h, &one, 2.0, &opts()).unwrap().error <= 1e-8);

    match extract_concentration_set(&unit(&spec, &[0, 1]), &q, &Limits::default()).unwrap() {
        Extraction::Success { set, .. } => assert_eq!(coords(set.points()), [vec![0], vec![1]].into()),
        other => panic!("{other:?}"),
    }
    match extract_concentration_set(&unit(&spec, &[0, 3]), &q, &Limits::default()).unwrap() {
        Extraction::Failure { overlaps, .. } => {
            assert_eq!(overlaps.len(), 1);
            assert_eq!(overlaps[0].lambda, el(&spec, &[0]));
            assert_eq!(overlaps[0].kappa, el(&spec, &[3]));
            assert_eq!(coords(overlaps[0].points.points()), [vec![0]].into());
        }
        other => panic!("{other:?}"),
    }
}

/// Rank equals the number of cosets hit, against a Gaussian-elimination rank
/// of the brute-force character table.
#[test]
fn rank_counts_distinct_cosets_exhaustively() {
    for n in 1..=12u64 {
        let spec = make_group(&[n as i64]).unwrap();
        let elems = all(&spec);
        for hset in all_subgroups(&spec) {
            let gens: Vec<GroupElement> = hset.iter().map(|c| el(&spec, c)).collect();
            let h = Subgroup::from_generators(&spec, &gens).unwrap();
            let q = quotient(&spec, &annihilator(&spec, &h).unwrap()).unwrap();
            let parts = cosets(&spec, &common::annihilator(&spec, &hset));
            for supp in subsets(&elems, 1, 4) {
                let m = DiscreteMeasure::nonnegative(&spec, supp.iter().map(|p| (el(&spec, p), 1.0)).collect()).unwrap();
                let rank = is_dense_rank(&m, &h, 2.0, &opts()).unwrap();
                let coset = is_dense_coset(&m, &q).unwrap();
                let tset: Set = supp.iter().cloned().collect();
                let hit = coset_hits(&parts, &tset).iter().filter(|&&k| k > 0).count();
                let table: Vec<Vec<Complex64>> =
                    supp.iter().map(|g| hset.iter().map(|y| chi(&spec, g, y)).collect()).collect();
                assert_eq!(rank.rank, hit);
                assert_eq!(coset.rank, hit);
                assert_eq!(gauss_rank(&table, 1e-9), hit);
                assert_eq!(rank.dense, coset.dense);
                assert_eq!(coset.dense, brute_is_partial(&parts, &tset));
            }
        }
    }
}

#[test]
fn extraction_succeeds_exactly_when_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..600 {
        let spec = random_group(&mut rng, 500, 3);
        let h = random_subgroup(&mut rng, &spec, 2);
        let lam = annihilator(&spec, &h).unwrap();
        let q = quotient(&spec, &lam).unwrap();
        let size = rng.random_range(1..=6usize).min(spec.order() as usize);
        let pts = random_support(&mut rng, &spec, &lam, size);
        let atoms = pts.into_iter().map(|p| (p, rng.random_range(0.1..3.0))).collect();
        let m = DiscreteMeasure::nonnegative(&spec, atoms).unwrap();
        let dense = is_dense_coset(&m, &q).unwrap().dense;
        let e = extract_concentration_set(&m, &q, &Limits::default()).unwrap();
        assert_eq!(e.is_success(), dense);
        if let Extraction::Success { set, .. } = e {
            assert!(is_partial_transversal(&q, &set));
            let carried: f64 = m.atoms().iter().filter(|a| set.contains(&a.point)).map(|a| a.weight.re).sum();
            assert!((carried - m.mass().re).abs() <= 1e-12 * m.mass().re);
        }
    }
}

#[test]
fn null_space_is_support_minus_rank() {
    for factors in [vec![12], vec![4, 6]] {
        let spec = make_group(&factors).unwrap();
        let elems = all(&spec);
        for hset in all_subgroups(&spec) {
            let gens: Vec<GroupElement> = hset.iter().map(|c| el(&spec, c)).collect();
            let h = Subgroup::from_generators(&spec, &gens).unwrap();
            let q = quotient(&spec, &annihilator(&spec, &h).unwrap()).unwrap();
            for supp in subsets(&elems, 1, 3) {
                let ps = PointSet::new(&spec, supp.iter().map(|p| el(&spec, p)).collect()).unwrap();
                let r = annihilating_null_space(&ps, &h, &q, &opts()).unwrap();
                let table: Vec<Vec<Complex64>> =
                    supp.iter().map(|g| hset.iter().map(|y| chi(&spec, g, y)).collect()).collect();
                assert_eq!(r.rank, gauss_rank(&table, 1e-9));
                assert_eq!(r.dimension, supp.len() - r.rank);
                assert_eq!(r.dimension == 0, r.partial_transversal);
            }
        }
    }
}

/// Distance to `P(H)` vanishes for every `α` and every indicator function
/// exactly on dense instances; otherwise some indicator stays away at `α = 2`.
#[test]
fn approximation_error_is_independent_of_alpha() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..60 {
        let spec = random_group(&mut rng, 200, 2);
        let h = random_subgroup(&mut rng, &spec, 2);
        let lam = annihilator(&spec, &h).unwrap();
        let q = quotient(&spec, &lam).unwrap();
        let size = rng.random_range(1..=5usize).min(spec.order() as usize);
        let pts = random_support(&mut rng, &spec, &lam, size);
        let atoms = pts.into_iter().map(|p| (p, rng.random_range(0.2..2.0))).collect();
        let m = DiscreteMeasure::nonnegative(&spec, atoms).unwrap();
        let dense = is_dense_coset(&m, &q).unwrap().dense;
        let mut worst_l2 = 0.0f64;
        for i in 0..m.len() {
            let f: Vec<Complex64> = (0..m.len()).map(|k| Complex64::new((k == i) as u8 as f64, 0.0)).collect();
            for alpha in [1.0, 1.5, 2.0, 3.0] {
                let out = best_approximation_error(&m, &h, &f, alpha, &opts()).unwrap();
                if dense {
                    assert!(out.error <= 1e-8, "alpha {alpha}: {out:?}");
                }
                if alpha == 2.0 {
                    worst_l2 = worst_l2.max(out.error);
                }
            }
            if dense {
                let out = best_approximation_error(&m, &h, &f, 0.5, &opts()).unwrap();
                assert_eq!(out.status, ApproxStatus::Heuristic);
                assert!(out.error <= 1e-6, "{out:?}");
            }
        }
        if !dense {
            assert!(worst_l2 >= 1e-3);
        }
    }
}

/// Closed forms on a single coset with weights `w`: the best `L^2` constant is
/// the weighted mean, the best `L^1` constant a weighted median.
#[test]
fn approximation_matches_closed_forms_on_one_coset() {
    let (spec, h, _) = z6_setup();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..50 {
        let w = [rng.random_range(0.1..3.0), rng.random_range(0.1..3.0)];
        let fv = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        let m = DiscreteMeasure::nonnegative(&spec, vec![(el(&spec, &[1]), w[0]), (el(&spec, &[4]), w[1])]).unwrap();
        let f = [Complex64::new(fv[0], 0.0), Complex64::new(fv[1], 0.0)];
        let mean = (w[0] * fv[0] + w[1] * fv[1]) / (w[0] + w[1]);
        let l2: f64 = (w[0] * (fv[0] - mean).powi(2) + w[1] * (fv[1] - mean).powi(2)).sqrt();
        let out = best_approximation_error(&m, &h, &f, 2.0, &opts()).unwrap();
        assert!((out.error - l2).abs() <= 1e-10);
        let l1 = w[0].min(w[1]) * (fv[0] - fv[1]).abs();
        let out = best_approximation_error(&m, &h, &f, 1.0, &opts()).unwrap();
        assert!((out.error - l1).abs() <= 1e-6 * (1.0 + l1), "{out:?} vs {l1}");
    }
}
