//! Discretization pipeline properties: isometry, contraction, average
//! bounds, coarsening monotonicity and refinement growth.

mod common;

use common::{multiplier_oracle, seeded_matrix, OracleEffort};
use rand::Rng;
use schur_core::discretize::{
    coarsen_matrix, conditional_expectation, discretize_kernel, merge_partition,
    partition_isometry, partition_isometry_inverse, uniform_partition, Grouping, KernelKind,
    KernelSpec, QuadConfig, Rect, StepFunction,
};
use schur_core::norms::lp_norm;
use schur_core::schur::multiplier_norm_lower;
use schur_core::{Exponent, ExponentPair, SearchConfig};

fn exponents() -> Vec<Exponent> {
    vec![
        Exponent::ONE,
        Exponent::new(1.5).unwrap(),
        Exponent::TWO,
        Exponent::new(3.0).unwrap(),
        Exponent::INF,
    ]
}

fn random_step(seed: u64) -> StepFunction {
    let mut r = schur_core::rng::stream(seed, 3);
    let n = r.gen_range(1..9usize);
    let a = r.gen_range(-2.0..0.0);
    let b = r.gen_range(0.5..3.0);
    let part = uniform_partition(a, b, n).unwrap();
    let coeff = (0..n).map(|_| r.gen_range(-4.0..4.0)).collect();
    StepFunction::new(part, coeff).unwrap()
}

#[test]
fn isometry_norms_match_on_random_functions() {
    for seed in 0..1000u64 {
        let f = random_step(seed);
        for e in exponents() {
            let v = partition_isometry(&f, e);
            let lhs = lp_norm(&v, e);
            let rhs = f.lp_norm(e);
            assert!(
                (lhs - rhs).abs() <= 1e-12 * rhs.max(1.0),
                "seed {seed} e {e:?}: {lhs} vs {rhs}"
            );
            // round trip
            let back = partition_isometry_inverse(&v, &f.partition, e).unwrap();
            for (a, b) in back.coefficients.iter().zip(&f.coefficients) {
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
            }
        }
    }
}

#[test]
fn conditional_expectation_contracts() {
    for seed in 0..1000u64 {
        let mut r = schur_core::rng::stream(seed, 4);
        let blocks = r.gen_range(1..5usize);
        let per = r.gen_range(1..4usize);
        let fine = uniform_partition(0.0, blocks as f64, blocks * per).unwrap();
        let coarse = uniform_partition(0.0, blocks as f64, blocks).unwrap();
        let coeff: Vec<f64> = (0..blocks * per).map(|_| r.gen_range(-3.0..3.0)).collect();
        let f = StepFunction::new(fine, coeff).unwrap();
        for e in exponents() {
            let pf = conditional_expectation(&f, &coarse, e).unwrap();
            assert!(
                pf.lp_norm(e) <= f.lp_norm(e) + 1e-12 * f.lp_norm(e).max(1.0),
                "seed {seed} e {e:?}"
            );
        }
    }
}

#[test]
fn cell_averages_respect_range() {
    // for the closed-form kinds every entry lies between the min and max of
    // the kernel over its cell
    let dom = Rect::square(-1.0, 1.0).unwrap();
    let spec = KernelSpec::new(KernelKind::SignStep, dom);
    let pa = uniform_partition(-1.0, 1.0, 8).unwrap();
    let pb = uniform_partition(-1.0, 1.0, 8).unwrap();
    let m = discretize_kernel(&spec, &pa, &pb, QuadConfig::default()).unwrap();
    for v in m.data() {
        assert!(*v >= 0.0 && *v <= 1.0);
    }

    let c = KernelSpec::new(KernelKind::Constant(0.75), dom);
    let mc = discretize_kernel(&c, &pa, &pb, QuadConfig::default()).unwrap();
    assert!(mc.data().iter().all(|&v| v == 0.75));
}

#[test]
fn coarsening_multiplier_norm_monotone() {
    // Prop-2.3-style consequence checked with the sampling oracle: merging
    // cells can only lower the multiplier norm (up to oracle noise)
    let pq = ExponentPair::from_values(2.0, 2.0).unwrap();
    let pa = uniform_partition(-1.0, 1.0, 4).unwrap();
    let pb = uniform_partition(-1.0, 1.0, 4).unwrap();
    for seed in 0..10u64 {
        let fine_vals = seeded_matrix(4, 4, 1500 + seed);
        let fine = fine_vals;
        let g = Grouping {
            row_sizes: vec![2, 2],
            col_sizes: vec![2, 2],
        };
        let coarse = coarsen_matrix(&fine, &pa, &pb, &g).unwrap();
        let nf = multiplier_oracle(&fine, pq, 40 + seed, OracleEffort::light_4x4());
        let nc = multiplier_oracle(&coarse, pq, 80 + seed, OracleEffort::light_4x4());
        assert!(
            nc <= nf + 1e-3,
            "seed {seed}: coarse {nc} > fine {nf} + 1e-3"
        );
    }
}

#[test]
fn refinement_chain_nondecreasing() {
    // discretized multiplier norms along a refinement chain grow (within
    // estimator tolerance)
    let cfg = SearchConfig::default();
    let pq = ExponentPair::from_values(2.0, 2.0).unwrap();
    let spec = KernelSpec::new(KernelKind::SignStep, Rect::square(-1.0, 1.0).unwrap());
    let mut prev = 0.0;
    for n in [2usize, 4, 8, 16] {
        let part = uniform_partition(-1.0, 1.0, n).unwrap();
        let m = discretize_kernel(&spec, &part, &part, QuadConfig::default()).unwrap();
        let est = multiplier_norm_lower(&m, pq, &cfg).unwrap();
        assert!(
            est.lower >= prev - 1e-6,
            "n {n}: {} < previous {prev}",
            est.lower
        );
        prev = est.lower;
    }
}

#[test]
fn merged_partition_matches_grouping() {
    let fine = uniform_partition(0.0, 2.0, 6).unwrap();
    let merged = merge_partition(&fine, &[2, 3, 1]).unwrap();
    assert_eq!(merged.len(), 3);
    assert_eq!(merged.cells()[0], (0.0, fine.cells()[1].1));
    assert!(merge_partition(&fine, &[4, 4]).is_err());
}
