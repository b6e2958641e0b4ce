//! Shared helpers for the integration tests: seeded matrices, the
//! sampling-based multiplier-norm oracle, and certificate composition.
#![allow(dead_code)] // each test binary uses a different subset

use rand::Rng;
use schur_core::schur::FactorizationCertificate;
use schur_core::{opnorm, ExponentPair, Matrix, SearchConfig};

pub fn seeded_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut r = schur_core::rng::stream(seed, 0);
    Matrix::from_fn(rows, cols, |_, _| r.gen_range(-1.0..1.0))
}

/// Search effort for the sampling-based multiplier oracle.
#[derive(Clone, Copy)]
pub struct OracleEffort {
    pub tries: usize,
    pub sweeps: usize,
    pub samples: usize,
}

impl OracleEffort {
    /// Thorough search for 2×2 instances.
    pub fn exhaustive_2x2() -> Self {
        OracleEffort {
            tries: 12,
            sweeps: 40,
            samples: 64,
        }
    }

    /// Budgeted search for 4×4 comparisons with generous tolerances.
    pub fn light_4x4() -> Self {
        OracleEffort {
            tries: 2,
            sweeps: 10,
            samples: 24,
        }
    }
}

/// Independent multiplier-norm oracle for small sizes: maximize the ratio
/// `oracle(m∘A) / oracle(A)` over randomly sampled and hill-climbed `A`,
/// with both operator norms measured by the sampling oracle. Shares no code
/// with the estimators under test beyond the matrix type.
pub fn multiplier_oracle(m: &Matrix, pq: ExponentPair, seed: u64, effort: OracleEffort) -> f64 {
    let cfg = SearchConfig {
        oracle_samples: effort.samples,
        seed,
        ..SearchConfig::default()
    };
    let ratio = |a: &Matrix| -> f64 {
        let den = opnorm::opnorm_oracle(a, pq, &cfg);
        if den < 1e-12 {
            return 0.0;
        }
        let ma = schur_core::matrix::hadamard(m, a).unwrap();
        opnorm::opnorm_oracle(&ma, pq, &cfg) / den
    };
    let mut best = m.max_abs(); // matrix units are always feasible
    let mut r = schur_core::rng::stream(seed, 1);
    for _ in 0..effort.tries {
        let mut a = Matrix::from_fn(m.rows(), m.cols(), |_, _| r.gen_range(-1.0..1.0));
        let mut val = ratio(&a);
        // coordinate-wise ascent with a shrinking step
        let mut delta = 0.5;
        for _ in 0..effort.sweeps {
            let mut improved = false;
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    for s in [1.0, -1.0] {
                        let mut a2 = a.clone();
                        a2.set(i, j, a.get(i, j) + s * delta);
                        let v2 = ratio(&a2);
                        if v2 > val {
                            a = a2;
                            val = v2;
                            improved = true;
                        }
                    }
                }
            }
            if !improved {
                delta *= 0.5;
                if delta < 1e-4 {
                    break;
                }
            }
        }
        best = best.max(val);
    }
    best
}

/// Product-measure composition of certificates: atoms are pairs, weights
/// multiply, vectors multiply pointwise. Certifies the Hadamard product of
/// the two multipliers with value at most the product of the values.
pub fn compose_certificates(
    a: &FactorizationCertificate,
    b: &FactorizationCertificate,
) -> FactorizationCertificate {
    let na = a.atom_weights.len();
    let nb = b.atom_weights.len();
    let cols = a.x_vectors.cols();
    let rows = a.y_vectors.cols();
    assert_eq!(cols, b.x_vectors.cols());
    assert_eq!(rows, b.y_vectors.cols());
    let mut weights = Vec::with_capacity(na * nb);
    for ka in 0..na {
        for kb in 0..nb {
            weights.push(a.atom_weights[ka] * b.atom_weights[kb]);
        }
    }
    let x = Matrix::from_fn(na * nb, cols, |k, j| {
        a.x_vectors.get(k / nb, j) * b.x_vectors.get(k % nb, j)
    });
    let y = Matrix::from_fn(na * nb, rows, |k, i| {
        a.y_vectors.get(k / nb, i) * b.y_vectors.get(k % nb, i)
    });
    FactorizationCertificate {
        atom_weights: weights,
        x_vectors: x,
        y_vectors: y,
        residual: 0.0,
    }
}
