//! Helpers for the acceptance suite: seeded instances and the independent
//! sampling-based multiplier-norm oracle.

use rand::Rng;
use schur_core::{opnorm, ExponentPair, Matrix, SearchConfig};

pub fn seeded_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut r = schur_core::rng::stream(seed, 0);
    Matrix::from_fn(rows, cols, |_, _| r.gen_range(-1.0..1.0))
}

pub fn seeded_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut r = schur_core::rng::stream(seed, 1);
    (0..n).map(|_| r.gen_range(-1.0..1.0)).collect()
}

#[derive(Clone, Copy)]
pub struct OracleEffort {
    pub tries: usize,
    pub sweeps: usize,
    pub samples: usize,
}

/// Independent multiplier-norm oracle: maximize `oracle(m∘A)/oracle(A)` over
/// sampled witnesses refined by coordinate ascent, with both operator norms
/// measured by the sampling oracle (no shared code with the estimators).
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
    let mut best = m.max_abs();
    let mut r = schur_core::rng::stream(seed, 1);
    for _ in 0..effort.tries {
        let mut a = Matrix::from_fn(m.rows(), m.cols(), |_, _| r.gen_range(-1.0..1.0));
        let mut val = ratio(&a);
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
