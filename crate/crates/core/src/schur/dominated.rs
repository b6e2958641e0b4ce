//! Upper approximation of the dominated-operator norm
//! `inf { ‖c‖ : T = d_ν ∘ c ∘ d_μ }` by alternating minimization over the
//! two probability weights.

use crate::exponent::ExponentPair;
use crate::matrix::Matrix;
use crate::opnorm::{sound_upper, SearchConfig};
use crate::{rng, Error, Result};
use rand::Rng;

/// A feasible scaling `T(i,j) = c(i,j) · μ_i^{1/q'} · ν_j^{1/p'}` together
/// with the simplex floor used while optimizing. `c` is stored in the same
/// orientation as `T`; as an operator `ℓ_{q'}^n → ℓ_p^m` it acts by `cᵀ`.
#[derive(Clone, Debug)]
pub struct DominatedScaling {
    pub mu: Vec<f64>,
    pub nu: Vec<f64>,
    pub c: Matrix,
    pub floor: f64,
}

impl DominatedScaling {
    /// Rebuilds `T` from the stored fields (exact by construction).
    pub fn reconstruct(&self, pq: ExponentPair) -> Matrix {
        let qp = pq.q.conjugate();
        let pp = pq.p.conjugate();
        Matrix::from_fn(self.c.rows(), self.c.cols(), |i, j| {
            self.c.get(i, j) * self.mu[i].powf(qp.recip()) * self.nu[j].powf(pp.recip())
        })
    }
}

fn forced_c(t: &Matrix, mu: &[f64], nu: &[f64], pq: ExponentPair) -> Matrix {
    let qp = pq.q.conjugate();
    let pp = pq.p.conjugate();
    Matrix::from_fn(t.rows(), t.cols(), |i, j| {
        t.get(i, j) / (mu[i].powf(qp.recip()) * nu[j].powf(pp.recip()))
    })
}

/// Certified value of one scaling: a sound upper bound on
/// `‖c : ℓ_{q'}^n → ℓ_p^m‖`.
fn scaling_value(t: &Matrix, mu: &[f64], nu: &[f64], pq: ExponentPair) -> f64 {
    let c = forced_c(t, mu, nu, pq);
    let op_pair = ExponentPair::new(pq.q.conjugate(), pq.p);
    sound_upper(&c.transpose(), op_pair)
}

/// Alternating minimization over the two probability simplices with
/// multiplicative updates and a positivity floor. Returns the best value
/// found together with the realizing scaling; the value is a true upper
/// bound on the dominated-operator norm of `T`.
pub fn dominated_norm(
    t: &Matrix,
    pq: ExponentPair,
    cfg: &SearchConfig,
) -> Result<(f64, DominatedScaling)> {
    if pq.p.recip() + pq.q.recip() < 1.0 - 1e-12 {
        return Err(Error::Hypothesis(format!(
            "dominated operators require 1/p + 1/q >= 1, got {pq}"
        )));
    }
    let n = t.rows();
    let m = t.cols();
    let floor = 1e-9;

    let project = |w: &mut Vec<f64>| {
        let mut s = 0.0;
        for x in w.iter_mut() {
            *x = x.max(floor);
            s += *x;
        }
        for x in w.iter_mut() {
            *x /= s;
        }
    };

    let mut best_val = f64::INFINITY;
    let mut best_mu = vec![1.0 / n as f64; n];
    let mut best_nu = vec![1.0 / m as f64; m];

    let trials = (cfg.restarts / 8).clamp(2, 4);
    for trial in 0..trials {
        let mut r = rng::stream(cfg.seed ^ 0xD0A1, trial as u64);
        let mut mu = if trial == 0 {
            vec![1.0 / n as f64; n]
        } else {
            let mut w: Vec<f64> = (0..n).map(|_| r.gen_range(0.05..1.0)).collect();
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= s);
            w
        };
        let mut nu = if trial == 0 {
            vec![1.0 / m as f64; m]
        } else {
            let mut w: Vec<f64> = (0..m).map(|_| r.gen_range(0.05..1.0)).collect();
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= s);
            w
        };
        project(&mut mu);
        project(&mut nu);
        let mut val = scaling_value(t, &mu, &nu, pq);
        // coordinate-wise multiplicative line search with a shrinking factor
        let mut factor = 4.0f64;
        for _ in 0..cfg.max_iters.min(400) {
            let mut improved = false;
            for side in 0..2 {
                let len = if side == 0 { n } else { m };
                for idx in 0..len {
                    for f in [factor, 1.0 / factor] {
                        let (mut mu2, mut nu2) = (mu.clone(), nu.clone());
                        if side == 0 {
                            mu2[idx] *= f;
                            project(&mut mu2);
                        } else {
                            nu2[idx] *= f;
                            project(&mut nu2);
                        }
                        let v2 = scaling_value(t, &mu2, &nu2, pq);
                        if v2 < val - 1e-15 * val.abs() {
                            mu = mu2;
                            nu = nu2;
                            val = v2;
                            improved = true;
                        }
                    }
                }
            }
            if !improved {
                factor = factor.sqrt();
                if factor < 1.0 + 1e-5 {
                    break;
                }
            }
            // occasional random kick to escape flat spots
            if !improved && factor > 1.01 {
                let kick: Vec<f64> = mu
                    .iter()
                    .map(|&x| x * (0.05 * r.gen_range(-1.0..1.0f64)).exp())
                    .collect();
                let mut mu2 = kick;
                project(&mut mu2);
                let v2 = scaling_value(t, &mu2, &nu, pq);
                if v2 < val {
                    mu = mu2;
                    val = v2;
                }
            }
        }
        if val < best_val {
            best_val = val;
            best_mu = mu;
            best_nu = nu;
        }
    }

    let c = forced_c(t, &best_mu, &best_nu, pq);
    Ok((
        best_val,
        DominatedScaling {
            mu: best_mu,
            nu: best_nu,
            c,
            floor,
        },
    ))
}
