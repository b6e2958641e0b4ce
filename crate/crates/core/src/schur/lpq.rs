//! Certified lower bounds on the dual norm
//! `L_{p,q}(v) = sup |Σ_{ij} v_ij c_ji μ_i ν_j|` over feasible triples
//! `‖c : ℓ_{p'}^m → ℓ_q^n‖ ≤ 1`, `‖μ‖_{p'} ≤ 1`, `‖ν‖_{q'} ≤ 1`.

use crate::exponent::ExponentPair;
use crate::matrix::Matrix;
use crate::norms::holder_extremizer;
use crate::opnorm::{sound_upper, SearchConfig};
use crate::{rng, Error, Result};
use rand::Rng;

/// Alternating maximization: closed-form Hölder steps in `(μ, ν)`, gradient
/// steps in `c` re-certified feasible by dividing through a sound upper bound
/// on its operator norm. Requires the standing hypothesis `1/p + 1/q ≥ 1`.
pub fn lpq_lower(v: &Matrix, pq: ExponentPair, cfg: &SearchConfig) -> Result<f64> {
    if pq.p.recip() + pq.q.recip() < 1.0 - 1e-12 {
        return Err(Error::Hypothesis(format!(
            "dual norm requires 1/p + 1/q >= 1, got {pq}"
        )));
    }
    let (bp, bq) = (pq.p, pq.q);
    let bpp = bp.conjugate();
    let mrows = v.rows();
    let n = v.cols();
    // c is the operator ℓ_{p'}^m → ℓ_q^n, stored as an n × m matrix acting by
    // the usual matrix-vector product; its norm is measured at (p', q).
    let c_pair = ExponentPair::new(bpp, bq);

    // single-entry candidate: c = E_{j0 i0}, μ = e_{i0}, ν = e_{j0}
    let (i0, j0) = v.argmax_abs();
    let mut best = v.get(i0, j0).abs();

    let pair_value = |c: &Matrix, mu: &[f64], nu: &[f64]| -> f64 {
        let mut acc = 0.0;
        for i in 0..mrows {
            for j in 0..n {
                acc += v.get(i, j) * c.get(j, i) * mu[i] * nu[j];
            }
        }
        acc.abs()
    };

    let trials = (cfg.restarts / 8).clamp(2, 6);
    for trial in 0..trials {
        let mut r = rng::stream(cfg.seed ^ 0x19C4, trial as u64);
        let mut c = Matrix::from_fn(n, mrows, |_, _| r.gen_range(-1.0..1.0));
        let u0 = sound_upper(&c, c_pair);
        if u0 <= 0.0 {
            continue;
        }
        c = c.scale(1.0 / u0);
        let mut nu = holder_extremizer(&vec![1.0; n], bq);
        let mut mu = vec![0.0; mrows];
        for _ in 0..cfg.max_iters.min(60) {
            // K_ij = v_ij c_ji
            let k = Matrix::from_fn(mrows, n, |i, j| v.get(i, j) * c.get(j, i));
            mu = holder_extremizer(&k.matvec(&nu), bp);
            let z = k.tr_matvec(&mu);
            if z.iter().all(|x| *x == 0.0) {
                break;
            }
            nu = holder_extremizer(&z, bq);
            let val = pair_value(&c, &mu, &nu);
            // gradient in c: G_ji = v_ij μ_i ν_j
            let g = Matrix::from_fn(n, mrows, |j, i| v.get(i, j) * mu[i] * nu[j]);
            let gn = g.frobenius();
            if gn == 0.0 {
                break;
            }
            let mut step = 0.5;
            let mut improved = false;
            for _ in 0..20 {
                let mut c2 = c.add(&g, step / gn);
                let u2 = sound_upper(&c2, c_pair);
                if u2 > 0.0 {
                    c2 = c2.scale(1.0 / u2);
                    if pair_value(&c2, &mu, &nu) > val + 1e-15 {
                        c = c2;
                        improved = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if !improved {
                break;
            }
        }
        // final exact (μ, ν) polish for this c
        let k = Matrix::from_fn(mrows, n, |i, j| v.get(i, j) * c.get(j, i));
        for _ in 0..40 {
            mu = holder_extremizer(&k.matvec(&nu), bp);
            nu = holder_extremizer(&k.tr_matvec(&mu), bq);
        }
        best = best.max(pair_value(&c, &mu, &nu));
    }
    Ok(best)
}
