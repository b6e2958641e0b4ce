//! Estimation of `‖A : ℓ_p^n → ℓ_q^m‖`: exact closed forms where they exist,
//! a certified-lower-bound signed power iteration, a sampling oracle for
//! cross-validation at small sizes, and interpolation upper bounds.

use crate::exponent::{Exponent, ExponentPair};
use crate::matrix::Matrix;
use crate::norms::{holder_extremizer, lp_norm};
use crate::{linalg, rng, Error, Result};
use rand::Rng;
use rayon::prelude::*;

/// Provenance tags for [`NormEstimate`] bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    Power,
    Oracle,
    Interpolation,
}

/// A certified bracket on an operator norm. `lower` always comes with a
/// feasible witness construction; `upper` may be `+∞` when no certified
/// upper route applies.
#[derive(Clone, Debug)]
pub struct NormEstimate {
    pub lower: f64,
    pub upper: f64,
    /// Unit `ℓ_p` vector attaining `lower`, when one is available.
    pub witness: Option<Vec<f64>>,
    pub methods: Vec<Method>,
}

/// Knobs shared by all randomized searches.
#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
    pub oracle_samples: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            restarts: 32,
            max_iters: 300,
            tol: 1e-10,
            seed: 0x5EED_CAFE,
            oracle_samples: 800,
        }
    }
}

impl SearchConfig {
    pub fn with_seed(seed: u64) -> Self {
        SearchConfig {
            seed,
            ..SearchConfig::default()
        }
    }
}

/// Exact norm when a closed form applies.
///
/// Implemented closed forms: `p = 1` (max column `ℓ_q` norm), `q = ∞` (max
/// row `ℓ_{p'}` norm), `p = q = 2` (largest singular value), and `p = ∞`
/// with at most 16 columns (enumeration of the sign-vector extreme points).
pub fn opnorm_exact(a: &Matrix, pq: ExponentPair) -> Option<f64> {
    let (p, q) = (pq.p, pq.q);
    if p.is_one() {
        let v = (0..a.cols())
            .map(|j| lp_norm(&a.col(j), q))
            .fold(0.0f64, f64::max);
        return Some(v);
    }
    if q.is_infinite() {
        let pp = p.conjugate();
        let v = (0..a.rows())
            .map(|i| lp_norm(a.row(i), pp))
            .fold(0.0f64, f64::max);
        return Some(v);
    }
    if p == Exponent::TWO && q == Exponent::TWO {
        return Some(linalg::spectral_norm(a).0);
    }
    if p.is_infinite() && a.cols() <= 16 {
        let n = a.cols();
        let mut best = 0.0f64;
        let mut eps = vec![1.0; n];
        for mask in 0u32..(1u32 << n) {
            for (k, e) in eps.iter_mut().enumerate() {
                *e = if (mask >> k) & 1 == 1 { 1.0 } else { -1.0 };
            }
            best = best.max(lp_norm(&a.matvec(&eps), q));
        }
        return Some(best);
    }
    None
}

/// Multi-start signed power iteration producing a certified lower bound.
///
/// The iteration is `x ← dual_{p'}(Aᵀ dual_q(Ax))` where `dual_e` is the
/// Hölder norming map of [`holder_extremizer`]; the objective `‖Ax‖_q` is
/// nondecreasing along it. Start set: canonical basis vectors, the uniform
/// vector, row norming vectors when `q = ∞`, then seeded random directions.
/// Ties between restarts resolve by (value, restart index).
pub fn opnorm_power_lower(a: &Matrix, pq: ExponentPair, cfg: &SearchConfig) -> NormEstimate {
    let (p, q) = (pq.p, pq.q);
    let pp = p.conjugate();
    let n = a.cols();

    let mut starts: Vec<Vec<f64>> = Vec::new();
    for j in 0..n.min(cfg.restarts.max(1)) {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        starts.push(e);
    }
    starts.push(vec![1.0; n]);
    if q.is_infinite() {
        for i in 0..a.rows().min(cfg.restarts.max(1)) {
            let d = holder_extremizer(a.row(i), pp);
            if d.iter().any(|v| *v != 0.0) {
                starts.push(d);
            }
        }
    }
    let n_random = cfg.restarts.saturating_sub(starts.len()).max(2);
    for k in 0..n_random {
        let mut r = rng::stream(cfg.seed, k as u64);
        starts.push((0..n).map(|_| r.gen_range(-1.0..1.0)).collect());
    }

    let run = |x0: &[f64]| -> (f64, Vec<f64>) {
        let nx = lp_norm(x0, p);
        if nx == 0.0 {
            return (0.0, vec![0.0; n]);
        }
        let mut x: Vec<f64> = x0.iter().map(|v| v / nx).collect();
        let mut val = lp_norm(&a.matvec(&x), q);
        for _ in 0..cfg.max_iters {
            let u = holder_extremizer(&a.matvec(&x), q);
            let z = a.tr_matvec(&u);
            if z.iter().all(|v| *v == 0.0) {
                break;
            }
            let x2 = holder_extremizer(&z, pp);
            let v2 = lp_norm(&a.matvec(&x2), q);
            if v2 < val {
                break;
            }
            x = x2;
            let gain = v2 - val;
            val = v2;
            if gain < cfg.tol * (1.0 + val) {
                break;
            }
        }
        (val, x)
    };

    let best = starts
        .par_iter()
        .enumerate()
        .map(|(idx, x0)| {
            let (v, x) = run(x0);
            (v, idx, x)
        })
        .reduce(
            || (f64::NEG_INFINITY, usize::MAX, Vec::new()),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );

    let (mut lower, _, mut witness) = best;
    if !lower.is_finite() || witness.is_empty() {
        lower = 0.0;
        witness = vec![0.0; n];
        witness[0] = 1.0;
    }
    let mut methods = vec![Method::Power];
    let upper = match opnorm_exact(a, pq) {
        Some(e) => {
            methods.push(Method::Exact);
            e
        }
        None => f64::INFINITY,
    };
    NormEstimate {
        lower,
        upper,
        witness: Some(witness),
        methods,
    }
}

/// Independent brute-force reference: dense random sampling of the unit
/// `ℓ_p` sphere, each draw followed by 50 steps of local coordinate ascent.
/// Intended for small matrices (≤ 4×4); shares nothing with the power path.
pub fn opnorm_oracle(a: &Matrix, pq: ExponentPair, cfg: &SearchConfig) -> f64 {
    let (p, q) = (pq.p, pq.q);
    let n = a.cols();
    let mut best = 0.0f64;

    let objective = |x: &[f64]| -> f64 {
        let nx = lp_norm(x, p);
        if nx == 0.0 {
            return 0.0;
        }
        let y = a.matvec(x);
        lp_norm(&y, q) / nx
    };

    let refine = |x0: Vec<f64>| -> f64 {
        let mut x = x0;
        let mut val = objective(&x);
        let mut delta = 0.5;
        for _ in 0..50 {
            let mut improved = false;
            for i in 0..n {
                for s in [1.0, -1.0] {
                    let old = x[i];
                    x[i] = old + s * delta;
                    let v = objective(&x);
                    if v > val {
                        val = v;
                        improved = true;
                    } else {
                        x[i] = old;
                    }
                }
            }
            if !improved {
                delta *= 0.5;
                if delta < 1e-12 {
                    break;
                }
            }
        }
        val
    };

    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        best = best.max(refine(e));
    }
    let samples: Vec<f64> = (0..cfg.oracle_samples)
        .into_par_iter()
        .map(|k| {
            let mut r = rng::stream(cfg.seed ^ 0x0AC1_E000, k as u64);
            let x: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
            if lp_norm(&x, p) == 0.0 {
                0.0
            } else {
                refine(x)
            }
        })
        .collect();
    for v in samples {
        best = best.max(v);
    }
    best
}

/// Riesz–Thorin style upper bound. Returns the best product
/// `‖A‖₀^{1−θ}‖A‖₁^θ` over segments of exactly-computable endpoint pairs
/// containing `(1/p, 1/q)`; absent when no admissible segment exists.
pub fn opnorm_interp_upper(a: &Matrix, pq: ExponentPair) -> Option<f64> {
    let target = (pq.p.recip(), pq.q.recip());
    let endpoints: Vec<ExponentPair> = vec![
        ExponentPair::new(Exponent::ONE, Exponent::ONE),
        ExponentPair::new(Exponent::TWO, Exponent::TWO),
        ExponentPair::new(Exponent::INF, Exponent::INF),
        ExponentPair::new(Exponent::ONE, pq.q),
        ExponentPair::new(pq.p, Exponent::INF),
    ];
    let coords: Vec<(f64, f64)> = endpoints
        .iter()
        .map(|e| (e.p.recip(), e.q.recip()))
        .collect();

    let mut best: Option<f64> = None;
    for i in 0..endpoints.len() {
        for j in (i + 1)..endpoints.len() {
            let (a0, b0) = coords[i];
            let (a1, b1) = coords[j];
            let (da, db) = (a1 - a0, b1 - b0);
            let theta = if da.abs() >= db.abs() {
                if da.abs() < 1e-15 {
                    continue;
                }
                (target.0 - a0) / da
            } else {
                (target.1 - b0) / db
            };
            if !(-1e-12..=1.0 + 1e-12).contains(&theta) {
                continue;
            }
            let on_segment = (a0 + theta * da - target.0).abs() <= 1e-12
                && (b0 + theta * db - target.1).abs() <= 1e-12;
            if !on_segment {
                continue;
            }
            let n0 = opnorm_exact(a, endpoints[i]);
            let n1 = opnorm_exact(a, endpoints[j]);
            if let (Some(n0), Some(n1)) = (n0, n1) {
                let t = theta.clamp(0.0, 1.0);
                let bound = if n0 == 0.0 || n1 == 0.0 {
                    0.0
                } else {
                    n0.powf(1.0 - t) * n1.powf(t)
                };
                best = Some(best.map_or(bound, |b: f64| b.min(bound)));
            }
        }
    }
    best
}

/// Elementary always-sound upper bounds obtained by measuring columns in
/// `ℓ_q` and combining in `ℓ_{p'}` (and the row-side dual variant).
pub(crate) fn mixed_upper(a: &Matrix, pq: ExponentPair) -> f64 {
    let (p, q) = (pq.p, pq.q);
    let pp = p.conjugate();
    let col_norms: Vec<f64> = (0..a.cols()).map(|j| lp_norm(&a.col(j), q)).collect();
    let via_cols = lp_norm(&col_norms, pp);
    let row_norms: Vec<f64> = (0..a.rows()).map(|i| lp_norm(a.row(i), pp)).collect();
    let via_rows = lp_norm(&row_norms, q);
    via_cols.min(via_rows)
}

/// Best certified upper bound available for any `(p, q)`: exact closed form,
/// interpolation, or the elementary mixed bounds. Always finite.
pub(crate) fn sound_upper(a: &Matrix, pq: ExponentPair) -> f64 {
    let mut u = mixed_upper(a, pq);
    if let Some(e) = opnorm_exact(a, pq) {
        u = u.min(e);
    }
    if let Some(i) = opnorm_interp_upper(a, pq) {
        u = u.min(i);
    }
    u
}

/// Combined estimate: lower from the best of exact/power/oracle, upper from
/// the best of exact/interpolation.
pub fn opnorm(a: &Matrix, pq: ExponentPair, cfg: &SearchConfig) -> Result<NormEstimate> {
    let exact = opnorm_exact(a, pq);
    let power = opnorm_power_lower(a, pq, cfg);
    let mut methods = vec![Method::Power];
    let mut lower = power.lower;
    if let Some(e) = exact {
        methods.push(Method::Exact);
        lower = lower.max(e);
    }
    if a.rows() * a.cols() <= 16 {
        let o = opnorm_oracle(a, pq, cfg);
        methods.push(Method::Oracle);
        lower = lower.max(o);
    }
    let mut upper = exact.unwrap_or(f64::INFINITY);
    if let Some(i) = opnorm_interp_upper(a, pq) {
        methods.push(Method::Interpolation);
        upper = upper.min(i);
    }
    if lower > upper + 1e-9 * upper.max(1.0) {
        return Err(Error::Inconsistent(format!(
            "certified lower {lower} exceeds certified upper {upper} at {pq}"
        )));
    }
    let witness = power.witness.filter(|w| {
        let aw = lp_norm(&a.matvec(w), pq.q);
        (aw - lower).abs() <= 1e-9 * lower.max(1.0)
    });
    Ok(NormEstimate {
        lower,
        upper,
        witness,
        methods,
    })
}
