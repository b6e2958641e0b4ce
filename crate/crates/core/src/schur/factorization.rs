//! Factorization certificates `m_ij = ⟨x_j, y_i⟩_{L²(λ)}` over a discrete
//! probability space of `N` atoms. Any feasible certificate upper-bounds the
//! multiplier norm by `max_j ‖x_j‖_{L^p(λ)} · max_i ‖y_i‖_{L^{q'}(λ)}`;
//! the solver minimizes that product.

use crate::exponent::{Exponent, ExponentPair};
use crate::linalg::{self, Svd};
use crate::matrix::Matrix;
use crate::opnorm::SearchConfig;
use crate::{rng, Error, Result};
use rand::Rng;

/// Atom weights `λ` on the simplex plus the two vector families.
/// `x_vectors` is `N × n` (column `j` is `x_j`), `y_vectors` is `N × m`
/// (column `i` is `y_i`), for an `m × n` multiplier.
#[derive(Clone, Debug)]
pub struct FactorizationCertificate {
    pub atom_weights: Vec<f64>,
    pub x_vectors: Matrix,
    pub y_vectors: Matrix,
    pub residual: f64,
}

impl FactorizationCertificate {
    /// `Σ_k λ_k x_jk y_ik`, the certified reconstruction of `m_ij`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.x_vectors.cols();
        let m = self.y_vectors.cols();
        Matrix::from_fn(m, n, |i, j| {
            self.atom_weights
                .iter()
                .enumerate()
                .map(|(k, &l)| l * self.x_vectors.get(k, j) * self.y_vectors.get(k, i))
                .sum()
        })
    }

    pub fn residual_against(&self, m: &Matrix) -> f64 {
        let rec = self.reconstruct();
        let mut worst = 0.0f64;
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                worst = worst.max((m.get(i, j) - rec.get(i, j)).abs());
            }
        }
        worst
    }
}

/// Weighted `L^e(λ)` norm of one column, with the essential-sup convention
/// over atoms of positive weight when `e = ∞`.
fn atom_norm(col: impl Iterator<Item = f64>, lam: &[f64], e: Exponent) -> f64 {
    match e {
        Exponent::Infinity => col
            .zip(lam)
            .filter(|(_, &l)| l > 0.0)
            .fold(0.0f64, |acc, (x, _)| acc.max(x.abs())),
        Exponent::Finite(p) => col
            .zip(lam)
            .map(|(x, &l)| l * x.abs().powf(p))
            .sum::<f64>()
            .powf(1.0 / p),
    }
}

/// `max_j ‖x_j‖_{L^p(λ)} · max_i ‖y_i‖_{L^{q'}(λ)}`.
pub fn certificate_value(cert: &FactorizationCertificate, pq: ExponentPair) -> f64 {
    let lam = &cert.atom_weights;
    let qp = pq.q.conjugate();
    let vx = (0..cert.x_vectors.cols())
        .map(|j| atom_norm((0..lam.len()).map(|k| cert.x_vectors.get(k, j)), lam, pq.p))
        .fold(0.0f64, f64::max);
    let vy = (0..cert.y_vectors.cols())
        .map(|i| atom_norm((0..lam.len()).map(|k| cert.y_vectors.get(k, i)), lam, qp))
        .fold(0.0f64, f64::max);
    vx * vy
}

/// Certificate value inflated by the trivial multiplier bound of the
/// reconstruction error: `value + residual · rows · cols`. Sound as an upper
/// bound on `‖T_m‖` whenever the certificate's residual is measured against
/// `m` itself.
pub fn certificate_value_sound(cert: &FactorizationCertificate, pq: ExponentPair) -> f64 {
    certificate_value(cert, pq)
        + cert.residual * (cert.x_vectors.cols() * cert.y_vectors.cols()) as f64
}

/// Minimum-`‖·‖_e` solve of `D z = b` (projected subgradient from the
/// minimum-norm least-squares point). Returns the solution and its residual.
fn min_norm_solve(d: &Matrix, b: &[f64], e: Exponent, svd: &Svd) -> (Vec<f64>, f64) {
    let z0 = svd.pseudo_solve(b, 1e-12);
    let resid = |z: &[f64]| -> f64 {
        let r = d.matvec(z);
        r.iter()
            .zip(b)
            .map(|(a, c)| (a - c).abs())
            .fold(0.0f64, f64::max)
    };
    if matches!(e, Exponent::Finite(v) if v == 2.0) {
        let r = resid(&z0);
        return (z0, r);
    }
    // project onto null(D) using the right singular basis
    let top = svd.sigma.first().copied().unwrap_or(0.0);
    let range: Vec<&Vec<f64>> = svd
        .v
        .iter()
        .zip(&svd.sigma)
        .filter(|(_, &s)| s > 1e-12 * top)
        .map(|(v, _)| v)
        .collect();
    let project = |g: &[f64]| -> Vec<f64> {
        let mut out = g.to_vec();
        for v in &range {
            let c = linalg::dot(v, g);
            for (o, vi) in out.iter_mut().zip(v.iter()) {
                *o -= c * vi;
            }
        }
        out
    };
    let norm_e = |z: &[f64]| crate::norms::lp_norm(z, e);
    let mut z = z0;
    let mut val = norm_e(&z);
    let mut step = 0.5 * val.max(1e-12);
    for _ in 0..200 {
        let g: Vec<f64> = match e {
            Exponent::Infinity => {
                // smoothed max subgradient
                let mx = z.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                if mx == 0.0 {
                    break;
                }
                let w: Vec<f64> = z.iter().map(|v| ((v.abs() - mx) * 200.0 / mx).exp()).collect();
                let s: f64 = w.iter().sum();
                z.iter()
                    .zip(&w)
                    .map(|(v, wi)| v.signum() * wi / s)
                    .collect()
            }
            Exponent::Finite(p) => z
                .iter()
                .map(|v| v.signum() * v.abs().powf(p - 1.0))
                .collect(),
        };
        let gp = project(&g);
        let gn = linalg::norm2(&gp);
        if gn < 1e-14 {
            break;
        }
        let mut ok = false;
        for _ in 0..30 {
            let z2: Vec<f64> = z
                .iter()
                .zip(&gp)
                .map(|(a, b)| a - step * b / gn)
                .collect();
            let v2 = norm_e(&z2);
            if v2 < val - 1e-15 {
                z = z2;
                val = v2;
                ok = true;
                step *= 1.2;
                break;
            }
            step *= 0.5;
        }
        if !ok {
            break;
        }
    }
    let r = resid(&z);
    (z, r)
}

/// Given `λ` and `X`, solve every `y_i` as the minimum `L^{q'}(λ)`-norm
/// interpolant of the linear constraints. Returns `(Y, worst residual)`.
fn resolve_y(
    m: &Matrix,
    lam: &[f64],
    x: &Matrix,
    qp: Exponent,
) -> (Matrix, f64) {
    let nn = lam.len();
    let cols = m.cols();
    let rows = m.rows();
    // z_k = λ_k^{1/q'} y_k; constraints Σ_k λ_k^{1/q} X_kj z_k = m_ij
    let wq = match qp {
        Exponent::Infinity => 1.0, // λ^{1-0}
        Exponent::Finite(v) => 1.0 - 1.0 / v,
    };
    let d = Matrix::from_fn(cols, nn, |j, k| lam[k].powf(wq) * x.get(k, j));
    let svd = linalg::jacobi_svd(&d, None);
    let mut y = Matrix::zeros(nn, rows);
    let mut worst = 0.0f64;
    for i in 0..rows {
        let (z, r) = min_norm_solve(&d, m.row(i), qp, &svd);
        worst = worst.max(r);
        for k in 0..nn {
            let denom = lam[k].powf(qp.recip()).max(1e-300);
            y.set(k, i, z[k] / denom);
        }
    }
    (y, worst)
}

fn resolve_x(m: &Matrix, lam: &[f64], y: &Matrix, p: Exponent) -> (Matrix, f64) {
    let nn = lam.len();
    let cols = m.cols();
    let rows = m.rows();
    let wp = match p {
        Exponent::Infinity => 1.0,
        Exponent::Finite(v) => 1.0 - 1.0 / v,
    };
    let d = Matrix::from_fn(rows, nn, |i, k| lam[k].powf(wp) * y.get(k, i));
    let svd = linalg::jacobi_svd(&d, None);
    let mut x = Matrix::zeros(nn, cols);
    let mut worst = 0.0f64;
    for j in 0..cols {
        let b = m.col(j);
        let (z, r) = min_norm_solve(&d, &b, p, &svd);
        worst = worst.max(r);
        for k in 0..nn {
            let denom = lam[k].powf(p.recip()).max(1e-300);
            x.set(k, j, z[k] / denom);
        }
    }
    (x, worst)
}

fn svd_init(m: &Matrix, atoms: usize) -> (Vec<f64>, Matrix) {
    let svd = linalg::jacobi_svd(m, None);
    let lam = vec![1.0 / atoms as f64; atoms];
    let mut x = Matrix::zeros(atoms, m.cols());
    let top = svd.sigma.first().copied().unwrap_or(0.0);
    for (k, s) in svd.sigma.iter().enumerate() {
        if k >= atoms || *s <= 1e-13 * top {
            break;
        }
        let scale = (s * atoms as f64).sqrt();
        for j in 0..m.cols() {
            x.set(k, j, svd.v[k][j] * scale);
        }
    }
    (lam, x)
}

struct Reduced<'a> {
    m: &'a Matrix,
    p: Exponent,
    atoms: usize,
}

impl Reduced<'_> {
    /// Smoothed objective: λ from softmax logits, `Y` eliminated by the
    /// exact minimum-norm solve (q' = 2 only).
    fn eval(&self, theta: &[f64]) -> f64 {
        let lam = softmax(&theta[..self.atoms]);
        let x = Matrix::from_fn(self.atoms, self.m.cols(), |k, j| {
            theta[self.atoms + k * self.m.cols() + j]
        });
        let d = Matrix::from_fn(self.m.cols(), self.atoms, |j, k| {
            lam[k].sqrt() * x.get(k, j)
        });
        let svd = linalg::jacobi_svd(&d, None);
        let mut ny = Vec::with_capacity(self.m.rows());
        for i in 0..self.m.rows() {
            let z = svd.pseudo_solve(self.m.row(i), 1e-12);
            ny.push(linalg::norm2(&z));
        }
        let nx: Vec<f64> = (0..self.m.cols())
            .map(|j| atom_norm((0..self.atoms).map(|k| x.get(k, j)), &lam, self.p))
            .collect();
        smooth_max(&nx) * smooth_max(&ny)
    }
}

fn softmax(alpha: &[f64]) -> Vec<f64> {
    let mx = alpha.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let mut w: Vec<f64> = alpha.iter().map(|a| (a - mx).exp().max(1e-12)).collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    w
}

fn smooth_max(v: &[f64]) -> f64 {
    let mx = v.iter().fold(0.0f64, |a, &b| a.max(b));
    if mx <= 0.0 {
        return mx;
    }
    let beta = 200.0;
    let s: f64 = v.iter().map(|&x| (beta * (x / mx - 1.0)).exp()).sum();
    mx * (1.0 + s.ln() / beta)
}

/// Finds `λ, X, Y` with `Σ_k λ_k x_jk y_ik = m_ij` (residual ≤ 1e-8 on
/// success), minimizing `max_j ‖x_j‖_{L^p(λ)} · max_i ‖y_i‖_{L^{q'}(λ)}`.
///
/// Rank-one multipliers get the closed-form one-atom certificate. When
/// `q' = 2` the objective is minimized by finite-difference descent on
/// `(λ-logits, X)` with `Y` eliminated exactly; other exponents fall back to
/// alternating minimum-norm resolves with multiplicative weight updates.
/// Requires `atoms ≥ rank(m)`; non-convergence returns the best feasible
/// certificate found with its residual for the caller to judge.
pub fn factorization_solve(
    m: &Matrix,
    pq: ExponentPair,
    atoms: usize,
    cfg: &SearchConfig,
) -> Result<FactorizationCertificate> {
    pq.require_regime()?;
    if atoms == 0 {
        return Err(Error::Infeasible("at least one atom required".into()));
    }
    let rank = m.rank(1e-12);
    if atoms < rank {
        return Err(Error::Infeasible(format!(
            "{atoms} atoms cannot reproduce a rank-{rank} multiplier"
        )));
    }
    let qp = pq.q.conjugate();

    if rank == 0 {
        return Ok(FactorizationCertificate {
            atom_weights: {
                let mut l = vec![0.0; atoms];
                l[0] = 1.0;
                l
            },
            x_vectors: Matrix::zeros(atoms, m.cols()),
            y_vectors: Matrix::zeros(atoms, m.rows()),
            residual: 0.0,
        });
    }

    if rank == 1 {
        return Ok(rank_one_certificate(m, atoms));
    }

    let two_sided = matches!(qp, Exponent::Finite(v) if v == 2.0);
    let mut best: Option<(f64, FactorizationCertificate)> = None;

    if two_sided {
        let red = Reduced { m, p: pq.p, atoms };
        let (lam0, x0) = svd_init(m, atoms);
        let scale0 = x0.max_abs().max(1e-6);
        for trial in 0..3 {
            let mut theta: Vec<f64> = Vec::with_capacity(atoms + atoms * m.cols());
            theta.extend(lam0.iter().map(|l| l.ln()));
            let mut r = rng::stream(cfg.seed ^ 0xFAC7, trial as u64);
            for k in 0..atoms {
                for j in 0..m.cols() {
                    let jitter = if trial == 0 {
                        0.0
                    } else {
                        0.3 * scale0 * r.gen_range(-1.0..1.0)
                    };
                    theta.push(x0.get(k, j) + jitter);
                }
            }
            descend(&red, &mut theta, cfg.max_iters.max(200));
            let lam = softmax(&theta[..atoms]);
            let x = Matrix::from_fn(atoms, m.cols(), |k, j| theta[atoms + k * m.cols() + j]);
            let (y, resid_y) = resolve_y(m, &lam, &x, qp);
            let cert = FactorizationCertificate {
                atom_weights: lam,
                x_vectors: x,
                y_vectors: y,
                residual: 0.0,
            };
            let cert = seal(cert, m);
            if cert.residual <= 1e-8 && resid_y.is_finite() {
                let v = certificate_value(&cert, pq);
                if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                    best = Some((v, cert));
                }
            }
        }
    }

    // generic alternating fallback (also polishes the q'=2 path when the
    // reduced descent failed to reach feasibility)
    {
        let (mut lam, mut x) = svd_init(m, atoms);
        let (mut y, _) = resolve_y(m, &lam, &x, qp);
        let mut val = f64::INFINITY;
        let mut r = rng::stream(cfg.seed ^ 0xFA11, 0);
        for _ in 0..cfg.max_iters.min(120) {
            let (x2, rx) = resolve_x(m, &lam, &y, pq.p);
            if rx < 1e-7 {
                x = x2;
            }
            let (y2, ry) = resolve_y(m, &lam, &x, qp);
            if ry < 1e-7 {
                y = y2;
            }
            let cert = FactorizationCertificate {
                atom_weights: lam.clone(),
                x_vectors: x.clone(),
                y_vectors: y.clone(),
                residual: 0.0,
            };
            let cert = seal(cert, m);
            if cert.residual <= 1e-8 {
                let v = certificate_value(&cert, pq);
                if v < val {
                    val = v;
                }
                if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                    best = Some((v, cert));
                }
            }
            // multiplicative trial step on λ, kept only when it helps
            let lam2: Vec<f64> = {
                let mut w: Vec<f64> = lam
                    .iter()
                    .map(|&l| l * (0.3 * r.gen_range(-1.0..1.0f64)).exp())
                    .collect();
                let s: f64 = w.iter().sum();
                w.iter_mut().for_each(|v| *v /= s);
                w
            };
            let (ytrial, rt) = resolve_y(m, &lam2, &x, qp);
            if rt < 1e-9 {
                let cert2 = seal(
                    FactorizationCertificate {
                        atom_weights: lam2.clone(),
                        x_vectors: x.clone(),
                        y_vectors: ytrial.clone(),
                        residual: 0.0,
                    },
                    m,
                );
                if cert2.residual <= 1e-8 && certificate_value(&cert2, pq) < val {
                    lam = lam2;
                    y = ytrial;
                }
            }
        }
    }

    match best {
        Some((_, cert)) => Ok(cert),
        None => {
            // report the best-effort certificate with its residual
            let (lam, x) = svd_init(m, atoms);
            let (y, _) = resolve_y(m, &lam, &x, qp);
            let cert = seal(
                FactorizationCertificate {
                    atom_weights: lam,
                    x_vectors: x,
                    y_vectors: y,
                    residual: 0.0,
                },
                m,
            );
            Ok(cert)
        }
    }
}

/// One-atom closed form for rank-one multipliers: `m = σ u vᵀ` becomes
/// `x_j = v_j √σ`, `y_i = u_i √σ` on a single unit atom; the value is
/// `σ ‖u‖_∞ ‖v‖_∞`, the exact multiplier norm.
fn rank_one_certificate(m: &Matrix, atoms: usize) -> FactorizationCertificate {
    let svd = linalg::jacobi_svd(m, None);
    let s = svd.sigma[0];
    let u = &svd.u[0];
    let v = &svd.v[0];
    let mut lam = vec![0.0; atoms];
    lam[0] = 1.0;
    let mut x = Matrix::zeros(atoms, m.cols());
    let mut y = Matrix::zeros(atoms, m.rows());
    let root = s.sqrt();
    for j in 0..m.cols() {
        x.set(0, j, v[j] * root);
    }
    for i in 0..m.rows() {
        y.set(0, i, u[i] * root);
    }
    let cert = FactorizationCertificate {
        atom_weights: lam,
        x_vectors: x,
        y_vectors: y,
        residual: 0.0,
    };
    seal(cert, m)
}

/// Fix the residual field against `m` and normalize the weights exactly.
fn seal(mut cert: FactorizationCertificate, m: &Matrix) -> FactorizationCertificate {
    let s: f64 = cert.atom_weights.iter().sum();
    if s > 0.0 && (s - 1.0).abs() > 1e-15 {
        cert.atom_weights.iter_mut().for_each(|l| *l /= s);
    }
    cert.residual = cert.residual_against(m);
    cert
}

fn descend(red: &Reduced<'_>, theta: &mut Vec<f64>, iters: usize) {
    let dim = theta.len();
    let h = 1e-6;
    let mut f0 = red.eval(theta);
    let mut step = 0.25;
    for _ in 0..iters {
        let mut g = vec![0.0; dim];
        for k in 0..dim {
            let orig = theta[k];
            theta[k] = orig + h;
            let fp = red.eval(theta);
            theta[k] = orig - h;
            let fm = red.eval(theta);
            theta[k] = orig;
            g[k] = (fp - fm) / (2.0 * h);
        }
        let gn = linalg::norm2(&g);
        if gn < 1e-12 {
            break;
        }
        let mut ok = false;
        for _ in 0..25 {
            let t2: Vec<f64> = theta
                .iter()
                .zip(&g)
                .map(|(t, gi)| t - step * gi / gn)
                .collect();
            let f2 = red.eval(&t2);
            if f2 < f0 - 1e-14 {
                *theta = t2;
                f0 = f2;
                ok = true;
                step *= 1.25;
                break;
            }
            step *= 0.5;
        }
        if !ok {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pair(p: f64, q: f64) -> ExponentPair {
        ExponentPair::from_values(p, q).unwrap()
    }

    #[test]
    fn constant_one_atom() {
        let m = Matrix::from_fn(3, 3, |_, _| -2.5);
        let cert =
            factorization_solve(&m, pair(3.0, 2.0), 1, &SearchConfig::default()).unwrap();
        assert!(cert.residual <= 1e-10);
        let v = certificate_value(&cert, pair(3.0, 2.0));
        assert_abs_diff_eq!(v, 2.5, epsilon = 1e-9);
    }

    #[test]
    fn identity_mask_two_atoms_reaches_one() {
        let m = Matrix::identity(2);
        let pq = pair(2.0, 2.0);
        let cert = factorization_solve(&m, pq, 2, &SearchConfig::default()).unwrap();
        assert!(cert.residual <= 1e-8);
        let v = certificate_value(&cert, pq);
        assert!(v <= 1.0 + 1e-3, "value {v}");
        assert!(v >= 1.0 - 1e-9);
    }

    #[test]
    fn infeasible_atom_count() {
        let m = Matrix::identity(3);
        assert!(matches!(
            factorization_solve(&m, pair(2.0, 2.0), 2, &SearchConfig::default()),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn weights_on_simplex() {
        let m = Matrix::new(2, 2, vec![1.0, 0.25, -0.5, 2.0]).unwrap();
        let cert =
            factorization_solve(&m, pair(4.0, 2.0), 4, &SearchConfig::default()).unwrap();
        let s: f64 = cert.atom_weights.iter().sum();
        assert_abs_diff_eq!(s, 1.0, epsilon = 1e-12);
        assert!(cert.atom_weights.iter().all(|&l| l >= 0.0));
        assert!(cert.residual <= 1e-8);
    }

    #[test]
    fn value_scales_with_x() {
        let m = Matrix::from_fn(2, 2, |_, _| 1.0);
        let pq = pair(3.0, 1.5);
        let mut cert =
            factorization_solve(&m, pq, 1, &SearchConfig::default()).unwrap();
        let v1 = certificate_value(&cert, pq);
        let scaled = cert.x_vectors.scale(3.0);
        cert.x_vectors = scaled;
        let v2 = certificate_value(&cert, pq);
        assert_abs_diff_eq!(v2, 3.0 * v1, epsilon = 1e-9);
    }
}
