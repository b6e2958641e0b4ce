//! Internal dense kernels: one-sided Jacobi SVD, spectral norm by power
//! iteration on `AᵀA`, and pseudoinverse solves. Kept private; the public
//! estimators wrap these behind their spec contracts.

use crate::matrix::Matrix;

pub struct Svd {
    /// Left singular vectors, one column per singular value.
    pub u: Vec<Vec<f64>>,
    pub sigma: Vec<f64>,
    /// Right singular vectors, one column per singular value.
    pub v: Vec<Vec<f64>>,
}

/// One-sided Jacobi SVD. `v_init` warm-starts the right basis (useful when
/// factoring a slowly-varying sequence of matrices).
pub fn jacobi_svd(a: &Matrix, v_init: Option<&[Vec<f64>]>) -> Svd {
    if a.rows() < a.cols() {
        let t = jacobi_svd(&a.transpose(), None);
        return Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        };
    }
    let m = a.rows();
    let n = a.cols();
    // column-major working copy W = A * V
    let mut w: Vec<Vec<f64>> = (0..n).map(|j| a.col(j)).collect();
    let mut v: Vec<Vec<f64>> = match v_init {
        Some(v0) if v0.len() == n && v0.iter().all(|c| c.len() == n) => {
            let mut wv: Vec<Vec<f64>> = vec![vec![0.0; m]; n];
            for (j, wvj) in wv.iter_mut().enumerate() {
                for k in 0..n {
                    let f = v0[j][k];
                    if f != 0.0 {
                        for i in 0..m {
                            wvj[i] += w[k][i] * f;
                        }
                    }
                }
            }
            w = wv;
            v0.to_vec()
        }
        _ => (0..n)
            .map(|j| {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                e
            })
            .collect(),
    };

    let eps = 1e-14;
    for _sweep in 0..64 {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for i in 0..m {
                    app += w[p][i] * w[p][i];
                    aqq += w[q][i] * w[q][i];
                    apq += w[p][i] * w[q][i];
                }
                if apq.abs() <= eps * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (aqq - app) / (2.0 * apq);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let wp = w[p][i];
                    let wq = w[q][i];
                    w[p][i] = c * wp - s * wq;
                    w[q][i] = s * wp + c * wq;
                }
                for i in 0..n {
                    let vp = v[p][i];
                    let vq = v[q][i];
                    v[p][i] = c * vp - s * vq;
                    v[q][i] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma: Vec<f64> = w
        .iter()
        .map(|col| col.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap());
    let mut u = Vec::with_capacity(n);
    let mut vs = Vec::with_capacity(n);
    let mut sg = Vec::with_capacity(n);
    for &j in &order {
        let s = sigma[j];
        let uj = if s > 0.0 {
            w[j].iter().map(|x| x / s).collect()
        } else {
            vec![0.0; m]
        };
        u.push(uj);
        vs.push(v[j].clone());
        sg.push(s);
    }
    sigma = sg;
    Svd {
        u,
        sigma,
        v: vs,
    }
}

impl Svd {
    /// Partial isometry `Σ u_i v_iᵀ` over `σ_i > rel_tol · σ_max`; the polar
    /// factor on the numerically nonzero part.
    pub fn polar(&self, rel_tol: f64) -> Matrix {
        let top = self.sigma.first().copied().unwrap_or(0.0);
        let m = self.u.first().map_or(0, |c| c.len());
        let n = self.v.first().map_or(0, |c| c.len());
        let mut out = Matrix::zeros(m, n);
        for (k, &s) in self.sigma.iter().enumerate() {
            if s <= rel_tol * top {
                break;
            }
            for i in 0..m {
                let ui = self.u[k][i];
                if ui != 0.0 {
                    for j in 0..n {
                        let val = out.get(i, j) + ui * self.v[k][j];
                        out.set(i, j, val);
                    }
                }
            }
        }
        out
    }

    /// Minimum-norm least-squares solve `A z ≈ b` via `V Σ⁺ Uᵀ b`.
    pub fn pseudo_solve(&self, b: &[f64], rel_tol: f64) -> Vec<f64> {
        let top = self.sigma.first().copied().unwrap_or(0.0);
        let n = self.v.first().map_or(0, |c| c.len());
        let mut z = vec![0.0; n];
        for (k, &s) in self.sigma.iter().enumerate() {
            if s <= rel_tol * top || s == 0.0 {
                break;
            }
            let coef: f64 = self.u[k].iter().zip(b).map(|(a, c)| a * c).sum::<f64>() / s;
            for (zi, vi) in z.iter_mut().zip(&self.v[k]) {
                *zi += coef * vi;
            }
        }
        z
    }

}

pub fn singular_values(a: &Matrix) -> Vec<f64> {
    jacobi_svd(a, None).sigma
}

/// Largest singular value and a right singular vector, by power iteration on
/// `AᵀA` with deterministic multi-start. Converges to near machine precision
/// on the matrices this crate works with.
pub fn spectral_norm(a: &Matrix) -> (f64, Vec<f64>) {
    let n = a.cols();
    let mut starts: Vec<Vec<f64>> = Vec::new();
    starts.push(vec![1.0; n]);
    // heaviest column
    let mut jbest = 0;
    let mut best = -1.0;
    for j in 0..n {
        let c: f64 = (0..a.rows()).map(|i| a.get(i, j).powi(2)).sum();
        if c > best {
            best = c;
            jbest = j;
        }
    }
    let mut e = vec![0.0; n];
    e[jbest] = 1.0;
    starts.push(e);
    // fixed pseudo-random start, deterministic
    let mut state = 0x9E37_79B9_7F4A_7C15u64;
    starts.push(
        (0..n)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
            })
            .collect(),
    );

    let mut sigma = 0.0;
    let mut witness = vec![0.0; n];
    for x0 in starts {
        let mut x = x0;
        let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if nx == 0.0 {
            continue;
        }
        x.iter_mut().for_each(|v| *v /= nx);
        let mut lam_prev = -1.0;
        for _ in 0..600 {
            let y = a.matvec(&x);
            let mut z = a.tr_matvec(&y);
            let lam: f64 = x.iter().zip(&z).map(|(a, b)| a * b).sum();
            let nz = z.iter().map(|v| v * v).sum::<f64>().sqrt();
            if nz == 0.0 {
                break;
            }
            z.iter_mut().for_each(|v| *v /= nz);
            x = z;
            if (lam - lam_prev).abs() <= 1e-15 * lam.abs().max(1e-300) {
                break;
            }
            lam_prev = lam;
        }
        let s = norm2(&a.matvec(&x));
        if s > sigma {
            sigma = s;
            witness = x;
        }
    }
    (sigma, witness)
}

pub fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
