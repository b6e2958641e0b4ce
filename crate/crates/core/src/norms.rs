//! Vector `ℓ_e` norms and the closed-form Hölder norming vectors used inside
//! every ascent loop.

use crate::exponent::Exponent;

/// `‖x‖_e = (Σ|x_i|^e)^{1/e}`, with `‖x‖_∞ = max|x_i|`. Scaled by the max
/// modulus so large exponents do not overflow.
pub fn lp_norm(x: &[f64], e: Exponent) -> f64 {
    let mx = x.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if mx == 0.0 {
        return 0.0;
    }
    match e {
        Exponent::Infinity => mx,
        Exponent::Finite(p) if p == 1.0 => x.iter().map(|v| v.abs()).sum(),
        Exponent::Finite(p) if p == 2.0 => {
            mx * x.iter().map(|v| (v / mx) * (v / mx)).sum::<f64>().sqrt()
        }
        Exponent::Finite(p) => {
            mx * x
                .iter()
                .map(|v| (v.abs() / mx).powf(p))
                .sum::<f64>()
                .powf(1.0 / p)
        }
    }
}

/// The Hölder norming vector: `x*` with `‖x*‖_{e'} = 1` and
/// `⟨x*, x⟩ = ‖x‖_e` (for `x ≠ 0`; zero maps to zero).
///
/// Endpoint conventions: for `e = 1` the full sign vector (zeros preserved),
/// for `e = ∞` the signed indicator of the first maximal-modulus coordinate.
pub fn holder_extremizer(x: &[f64], e: Exponent) -> Vec<f64> {
    let n = lp_norm(x, e);
    if n == 0.0 {
        return vec![0.0; x.len()];
    }
    match e {
        Exponent::Finite(p) if p == 1.0 => x.iter().map(|v| sign(*v)).collect(),
        Exponent::Infinity => {
            let mut out = vec![0.0; x.len()];
            let mut imax = 0;
            let mut best = -1.0;
            for (i, v) in x.iter().enumerate() {
                if v.abs() > best {
                    best = v.abs();
                    imax = i;
                }
            }
            out[imax] = sign(x[imax]);
            out
        }
        Exponent::Finite(p) => x
            .iter()
            .map(|v| sign(*v) * (v.abs() / n).powf(p - 1.0))
            .collect(),
    }
}

#[inline]
fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}
