//! The duality report: certified lower bounds from the direct and dual
//! routes sandwiched against the factorization upper bound.

use crate::exponent::ExponentPair;
use crate::matrix::Matrix;
use crate::opnorm::SearchConfig;
use crate::{Error, Result};

use super::direct::{multiplier_norm_lower, MultiplierEstimate};
use super::factorization::{
    certificate_value_sound, factorization_solve, FactorizationCertificate,
};
use super::lpq::lpq_lower;

/// Sandwich `max(direct, dual) ≤ ‖T_m‖ ≤ certificate` with the relative gap.
#[derive(Clone, Debug)]
pub struct DualityReport {
    pub lower: f64,
    pub upper: f64,
    pub gap: f64,
    pub direct: MultiplierEstimate,
    pub dual_lower: f64,
    pub certificate: FactorizationCertificate,
}

/// Runs all three routes with the default atom budget `2·max(rows, cols)`.
pub fn duality_report(m: &Matrix, pq: ExponentPair, cfg: &SearchConfig) -> Result<DualityReport> {
    duality_report_with_atoms(m, pq, cfg, 2 * m.rows().max(m.cols()))
}

/// Runs all three routes: (a) direct witness lower bound, (b) the dual
/// trace-pairing lower bound at the substituted pair `(q, p')`, (c) the
/// factorization certificate upper bound. Errors when the sandwich inverts
/// beyond tolerance, which would signal a bug rather than user error.
pub fn duality_report_with_atoms(
    m: &Matrix,
    pq: ExponentPair,
    cfg: &SearchConfig,
    atoms: usize,
) -> Result<DualityReport> {
    pq.require_regime()?;
    let direct = multiplier_norm_lower(m, pq, cfg)?;
    let dual_lower = lpq_lower(m, pq.dual_substitution(), cfg)?;
    let certificate = factorization_solve(m, pq, atoms, cfg)?;
    let upper = certificate_value_sound(&certificate, pq);
    let lower = direct.lower.max(dual_lower);
    if lower > upper + 1e-6 {
        return Err(Error::Inconsistent(format!(
            "sandwich violated: lower {lower} > upper {upper} at {pq}"
        )));
    }
    let gap = (upper - lower) / upper.max(1e-12);
    Ok(DualityReport {
        lower,
        upper,
        gap,
        direct,
        dual_lower,
        certificate,
    })
}
