//! Schur-multiplier norm estimation from three independent sides: direct
//! witness search on the defining ratio, factorization certificates, and the
//! dual trace-pairing formula over dominated operators.

mod direct;
mod dominated;
mod duality;
mod factorization;
mod lpq;

pub use direct::{multiplier_norm_lower, multiplier_norm_lower_seeded, MultiplierEstimate};
pub use dominated::{dominated_norm, DominatedScaling};
pub use duality::{duality_report, duality_report_with_atoms, DualityReport};
pub use factorization::{
    certificate_value, certificate_value_sound, factorization_solve, FactorizationCertificate,
};
pub use lpq::lpq_lower;
