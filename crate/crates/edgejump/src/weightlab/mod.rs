//! Moments, Hankel determinants and monic orthogonal polynomials of the
//! Gaussian weight with a jump at λ0.

mod opsystem;
mod params;

pub use opsystem::{
    agreed_bits, build_op_system, build_op_system_certified, diff_identity_residual, gaussian_hankel, moments,
    CertifiedSystem, DiffIdentity, OPSystem, OpError,
};
pub use params::{beta_of_kappa, edge_lambda0, kappa_of_beta, kappa_sq_of_beta, CutPoint, WeightError, WeightParams};
