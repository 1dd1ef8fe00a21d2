//! Closed forms of the asymptotic right-hand sides and sweeps that hold them
//! against finite-n data. Hankel determinants, norms and polynomial values
//! overflow f64 quickly, so those evaluators return logarithms.

mod drivers;
mod report;
mod rhs;

pub use drivers::*;
pub use report::{bounded_verdict, monotone_verdict, order_estimate, order_verdict, ReportRow, Sweep, Verdict};
pub use rhs::{
    conj13_expansion, conj13_residual, conj13_residual_log, log_gaussian_hankel, log_gaussian_hankel_big, log_h_prefactor, log_tw,
    moment_limit_check, noncrit_rhs, thm12_rhs, thm14_rhs, thm15_rhs, Thm14Rhs,
};

use num_complex::Complex64;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum AsymptError {
    #[error("β = {0} is outside the strip of validity")]
    OutOfStrip(Complex64),
    #[error("argument {0} is outside the supported range")]
    OutOfRange(f64),
    #[error("solution κ = {kappa} does not belong to β = {beta}")]
    Mismatch { beta: Complex64, kappa: Complex64 },
    #[error(transparent)]
    Painleve(#[from] crate::painleve::PainleveError),
    #[error(transparent)]
    Special(#[from] crate::specfun::SpecError),
    #[error(transparent)]
    Fredholm(#[from] crate::fredholm::FredholmError),
    #[error(transparent)]
    Weight(#[from] crate::weightlab::WeightError),
    #[error(transparent)]
    Op(#[from] crate::weightlab::OpError),
}
