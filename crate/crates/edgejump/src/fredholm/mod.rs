//! Fredholm determinants: the Airy kernel on [t, ∞) by Nyström
//! discretization, and the finite-n Hermite kernel on [λ0, ∞) through its
//! rank-n Gram matrix.

mod airy;
mod gram;

pub use airy::{airy_fredholm_det, airy_fredholm_det_detailed, airy_kernel, AiryDet, NystromConfig};
pub use gram::{
    finite_n_det, finite_n_det_big, hermite_gram, hermite_gram_big, BigGramMatrix, GramMatrix, GramQuad,
};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum FredholmError {
    #[error("tail bound {bound:e} at T = {t_trunc} exceeds tol/10")]
    TailBoundViolated { t_trunc: f64, bound: f64 },
    #[error("node doubling stalled at m = {m}, last change {change:e}")]
    NotConverged { m: usize, change: f64 },
    #[error("t = {0} is below the supported range")]
    OutOfRange(f64),
    #[error("invalid configuration: {0}")]
    BadConfig(&'static str),
}
