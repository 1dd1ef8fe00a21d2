//! The Ablowitz–Segur family u(t; κ) of Painlevé II, u″ = tu + 2u³ with
//! u ~ κ·Ai(t) as t → +∞, together with v = ∫_t^∞ u² and
//! F = ∫_t^∞ (τ−t)u², real-pole traversal and the t → −∞ asymptotes.

mod asymptotes;
mod laurent;
mod solve;

pub use asymptotes::{
    as_asymptote_minus, as_phase, p34_residual, p34_singular_asymptote, singular_phase, v_asymptote_minus,
    v_asymptote_minus_imaginary,
};
pub use laurent::{traverse_pole, Crossing, LaurentPole};
pub use solve::{solve_as, solve_as_with, ASolution, AsOptions, AsState};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum PainleveError {
    #[error("u blows up near t = {0}")]
    PoleEncountered(f64),
    #[error("Laurent fit near t = {t} misses by {residual:e}")]
    FitFailure { t: f64, residual: f64 },
    #[error("|cos φ̃| = {cos} is too small for the singular asymptote")]
    TooCloseToPole { cos: f64 },
    #[error("κ = ±1 is the Hastings–McLeod solution, not handled here")]
    HastingsMcLeod,
    #[error("argument {0} is outside the supported range")]
    OutOfRange(f64),
    #[error("|β| = {0} is too small for the phase formula")]
    BetaTooSmall(f64),
    #[error("y = u² vanishes at t = {0}")]
    Undefined(f64),
    #[error("integration failed: {0}")]
    Integration(String),
}
