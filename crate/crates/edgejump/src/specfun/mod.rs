//! Airy functions, complex Γ and Barnes G, half-line Gaussian moments and
//! orthonormal Hermite functions.

mod airy;
mod gamma;
mod hermite;
mod moments;

pub use airy::{airy, airy_ai, airy_ai_prime, airy_origin_constants, airy_pair};
pub use gamma::{barnes_g, gamma_complex, ln_barnes_g, ln_gamma_complex, ZETA_PRIME_MINUS_ONE};
pub use hermite::{hermite_functions, hermite_functions_big, hermite_orthonormal};
pub use moments::{gaussian_moments, half_gauss_moments, HalfMomentTable};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("Airy evaluation at x = {x} needs {guard_bits} guard bits")]
    PrecisionExhausted { x: f64, guard_bits: u64 },
    #[error("pole of Γ at {0}")]
    PoleAtNonpositiveInteger(f64),
    #[error("argument out of domain: {0}")]
    OutOfDomain(String),
}
