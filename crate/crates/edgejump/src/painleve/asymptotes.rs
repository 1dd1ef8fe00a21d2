use std::f64::consts::{FRAC_PI_4, LN_2};

use num_complex::Complex64;

use crate::painleve::{ASolution, PainleveError};
use crate::specfun::{gamma_complex, ln_gamma_complex};
use crate::weightlab::kappa_of_beta;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn special(e: crate::specfun::SpecError) -> PainleveError {
    PainleveError::OutOfRange(match e {
        crate::specfun::SpecError::PoleAtNonpositiveInteger(x) => x,
        _ => f64::NAN,
    })
}

/// Phase of the oscillatory t → −∞ asymptote of u(t; κ).
pub fn as_phase(t: f64, beta: Complex64) -> Result<Complex64, PainleveError> {
    let m = -t;
    let lg = ln_gamma_complex(1.0 + beta).map_err(special)? - ln_gamma_complex(1.0 - beta).map_err(special)?;
    Ok(2.0 / 3.0 * m.powf(1.5) - 1.5 * I * beta * m.ln() - 3.0 * I * beta * LN_2 + FRAC_PI_4 + 0.5 * I * lg)
}

/// (−t)^{−1/4}·√(2iβ)·sin φ(t; β) for the solution with κ the principal
/// square root of 1 − e^{−2πiβ}. The root √(2iβ) takes the sign of that κ.
pub fn as_asymptote_minus(t: f64, beta: Complex64) -> Result<Complex64, PainleveError> {
    if !(t < 0.0) {
        return Err(PainleveError::OutOfRange(t));
    }
    if beta.norm() < 1e-3 {
        return Err(PainleveError::BetaTooSmall(beta.norm()));
    }
    if beta.re.abs() >= 0.5 {
        return Err(PainleveError::OutOfRange(beta.re));
    }
    let kappa = kappa_of_beta(beta);
    let amp = kappa * (2.0 * I * beta / (kappa * kappa)).sqrt();
    Ok((-t).powf(-0.25) * amp * as_phase(t, beta)?.sin())
}

/// φ̃(t; γ) = (2/3)(−t)^{3/2} + (3/2)γ·log(−t) + 3γ·log 2 − arg Γ(1/2 + iγ).
pub fn singular_phase(t: f64, gamma: f64) -> Result<f64, PainleveError> {
    let arg = ln_gamma_complex(Complex64::new(0.5, gamma)).map_err(special)?.im;
    let m = -t;
    Ok(2.0 / 3.0 * m.powf(1.5) + 1.5 * gamma * m.ln() + 3.0 * gamma * LN_2 - arg)
}

/// Leading and subleading terms of y = u² for β = 1/2 + iγ as t → −∞.
pub fn p34_singular_asymptote(t: f64, gamma: f64) -> Result<f64, PainleveError> {
    if !(t < 0.0) {
        return Err(PainleveError::OutOfRange(t));
    }
    let ph = singular_phase(t, gamma)?;
    let (s, c) = ph.sin_cos();
    if c.abs() <= 0.15 {
        return Err(PainleveError::TooCloseToPole { cos: c });
    }
    let m = -t;
    let sub = -gamma + 0.5 * s / c + 2.0 * gamma / (c * c) + 3.0 * (12.0 * gamma * gamma - 1.0) * s / (16.0 * c.powi(3));
    Ok(m / (c * c) + sub / m.sqrt())
}

/// t → −∞ asymptote of −i·m21, the first-order coefficient of h_n; it equals
/// −v(t; κ). Re β = ±1/2 uses the singular form, everything else the
/// general oscillatory one with θ = (4/3)(−t)^{3/2} − 3iβ·log(−t) − 6iβ·log 2.
pub fn v_asymptote_minus(t: f64, beta: Complex64) -> Result<Complex64, PainleveError> {
    if !(t < 0.0) {
        return Err(PainleveError::OutOfRange(t));
    }
    let m = -t;
    if (beta.re.abs() - 0.5).abs() < 1e-12 {
        let ph = singular_phase(t, beta.im)?;
        return Ok(Complex64::new(m.sqrt() * (2.0 * beta.im - ph.tan()), 0.0));
    }
    let theta = 4.0 / 3.0 * m.powf(1.5) - 3.0 * I * beta * m.ln() - 6.0 * I * beta * LN_2;
    let g = |z: Complex64| gamma_complex(z).map_err(special);
    let osc = g(1.0 - beta)? / g(beta)? * (I * theta).exp() - g(1.0 + beta)? / g(-beta)? * (-I * theta).exp();
    Ok(-2.0 * I * beta * m.sqrt() - osc / (4.0 * I * m) - 3.0 * beta * beta / (2.0 * m))
}

/// The same asymptote written for β = iκ̃, κ̃ real.
pub fn v_asymptote_minus_imaginary(t: f64, kt: f64) -> Result<f64, PainleveError> {
    let m = -t;
    let arg = ln_gamma_complex(Complex64::new(0.0, kt)).map_err(special)?.im;
    let c = (4.0 / 3.0 * m.powf(1.5) + 3.0 * kt * m.ln() + 6.0 * kt * LN_2 - 2.0 * arg).cos();
    Ok(2.0 * kt * m.sqrt() + kt / (2.0 * m) * c + 3.0 * kt * kt / (2.0 * m))
}

/// |y″ − 4y² − 2ty − y′²/(2y)| for y = u², derivatives from dense output.
pub fn p34_residual(sol: &ASolution, t: f64) -> Result<f64, PainleveError> {
    let st = sol.state(t)?;
    let u = st.u;
    if u.norm() == 0.0 {
        return Err(PainleveError::Undefined(t));
    }
    let u2 = sol.d2u(t)?;
    let y = u * u;
    let dy = 2.0 * u * st.du;
    let d2y = 2.0 * st.du * st.du + 2.0 * u * u2;
    Ok((d2y - 4.0 * y * y - 2.0 * t * y - dy * dy / (2.0 * y)).norm())
}
