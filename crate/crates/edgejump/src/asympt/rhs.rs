use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::asympt::AsymptError;
use crate::numerics::PrecisionCtx;
use crate::painleve::ASolution;
use crate::specfun::{airy, ln_barnes_g};
use crate::weightlab::{gaussian_hankel, kappa_sq_of_beta};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// log H_n(λ0, 0) = (n/2)log 2π − (n²/2)log 2 + Σ_{k<n} log k!.
pub fn log_gaussian_hankel(n: usize) -> f64 {
    let mut s = 0.5 * n as f64 * (2.0 * PI).ln() - 0.5 * (n as f64).powi(2) * LN_2;
    let mut lf = 0.0;
    for k in 1..n {
        lf += (k as f64).ln();
        s += lf;
    }
    s
}

/// The same at `ctx` precision, as a check on the f64 sum.
pub fn log_gaussian_hankel_big(n: usize, ctx: &PrecisionCtx) -> f64 {
    gaussian_hankel(n, ctx).ln().to_f64()
}

fn check_pair(sol: &ASolution, beta: Complex64) -> Result<(), AsymptError> {
    let want = kappa_sq_of_beta(beta);
    let got = sol.kappa * sol.kappa;
    if (want - got).norm() > 1e-10 * (1.0 + want.norm()) {
        return Err(AsymptError::Mismatch { beta, kappa: sol.kappa });
    }
    Ok(())
}

/// log det(1 − κ²K_Ai|[t,∞)) along the Painlevé solution: −F(t), plus iπ
/// for each pole crossed.
pub fn log_tw(sol: &ASolution, t: f64) -> Result<Complex64, AsymptError> {
    let f = sol.state(t)?.f;
    let flip = if sol.det_sign(t) < 0.0 { I * PI } else { Complex64::new(0.0, 0.0) };
    Ok(-f + flip)
}

/// log of e^{iπβn}·H_n(λ0, 0)·det(1 − κ²K_Ai|[t,∞)).
pub fn thm12_rhs(n: usize, t: f64, beta: Complex64, sol: &ASolution) -> Result<Complex64, AsymptError> {
    if beta.re.abs() >= 0.5 {
        return Err(AsymptError::OutOfStrip(beta));
    }
    check_pair(sol, beta)?;
    Ok(I * PI * beta * n as f64 + log_gaussian_hankel(n) + log_tw(sol, t)?)
}

/// log of the bulk expansion of H_n(λ√(2n), β), |λ| < 1.
pub fn noncrit_rhs(n: usize, lambda: f64, beta: Complex64) -> Result<Complex64, AsymptError> {
    if beta.re.abs() >= 0.25 {
        return Err(AsymptError::OutOfStrip(beta));
    }
    if !(lambda.abs() < 1.0) {
        return Err(AsymptError::OutOfRange(lambda));
    }
    if beta == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(log_gaussian_hankel(n), 0.0));
    }
    let b2 = beta * beta;
    let g = ln_barnes_g(1.0 + beta)? + ln_barnes_g(1.0 - beta)?;
    let s = (1.0 - lambda * lambda).sqrt();
    Ok(log_gaussian_hankel(n) + g - 1.5 * b2 * (1.0 - lambda * lambda).ln() - b2 * (8.0 * n as f64).ln()
        + 2.0 * I * n as f64 * beta * (lambda.asin() + lambda * s))
}

/// Edge expansions of R_n, Q_n and log h_n.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thm14Rhs {
    pub r: Complex64,
    pub q: Complex64,
    /// log h_n with second-order coefficient (v² − u²)/2.
    pub log_h: Complex64,
    /// log h_n with second-order coefficient (v² + u²)/2.
    pub log_h_alt: Complex64,
}

/// log(π√(2n)·nⁿ(2e)^{−n}·e^{iπβ}), the Hermite part of h_n.
pub fn log_h_prefactor(n: usize, beta: Complex64) -> Complex64 {
    let nf = n as f64;
    Complex64::new(PI.ln() + 0.5 * (2.0 * nf).ln() + nf * nf.ln() - nf * (2.0f64.ln() + 1.0), 0.0) + I * PI * beta
}

pub fn thm14_rhs(n: usize, t: f64, sol: &ASolution) -> Result<Thm14Rhs, AsymptError> {
    let st = sol.state(t)?;
    let nf = n as f64;
    let u2 = st.u * st.u;
    let v = st.v;
    let pre = log_h_prefactor(n, sol.beta);
    let m13 = nf.powf(-1.0 / 3.0);
    let h = |c2: Complex64| pre + (1.0 - m13 * v + m13 * m13 * c2).ln();
    Ok(Thm14Rhs {
        r: nf / 2.0 - 0.5 * u2 * nf.powf(1.0 / 3.0),
        q: -u2 * nf.powf(-1.0 / 6.0) / std::f64::consts::SQRT_2,
        log_h: h((v * v - u2) / 2.0),
        log_h_alt: h((v * v + u2) / 2.0),
    })
}

/// log of (√(2π)/κ)(ne/2)^{n/2} n^{1/6} e^{tn^{1/3}} u(t; κ). At κ = 0 the
/// ratio u/κ is replaced by its limit Ai(t).
pub fn thm15_rhs(n: usize, t: f64, sol: &ASolution) -> Result<Complex64, AsymptError> {
    let nf = n as f64;
    let base = 0.5 * (2.0 * PI).ln() + 0.5 * nf * (nf * std::f64::consts::E / 2.0).ln() + nf.ln() / 6.0 + t * nf.cbrt();
    let ratio = if sol.kappa == Complex64::new(0.0, 0.0) {
        Complex64::new(airy(t).0, 0.0)
    } else {
        sol.u(t)? / sol.kappa
    };
    Ok(base + ratio.ln())
}

/// Residual of the large-gap expansion of log det(1 − κ²K_Ai|[t,∞)),
/// with the imaginary part taken modulo 2π.
pub fn conj13_residual(t: f64, beta: Complex64, det: Complex64) -> Result<f64, AsymptError> {
    if !(t < 0.0) {
        return Err(AsymptError::OutOfRange(t));
    }
    if beta == Complex64::new(0.0, 0.0) {
        return Ok((det.ln()).norm());
    }
    conj13_residual_log(t, beta, det.ln())
}

/// −(4/3)iβ(−t)^{3/2} − (3/2)β²log(−t) + log(G(1+β)G(1−β)) − 3β²log 2.
pub fn conj13_expansion(t: f64, beta: Complex64) -> Result<Complex64, AsymptError> {
    if !(t < 0.0) {
        return Err(AsymptError::OutOfRange(t));
    }
    let m = -t;
    let b2 = beta * beta;
    let g = ln_barnes_g(1.0 + beta)? + ln_barnes_g(1.0 - beta)?;
    Ok(-4.0 / 3.0 * I * beta * m.powf(1.5) - 1.5 * b2 * m.ln() + g - 3.0 * b2 * LN_2)
}

/// As [`conj13_residual`] but from log det directly, e.g. −F(t).
pub fn conj13_residual_log(t: f64, beta: Complex64, log_det: Complex64) -> Result<f64, AsymptError> {
    let r = log_det - conj13_expansion(t, beta)?;
    let im = r.im - 2.0 * PI * (r.im / (2.0 * PI)).round();
    Ok(Complex64::new(r.re, im).norm())
}

/// (∫_t^∞ (τ − t)Ai(τ)² dτ by quadrature, its closed form).
pub fn moment_limit_check(t: f64) -> (f64, f64) {
    let b = t.max(0.0) + 20.0;
    let panels = ((b - t) / 0.5).ceil() as usize;
    let rule = crate::numerics::composite_gauss_legendre(30, t, b, panels).expect("valid rule");
    let quad = rule.integrate(|x| (x - t) * airy(x).0.powi(2));
    let (ai, aip) = airy(t);
    (quad, (2.0 * t * t * ai * ai - ai * aip - 2.0 * t * aip * aip) / 3.0)
}
