//! Hermite polynomials orthonormal for e^{−x²}, and the matching Hermite
//! functions ψ_k(x) = H_k(x)e^{−x²/2}.

use rug::Float;

use crate::numerics::PrecisionCtx;

const PI_M14: f64 = 0.751_125_544_464_942_5;

/// H_k(x) with ∫ H_j H_k e^{−x²} dx = δ_jk.
pub fn hermite_orthonormal(k: usize, x: f64) -> f64 {
    let mut h0 = PI_M14;
    if k == 0 {
        return h0;
    }
    let mut h1 = std::f64::consts::SQRT_2 * x * h0;
    for j in 1..k {
        let jf = j as f64;
        let h2 = (2.0 / (jf + 1.0)).sqrt() * x * h1 - (jf / (jf + 1.0)).sqrt() * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// ψ_0(x), …, ψ_{n−1}(x).
///
/// The recurrence runs on rescaled values with a separate logarithmic
/// scale, so large |x| neither underflows the Gaussian factor nor overflows
/// the polynomial.
pub fn hermite_functions(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    const BIG: f64 = 1e150;
    let mut log_scale = -0.5 * x * x;
    let (mut h0, mut h1) = (0.0, PI_M14);
    for k in 0..n {
        if k > 0 {
            let kf = (k - 1) as f64;
            let h2 = (2.0 / (kf + 1.0)).sqrt() * x * h1 - (kf / (kf + 1.0)).sqrt() * h0;
            h0 = h1;
            h1 = h2;
        }
        if h1.abs() > BIG {
            h0 /= BIG;
            h1 /= BIG;
            log_scale += BIG.ln();
        }
        out.push(if h1 == 0.0 { 0.0 } else { h1 * log_scale.exp() });
    }
    out
}

/// ψ_0(x), …, ψ_{n−1}(x) at `ctx` precision.
pub fn hermite_functions_big(n: usize, x: &Float, ctx: &PrecisionCtx) -> Vec<Float> {
    let p = ctx.bits();
    let mut out: Vec<Float> = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    let g = Float::with_val(p, -Float::with_val(p, x.square_ref()) / 2u32).exp();
    let pi = ctx.pi();
    out.push(Float::with_val(p, pi.sqrt().sqrt().recip_ref()) * g);
    for k in 1..n {
        let kf = (k - 1) as u32;
        let a = Float::with_val(p, 2u32) / (kf + 1);
        let mut v = Float::with_val(p, a.sqrt() * x) * &out[k - 1];
        if k >= 2 {
            let b = (Float::with_val(p, kf) / (kf + 1)).sqrt();
            v -= b * &out[k - 2];
        }
        out.push(v);
    }
    out
}
