use rug::ops::Pow;
use rug::Float;

use crate::numerics::PrecisionCtx;

/// J_k = ∫_{λ0}^∞ x^k e^{−x²} dx for k = 0..=K.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfMomentTable {
    pub lambda0: Float,
    pub values: Vec<Float>,
}

/// Full-line moments M_k = ∫ x^k e^{−x²} dx, k = 0..=kmax.
pub fn gaussian_moments(kmax: usize, ctx: &PrecisionCtx) -> Vec<Float> {
    let p = ctx.bits();
    let mut m = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let v = match k {
            0 => ctx.pi().sqrt(),
            1 => Float::new(p),
            _ => Float::with_val(p, &m[k - 2] * (k as u32 - 1)) / 2u32,
        };
        m.push(v);
    }
    m
}

/// Upward recursion from the tail erfc value; stable for λ0 ≥ 0.
fn upward(lambda0: &Float, kmax: usize, p: u32) -> Vec<Float> {
    let pi = Float::with_val(p, rug::float::Constant::Pi);
    let e = Float::with_val(p, -Float::with_val(p, lambda0.square_ref())).exp();
    let mut j = Vec::with_capacity(kmax + 1);
    j.push(pi.sqrt() * Float::with_val(p, lambda0.erfc_ref()) / 2u32);
    if kmax >= 1 {
        j.push(Float::with_val(p, &e / 2u32));
    }
    // λ0^{k−1} e^{−λ0²}
    let mut pw = Float::with_val(p, lambda0 * &e);
    for k in 2..=kmax {
        let mut v = Float::with_val(p, &j[k - 2] * (k as u32 - 1));
        v += &pw;
        v /= 2u32;
        j.push(v);
        pw *= lambda0;
    }
    j
}

/// Half-line Gaussian moments at `ctx` precision.
///
/// For λ0 < 0 the table is assembled as M_k − (−1)^k J_k(−λ0), which avoids
/// cancellation in the recursion.
pub fn half_gauss_moments(lambda0: &Float, kmax: usize, ctx: &PrecisionCtx) -> HalfMomentTable {
    let p = ctx.bits();
    let l = Float::with_val(p, lambda0);
    let values = if l.is_sign_negative() && !l.is_zero() {
        let pos = upward(&Float::with_val(p, -&l), kmax, p);
        let full = gaussian_moments(kmax, ctx);
        pos.into_iter()
            .zip(full)
            .enumerate()
            .map(|(k, (j, m))| if k % 2 == 0 { m - j } else { m + j })
            .collect()
    } else {
        upward(&l, kmax, p)
    };
    HalfMomentTable { lambda0: l, values }
}

impl HalfMomentTable {
    /// Residual of J_k = ((k−1)J_{k−2} + λ0^{k−1}e^{−λ0²})/2 at index k ≥ 2.
    pub fn recursion_residual(&self, k: usize) -> Float {
        let p = self.lambda0.prec();
        let e = Float::with_val(p, -Float::with_val(p, self.lambda0.square_ref())).exp();
        let pw = Float::with_val(p, (&self.lambda0).pow(k as u32 - 1)) * e;
        let rhs = (Float::with_val(p, &self.values[k - 2] * (k as u32 - 1)) + pw) / 2u32;
        (rhs - &self.values[k]).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::composite_gauss_legendre_big;

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::new(256).unwrap()
    }

    #[test]
    fn half_gaussian_at_zero() {
        let c = ctx();
        let t = half_gauss_moments(&c.real(0), 4, &c);
        let sp = c.pi().sqrt();
        let close = |a: &Float, b: Float| Float::with_val(256, a - &b).abs() < 1e-70;
        assert!(close(&t.values[0], Float::with_val(256, &sp / 2u32)));
        assert!(close(&t.values[1], c.real(0.5)));
        assert!(close(&t.values[2], Float::with_val(256, &sp / 4u32)));
    }

    #[test]
    fn recursion_exact_for_nonnegative_cut() {
        let c = ctx();
        let t = half_gauss_moments(&c.real(1.5), 12, &c);
        assert!(t.values.iter().all(|v| v.is_sign_positive() && !v.is_zero()));
        for k in 2..=12 {
            assert!(t.recursion_residual(k) < Float::with_val(256, 1u32) >> 250u32);
        }
    }

    fn quad_moment(lambda0: f64, hi: f64, k: u32, c: &PrecisionCtx) -> Float {
        let rule = composite_gauss_legendre_big(30, &c.real(lambda0), &c.real(hi), 24, c).unwrap();
        let mut s = c.zero();
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let mut f = Float::with_val(c.bits(), -Float::with_val(c.bits(), x.square_ref())).exp();
            for _ in 0..k {
                f *= x;
            }
            s += f * w;
        }
        s
    }

    #[test]
    fn tail_beyond_eight_matches_quadrature() {
        let c = ctx();
        let t = half_gauss_moments(&c.real(8), 0, &c);
        let q = quad_moment(8.0, 20.0, 0, &c);
        let rel = (Float::with_val(256, &t.values[0] - &q) / &q).abs();
        assert!(rel < 1e-25, "{rel}");
    }

    #[test]
    fn quadrature_agreement_on_both_sides_of_origin() {
        let c = ctx();
        for &l in &[-2.0, 0.0, 1.5] {
            let t = half_gauss_moments(&c.real(l), 12, &c);
            for k in 0..=12u32 {
                let q = quad_moment(l, 14.0, k, &c);
                let err = Float::with_val(256, &t.values[k as usize] - &q).abs();
                assert!(err < 1e-40, "λ0={l} k={k} err={err}");
            }
        }
    }
}
