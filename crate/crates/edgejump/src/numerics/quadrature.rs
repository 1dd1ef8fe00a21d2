//! Gauss–Legendre rules in double and arbitrary precision.

use rug::{Assign, Float};

use crate::numerics::PrecisionCtx;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub interval: (f64, f64),
}

impl QuadratureRule {
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BigQuadratureRule {
    pub nodes: Vec<Float>,
    pub weights: Vec<Float>,
    pub interval: (Float, Float),
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum QuadratureError {
    #[error("node count must be positive")]
    NoNodes,
    #[error("interval [{0}, {1}] is empty or not finite")]
    BadInterval(f64, f64),
}

/// Legendre P_m and P_m′ at x by the three-term recurrence.
fn legendre(m: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Nodes on (−1, 1) in increasing order with their weights.
fn reference_rule(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; m];
    let mut ws = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(m, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(m, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[m - 1 - i] = x;
        ws[m - 1 - i] = w;
        xs[i] = -x;
        ws[i] = w;
    }
    if m % 2 == 1 {
        xs[m / 2] = 0.0;
    }
    (xs, ws)
}

/// m-point Gauss–Legendre rule on [a, b], exact for polynomials of degree ≤ 2m − 1.
pub fn gauss_legendre(m: usize, a: f64, b: f64) -> Result<QuadratureRule, QuadratureError> {
    if m == 0 {
        return Err(QuadratureError::NoNodes);
    }
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(QuadratureError::BadInterval(a, b));
    }
    let (xs, ws) = reference_rule(m);
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    Ok(QuadratureRule {
        nodes: xs.iter().map(|x| c + h * x).collect(),
        weights: ws.iter().map(|w| h * w).collect(),
        interval: (a, b),
    })
}

/// `panels` equal sub-intervals of [a, b], each carrying an m-point rule.
pub fn composite_gauss_legendre(m: usize, a: f64, b: f64, panels: usize) -> Result<QuadratureRule, QuadratureError> {
    let base = gauss_legendre(m, -1.0, 1.0)?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(QuadratureError::BadInterval(a, b));
    }
    let panels = panels.max(1);
    let w = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(m * panels);
    let mut weights = Vec::with_capacity(m * panels);
    for p in 0..panels {
        let lo = a + w * p as f64;
        let c = lo + 0.5 * w;
        for (x, wt) in base.nodes.iter().zip(&base.weights) {
            nodes.push(c + 0.5 * w * x);
            weights.push(0.5 * w * wt);
        }
    }
    Ok(QuadratureRule { nodes, weights, interval: (a, b) })
}

/// Legendre P_m(x) and P_m′(x) at big precision.
fn legendre_big(m: usize, x: &Float, p0: &mut Float, p1: &mut Float, p2: &mut Float, dp: &mut Float) {
    p0.assign(1u32);
    p1.assign(x);
    for k in 2..=m as u32 {
        // p2 = ((2k−1)·x·p1 − (k−1)·p0)/k
        p2.assign(x * &*p1);
        *p2 *= 2 * k - 1;
        *p0 *= k - 1;
        *p2 -= &*p0;
        *p2 /= k;
        std::mem::swap(p0, p1);
        std::mem::swap(p1, p2);
    }
    // dp = m·(x·p1 − p0)/(x² − 1)
    dp.assign(x * &*p1);
    *dp -= &*p0;
    *dp *= m as u32;
    p2.assign(x.square_ref());
    *p2 -= 1u32;
    *dp /= &*p2;
}

/// m-point Gauss–Legendre rule on [a, b] with nodes and weights at `ctx` precision.
///
/// Double-precision nodes are polished by Newton's method in the working
/// precision.
pub fn gauss_legendre_big(m: usize, a: &Float, b: &Float, ctx: &PrecisionCtx) -> Result<BigQuadratureRule, QuadratureError> {
    if m == 0 {
        return Err(QuadratureError::NoNodes);
    }
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(QuadratureError::BadInterval(a.to_f64(), b.to_f64()));
    }
    let prec = ctx.bits();
    let (xs, _) = reference_rule(m);
    let mut ref_nodes = vec![Float::new(prec); m];
    let mut ref_weights = vec![Float::new(prec); m];
    let (mut p0, mut p1, mut p2, mut dp) = (Float::new(prec), Float::new(prec), Float::new(prec), Float::new(prec));
    let mut dx = Float::new(prec);
    let tol = Float::with_val(prec, 1u32) >> (prec - 4);
    for i in m / 2..m {
        let mut x = Float::with_val(prec, xs[i]);
        if m % 2 == 1 && i == m / 2 {
            x.assign(0u32);
        } else {
            for _ in 0..64 {
                legendre_big(m, &x, &mut p0, &mut p1, &mut p2, &mut dp);
                dx.assign(&p1 / &dp);
                x -= &dx;
                if dx.clone().abs() <= tol {
                    break;
                }
            }
        }
        legendre_big(m, &x, &mut p0, &mut p1, &mut p2, &mut dp);
        // w = 2/((1 − x²)·P′²)
        let mut w = Float::with_val(prec, x.square_ref());
        w = Float::with_val(prec, 1u32 - &w);
        w *= Float::with_val(prec, dp.square_ref());
        w = Float::with_val(prec, 2u32 / &w);
        ref_nodes[i] = x.clone();
        ref_weights[i] = w.clone();
        ref_nodes[m - 1 - i] = Float::with_val(prec, -&x);
        ref_weights[m - 1 - i] = w;
    }
    let half = Float::with_val(prec, b - a) / 2u32;
    let mid = Float::with_val(prec, a + b) / 2u32;
    Ok(BigQuadratureRule {
        nodes: ref_nodes.iter().map(|x| Float::with_val(prec, x * &half) + &mid).collect(),
        weights: ref_weights.iter().map(|w| Float::with_val(prec, w * &half)).collect(),
        interval: (Float::with_val(prec, a), Float::with_val(prec, b)),
    })
}

/// Composite big-float rule: `panels` equal sub-intervals of [a, b].
pub fn composite_gauss_legendre_big(
    m: usize,
    a: &Float,
    b: &Float,
    panels: usize,
    ctx: &PrecisionCtx,
) -> Result<BigQuadratureRule, QuadratureError> {
    let prec = ctx.bits();
    let one = Float::with_val(prec, 1u32);
    let base = gauss_legendre_big(m, &Float::with_val(prec, -&one), &one, ctx)?;
    let panels = panels.max(1);
    let width = Float::with_val(prec, b - a) / panels as u32;
    let half = Float::with_val(prec, &width / 2u32);
    let mut nodes = Vec::with_capacity(m * panels);
    let mut weights = Vec::with_capacity(m * panels);
    for p in 0..panels {
        let mut c = Float::with_val(prec, &width * p as u32);
        c += a;
        c += &half;
        for (x, w) in base.nodes.iter().zip(&base.weights) {
            nodes.push(Float::with_val(prec, x * &half) + &c);
            weights.push(Float::with_val(prec, w * &half));
        }
    }
    Ok(BigQuadratureRule { nodes, weights, interval: (Float::with_val(prec, a), Float::with_val(prec, b)) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rug::ops::Pow;

    #[test]
    fn small_rules() {
        let r = gauss_legendre(1, -1.0, 1.0).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert_eq!(r.weights, vec![2.0]);
        let r = gauss_legendre(2, -1.0, 1.0).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((r.nodes[0] + s).abs() < 1e-15 && (r.nodes[1] - s).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-15 && (r.weights[1] - 1.0).abs() < 1e-15);
        let r = gauss_legendre(3, -1.0, 1.0).unwrap();
        assert!((r.integrate(|x| x.powi(4)) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(gauss_legendre(0, 0.0, 1.0), Err(QuadratureError::NoNodes));
        assert!(gauss_legendre(3, 1.0, 1.0).is_err());
    }

    #[test]
    fn nodes_sorted_inside_and_weights_sum() {
        for m in [1, 2, 5, 40, 101] {
            let r = gauss_legendre(m, -3.0, 7.0).unwrap();
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
            assert!(r.nodes[0] > -3.0 && r.nodes[m - 1] < 7.0);
            assert!(r.weights.iter().all(|&w| w > 0.0));
            let s: f64 = r.weights.iter().sum();
            assert!((s - 10.0).abs() < 1e-12);
        }
    }

    #[test]
    fn big_rule_is_exact_at_high_degree() {
        let ctx = PrecisionCtx::new(256).unwrap();
        let m = 12;
        let r = gauss_legendre_big(m, &ctx.real(0), &ctx.real(2), &ctx).unwrap();
        let sum: Float = r.weights.iter().fold(ctx.zero(), |acc, w| acc + w);
        assert!(Float::with_val(256, &sum - 2u32).abs() < Float::with_val(256, 1u32) >> 248u32);
        // ∫_0^2 x^23 dx = 2^24/24
        let mut s = ctx.zero();
        for (x, w) in r.nodes.iter().zip(&r.weights) {
            s += Float::with_val(256, x.pow(23u32)) * w;
        }
        let want = Float::with_val(256, 1u32 << 24) / 24u32;
        let rel = (Float::with_val(256, &s - &want) / &want).abs();
        assert!(rel < Float::with_val(256, 1u32) >> 240u32);
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn composite_big_matches_exp_integral() {
        let ctx = PrecisionCtx::new(200).unwrap();
        let r = composite_gauss_legendre_big(20, &ctx.real(-1), &ctx.real(3), 4, &ctx).unwrap();
        let mut s = ctx.zero();
        for (x, w) in r.nodes.iter().zip(&r.weights) {
            s += Float::with_val(200, x.exp_ref()) * w;
        }
        let want = ctx.real(3).exp() - ctx.real(-1).exp();
        assert!(Float::with_val(200, &s - &want).abs() < 1e-50);
    }

    proptest! {
        #[test]
        fn exact_on_random_polynomials(m in 1usize..20, coeffs in proptest::collection::vec(-1.0f64..1.0, 40), a in -3.0f64..0.0, len in 0.1f64..4.0) {
            let b = a + len;
            let r = gauss_legendre(m, a, b).unwrap();
            let deg = 2 * m - 1;
            let c = &coeffs[..=deg];
            let poly = |x: f64| c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci);
            let exact: f64 = c.iter().enumerate().map(|(k, ci)| ci * (b.powi(k as i32 + 1) - a.powi(k as i32 + 1)) / (k as f64 + 1.0)).sum();
            let scale: f64 = c.iter().enumerate().map(|(k, ci)| ci.abs() * (a.abs().max(b.abs())).powi(k as i32 + 1)).sum::<f64>() + 1.0;
            prop_assert!((r.integrate(poly) - exact).abs() <= 2f64.powi(16 - 53) * scale);
        }
    }
}
