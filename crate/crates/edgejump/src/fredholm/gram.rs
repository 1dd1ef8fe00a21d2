use num_complex::Complex64;
use rug::{Assign, Float};

use crate::numerics::{composite_gauss_legendre, composite_gauss_legendre_big, lu_det, lu_det_c64, BigComplex, PrecisionCtx};
use crate::specfun::{hermite_functions, hermite_functions_big};

/// Panel layout for the Gram integrals.
#[derive(Clone, Debug, PartialEq)]
pub struct GramQuad {
    pub nodes_per_panel: usize,
    /// Panel width is min(1, width_factor/√(2n+1)), a fraction of the
    /// local oscillation wavelength of the Hermite functions.
    pub width_factor: f64,
}

impl Default for GramQuad {
    fn default() -> Self {
        Self { nodes_per_panel: 32, width_factor: 4.0 }
    }
}

/// G_jk = ∫_{λ0}^∞ ψ_j ψ_k, j, k < n, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    pub n: usize,
    pub lambda0: f64,
    pub entries: Vec<f64>,
}

impl GramMatrix {
    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.entries[j * self.n + k]
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|j| self.get(j, j)).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BigGramMatrix {
    pub n: usize,
    pub lambda0: Float,
    pub entries: Vec<Vec<Float>>,
}

/// Point beyond which every ψ_k², k < n, sits below 2^{−bits} relative to
/// its peak: e^{−x²}(2x²)^{n−1} < 2^{−bits−20}.
fn envelope_tail(n: usize, bits: u32) -> f64 {
    let target = (bits as f64 + 20.0) * std::f64::consts::LN_2;
    let mut x = (2.0 * n as f64 + 1.0).sqrt();
    while x * x - (n as f64 - 1.0) * (2.0 * x * x).ln() < target {
        x += 0.25;
    }
    x
}

fn layout(n: usize, a: f64, b: f64, q: &GramQuad) -> usize {
    let width = (q.width_factor / (2.0 * n as f64 + 1.0).sqrt()).min(1.0);
    ((b - a) / width).ceil().max(1.0) as usize
}

pub fn hermite_gram(n: usize, lambda0: f64, q: &GramQuad) -> GramMatrix {
    assert!(n >= 1, "Gram matrix needs n ≥ 1");
    let mut entries = vec![0.0; n * n];
    let tail = envelope_tail(n, 53);
    let a = lambda0.max(-tail);
    if a < tail {
        let rule = composite_gauss_legendre(q.nodes_per_panel, a, tail, layout(n, a, tail, q)).expect("valid rule");
        // Neumaier-compensated sums: thousands of nodes would otherwise
        // cost several ulps on the diagonal.
        let mut comp = vec![0.0; n * n];
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let psi = hermite_functions(n, x);
            for j in 0..n {
                let wj = w * psi[j];
                for k in j..n {
                    let term = wj * psi[k];
                    let s = &mut entries[j * n + k];
                    let sum = *s + term;
                    comp[j * n + k] += if s.abs() >= term.abs() { (*s - sum) + term } else { (term - sum) + *s };
                    *s = sum;
                }
            }
        }
        for (e, c) in entries.iter_mut().zip(&comp) {
            *e += c;
        }
        for j in 0..n {
            for k in 0..j {
                entries[j * n + k] = entries[k * n + j];
            }
        }
    }
    GramMatrix { n, lambda0, entries }
}

/// The Gram matrix at `ctx` precision; the envelope tail is pushed out to
/// match.
pub fn hermite_gram_big(n: usize, lambda0: &Float, q: &GramQuad, ctx: &PrecisionCtx) -> BigGramMatrix {
    assert!(n >= 1, "Gram matrix needs n ≥ 1");
    let p = ctx.bits();
    let mut entries = vec![vec![ctx.zero(); n]; n];
    let tail = envelope_tail(n, p);
    let tail_big = ctx.real(tail);
    let a = if *lambda0 < -tail { ctx.real(-tail) } else { Float::with_val(p, lambda0) };
    if a < tail_big {
        let af = a.to_f64();
        let rule = composite_gauss_legendre_big(q.nodes_per_panel, &a, &tail_big, layout(n, af, tail, q), ctx)
            .expect("valid rule");
        let mut wj = ctx.zero();
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let psi = hermite_functions_big(n, x, ctx);
            for j in 0..n {
                wj.assign(w * &psi[j]);
                for k in j..n {
                    entries[j][k] += Float::with_val(p, &wj * &psi[k]);
                }
            }
        }
        for j in 0..n {
            for k in 0..j {
                entries[j][k] = entries[k][j].clone();
            }
        }
    }
    BigGramMatrix { n, lambda0: Float::with_val(p, lambda0), entries }
}

/// det(1 − κ²K_n) on [λ0, ∞) = det(I − κ²G).
pub fn finite_n_det(n: usize, lambda0: f64, kappa_sq: Complex64) -> Complex64 {
    let g = hermite_gram(n, lambda0, &GramQuad::default());
    let mut a: Vec<Complex64> = g.entries.iter().map(|&e| -kappa_sq * e).collect();
    for j in 0..n {
        a[j * n + j] += 1.0;
    }
    lu_det_c64(a, n)
}

pub fn finite_n_det_big(n: usize, lambda0: &Float, kappa_sq: &BigComplex, ctx: &PrecisionCtx) -> BigComplex {
    let p = ctx.bits();
    let g = hermite_gram_big(n, lambda0, &GramQuad::default(), ctx);
    let one = BigComplex::one(p);
    let m: Vec<Vec<BigComplex>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    let e = kappa_sq.scale(&g.entries[j][k]);
                    if j == k {
                        &one - &e
                    } else {
                        -e
                    }
                })
                .collect()
        })
        .collect();
    lu_det(&m, ctx).unwrap_or_else(|_| BigComplex::zero(p))
}
