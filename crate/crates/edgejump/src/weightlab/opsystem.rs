use rug::{Assign, Float};

use crate::numerics::{BigComplex, PrecisionCtx};
use crate::specfun::{gaussian_moments, half_gauss_moments};
use crate::weightlab::WeightParams;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum OpError {
    #[error("leading Hankel minor H_{0} vanishes at this (λ0, β)")]
    SingularMinor(usize),
    #[error("degree {k} exceeds the system size {n}")]
    DegreeTooLarge { k: usize, n: usize },
}

/// μ_j = e^{iπβ}(M_j − J_j(λ0)) + e^{−iπβ}J_j(λ0) for j = 0..=jmax.
pub fn moments(params: &WeightParams, jmax: usize, ctx: &PrecisionCtx) -> Vec<BigComplex> {
    let p = ctx.bits();
    let l0 = params.lambda0(ctx);
    let full = gaussian_moments(jmax, ctx);
    let half = half_gauss_moments(&l0, jmax, ctx).values;
    let plus = params.beta_big(ctx).exp_i_pi();
    let minus = plus.recip();
    full.iter()
        .zip(&half)
        .map(|(m, j)| {
            let left = Float::with_val(p, m - j);
            let mut z = plus.scale(&left);
            z = &z + &minus.scale(j);
            z
        })
        .collect()
}

/// Real moments when β is purely imaginary, where both jump factors are real.
fn real_moments(params: &WeightParams, jmax: usize, ctx: &PrecisionCtx) -> Vec<Float> {
    let p = ctx.bits();
    let l0 = params.lambda0(ctx);
    let full = gaussian_moments(jmax, ctx);
    let half = half_gauss_moments(&l0, jmax, ctx).values;
    // e^{iπ·ib} = e^{−πb}
    let plus = Float::with_val(p, -Float::with_val(p, ctx.pi() * params.beta.im)).exp();
    let minus = Float::with_val(p, plus.recip_ref());
    full.iter()
        .zip(&half)
        .map(|(m, j)| Float::with_val(p, m - j) * &plus + Float::with_val(p, j * &minus))
        .collect()
}

/// Scalars the Hankel elimination can run over.
trait Elim: Clone {
    fn sub_mul(&mut self, a: &Self, b: &Self, tmp: &mut Float);
    fn quot(&self, d: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn mag(&self) -> Float;
}

impl Elim for Float {
    fn sub_mul(&mut self, a: &Self, b: &Self, tmp: &mut Float) {
        tmp.assign(a * b);
        *self -= &*tmp;
    }
    fn quot(&self, d: &Self) -> Self {
        Float::with_val(self.prec(), self / d)
    }
    fn mul(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self * o)
    }
    fn mag(&self) -> Float {
        Float::with_val(self.prec(), self.abs_ref())
    }
}

impl Elim for BigComplex {
    fn sub_mul(&mut self, a: &Self, b: &Self, tmp: &mut Float) {
        self.sub_mul_assign(a, b, tmp);
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn mag(&self) -> Float {
        self.l1()
    }
}

struct Factor<S> {
    pivots: Vec<S>,
    /// Strictly lower part of the unit lower factor, row by row.
    lower: Vec<Vec<S>>,
}

/// Symmetric elimination without pivoting: A = L·D·Lᵀ for the Hankel matrix
/// A_ij = μ_{i+j}, i, j < size. The pivots are h_0, h_1, … and the rows of
/// L⁻¹ are the monic orthogonal polynomials.
///
/// A pivot below 2^{−bits/2} of `scale[k]` counts as a vanishing minor.
fn ldl<S: Elim>(mu: &[S], size: usize, scale: &[Float], bits: u32) -> Result<Factor<S>, OpError> {
    let mut a: Vec<Vec<S>> = (0..size).map(|i| (0..=i).map(|j| mu[i + j].clone()).collect()).collect();
    let mut pivots = Vec::with_capacity(size);
    let mut lower: Vec<Vec<S>> = (0..size).map(|i| Vec::with_capacity(i)).collect();
    let mut tmp = Float::new(bits);
    let cut = Float::with_val(bits, 1u32) >> (bits / 2);
    for k in 0..size {
        let d = a[k][k].clone();
        let dm = d.mag();
        if dm.is_zero() || dm < Float::with_val(bits, &scale[k] * &cut) {
            return Err(OpError::SingularMinor(k + 1));
        }
        let col: Vec<S> = (k + 1..size).map(|i| a[i][k].clone()).collect();
        for (off, c) in col.iter().enumerate() {
            lower[k + 1 + off].push(c.quot(&d));
        }
        for i in k + 1..size {
            let l = &lower[i][k];
            for j in k + 1..=i {
                a[i][j].sub_mul(l, &col[j - k - 1], &mut tmp);
            }
        }
        pivots.push(d);
    }
    Ok(Factor { pivots, lower })
}

/// Monic orthogonal polynomial data for the jump weight up to degree N.
#[derive(Clone, Debug)]
pub struct OPSystem {
    pub params: WeightParams,
    pub n_max: usize,
    pub ctx: PrecisionCtx,
    pub lambda0: Float,
    /// μ_0..μ_{2N+2}; the two extra moments feed H_{N+2} and Q_N.
    pub moments: Vec<BigComplex>,
    /// H_0..H_{N+2}.
    pub hankel: Vec<BigComplex>,
    /// h_0..h_{N+1}.
    pub norms: Vec<BigComplex>,
    /// R_0..R_N with R_0 = 0.
    pub r: Vec<BigComplex>,
    /// Q_0..Q_N.
    pub q: Vec<BigComplex>,
    lower: Vec<Vec<BigComplex>>,
}

/// Gaussian norms √π·k!·2^{−k}, inflated by the larger jump factor.
fn pivot_scale(params: &WeightParams, size: usize, ctx: &PrecisionCtx) -> Vec<Float> {
    let bits = ctx.bits();
    let amp = (std::f64::consts::PI * params.beta.im).abs().exp();
    let mut h = Float::with_val(bits, ctx.pi().sqrt() * amp);
    let mut out = Vec::with_capacity(size);
    for k in 0..size {
        if k > 0 {
            h *= k as u32;
            h /= 2u32;
        }
        out.push(h.clone());
    }
    out
}

/// Builds the system by one LDLᵀ sweep over the (N+2)×(N+2) Hankel matrix.
///
/// Purely imaginary β keeps every moment real, so the sweep runs in real
/// arithmetic there.
pub fn build_op_system(params: &WeightParams, n: usize, ctx: &PrecisionCtx) -> Result<OPSystem, OpError> {
    let size = n + 2;
    let jmax = 2 * size - 2;
    let bits = ctx.bits();
    let scale = pivot_scale(params, size, ctx);
    let (mu, f) = if params.beta.re == 0.0 {
        let mu = real_moments(params, jmax, ctx);
        let f = ldl(&mu, size, &scale, bits)?;
        let big = |v: Vec<Float>| v.into_iter().map(BigComplex::from_real).collect::<Vec<_>>();
        let lower = f.lower.into_iter().map(big).collect();
        (big(mu), Factor { pivots: big(f.pivots), lower })
    } else {
        let mu = moments(params, jmax, ctx);
        let f = ldl(&mu, size, &scale, bits)?;
        (mu, f)
    };
    let mut hankel = Vec::with_capacity(size + 1);
    hankel.push(BigComplex::one(bits));
    for d in &f.pivots {
        let next = hankel.last().unwrap().mul(d);
        hankel.push(next);
    }
    let mut r = vec![BigComplex::zero(bits)];
    for k in 1..=n {
        r.push(f.pivots[k].quot(&f.pivots[k - 1]));
    }
    // Q_k = c^{(k)}_{k−1} − c^{(k+1)}_k, and the subleading monic coefficient
    // of p_k is −L_{k,k−1}.
    let sub = |k: usize| if k == 0 { BigComplex::zero(bits) } else { f.lower[k][k - 1].clone() };
    let q = (0..=n).map(|k| &sub(k + 1) - &sub(k)).collect();
    Ok(OPSystem {
        params: params.clone(),
        n_max: n,
        ctx: *ctx,
        lambda0: params.lambda0(ctx),
        moments: mu,
        hankel,
        norms: f.pivots,
        r,
        q,
        lower: f.lower,
    })
}

impl OPSystem {
    /// Monic coefficients c^{(k)}_0..c^{(k)}_k for k = 0..=N+1, as rows of L⁻¹.
    pub fn coefficient_rows(&self) -> Vec<Vec<BigComplex>> {
        let bits = self.ctx.bits();
        let mut tmp = Float::new(bits);
        let mut rows = Vec::with_capacity(self.n_max + 2);
        for k in 0..self.n_max + 2 {
            let mut w = vec![BigComplex::zero(bits); k + 1];
            w[k] = BigComplex::one(bits);
            for i in (0..k).rev() {
                let mut s = BigComplex::zero(bits);
                for j in i + 1..=k {
                    s.sub_mul_assign(&w[j], &self.lower[j][i], &mut tmp);
                }
                w[i] = s;
            }
            rows.push(w);
        }
        rows
    }

    /// p_k(x) from the three-term recurrence, k ≤ N+1.
    pub fn eval_pn(&self, k: usize, x: &Float) -> Result<BigComplex, OpError> {
        Ok(self.eval_pair(k, x)?.0[1].clone())
    }

    /// ([p_{k−1}, p_k], [p′_{k−1}, p′_k]) at x.
    pub fn eval_pair(&self, k: usize, x: &Float) -> Result<([BigComplex; 2], [BigComplex; 2]), OpError> {
        if k > self.n_max + 1 {
            return Err(OpError::DegreeTooLarge { k, n: self.n_max });
        }
        let bits = self.ctx.bits();
        let xb = BigComplex::from_real(Float::with_val(bits, x));
        let mut p = [BigComplex::zero(bits), BigComplex::one(bits)];
        let mut d = [BigComplex::zero(bits), BigComplex::zero(bits)];
        for j in 0..k {
            let a = &xb - &self.q[j];
            let pn = &(&a * &p[1]) - &(&self.r[j] * &p[0]);
            let dn = &(&(&a * &d[1]) + &p[1]) - &(&self.r[j] * &d[0]);
            p = [std::mem::replace(&mut p[1], pn.clone()), pn];
            d = [std::mem::replace(&mut d[1], dn.clone()), dn];
        }
        Ok((p, d))
    }

    /// p_k(x) from the coefficient table by Horner.
    pub fn eval_pn_coeffs(&self, rows: &[Vec<BigComplex>], k: usize, x: &Float) -> BigComplex {
        let bits = self.ctx.bits();
        let xb = BigComplex::from_real(Float::with_val(bits, x));
        let mut acc = BigComplex::zero(bits);
        for c in rows[k].iter().rev() {
            acc = &(&acc * &xb) + c;
        }
        acc
    }

    /// |Q_n + h_n⁻¹ p_n(λ0)² e^{−λ0²} sinh(iπβ)|.
    pub fn qn_jump_identity_residual(&self, n: usize) -> Result<Float, OpError> {
        let bits = self.ctx.bits();
        if n > self.n_max {
            return Err(OpError::DegreeTooLarge { k: n, n: self.n_max });
        }
        let pn = self.eval_pn(n, &self.lambda0)?;
        let g = gauss_factor(&self.lambda0, bits);
        let e = self.params.beta_big(&self.ctx).exp_i_pi();
        let sinh = (&e - &e.recip()).scale(&Float::with_val(bits, 0.5));
        let term = (&(&pn.square() * &sinh) / &self.norms[n]).scale(&g);
        Ok((&self.q[n] + &term).abs())
    }

    /// log H_k by summing log h_j, continuous in the branch of each factor.
    pub fn log_hankel(&self, k: usize) -> BigComplex {
        let bits = self.ctx.bits();
        let mut s = BigComplex::zero(bits);
        for h in &self.norms[..k] {
            s = &s + &h.ln();
        }
        s
    }
}

fn gauss_factor(x: &Float, bits: u32) -> Float {
    Float::with_val(bits, -Float::with_val(bits, x.square_ref())).exp()
}

/// (2π)^{n/2} 2^{−n²/2} ∏_{k=1}^{n−1} k!, the Hankel determinant of e^{−x²}.
pub fn gaussian_hankel(n: usize, ctx: &PrecisionCtx) -> Float {
    let bits = ctx.bits();
    let root = Float::with_val(bits, ctx.pi() * 2u32).sqrt();
    let mut out = Float::with_val(bits, 1u32);
    let mut fact = Float::with_val(bits, 1u32);
    for k in 0..n {
        if k >= 1 {
            fact *= k as u32;
            out *= &fact;
        }
        out *= &root;
    }
    let half_sq = Float::with_val(bits, (n as u64 * n as u64) as f64 / 2.0);
    out * Float::with_val(bits, -half_sq).exp2()
}

/// Left side, right side and residual of the λ0-derivative identity for log H_n.
#[derive(Clone, Debug)]
pub struct DiffIdentity {
    pub lhs: BigComplex,
    pub rhs: BigComplex,
    pub residual: Float,
}

/// Central difference of log H_n in λ0 against
/// (2i/h_{n−1})(p′_n p_{n−1} − p_n p′_{n−1})(λ0)·sin(πβ)·e^{−λ0²}.
///
/// `delta` defaults to 2^{−bits/3}.
pub fn diff_identity_residual(
    params: &WeightParams,
    n: usize,
    delta: Option<&Float>,
    ctx: &PrecisionCtx,
) -> Result<DiffIdentity, OpError> {
    let bits = ctx.bits();
    let n_sys = n.saturating_sub(1);
    let delta = match delta {
        Some(d) => Float::with_val(bits, d),
        None => Float::with_val(bits, 1u32) >> (bits / 3),
    };
    let l0 = params.lambda0(ctx);
    let shifted = |s: &Float| {
        WeightParams::direct_big(params.beta, Float::with_val(bits, &l0 + s)).expect("finite shift")
    };
    let up = build_op_system(&shifted(&delta), n_sys, ctx)?;
    let down = build_op_system(&shifted(&Float::with_val(bits, -&delta)), n_sys, ctx)?;
    let ratio = &up.hankel[n] / &down.hankel[n];
    let lhs = ratio.ln().scale(&Float::with_val(bits, Float::with_val(bits, &delta * 2u32).recip_ref()));

    let sys = build_op_system(params, n_sys, ctx)?;
    let (p, d) = sys.eval_pair(n, &l0)?;
    let wr = &(&d[1] * &p[0]) - &(&p[1] * &d[0]);
    let e = params.beta_big(ctx).exp_i_pi();
    // 2i·sin(πβ) = e^{iπβ} − e^{−iπβ}
    let two_i_sin = &e - &e.recip();
    let rhs = (&(&wr * &two_i_sin) / &sys.norms[n - 1]).scale(&gauss_factor(&l0, bits));
    let residual = (&lhs - &rhs).abs();
    Ok(DiffIdentity { lhs, rhs, residual })
}

/// Number of leading bits on which `a` and `b` agree, relative to max(|b|, floor).
pub fn agreed_bits(a: &BigComplex, b: &BigComplex, floor: &Float) -> u32 {
    let prec = a.prec().min(b.prec());
    let diff = (a - b).abs();
    if diff.is_zero() {
        return prec;
    }
    let mut s = b.abs();
    if s < *floor {
        s = Float::with_val(s.prec(), floor);
    }
    let rel = Float::with_val(prec, &diff / &s);
    let lg = -rel.log2().to_f64();
    lg.clamp(0.0, prec as f64).floor() as u32
}

/// An OPSystem together with the number of bits it shares with a rebuild at
/// twice the precision.
#[derive(Clone, Debug)]
pub struct CertifiedSystem {
    pub system: OPSystem,
    pub agreed_bits: u32,
}

/// Builds at `ctx` and at 2·bits; the 2·bits system is kept, tagged with the
/// worst agreement over H_k, h_k, R_k and Q_k.
pub fn build_op_system_certified(
    params: &WeightParams,
    n: usize,
    ctx: &PrecisionCtx,
) -> Result<CertifiedSystem, OpError> {
    let lo = build_op_system(params, n, ctx)?;
    let hi = build_op_system(params, n, &ctx.doubled())?;
    let tiny = Float::with_val(ctx.bits(), 0u32);
    let one = Float::with_val(ctx.bits(), 1u32);
    let mut worst = ctx.bits();
    let mut see = |a: &BigComplex, b: &BigComplex, f: &Float| worst = worst.min(agreed_bits(a, b, f));
    for (a, b) in lo.hankel.iter().zip(&hi.hankel) {
        see(a, b, &tiny);
    }
    for (a, b) in lo.r.iter().zip(&hi.r).skip(1) {
        see(a, b, &tiny);
    }
    for (a, b) in lo.q.iter().zip(&hi.q) {
        see(a, b, &one);
    }
    Ok(CertifiedSystem { system: hi, agreed_bits: worst })
}
