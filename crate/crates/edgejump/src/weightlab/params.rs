use num_complex::Complex64;
use rug::Float;

use crate::numerics::{BigComplex, PrecisionCtx};

/// Where the jump sits: directly at λ0, or at the edge scaling
/// λ0 = √(2n)·(1 + t·n^{−2/3}/2).
#[derive(Clone, Debug, PartialEq)]
pub enum CutPoint {
    Direct(Float),
    Edge { n: usize, t: f64 },
}

/// The Gaussian weight e^{−x²} times e^{iπβ} left of λ0 and e^{−iπβ} right of it.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightParams {
    pub beta: Complex64,
    pub cut: CutPoint,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum WeightError {
    #[error("β = {0} is not finite")]
    NonFiniteBeta(Complex64),
    #[error("λ0 = {0} is not finite")]
    NonFiniteCut(f64),
    #[error("edge scaling needs n ≥ 1")]
    ZeroDegree,
    #[error("|Re β| = {0} exceeds 1/2")]
    BetaOutOfStrip(f64),
}

/// λ0 = √(2n)·(1 + t·n^{−2/3}/2), rounded once to `ctx` precision.
pub fn edge_lambda0(n: usize, t: f64, ctx: &PrecisionCtx) -> Float {
    let wp = ctx.bits() + 64;
    let nf = Float::with_val(wp, n);
    let root = Float::with_val(wp, &nf * 2u32).sqrt();
    let n23 = Float::with_val(wp, nf.cbrt_ref()).square();
    let corr = Float::with_val(wp, t) / n23 / 2u32 + 1u32;
    Float::with_val(ctx.bits(), root * corr)
}

impl WeightParams {
    pub fn direct(beta: Complex64, lambda0: f64) -> Result<Self, WeightError> {
        if !lambda0.is_finite() {
            return Err(WeightError::NonFiniteCut(lambda0));
        }
        Self::direct_big(beta, Float::with_val(53, lambda0))
    }

    pub fn direct_big(beta: Complex64, lambda0: Float) -> Result<Self, WeightError> {
        if !(beta.re.is_finite() && beta.im.is_finite()) {
            return Err(WeightError::NonFiniteBeta(beta));
        }
        if !lambda0.is_finite() {
            return Err(WeightError::NonFiniteCut(lambda0.to_f64()));
        }
        Ok(Self { beta, cut: CutPoint::Direct(lambda0) })
    }

    pub fn edge(beta: Complex64, n: usize, t: f64) -> Result<Self, WeightError> {
        if !(beta.re.is_finite() && beta.im.is_finite()) {
            return Err(WeightError::NonFiniteBeta(beta));
        }
        if n == 0 {
            return Err(WeightError::ZeroDegree);
        }
        if !t.is_finite() {
            return Err(WeightError::NonFiniteCut(t));
        }
        Ok(Self { beta, cut: CutPoint::Edge { n, t } })
    }

    /// Rejects β outside the strip |Re β| ≤ 1/2.
    pub fn check_strip(&self) -> Result<(), WeightError> {
        if self.beta.re.abs() > 0.5 {
            return Err(WeightError::BetaOutOfStrip(self.beta.re.abs()));
        }
        Ok(())
    }

    pub fn with_beta(&self, beta: Complex64) -> Self {
        Self { beta, cut: self.cut.clone() }
    }

    pub fn lambda0(&self, ctx: &PrecisionCtx) -> Float {
        match &self.cut {
            CutPoint::Direct(l) => Float::with_val(ctx.bits(), l),
            CutPoint::Edge { n, t } => edge_lambda0(*n, *t, ctx),
        }
    }

    pub fn lambda0_f64(&self) -> f64 {
        match &self.cut {
            CutPoint::Direct(l) => l.to_f64(),
            CutPoint::Edge { n, t } => {
                let n = *n as f64;
                (2.0 * n).sqrt() * (1.0 + t * n.powf(-2.0 / 3.0) / 2.0)
            }
        }
    }

    pub fn beta_big(&self, ctx: &PrecisionCtx) -> BigComplex {
        BigComplex::from_c64(self.beta, ctx.bits())
    }

    /// κ² = 1 − e^{−2πiβ}.
    pub fn kappa_sq(&self) -> Complex64 {
        kappa_sq_of_beta(self.beta)
    }
}

pub fn kappa_sq_of_beta(beta: Complex64) -> Complex64 {
    1.0 - (Complex64::new(0.0, -2.0 * std::f64::consts::PI) * beta).exp()
}

/// β with |Re β| ≤ 1/2 and κ² = 1 − e^{−2πiβ}, from the principal logarithm.
pub fn beta_of_kappa(kappa: Complex64) -> Complex64 {
    let w = 1.0 - kappa * kappa;
    w.ln() / Complex64::new(0.0, -2.0 * std::f64::consts::PI)
}

/// Principal square root of 1 − e^{−2πiβ}.
pub fn kappa_of_beta(beta: Complex64) -> Complex64 {
    kappa_sq_of_beta(beta).sqrt()
}
