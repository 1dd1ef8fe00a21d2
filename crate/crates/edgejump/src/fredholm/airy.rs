use num_complex::Complex64;

use crate::fredholm::FredholmError;
use crate::numerics::{gauss_legendre, lu_det_c64};
use crate::specfun::airy;

/// Nyström discretization of K_Ai on [t, T].
#[derive(Clone, Debug, PartialEq)]
pub struct NystromConfig {
    /// Starting node count; doubled until two successive values agree.
    pub m: usize,
    /// Truncation point; `None` means max(t, 0) + 14.
    pub t_trunc: Option<f64>,
    pub tol: f64,
    /// Doubling stops with `NotConverged` past this many nodes.
    pub m_max: usize,
}

impl Default for NystromConfig {
    fn default() -> Self {
        Self { m: 40, t_trunc: None, tol: 1e-12, m_max: 1280 }
    }
}

impl NystromConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    pub fn truncation(&self, t: f64) -> f64 {
        self.t_trunc.unwrap_or(t.max(0.0) + 14.0)
    }
}

/// An accepted determinant and how it was reached.
#[derive(Clone, Debug, PartialEq)]
pub struct AiryDet {
    pub value: Complex64,
    /// Nodes of the accepted rule.
    pub m: usize,
    /// |det(m) − det(m/2)|, accepted below tol·max(1, |det|).
    pub change: f64,
    pub t_trunc: f64,
    /// K_Ai(T,T) = Ai′(T)² − T·Ai(T)², an upper bound for the discarded
    /// trace ∫_T^∞ K_Ai(x,x) dx once T ≥ 1.
    pub tail: f64,
}

/// K_Ai(x, y) = (Ai(x)Ai′(y) − Ai′(x)Ai(y))/(x − y), from precomputed
/// (Ai, Ai′) pairs.
pub fn airy_kernel(x: f64, ax: (f64, f64), y: f64, ay: (f64, f64)) -> f64 {
    let d = y - x;
    if d.abs() < 1e-6 * (1.0 + x.abs()) {
        // K(x, x) − (d/2)Ai(x)², the first-order Taylor term along y
        return ax.1 * ax.1 - x * ax.0 * ax.0 - 0.5 * d * ax.0 * ax.0;
    }
    (ax.0 * ay.1 - ax.1 * ay.0) / (x - y)
}

fn det_at(k2: Complex64, t: f64, t_trunc: f64, m: usize) -> Complex64 {
    let rule = gauss_legendre(m, t, t_trunc).expect("nonempty interval");
    let ai: Vec<(f64, f64)> = rule.nodes.iter().map(|&x| airy(x)).collect();
    let sw: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
    let mut a = vec![Complex64::new(0.0, 0.0); m * m];
    for i in 0..m {
        for j in i..m {
            let k = sw[i] * sw[j] * airy_kernel(rule.nodes[i], ai[i], rule.nodes[j], ai[j]);
            let e = -k2 * k;
            a[i * m + j] = e;
            a[j * m + i] = e;
        }
        a[i * m + i] += 1.0;
    }
    lu_det_c64(a, m)
}

/// det(1 − κ²K_Ai) on L²[t, ∞).
pub fn airy_fredholm_det(kappa_sq: Complex64, t: f64, cfg: &NystromConfig) -> Result<Complex64, FredholmError> {
    airy_fredholm_det_detailed(kappa_sq, t, cfg).map(|d| d.value)
}

pub fn airy_fredholm_det_detailed(kappa_sq: Complex64, t: f64, cfg: &NystromConfig) -> Result<AiryDet, FredholmError> {
    if !(t >= -12.0) {
        return Err(FredholmError::OutOfRange(t));
    }
    if cfg.m < 40 {
        return Err(FredholmError::BadConfig("m must be at least 40"));
    }
    if !(cfg.tol > 0.0) {
        return Err(FredholmError::BadConfig("tol must be positive"));
    }
    let t_trunc = cfg.truncation(t);
    let (ai, aip) = airy(t_trunc);
    let tail = aip * aip - t_trunc * ai * ai;
    if !(tail < cfg.tol / 10.0) {
        return Err(FredholmError::TailBoundViolated { t_trunc, bound: tail });
    }
    if kappa_sq == Complex64::new(0.0, 0.0) {
        return Ok(AiryDet { value: Complex64::new(1.0, 0.0), m: cfg.m, change: 0.0, t_trunc, tail });
    }
    if t_trunc <= t {
        return Ok(AiryDet { value: Complex64::new(1.0, 0.0), m: 0, change: 0.0, t_trunc, tail });
    }
    let mut m = cfg.m;
    let mut prev = det_at(kappa_sq, t, t_trunc, m);
    loop {
        let next = det_at(kappa_sq, t, t_trunc, 2 * m);
        let change = (next - prev).norm();
        m *= 2;
        if change < cfg.tol * next.norm().max(1.0) {
            return Ok(AiryDet { value: next, m, change, t_trunc, tail });
        }
        if 2 * m > cfg.m_max {
            return Err(FredholmError::NotConverged { m, change });
        }
        prev = next;
    }
}
