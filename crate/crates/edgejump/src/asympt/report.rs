use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

/// One finite-vs-asymptotic comparison. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub label: String,
    pub n: Option<usize>,
    pub t: Option<f64>,
    pub lambda0: Option<f64>,
    pub beta_re: f64,
    pub beta_im: f64,
    pub kappa_re: f64,
    pub kappa_im: f64,
    pub finite_re: f64,
    pub finite_im: f64,
    pub asym_re: f64,
    pub asym_im: f64,
    pub abs_res: f64,
    pub rel_res: f64,
    pub order_est: Option<f64>,
    pub verdict: Option<Verdict>,
}

impl ReportRow {
    pub fn new(label: impl Into<String>, beta: Complex64, kappa: Complex64, finite: Complex64, asym: Complex64) -> Self {
        let abs_res = (finite - asym).norm();
        let rel_res = if asym.norm() > 0.0 { abs_res / asym.norm() } else { abs_res };
        Self {
            label: label.into(),
            n: None,
            t: None,
            lambda0: None,
            beta_re: beta.re,
            beta_im: beta.im,
            kappa_re: kappa.re,
            kappa_im: kappa.im,
            finite_re: finite.re,
            finite_im: finite.im,
            asym_re: asym.re,
            asym_im: asym.im,
            abs_res,
            rel_res,
            order_est: None,
            verdict: None,
        }
    }

    /// A row whose residual is computed elsewhere (e.g. from logarithms).
    pub fn with_residuals(mut self, abs_res: f64, rel_res: f64) -> Self {
        self.abs_res = abs_res;
        self.rel_res = rel_res;
        self
    }

    pub fn at(mut self, n: Option<usize>, t: Option<f64>, lambda0: Option<f64>) -> Self {
        self.n = n;
        self.t = t;
        self.lambda0 = lambda0;
        self
    }

    pub fn verdict(mut self, v: Verdict) -> Self {
        self.verdict = Some(v);
        self
    }

    pub fn finite(&self) -> Complex64 {
        Complex64::new(self.finite_re, self.finite_im)
    }

    pub fn asym(&self) -> Complex64 {
        Complex64::new(self.asym_re, self.asym_im)
    }
}

/// Least-squares decay exponent p in err ≈ C·n^{−p}. Needs three or more
/// points with positive errors.
pub fn order_estimate(ns: &[usize], errs: &[f64]) -> Option<f64> {
    if ns.len() < 3 || ns.len() != errs.len() || errs.iter().any(|e| !(*e > 0.0)) {
        return None;
    }
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Some(-sxy / sxx)
}

/// Strictly decreasing with the last value at most `final_bound`.
pub fn monotone_verdict(errs: &[f64], final_bound: f64) -> Verdict {
    let dec = errs.windows(2).all(|w| w[1] < w[0]);
    Verdict::from_bool(dec && errs.last().is_some_and(|e| *e <= final_bound))
}

/// No growth: each consecutive ratio at most `max_ratio`.
pub fn bounded_verdict(gaps: &[f64], max_ratio: f64) -> Verdict {
    Verdict::from_bool(gaps.windows(2).all(|w| w[1] <= max_ratio * w[0]))
}

pub fn order_verdict(order: Option<f64>, expected: f64, slack: f64) -> Verdict {
    Verdict::from_bool(order.is_some_and(|p| (p - expected).abs() <= slack))
}

/// A set of rows with an overall verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub criterion: String,
    pub rows: Vec<ReportRow>,
    pub verdict: Verdict,
    pub summary: String,
}
