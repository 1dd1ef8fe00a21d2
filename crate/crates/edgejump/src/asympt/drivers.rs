use num_complex::Complex64;
use rayon::prelude::*;
use rug::Float;

use crate::asympt::report::{bounded_verdict, monotone_verdict, order_estimate, order_verdict, ReportRow, Sweep, Verdict};
use crate::asympt::rhs::*;
use crate::asympt::AsymptError;
use crate::fredholm::{airy_fredholm_det, finite_n_det_big, NystromConfig};
use crate::numerics::{BigComplex, PrecisionCtx};
use crate::painleve::{p34_singular_asymptote, singular_phase, solve_as, ASolution};
use crate::weightlab::{
    build_op_system, diff_identity_residual, gaussian_hankel, kappa_of_beta, OPSystem, WeightParams,
};

type Result<T> = std::result::Result<T, AsymptError>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn list(xs: &[f64]) -> String {
    let v: Vec<String> = xs.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", v.join(", "))
}

fn sweep(criterion: &str, rows: Vec<ReportRow>, verdict: Verdict, summary: String) -> Sweep {
    Sweep { criterion: criterion.into(), rows, verdict, summary }
}

/// One edge system per (n, t), built in parallel.
fn edge_systems(beta: Complex64, ts: &[f64], ns: &[usize]) -> Result<Vec<(f64, usize, OPSystem)>> {
    let jobs: Vec<(f64, usize)> = ts.iter().flat_map(|&t| ns.iter().map(move |&n| (t, n))).collect();
    jobs.into_par_iter()
        .map(|(t, n)| {
            let ctx = PrecisionCtx::for_hankel(n);
            let sys = build_op_system(&WeightParams::edge(beta, n, t)?, n, &ctx)?;
            Ok((t, n, sys))
        })
        .collect()
}

fn solution_for(beta: Complex64, t_min: f64, tol: f64) -> Result<ASolution> {
    Ok(solve_as(kappa_of_beta(beta), t_min, tol)?)
}

/// H_n(β) against e^{iπβn}H_n(0)·det(1 − κ²K_Ai): ||ratio| − 1| must fall
/// strictly with n and end at most `final_bound`, for every t.
pub fn thm12_sweep(beta: Complex64, ts: &[f64], ns: &[usize], tol: f64, final_bound: f64) -> Result<Sweep> {
    let t_min = ts.iter().cloned().fold(0.0, f64::min) - 1.0;
    let sol = solution_for(beta, t_min, tol)?;
    let systems = edge_systems(beta, ts, ns)?;
    let mut rows = Vec::new();
    let mut ok = true;
    let mut parts = Vec::new();
    for &t in ts {
        let mut errs = Vec::new();
        for (_, n, sys) in systems.iter().filter(|s| s.0 == t) {
            let fin = sys.log_hankel(*n).to_c64();
            let asym = thm12_rhs(*n, t, beta, &sol)?;
            let ratio = (fin - asym).exp();
            let err = (ratio.norm() - 1.0).abs();
            errs.push(err);
            rows.push(
                ReportRow::new("thm1.2 log H_n", beta, sol.kappa, fin, asym)
                    .with_residuals((fin - asym).norm(), err)
                    .at(Some(*n), Some(t), Some(sys.params.lambda0_f64())),
            );
        }
        let v = monotone_verdict(&errs, final_bound);
        ok &= v.is_pass();
        parts.push(format!("t={t}: {} {v}", list(&errs)));
        if let Some(last) = rows.last_mut() {
            last.order_est = order_estimate(ns, &errs);
            last.verdict = Some(v);
        }
    }
    let summary = format!("||H_n/rhs| − 1| {}", parts.join("; "));
    Ok(sweep("thm1.2", rows, Verdict::from_bool(ok), summary))
}

/// R_n and Q_n against their edge expansions. The R gap and √n times the Q
/// gap may not grow by more than `max_ratio` between consecutive n. Rows for
/// log h_n carry both candidate second-order coefficients.
pub fn thm14_sweep(beta: Complex64, ts: &[f64], ns: &[usize], tol: f64, max_ratio: f64) -> Result<Sweep> {
    let t_min = ts.iter().cloned().fold(0.0, f64::min) - 1.0;
    let sol = solution_for(beta, t_min, tol)?;
    let systems = edge_systems(beta, ts, ns)?;
    let mut rows = Vec::new();
    let mut ok = true;
    let mut notes = Vec::new();
    for &t in ts {
        let (mut rg, mut qg) = (Vec::new(), Vec::new());
        for (_, n, sys) in systems.iter().filter(|s| s.0 == t) {
            let n = *n;
            let l0 = Some(sys.params.lambda0_f64());
            let rhs = thm14_rhs(n, t, &sol)?;
            let (rn, qn) = (sys.r[n].to_c64(), sys.q[n].to_c64());
            let lh = sys.norms[n].ln().to_c64();
            rg.push((rn - rhs.r).norm());
            qg.push((qn - rhs.q).norm() * (n as f64).sqrt());
            rows.push(ReportRow::new("thm1.4 R_n", beta, sol.kappa, rn, rhs.r).at(Some(n), Some(t), l0));
            rows.push(ReportRow::new("thm1.4 Q_n", beta, sol.kappa, qn, rhs.q).at(Some(n), Some(t), l0));
            rows.push(ReportRow::new("thm1.4 log h_n", beta, sol.kappa, lh, rhs.log_h).at(Some(n), Some(t), l0));
            rows.push(ReportRow::new("thm1.4 log h_n alt", beta, sol.kappa, lh, rhs.log_h_alt).at(Some(n), Some(t), l0));
        }
        let (vr, vq) = (bounded_verdict(&rg, max_ratio), bounded_verdict(&qg, max_ratio));
        ok &= vr.is_pass() && vq.is_pass();
        notes.push(format!("t={t}: R gaps {} {vr}, √n·Q gaps {} {vq}", list(&rg), list(&qg)));
        let k = rows.len();
        rows[k - 4].verdict = Some(vr);
        rows[k - 3].verdict = Some(vq);
    }
    Ok(sweep("thm1.4", rows, Verdict::from_bool(ok), notes.join("; ")))
}

/// p_n(λ0) against the edge Plancherel–Rotach form; the relative error must
/// decay with fitted order `expected ± slack` at every t.
pub fn thm15_sweep(beta: Complex64, ts: &[f64], ns: &[usize], tol: f64, expected: f64, slack: f64) -> Result<Sweep> {
    let t_min = ts.iter().cloned().fold(0.0, f64::min) - 1.0;
    let sol = solution_for(beta, t_min, tol)?;
    let systems = edge_systems(beta, ts, ns)?;
    let mut rows = Vec::new();
    let mut ok = true;
    let mut notes = Vec::new();
    for &t in ts {
        let mut errs = Vec::new();
        for (_, n, sys) in systems.iter().filter(|s| s.0 == t) {
            let l0 = sys.params.lambda0(&sys.ctx);
            let fin = sys.eval_pn(*n, &l0)?.ln().to_c64();
            let asym = thm15_rhs(*n, t, &sol)?;
            let err = ((fin - asym).exp() - 1.0).norm();
            errs.push(err);
            rows.push(
                ReportRow::new("thm1.5 log p_n(λ0)", beta, sol.kappa, fin, asym)
                    .with_residuals((fin - asym).norm(), err)
                    .at(Some(*n), Some(t), Some(l0.to_f64())),
            );
        }
        let order = order_estimate(ns, &errs);
        let v = order_verdict(order, expected, slack);
        ok &= v.is_pass();
        notes.push(format!("t={t}: order {:.3}", order.unwrap_or(f64::NAN)));
        if let Some(last) = rows.last_mut() {
            last.order_est = order;
            last.verdict = Some(v);
        }
    }
    Ok(sweep("thm1.5", rows, Verdict::from_bool(ok), notes.join("; ")))
}

/// Bulk expansion: at the largest n the ratio must sit within
/// log n / n^{1−4|Re β|} of 1 for every λ, and the residual at the largest
/// |λ| must exceed the one at the smallest.
pub fn noncrit_sweep(beta: Complex64, lambdas: &[f64], ns: &[usize]) -> Result<Sweep> {
    let jobs: Vec<(f64, usize)> = lambdas.iter().flat_map(|&l| ns.iter().map(move |&n| (l, n))).collect();
    let rows: Vec<ReportRow> = jobs
        .into_par_iter()
        .map(|(lam, n)| {
            let ctx = PrecisionCtx::for_hankel(n);
            let l0 = lam * (2.0 * n as f64).sqrt();
            let sys = build_op_system(&WeightParams::direct(beta, l0)?, n, &ctx)?;
            let fin = sys.log_hankel(n).to_c64();
            let asym = noncrit_rhs(n, lam, beta)?;
            let err = ((fin - asym).exp() - 1.0).norm();
            Ok(ReportRow::new("noncrit log H_n", beta, kappa_of_beta(beta), fin, asym)
                .with_residuals((fin - asym).norm(), err)
                .at(Some(n), Some(lam), Some(l0)))
        })
        .collect::<Result<_>>()?;
    let n_max = *ns.iter().max().unwrap_or(&1);
    let bound = (n_max as f64).ln() / (n_max as f64).powf(1.0 - 4.0 * beta.re.abs());
    let last: Vec<&ReportRow> = rows.iter().filter(|r| r.n == Some(n_max)).collect();
    let within = last.iter().all(|r| r.rel_res <= bound);
    let by_abs = |a: &&&ReportRow, b: &&&ReportRow| a.t.unwrap().abs().total_cmp(&b.t.unwrap().abs());
    let inner = last.iter().min_by(by_abs).map(|r| r.rel_res).unwrap_or(0.0);
    let outer = last.iter().max_by(by_abs).map(|r| r.rel_res).unwrap_or(0.0);
    let edge = lambdas.len() < 2 || outer > inner;
    let summary = format!("n={n_max}: bound {bound:.3e}, inner {inner:.3e}, outer {outer:.3e}");
    Ok(sweep("noncrit", rows, Verdict::from_bool(within && edge), summary))
}

/// Residual of the large-gap expansion along −F(t). The last t must beat the
/// first and sit at most `final_bound`. Where Nyström applies (t ≥ −12) the
/// determinant is recomputed independently as a cross-check row.
pub fn conj13_sweep(beta: Complex64, ts: &[f64], tol: f64, final_bound: f64) -> Result<Sweep> {
    let t_min = ts.iter().cloned().fold(-1.0, f64::min) - 1.0;
    let sol = solution_for(beta, t_min, tol)?;
    let mut rows = Vec::new();
    let mut res = Vec::new();
    for &t in ts {
        let ld = log_tw(&sol, t)?;
        let r = conj13_residual_log(t, beta, ld)?;
        res.push(r);
        let asym = conj13_expansion(t, beta)?;
        rows.push(ReportRow::new("conj1.3 log det (PII)", beta, sol.kappa, ld, asym).with_residuals(r, r).at(None, Some(t), None));
        if t >= -12.0 {
            let d = airy_fredholm_det(sol.kappa * sol.kappa, t, &NystromConfig::default())?;
            let rn = conj13_residual(t, beta, d)?;
            rows.push(ReportRow::new("conj1.3 det (Nystrom)", beta, sol.kappa, d, asym.exp()).with_residuals(rn, rn).at(None, Some(t), None));
        }
    }
    let ok = res.len() >= 2 && res[res.len() - 1] < res[0] && res[res.len() - 1] <= final_bound;
    let summary = format!("residuals {} at t = {ts:?}", list(&res));
    Ok(sweep("conj1.3", rows, Verdict::from_bool(ok), summary))
}

/// Nyström determinant against exp(−F) on an equally spaced t-grid.
pub fn tw_identity_sweep(kappa: Complex64, t_min: f64, t_max: f64, step: f64, tol: f64, bound: f64) -> Result<Sweep> {
    let sol = solve_as(kappa, t_min.min(t_max - 1.0), tol)?;
    let k = ((t_max - t_min) / step).round() as usize;
    let cfg = NystromConfig::with_tol(tol.max(1e-13));
    let rows: Vec<ReportRow> = (0..=k)
        .into_par_iter()
        .map(|i| {
            let t = t_min + step * i as f64;
            let d = airy_fredholm_det(kappa * kappa, t, &cfg)?;
            let p = sol.tracy_widom(t)?;
            Ok(ReportRow::new("tw-identity", sol.beta, kappa, d, p).at(None, Some(t), None))
        })
        .collect::<Result<_>>()?;
    let worst = rows.iter().map(|r| r.abs_res).fold(0.0, f64::max);
    Ok(sweep("tw-identity", rows, Verdict::from_bool(worst <= bound), format!("max gap {worst:.3e}")))
}

/// e^{−iπnβ}H_n(β)/H_n(0) against det(I − κ²G) at `ctx` precision.
pub fn finite_n_identity(n: usize, beta: Complex64, lambda0: f64, ctx: &PrecisionCtx) -> Result<(ReportRow, f64)> {
    let p = ctx.bits();
    let base = build_op_system(&WeightParams::direct(c(0.0), lambda0)?, n, ctx)?;
    let sys = build_op_system(&WeightParams::direct(beta, lambda0)?, n, ctx)?;
    let b = BigComplex::from_c64(beta, p);
    let phase = (-&b.scale(&Float::with_val(p, n))).exp_i_pi();
    let lhs = &(&phase * &sys.hankel[n]) / &base.hankel[n];
    let k2 = &BigComplex::one(p) - &(-&b.scale(&Float::with_val(p, 2))).exp_i_pi();
    let det = finite_n_det_big(n, &Float::with_val(p, lambda0), &k2, ctx);
    let err = (&lhs - &det).abs().to_f64();
    let row = ReportRow::new("finite-n-identity", beta, kappa_of_beta(beta), lhs.to_c64(), det.to_c64())
        .with_residuals(err, err / det.abs().to_f64())
        .at(Some(n), None, Some(lambda0));
    Ok((row, err))
}

pub fn finite_n_identity_sweep(cases: &[(usize, Complex64, f64)], bits: Option<u32>, bound: f64) -> Result<Sweep> {
    let rows: Vec<(ReportRow, f64)> = cases
        .par_iter()
        .map(|&(n, beta, l0)| {
            let ctx = match bits {
                Some(b) => PrecisionCtx::new(b).map_err(|_| AsymptError::OutOfRange(b as f64))?,
                None => PrecisionCtx::for_hankel(n),
            };
            finite_n_identity(n, beta, l0, &ctx)
        })
        .collect::<Result<_>>()?;
    let worst = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let rows = rows.into_iter().map(|(r, e)| r.verdict(Verdict::from_bool(e <= bound))).collect();
    Ok(sweep("finite-n-identity", rows, Verdict::from_bool(worst <= bound), format!("max residual {worst:.3e}")))
}

/// The β-derivative identity for log H_n by central differences.
pub fn diff_identity_check(n: usize, beta: Complex64, lambda0: f64, delta: Option<f64>, ctx: &PrecisionCtx, bound: f64) -> Result<Sweep> {
    let params = WeightParams::direct(beta, lambda0)?;
    let d = delta.map(|d| Float::with_val(ctx.bits(), d));
    let id = diff_identity_residual(&params, n, d.as_ref(), ctx)?;
    let res = id.residual.to_f64();
    let row = ReportRow::new("diff-identity", beta, kappa_of_beta(beta), id.lhs.to_c64(), id.rhs.to_c64())
        .with_residuals(res, res / id.rhs.abs().to_f64().max(f64::MIN_POSITIVE))
        .at(Some(n), None, Some(lambda0));
    Ok(sweep("diff-identity", vec![row], Verdict::from_bool(res <= bound), format!("residual {res:.3e}")))
}

/// Q_n + h_n^{−1}p_n(λ0)²e^{−λ0²}sinh(iπβ) = 0, residual against 2^{32−bits}|Q_n|.
pub fn qn_identity_check(n: usize, params: &WeightParams, ctx: &PrecisionCtx) -> Result<Sweep> {
    let sys = build_op_system(params, n, ctx)?;
    let res = sys.qn_jump_identity_residual(n)?;
    let qn = sys.q[n].abs();
    let scale = Float::with_val(ctx.bits(), qn.max(&(Float::with_val(ctx.bits(), 1u32) >> 64u32)));
    let bound = Float::with_val(ctx.bits(), &scale >> (ctx.bits() - 32));
    let ok = res <= bound;
    let q = sys.q[n].to_c64();
    let row = ReportRow::new("qn-identity", params.beta, kappa_of_beta(params.beta), q, q)
        .with_residuals(res.to_f64(), (res / &scale).to_f64())
        .at(Some(n), None, Some(params.lambda0_f64()));
    Ok(sweep("qn-identity", vec![row], Verdict::from_bool(ok), format!("bound {:.3e}", bound.to_f64())))
}

/// H_n(λ0, 0) from the weight against the closed product form.
pub fn gaussian_closed_form_sweep(n_max: usize, lambda0: f64, bits: u32, bound: f64) -> Result<Sweep> {
    let ctx = PrecisionCtx::new(bits).map_err(|_| AsymptError::OutOfRange(bits as f64))?;
    let sys = build_op_system(&WeightParams::direct(c(0.0), lambda0)?, n_max, &ctx)?;
    let mut worst: f64 = 0.0;
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let want = BigComplex::from_real(gaussian_hankel(n, &ctx));
        let got = &sys.hankel[n];
        let rel = ((got - &want).abs() / want.abs()).to_f64();
        worst = worst.max(rel);
        rows.push(
            ReportRow::new("gaussian H_n", c(0.0), c(0.0), got.ln().to_c64(), want.ln().to_c64())
                .with_residuals((got - &want).abs().to_f64(), rel)
                .at(Some(n), None, Some(lambda0)),
        );
    }
    Ok(sweep("gaussian-closed-form", rows, Verdict::from_bool(worst <= bound), format!("max relative error {worst:.3e}")))
}

/// y = u² between the two consecutive real poles nearest `near` against
/// the singular asymptote for β = 1/2 + iγ, on points with |cos φ̃| above
/// `cos_floor`; plus the pole round trip.
pub fn thm16_sweep(gamma: f64, near: f64, tol: f64, rel_bound: f64, cos_floor: f64, trip_bound: f64) -> Result<Sweep> {
    let kappa = c((1.0 + (2.0 * std::f64::consts::PI * gamma).exp()).sqrt());
    let sol = solve_as(kappa, near - 2.5, tol)?;
    let poles: Vec<f64> = sol.poles.iter().map(|p| p.a).collect();
    let pair = poles
        .windows(2)
        .min_by(|a, b| ((a[0] + a[1]) / 2.0 - near).abs().total_cmp(&((b[0] + b[1]) / 2.0 - near).abs()))
        .map(|w| (w[0], w[1]))
        .ok_or(AsymptError::OutOfRange(near))?;
    let (hi, lo) = pair;
    let beta = Complex64::new(0.5, gamma);
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for i in 1..200 {
        let t = lo + (hi - lo) * i as f64 / 200.0;
        if singular_phase(t, gamma)?.cos().abs() <= cos_floor {
            continue;
        }
        let u = sol.u(t)?;
        let y = u * u;
        let a = p34_singular_asymptote(t, gamma)?;
        let r = ReportRow::new("thm1.6 y", beta, kappa, y, c(a)).at(None, Some(t), None);
        worst = worst.max(r.rel_res);
        rows.push(r);
    }
    let idx = sol.poles.iter().position(|p| p.a == hi).unwrap_or(0);
    let trip = sol.pole_round_trip(idx, 0.3)?;
    rows.push(ReportRow::new("thm1.6 round trip", beta, kappa, c(trip), c(0.0)).with_residuals(trip, trip).at(None, Some(hi), None));
    let ok = !rows.is_empty() && worst <= rel_bound && trip <= trip_bound;
    let summary = format!("poles {hi:.4}, {lo:.4}; worst relative {worst:.3e}; round trip {trip:.3e}");
    Ok(sweep("thm1.6", rows, Verdict::from_bool(ok), summary))
}
