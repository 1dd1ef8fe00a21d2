//! Adaptive Dormand–Prince 5(4) integration with continuous extension.
//!
//! The stepper is generic over the state scalar so the same code runs in
//! double precision (real or complex) and in MPFR precision.

use std::fmt;

use num_complex::Complex64;
use rug::Float;

use crate::numerics::BigComplex;

/// Real time variable of an integration.
pub trait OdeReal: Clone + PartialOrd + fmt::Debug + Send + Sync {
    fn from_f64_like(v: f64, like: &Self) -> Self;
    fn ratio_like(num: i64, den: i64, like: &Self) -> Self;
    fn to_f64(&self) -> f64;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
}

/// Component of an integrated state vector.
pub trait OdeScalar: Clone + fmt::Debug + Send + Sync {
    type Real: OdeReal;
    fn zero_like(&self) -> Self;
    /// self += c·x
    fn add_scaled(&mut self, c: &Self::Real, x: &Self);
    fn sub(&self, o: &Self) -> Self;
    fn magnitude(&self) -> f64;
}

impl OdeReal for f64 {
    fn from_f64_like(v: f64, _: &Self) -> Self {
        v
    }
    fn ratio_like(num: i64, den: i64, _: &Self) -> Self {
        num as f64 / den as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
}

impl OdeReal for Float {
    fn from_f64_like(v: f64, like: &Self) -> Self {
        Float::with_val(like.prec(), v)
    }
    fn ratio_like(num: i64, den: i64, like: &Self) -> Self {
        Float::with_val(like.prec(), num) / den
    }
    fn to_f64(&self) -> f64 {
        Float::to_f64(self)
    }
    fn add(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self + o)
    }
    fn sub(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self - o)
    }
    fn mul(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self * o)
    }
    fn div(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self / o)
    }
}

impl OdeScalar for f64 {
    type Real = f64;
    fn zero_like(&self) -> Self {
        0.0
    }
    fn add_scaled(&mut self, c: &f64, x: &Self) {
        *self += c * x;
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl OdeScalar for Complex64 {
    type Real = f64;
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add_scaled(&mut self, c: &f64, x: &Self) {
        *self += x * c;
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl OdeScalar for Float {
    type Real = Float;
    fn zero_like(&self) -> Self {
        Float::new(self.prec())
    }
    fn add_scaled(&mut self, c: &Float, x: &Self) {
        *self += c * x;
    }
    fn sub(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self - o)
    }
    fn magnitude(&self) -> f64 {
        Float::to_f64(self).abs()
    }
}

impl OdeScalar for BigComplex {
    type Real = Float;
    fn zero_like(&self) -> Self {
        BigComplex::zero(self.prec())
    }
    fn add_scaled(&mut self, c: &Float, x: &Self) {
        self.re += c * &x.re;
        self.im += c * &x.im;
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
}

// Dormand–Prince tableau as exact rationals (numerator, denominator).
const C: [(i64, i64); 7] = [(0, 1), (1, 5), (3, 10), (4, 5), (8, 9), (1, 1), (1, 1)];
const A: [&[(i64, i64)]; 7] = [
    &[],
    &[(1, 5)],
    &[(3, 40), (9, 40)],
    &[(44, 45), (-56, 15), (32, 9)],
    &[(19372, 6561), (-25360, 2187), (64448, 6561), (-212, 729)],
    &[(9017, 3168), (-355, 33), (46732, 5247), (49, 176), (-5103, 18656)],
    &[(35, 384), (0, 1), (500, 1113), (125, 192), (-2187, 6784), (11, 84)],
];
const B5: [(i64, i64); 7] = [(35, 384), (0, 1), (500, 1113), (125, 192), (-2187, 6784), (11, 84), (0, 1)];
// b5 − b4
const E: [(i64, i64); 7] = [
    (71, 57600),
    (0, 1),
    (-71, 16695),
    (71, 1920),
    (-17253, 339200),
    (22, 525),
    (-1, 40),
];
const D: [(i64, i64); 7] = [
    (-12715105075, 11282082432),
    (0, 1),
    (87487479700, 32700410799),
    (-10690763975, 1880347072),
    (701980252875, 199316789632),
    (-1453857185, 822651844),
    (69997945, 29380423),
];

#[derive(Clone, Debug)]
pub struct RkOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step magnitude; chosen automatically when `None`.
    pub h0: Option<f64>,
    /// A step smaller than `h_min·(1 + |t|)` in magnitude raises `StepUnderflow`.
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl RkOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { rtol: tol, atol: tol, h0: None, h_min: 1e-13, h_max: f64::INFINITY, max_steps: 5_000_000 }
    }
}

/// One accepted step with the coefficients of its continuous extension.
#[derive(Clone, Debug)]
struct Step<S: OdeScalar> {
    t0: S::Real,
    h: S::Real,
    // y(t0 + θh) = r1 + θ(r2 + (1−θ)(r3 + θ(r4 + (1−θ)r5)))
    r: [Vec<S>; 5],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Completed,
    /// The caller's stop predicate fired after the last accepted step.
    Stopped,
}

/// Accepted steps of one integration, evaluable anywhere in the covered span.
#[derive(Clone, Debug)]
pub struct Trajectory<S: OdeScalar> {
    t_start: S::Real,
    y_start: Vec<S>,
    steps: Vec<Step<S>>,
    pub status: RunStatus,
    pub rejected: usize,
}

#[derive(Debug)]
pub enum OdeError<S: OdeScalar> {
    StepUnderflow { t: S::Real, partial: Trajectory<S> },
    TooManySteps { t: S::Real, partial: Trajectory<S> },
}

impl<S: OdeScalar> fmt::Display for OdeError<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OdeError::StepUnderflow { t, .. } => write!(f, "step size underflow at t = {}", t.to_f64()),
            OdeError::TooManySteps { t, .. } => write!(f, "step budget exhausted at t = {}", t.to_f64()),
        }
    }
}

impl<S: OdeScalar> std::error::Error for OdeError<S> {}

impl<S: OdeScalar> OdeError<S> {
    pub fn t(&self) -> &S::Real {
        match self {
            OdeError::StepUnderflow { t, .. } | OdeError::TooManySteps { t, .. } => t,
        }
    }

    pub fn into_partial(self) -> Trajectory<S> {
        match self {
            OdeError::StepUnderflow { partial, .. } | OdeError::TooManySteps { partial, .. } => partial,
        }
    }
}

fn combine<S: OdeScalar>(base: &[S], ks: &[Vec<S>], coeffs: &[S::Real]) -> Vec<S> {
    let mut out = base.to_vec();
    for (k, c) in ks.iter().zip(coeffs) {
        for (o, ki) in out.iter_mut().zip(k) {
            o.add_scaled(c, ki);
        }
    }
    out
}

fn scaled_rationals<R: OdeReal>(rats: &[(i64, i64)], h: &R) -> Vec<R> {
    rats.iter().map(|&(n, d)| R::ratio_like(n, d, h).mul(h)).collect()
}

/// Integrates y′ = f(t, y) from t0 to t1 (either direction).
pub fn adaptive_rk<S, F>(f: F, y0: Vec<S>, t0: S::Real, t1: S::Real, tol: f64) -> Result<Trajectory<S>, OdeError<S>>
where
    S: OdeScalar,
    F: FnMut(&S::Real, &[S], &mut [S]),
{
    integrate(f, y0, t0, t1, &RkOptions::with_tol(tol), |_, _| false)
}

/// Full-control variant: options plus a predicate checked after every
/// accepted step; returning `true` ends the run with `RunStatus::Stopped`.
pub fn integrate<S, F, P>(
    mut f: F,
    y0: Vec<S>,
    t0: S::Real,
    t1: S::Real,
    opts: &RkOptions,
    mut stop: P,
) -> Result<Trajectory<S>, OdeError<S>>
where
    S: OdeScalar,
    F: FnMut(&S::Real, &[S], &mut [S]),
    P: FnMut(&S::Real, &[S]) -> bool,
{
    let dim = y0.len();
    let zero = || -> Vec<S> { y0.iter().map(|s| s.zero_like()).collect() };
    let mut traj = Trajectory { t_start: t0.clone(), y_start: y0.clone(), steps: Vec::new(), status: RunStatus::Completed, rejected: 0 };
    let span = t1.sub(&t0).to_f64();
    if span == 0.0 || dim == 0 {
        return Ok(traj);
    }
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0.clone();
    let mut comp = zero();
    let mut k1 = zero();
    f(&t, &y, &mut k1);

    let mut h_abs = opts.h0.unwrap_or_else(|| {
        let scale = opts.atol + opts.rtol * y.iter().map(|s| s.magnitude()).fold(0.0, f64::max);
        let d1 = k1.iter().map(|s| s.magnitude()).fold(0.0, f64::max);
        let guess = if d1 > 0.0 { 0.01 * scale.max(1e-300) / d1 } else { 1e-3 };
        guess.powf(0.2).min(span.abs()).max(1e-6 * span.abs().min(1.0))
    });
    h_abs = h_abs.min(opts.h_max).min(span.abs());
    let mut facold: f64 = 1e-4;
    let mut last_rejected = false;
    let mut ks: Vec<Vec<S>> = (0..7).map(|_| zero()).collect();

    loop {
        let remaining = t1.sub(&t).to_f64() * dir;
        if remaining <= 0.0 {
            return Ok(traj);
        }
        let last = h_abs >= remaining;
        let h = if last { t1.sub(&t) } else { S::Real::from_f64_like(dir * h_abs, &t) };
        if h_abs < opts.h_min * (1.0 + t.to_f64().abs()) && !last {
            return Err(OdeError::StepUnderflow { t, partial: traj });
        }
        if traj.steps.len() + traj.rejected >= opts.max_steps {
            return Err(OdeError::TooManySteps { t, partial: traj });
        }

        ks[0].clone_from(&k1);
        for s in 1..7 {
            let coeffs = scaled_rationals(A[s], &h);
            let ys = combine(&y, &ks[..s], &coeffs);
            let ts = t.add(&S::Real::ratio_like(C[s].0, C[s].1, &h).mul(&h));
            f(&ts, &ys, &mut ks[s]);
        }
        // Stage 7 is evaluated at the fifth-order solution (FSAL).
        // Compensated update: the increment is summed separately and the
        // rounding lost when adding it to y is carried into the next step.
        let incr = combine(&zero(), &ks[..6], &scaled_rationals(&B5[..6], &h));
        let corrected: Vec<S> = incr.iter().zip(&comp).map(|(d, c)| d.sub(c)).collect();
        let one = S::Real::ratio_like(1, 1, &h);
        let y_new = combine(&y, std::slice::from_ref(&corrected), &[one]);
        let err_vec = combine(&zero(), &ks, &scaled_rationals(&E, &h));
        let mut acc = 0.0;
        for i in 0..dim {
            let sc = opts.atol + opts.rtol * y[i].magnitude().max(y_new[i].magnitude());
            let e = err_vec[i].magnitude() / sc;
            acc += e * e;
        }
        let err = (acc / dim as f64).sqrt();
        let err = if err.is_nan() { f64::INFINITY } else { err };

        const BETA: f64 = 0.04;
        let expo1 = 0.2 - 0.75 * BETA;
        let fac11 = err.powf(expo1);
        if err <= 1.0 {
            let mut fac = fac11 / facold.powf(BETA);
            fac = (fac / 0.9).clamp(0.1, 5.0);
            let mut h_new = h_abs / fac;
            facold = err.max(1e-4);
            // Continuous extension coefficients.
            let r1 = y.clone();
            let ydiff: Vec<S> = y_new.iter().zip(&y).map(|(a, b)| a.sub(b)).collect();
            let minus_one = S::Real::ratio_like(-1, 1, &h);
            let bspl = combine(&ydiff.iter().map(|v| v.zero_like()).collect::<Vec<_>>(), &[ks[0].clone(), ydiff.clone()], &[h.clone(), minus_one.clone()]);
            let r4 = combine(&ydiff, &[ks[6].clone(), bspl.clone()], &[h.clone().mul(&minus_one), minus_one.clone()]);
            let r5 = combine(&zero(), &ks, &scaled_rationals(&D, &h));
            comp = ydiff.iter().zip(&corrected).map(|(a, b)| a.sub(b)).collect();
            traj.steps.push(Step { t0: t.clone(), h: h.clone(), r: [r1, ydiff, bspl, r4, r5] });
            t = if last { t1.clone() } else { t.add(&h) };
            y = y_new;
            k1.clone_from(&ks[6]);
            if last_rejected {
                h_new = h_new.min(h_abs);
            }
            last_rejected = false;
            h_abs = h_new.min(opts.h_max);
            if stop(&t, &y) {
                traj.status = RunStatus::Stopped;
                return Ok(traj);
            }
        } else {
            h_abs /= (fac11 / 0.9).min(10.0);
            last_rejected = true;
            traj.rejected += 1;
        }
    }
}

impl<S: OdeScalar> Trajectory<S> {
    pub fn t_start(&self) -> &S::Real {
        &self.t_start
    }

    pub fn t_end(&self) -> S::Real {
        match self.steps.last() {
            Some(s) => s.t0.add(&s.h),
            None => self.t_start.clone(),
        }
    }

    pub fn y_start(&self) -> &[S] {
        &self.y_start
    }

    pub fn y_end(&self) -> Vec<S> {
        match self.steps.last() {
            Some(s) => s.r[0].iter().zip(&s.r[1]).map(|(a, d)| {
                let mut v = a.clone();
                v.add_scaled(&S::Real::ratio_like(1, 1, &s.h), d);
                v
            }).collect(),
            None => self.y_start.clone(),
        }
    }

    pub fn n_steps(&self) -> usize {
        self.steps.len()
    }

    /// Times of all step boundaries, starting with `t_start`.
    pub fn mesh(&self) -> Vec<S::Real> {
        let mut out = vec![self.t_start.clone()];
        out.extend(self.steps.iter().map(|s| s.t0.add(&s.h)));
        out
    }

    pub fn covers(&self, t: &S::Real) -> bool {
        let (a, b) = (self.t_start.to_f64(), self.t_end().to_f64());
        let x = t.to_f64();
        x >= a.min(b) && x <= a.max(b)
    }

    fn locate(&self, t: &S::Real) -> Option<usize> {
        if self.steps.is_empty() || !self.covers(t) {
            return None;
        }
        let forward = self.steps[0].h.to_f64() > 0.0;
        let x = t.to_f64();
        // Number of steps whose start precedes t in the direction of travel.
        let idx = self.steps.partition_point(|s| {
            let s0 = s.t0.to_f64();
            if forward { s0 <= x } else { s0 >= x }
        });
        Some(idx.saturating_sub(1).min(self.steps.len() - 1))
    }

    /// Dense-output state at `t`; `None` outside the integrated span.
    pub fn eval(&self, t: &S::Real) -> Option<Vec<S>> {
        if self.steps.is_empty() {
            return (t.to_f64() == self.t_start.to_f64()).then(|| self.y_start.clone());
        }
        let s = &self.steps[self.locate(t)?];
        let th = t.sub(&s.t0).div(&s.h);
        let one = S::Real::ratio_like(1, 1, &th);
        let om = one.sub(&th);
        let out = (0..s.r[0].len())
            .map(|i| {
                let mut a = s.r[3][i].clone();
                a.add_scaled(&om, &s.r[4][i]);
                let mut b = s.r[2][i].clone();
                b.add_scaled(&th, &a);
                let mut c = s.r[1][i].clone();
                c.add_scaled(&om, &b);
                let mut p = s.r[0][i].clone();
                p.add_scaled(&th, &c);
                p
            })
            .collect();
        Some(out)
    }

    /// Time derivative of the dense-output interpolant at `t`.
    pub fn eval_derivative(&self, t: &S::Real) -> Option<Vec<S>> {
        if self.steps.is_empty() {
            return None;
        }
        let s = &self.steps[self.locate(t)?];
        let th = t.sub(&s.t0).div(&s.h);
        let one = S::Real::ratio_like(1, 1, &th);
        let m1 = S::Real::ratio_like(-1, 1, &th);
        let om = one.sub(&th);
        let inv_h = one.div(&s.h);
        let out = (0..s.r[0].len())
            .map(|i| {
                // A = r4 + (1−θ)r5,  A′ = −r5
                let mut a = s.r[3][i].clone();
                a.add_scaled(&om, &s.r[4][i]);
                let mut da = s.r[4][i].zero_like();
                da.add_scaled(&m1, &s.r[4][i]);
                // B = r3 + θA,  B′ = A + θA′
                let mut b = s.r[2][i].clone();
                b.add_scaled(&th, &a);
                let mut db = a.clone();
                db.add_scaled(&th, &da);
                // C = r2 + (1−θ)B,  C′ = −B + (1−θ)B′
                let mut c = s.r[1][i].clone();
                c.add_scaled(&om, &b);
                let mut dc = b.zero_like();
                dc.add_scaled(&m1, &b);
                dc.add_scaled(&om, &db);
                // P′ = C + θC′
                let mut dp = c;
                dp.add_scaled(&th, &dc);
                let mut out = dp.zero_like();
                out.add_scaled(&inv_h, &dp);
                out
            })
            .collect();
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential() {
        let tr = adaptive_rk(|_t: &f64, y: &[f64], dy: &mut [f64]| dy[0] = y[0], vec![1.0], 0.0, 1.0, 1e-12).unwrap();
        assert!((tr.y_end()[0] - std::f64::consts::E).abs() < 1e-10);
        for &x in &[0.1, 0.37, 0.5, 0.93] {
            let y = tr.eval(&x).unwrap()[0];
            assert!((y - f64::exp(x)).abs() < 1e-10, "dense at {x}: {y}");
            let dy = tr.eval_derivative(&x).unwrap()[0];
            assert!((dy - f64::exp(x)).abs() < 1e-8);
        }
    }

    #[test]
    fn sine_backward_and_forward() {
        let f = |_t: &f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = -y[0];
        };
        let tr = adaptive_rk(f, vec![0.0, 1.0], 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert!(tr.y_end()[0].abs() < 1e-9);
        let back = adaptive_rk(f, vec![0.0, 1.0], 0.0, -2.0, 1e-12).unwrap();
        assert!((back.y_end()[0] - (-2f64).sin()).abs() < 1e-9);
        assert!((back.eval(&-1.3).unwrap()[1] - (-1.3f64).cos()).abs() < 1e-9);
    }

    #[test]
    fn complex_rotation() {
        let i = Complex64::new(0.0, 1.0);
        let tr = adaptive_rk(move |_t: &f64, y: &[Complex64], dy: &mut [Complex64]| dy[0] = i * y[0], vec![Complex64::new(1.0, 0.0)], 0.0, 3.0, 1e-12).unwrap();
        assert!((tr.y_end()[0] - (i * 3.0).exp()).norm() < 1e-9);
    }

    #[test]
    fn underflow_at_blow_up() {
        // y′ = y², y(0) = 1 blows up at t = 1.
        let r = adaptive_rk(|_t: &f64, y: &[f64], dy: &mut [f64]| dy[0] = y[0] * y[0], vec![1.0], 0.0, 2.0, 1e-10);
        match r {
            Err(OdeError::StepUnderflow { t, partial }) => {
                assert!((t - 1.0).abs() < 1e-3);
                assert!(partial.n_steps() > 0);
            }
            other => panic!("expected underflow, got {other:?}"),
        }
    }

    #[test]
    fn stop_predicate() {
        let tr = integrate(|_t: &f64, y: &[f64], dy: &mut [f64]| dy[0] = y[0], vec![1.0], 0.0, 10.0, &RkOptions::with_tol(1e-10), |_, y| y[0] > 100.0).unwrap();
        assert_eq!(tr.status, RunStatus::Stopped);
        assert!(tr.y_end()[0] > 100.0 && tr.t_end() < 10.0);
    }

    #[test]
    fn halving_tolerance_reduces_error() {
        let f = |t: &f64, y: &[f64], dy: &mut [f64]| dy[0] = -2.0 * t * y[0] + t.cos();
        let reference = adaptive_rk(f, vec![1.0], 0.0, 4.0, 1e-14).unwrap().y_end()[0];
        let e1 = (adaptive_rk(f, vec![1.0], 0.0, 4.0, 1e-6).unwrap().y_end()[0] - reference).abs();
        let e2 = (adaptive_rk(f, vec![1.0], 0.0, 4.0, 1e-8).unwrap().y_end()[0] - reference).abs();
        assert!(e2 < e1, "{e2} !< {e1}");
    }

    #[test]
    fn big_float_exponential() {
        let prec = 160;
        let t0 = Float::with_val(prec, 0);
        let t1 = Float::with_val(prec, 1);
        let tr = adaptive_rk(|_t: &Float, y: &[Float], dy: &mut [Float]| dy[0] = y[0].clone(), vec![Float::with_val(prec, 1)], t0, t1, 1e-20).unwrap();
        let e = Float::with_val(prec, 1).exp();
        let diff = Float::with_val(prec, &tr.y_end()[0] - &e).abs();
        assert!(diff < 1e-18, "{diff}");
    }
}
