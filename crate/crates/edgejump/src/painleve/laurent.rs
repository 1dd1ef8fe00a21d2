use num_complex::Complex64;

use crate::numerics::Trajectory;
use crate::painleve::PainleveError;

/// Number of Taylor coefficients kept after the polar term.
const ORDER: usize = 14;

/// Real pole of u″ = tu + 2u³ at t = a, with
/// u = ε/s − εa·s/6 − ε·s²/4 + h·s³ + …, s = t − a.
///
/// `c_v` and `c_f` are the constant terms of v = 1/s + c_v + … and
/// F = −log|s| + c_f + …, fitted to the integrated antiderivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPole {
    pub a: f64,
    pub eps: f64,
    pub h: f64,
    pub c_v: f64,
    pub c_f: f64,
    /// c_{−1}, c_0, …, c_ORDER
    coeffs: Vec<f64>,
}

/// Coefficients c_{−1}..c_ORDER from the order-by-order balance of
/// k(k−1)c_k = a·c_{k−2} + c_{k−3} + 2[u³]_{k−2}; c_3 = h is the free one.
fn series(a: f64, eps: f64, h: f64) -> Vec<f64> {
    let mut c = vec![0.0; ORDER + 2];
    c[0] = eps;
    let get = |c: &[f64], k: i64| if k < -1 { 0.0 } else { c[(k + 1) as usize] };
    for k in 0..=ORDER as i64 {
        if k == 3 {
            c[4] = h;
            continue;
        }
        // [u³]_{k−2} over the coefficients known so far (c_k still zero)
        let m = k - 2;
        let mut cube = 0.0;
        for i in -1..=k {
            for j in -1..=k {
                let l = m - i - j;
                if (-1..=k).contains(&l) {
                    cube += get(&c, i) * get(&c, j) * get(&c, l);
                }
            }
        }
        let rhs = a * get(&c, k - 2) + get(&c, k - 3) + 2.0 * cube;
        c[(k + 1) as usize] = rhs / ((k * (k - 1)) as f64 - 6.0);
    }
    c
}

impl LaurentPole {
    pub fn new(a: f64, eps: f64, h: f64) -> Self {
        Self { a, eps, h, c_v: 0.0, c_f: 0.0, coeffs: series(a, eps, h) }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn u(&self, t: f64) -> f64 {
        let s = t - self.a;
        self.coeffs.iter().enumerate().map(|(i, c)| c * s.powi(i as i32 - 1)).sum()
    }

    pub fn du(&self, t: f64) -> f64 {
        let s = t - self.a;
        self.coeffs.iter().enumerate().map(|(i, c)| (i as f64 - 1.0) * c * s.powi(i as i32 - 2)).sum()
    }

    pub fn d2u(&self, t: f64) -> f64 {
        let s = t - self.a;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let k = i as f64 - 1.0;
                k * (k - 1.0) * c * s.powi(i as i32 - 3)
            })
            .sum()
    }

    /// Coefficients d_0, d_1, … of the regular part of u² = 1/s² + Σ d_m s^m.
    fn square_regular(&self) -> Vec<f64> {
        let n = self.coeffs.len();
        let mut d = vec![0.0; n - 1];
        for i in 0..n {
            for j in 0..n {
                let m = i as i64 + j as i64 - 2;
                if m >= 0 && (m as usize) < d.len() {
                    d[m as usize] += self.coeffs[i] * self.coeffs[j];
                }
            }
        }
        d
    }

    /// v − c_v, from v′ = −u².
    fn v_shape(&self, s: f64) -> f64 {
        let d = self.square_regular();
        1.0 / s - d.iter().enumerate().map(|(m, dm)| dm * s.powi(m as i32 + 1) / (m as f64 + 1.0)).sum::<f64>()
    }

    /// F − c_f + c_v·s, from F′ = −v.
    fn f_shape(&self, s: f64) -> f64 {
        let d = self.square_regular();
        -s.abs().ln()
            + d.iter().enumerate().map(|(m, dm)| dm * s.powi(m as i32 + 2) / ((m as f64 + 1.0) * (m as f64 + 2.0))).sum::<f64>()
    }

    pub fn v(&self, t: f64) -> f64 {
        self.v_shape(t - self.a) + self.c_v
    }

    pub fn f(&self, t: f64) -> f64 {
        let s = t - self.a;
        self.f_shape(s) - self.c_v * s + self.c_f
    }

    /// (u, u′, v, F) at t.
    pub fn state(&self, t: f64) -> [Complex64; 4] {
        [self.u(t), self.du(t), self.v(t), self.f(t)].map(|x| Complex64::new(x, 0.0))
    }

    fn fit_constants(&mut self, t: f64, v: f64, f: f64) {
        let s = t - self.a;
        self.c_v = v - self.v_shape(s);
        self.c_f = f - self.f_shape(s) + self.c_v * s;
    }
}

/// Fits (a, h) through two approach-side samples by Newton's method.
fn fit_two_point(eps: f64, a0: f64, t1: f64, u1: f64, t2: f64, u2: f64) -> Option<(f64, f64)> {
    let resid = |a: f64, h: f64| {
        let p = LaurentPole::new(a, eps, h);
        [p.u(t1) - u1, p.u(t2) - u2]
    };
    let (mut a, mut h) = (a0, 0.0);
    for _ in 0..60 {
        let r = resid(a, h);
        let da = 1e-7;
        let dh = 1e-5;
        let ra = resid(a + da, h);
        let rh = resid(a, h + dh);
        let j = [[(ra[0] - r[0]) / da, (rh[0] - r[0]) / dh], [(ra[1] - r[1]) / da, (rh[1] - r[1]) / dh]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let sa = (r[0] * j[1][1] - r[1] * j[0][1]) / det;
        let sh = (j[0][0] * r[1] - j[1][0] * r[0]) / det;
        a -= sa;
        h -= sh;
        if sa.abs() < 1e-15 * (1.0 + a.abs()) && sh.abs() < 1e-13 * (1.0 + h.abs()) {
            return Some((a, h));
        }
    }
    let r = resid(a, h);
    (r[0].abs() < 1e-9 * u1.abs() && r[1].abs() < 1e-9 * u2.abs()).then_some((a, h))
}

/// Outcome of crossing one pole.
#[derive(Clone, Debug)]
pub struct Crossing {
    pub pole: LaurentPole,
    /// First t on the far side, a ∓ Δ.
    pub restart_t: f64,
    pub restart_state: [Complex64; 4],
}

/// Fits the local Laurent expansion to the last stretch of `traj`, which
/// ended because u blew up, and restarts on the far side at distance
/// `mirror` from the pole. The trajectory may run in either direction.
pub fn traverse_pole(traj: &Trajectory<Complex64>, mirror: f64) -> Result<Crossing, PainleveError> {
    let tb = traj.t_end();
    let dir = (tb - traj.t_start()).signum();
    let yb = traj.y_end();
    if yb.iter().any(|z| z.im.abs() > 1e-8 * (1.0 + z.re.abs())) {
        return Err(PainleveError::PoleEncountered(tb));
    }
    let ub = yb[0].re;
    // approaching from the side s = −dir·|s|
    let eps = -dir * ub.signum();
    let a0 = tb - eps / ub;
    let sample = |t: f64| traj.eval(&t).ok_or(PainleveError::FitFailure { t, residual: f64::NAN });
    let t1 = a0 - dir * mirror;
    let t2 = a0 - dir * mirror / 2.0;
    let (y1, y2) = (sample(t1)?, sample(t2)?);
    let (a, h) = fit_two_point(eps, a0, t1, y1[0].re, t2, y2[0].re)
        .ok_or(PainleveError::FitFailure { t: tb, residual: f64::INFINITY })?;
    let mut pole = LaurentPole::new(a, eps, h);
    let check = (pole.u(tb) - ub).abs() / ub.abs();
    if !(check <= 1e-4) {
        return Err(PainleveError::FitFailure { t: tb, residual: check });
    }
    pole.fit_constants(t2, y2[2].re, y2[3].re);
    let restart_t = a + dir * mirror;
    let restart_state = pole.state(restart_t);
    Ok(Crossing { pole, restart_t, restart_state })
}
