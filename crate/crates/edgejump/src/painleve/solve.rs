use num_complex::Complex64;

use crate::numerics::{integrate, OdeError, RkOptions, RunStatus, Trajectory};
use crate::painleve::laurent::{traverse_pole, LaurentPole};
use crate::painleve::PainleveError;
use crate::specfun::airy;
use crate::weightlab::beta_of_kappa;

/// Knobs of [`solve_as_with`].
#[derive(Clone, Debug)]
pub struct AsOptions {
    pub tol: f64,
    /// The solution is produced on at least [t_min, t_max].
    pub t_max: f64,
    pub traverse_poles: bool,
    /// |u| above this counts as an approaching pole.
    pub blow_up: f64,
    /// Distance from the pole at which the Laurent series hands back to the stepper.
    pub mirror: f64,
}

impl Default for AsOptions {
    fn default() -> Self {
        Self { tol: 1e-12, t_max: 8.0, traverse_poles: true, blow_up: 1e3, mirror: 0.1 }
    }
}

/// (u, u′, v, F) at one t.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsState {
    pub u: Complex64,
    pub du: Complex64,
    pub v: Complex64,
    pub f: Complex64,
}

#[derive(Clone, Debug)]
enum Piece {
    Ode(Trajectory<Complex64>),
    /// Laurent series on [lo, hi].
    Pole { pole: usize, lo: f64, hi: f64 },
}

/// Ablowitz–Segur solution u(t; κ) with v = ∫_t^∞ u² and F = ∫_t^∞ (τ−t)u².
#[derive(Clone, Debug)]
pub struct ASolution {
    pub kappa: Complex64,
    pub beta: Complex64,
    pub t_start: f64,
    pub t_min: f64,
    pub poles: Vec<LaurentPole>,
    pieces: Vec<Piece>,
    /// Steps taken and rejected over all ODE pieces.
    pub steps: usize,
    pub rejected: usize,
}

fn rhs(t: &f64, y: &[Complex64], out: &mut [Complex64]) {
    let u = y[0];
    out[0] = y[1];
    out[1] = *t * u + 2.0 * u * u * u;
    out[2] = -u * u;
    out[3] = -y[2];
}

/// Tail data at t: κ·Ai, κ·Ai′ and the exact tails of v and F for κ·Ai.
fn airy_tail(kappa: Complex64, t: f64) -> [Complex64; 4] {
    let (ai, aip) = airy(t);
    let k2 = kappa * kappa;
    [
        kappa * ai,
        kappa * aip,
        k2 * (aip * aip - t * ai * ai),
        k2 * (2.0 * t * t * ai * ai - ai * aip - 2.0 * t * aip * aip) / 3.0,
    ]
}

/// Where κ²Ai(t)² first drops below tol·10⁻⁴, scanning up from `from`.
fn start_point(kappa: Complex64, tol: f64, from: f64) -> f64 {
    let k2 = kappa.norm_sqr();
    let mut t = from;
    while k2 * airy(t).0.powi(2) >= tol * 1e-4 && t < 60.0 {
        t += 0.25;
    }
    t
}

pub fn solve_as(kappa: Complex64, t_min: f64, tol: f64) -> Result<ASolution, PainleveError> {
    solve_as_with(kappa, t_min, &AsOptions { tol, ..AsOptions::default() })
}

/// Integrates the augmented system (u, u′, v, F) downward from the Airy tail,
/// crossing real poles with the Laurent expansion when allowed.
pub fn solve_as_with(kappa: Complex64, t_min: f64, opts: &AsOptions) -> Result<ASolution, PainleveError> {
    if ((kappa * kappa) - 1.0).norm() < 1e-14 {
        return Err(PainleveError::HastingsMcLeod);
    }
    if !(t_min >= -60.0) || !(t_min < opts.t_max) {
        return Err(PainleveError::OutOfRange(t_min));
    }
    let beta = beta_of_kappa(kappa);
    let t_start = start_point(kappa, opts.tol, opts.t_max);
    let mut sol = ASolution { kappa, beta, t_start, t_min, poles: Vec::new(), pieces: Vec::new(), steps: 0, rejected: 0 };
    if kappa == Complex64::new(0.0, 0.0) {
        return Ok(sol);
    }
    // The stepper runs four digits tighter than `tol`: the PII residual is
    // checked through the derivative of the continuous extension, which is
    // one order less accurate than the steps themselves.
    let rk = RkOptions { rtol: (opts.tol * 1e-4).max(1e-16), atol: 1e-300, ..RkOptions::with_tol(opts.tol) };
    let mut t = t_start;
    let mut y = airy_tail(kappa, t).to_vec();
    let blow = opts.blow_up;
    loop {
        let run = integrate(rhs, y, t, t_min, &rk, |_, y: &[Complex64]| y[0].norm() > blow);
        let (traj, hit_pole) = match run {
            Ok(tr) => {
                let stopped = tr.status == RunStatus::Stopped;
                (tr, stopped)
            }
            Err(OdeError::StepUnderflow { partial, .. }) => (partial, true),
            Err(e @ OdeError::TooManySteps { .. }) => return Err(PainleveError::Integration(e.to_string())),
        };
        sol.steps += traj.n_steps();
        sol.rejected += traj.rejected;
        let tb = traj.t_end();
        if !hit_pole {
            sol.pieces.push(Piece::Ode(traj));
            return Ok(sol);
        }
        if !opts.traverse_poles {
            return Err(PainleveError::PoleEncountered(tb));
        }
        let cross = traverse_pole(&traj, opts.mirror)?;
        sol.pieces.push(Piece::Ode(traj));
        let lo = cross.restart_t.max(t_min);
        sol.pieces.push(Piece::Pole { pole: sol.poles.len(), lo, hi: tb });
        sol.poles.push(cross.pole);
        if cross.restart_t <= t_min {
            return Ok(sol);
        }
        t = cross.restart_t;
        y = cross.restart_state.to_vec();
    }
}

impl ASolution {
    pub fn covers(&self, t: f64) -> bool {
        t >= self.t_min && t <= self.t_start.max(self.t_min)
    }

    fn piece_at(&self, t: f64) -> Option<&Piece> {
        self.pieces.iter().find(|p| match p {
            Piece::Ode(tr) => tr.covers(&t),
            Piece::Pole { lo, hi, .. } => t >= *lo && t <= *hi,
        })
    }

    /// (u, u′, v, F) at t. For t above t_start the Airy tail is used.
    pub fn state(&self, t: f64) -> Result<AsState, PainleveError> {
        if !(t >= self.t_min) {
            return Err(PainleveError::OutOfRange(t));
        }
        if self.pieces.is_empty() || t > self.t_start {
            let [u, du, v, f] = airy_tail(self.kappa, t);
            return Ok(AsState { u, du, v, f });
        }
        let y = match self.piece_at(t).ok_or(PainleveError::OutOfRange(t))? {
            Piece::Ode(tr) => tr.eval(&t).ok_or(PainleveError::OutOfRange(t))?,
            Piece::Pole { pole, .. } => self.poles[*pole].state(t).to_vec(),
        };
        Ok(AsState { u: y[0], du: y[1], v: y[2], f: y[3] })
    }

    pub fn u(&self, t: f64) -> Result<Complex64, PainleveError> {
        Ok(self.state(t)?.u)
    }

    /// u″ from the derivative of the continuous extension of u′, or from the
    /// Laurent series near a pole.
    pub fn d2u(&self, t: f64) -> Result<Complex64, PainleveError> {
        if self.pieces.is_empty() || t > self.t_start {
            let u = self.u(t)?;
            return Ok(t * u + 2.0 * u * u * u);
        }
        match self.piece_at(t).ok_or(PainleveError::OutOfRange(t))? {
            Piece::Ode(tr) => Ok(tr.eval_derivative(&t).ok_or(PainleveError::OutOfRange(t))?[1]),
            Piece::Pole { pole, .. } => Ok(Complex64::new(self.poles[*pole].d2u(t), 0.0)),
        }
    }

    /// |u″ − tu − 2u³| with u″ from dense output.
    pub fn pii_residual(&self, t: f64) -> Result<f64, PainleveError> {
        let u = self.u(t)?;
        Ok((self.d2u(t)? - t * u - 2.0 * u * u * u).norm())
    }

    /// Sign of det(1 − κ²K_Ai) that exp(−F) loses: F is continued through
    /// each simple zero of the determinant with −log|t − a|.
    pub fn det_sign(&self, t: f64) -> f64 {
        if self.poles.iter().filter(|p| p.a > t).count() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// det(1 − κ²K_Ai|[t,∞)) = exp(−F(t)), with the sign restored past poles.
    pub fn tracy_widom(&self, t: f64) -> Result<Complex64, PainleveError> {
        Ok((-self.state(t)?.f).exp() * self.det_sign(t))
    }

    /// Restarts at a − offset below pole `index`, integrates back up through
    /// the pole with a fresh Laurent crossing, and returns the relative
    /// mismatch of u at a + offset against the stored solution.
    pub fn pole_round_trip(&self, index: usize, offset: f64) -> Result<f64, PainleveError> {
        let p = self.poles.get(index).ok_or(PainleveError::OutOfRange(index as f64))?;
        let t0 = p.a - offset;
        let st = self.state(t0)?;
        let rk = RkOptions { atol: 1e-300, ..RkOptions::with_tol(1e-12) };
        let up = integrate(rhs, vec![st.u, st.du, st.v, st.f], t0, p.a + 1.0, &rk, |_, y: &[Complex64]| y[0].norm() > 1e3)
            .map_err(|e| PainleveError::Integration(e.to_string()))?;
        if up.status != RunStatus::Stopped {
            return Err(PainleveError::OutOfRange(p.a));
        }
        let cross = traverse_pole(&up, 0.1)?;
        let back = integrate(rhs, cross.restart_state.to_vec(), cross.restart_t, p.a + offset, &rk, |_, _| false)
            .map_err(|e| PainleveError::Integration(e.to_string()))?;
        let u_orig = self.u(p.a + offset)?;
        Ok((back.y_end()[0] - u_orig).norm() / u_orig.norm())
    }

    /// `n` equally spaced points from t_start down to t_min.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        let hi = self.t_start;
        let lo = self.t_min;
        if n < 2 {
            return vec![lo];
        }
        (0..n).map(|i| hi + (lo - hi) * i as f64 / (n - 1) as f64).collect()
    }
}
