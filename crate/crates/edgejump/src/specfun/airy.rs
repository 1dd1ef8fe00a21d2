//! Airy Ai and Ai′ on the real line in arbitrary precision.

use rug::float::Constant;
use rug::{Assign, Float};

use crate::numerics::PrecisionCtx;
use crate::specfun::SpecError;

const MAX_ABS_X: f64 = 1e4;
/// Guard-bit budget beyond which the power series is refused.
const MAX_GUARD: f64 = 1e6;

/// ζ = (2/3)|x|^{3/2}, in double precision (used only for branch selection).
fn zeta_f64(x: f64) -> f64 {
    2.0 / 3.0 * x.abs().powf(1.5)
}

/// Whether the asymptotic expansion reaches 2^(−target) at |x|.
fn asymptotic_suffices(x: f64, target: u32) -> bool {
    2.0 * zeta_f64(x) * std::f64::consts::LOG2_E > target as f64 + 8.0
}

fn check_domain(x: &Float) -> Result<f64, SpecError> {
    let xf = x.to_f64();
    if !xf.is_finite() || xf.abs() > MAX_ABS_X {
        return Err(SpecError::OutOfDomain(format!("Airy argument {xf} outside |x| ≤ 1e4")));
    }
    Ok(xf)
}

/// Ai(x) and Ai′(x) at `ctx` precision.
pub fn airy_pair(x: &Float, ctx: &PrecisionCtx) -> Result<(Float, Float), SpecError> {
    let xf = check_domain(x)?;
    let bits = ctx.bits();
    let target = bits + 16;
    if asymptotic_suffices(xf, target) {
        let wp = target + 32;
        let (ai, aip) = if xf > 0.0 { asymptotic_pos(x, wp) } else { asymptotic_neg(x, wp) };
        return Ok((Float::with_val(bits, ai), Float::with_val(bits, aip)));
    }
    let guard = 3.0 * xf.abs().powf(1.5) / std::f64::consts::LN_2;
    if guard > MAX_GUARD {
        return Err(SpecError::PrecisionExhausted { x: xf, guard_bits: guard as u64 });
    }
    let wp = target + 32 + guard.ceil() as u32;
    let (ai, aip) = maclaurin(x, wp);
    Ok((Float::with_val(bits, ai), Float::with_val(bits, aip)))
}

pub fn airy_ai(x: &Float, ctx: &PrecisionCtx) -> Result<Float, SpecError> {
    airy_pair(x, ctx).map(|p| p.0)
}

pub fn airy_ai_prime(x: &Float, ctx: &PrecisionCtx) -> Result<Float, SpecError> {
    airy_pair(x, ctx).map(|p| p.1)
}

/// Ai(x) and Ai′(x) in double precision.
///
/// Panics if |x| > 1e4.
pub fn airy(x: f64) -> (f64, f64) {
    let ctx = PrecisionCtx::new(64).expect("64 bits is valid");
    let (a, b) = airy_pair(&Float::with_val(64, x), &ctx).expect("Airy argument within |x| ≤ 1e4");
    (a.to_f64(), b.to_f64())
}

/// Ai(0) = 3^{−2/3}/Γ(2/3) and −Ai′(0) = 3^{−1/3}/Γ(1/3).
pub fn airy_origin_constants(prec: u32) -> (Float, Float) {
    let three = Float::with_val(prec, 3u32);
    let cbrt3 = Float::with_val(prec, three.cbrt_ref());
    let g23 = (Float::with_val(prec, 2u32) / &three).gamma();
    let g13 = Float::with_val(prec, three.recip_ref()).gamma();
    let c1 = Float::with_val(prec, cbrt3.square_ref()) * g23;
    let c2 = cbrt3 * g13;
    (c1.recip(), c2.recip())
}

/// Power series Ai = c1·f − c2·g, Ai′ = c1·f′ − c2·g′ at working precision `wp`.
fn maclaurin(x: &Float, wp: u32) -> (Float, Float) {
    let x = Float::with_val(wp, x);
    let (c1, c2) = airy_origin_constants(wp);
    let x2 = Float::with_val(wp, x.square_ref());
    let x3 = Float::with_val(wp, &x2 * &x);
    let mut t = Float::with_val(wp, 1u32);
    let mut s = x.clone();
    let mut f = t.clone();
    let mut g = s.clone();
    let mut fp = Float::new(wp);
    let mut gp = Float::with_val(wp, 1u32);
    let mut tmp = Float::new(wp);
    let eps_exp = -(wp as i32) - 4;
    let mut k: u32 = 1;
    loop {
        // Derivative terms use the previous series terms.
        tmp.assign(&t * &x2);
        tmp /= 3 * k - 1;
        fp += &tmp;
        tmp.assign(&s * &x2);
        tmp /= 3 * k;
        gp += &tmp;
        t *= &x3;
        t /= (3 * k - 1) * (3 * k);
        s *= &x3;
        s /= (3 * k) * (3 * k + 1);
        f += &t;
        g += &s;
        // Past the peak of the terms, stop once every new term is negligible
        // on the scale of the partial sums.
        let past_peak = 9.0 * (k as f64).powi(2) > x3.to_f64().abs();
        let scale = [&f, &g, &fp, &gp].iter().filter_map(|v| v.get_exp()).max().unwrap_or(0).max(1);
        let small = |v: &Float| v.get_exp().is_none_or(|e| e < scale + eps_exp);
        if past_peak && small(&t) && small(&s) && small(&tmp) {
            break;
        }
        k += 1;
    }
    let ai = Float::with_val(wp, &c1 * &f) - Float::with_val(wp, &c2 * &g);
    let aip = Float::with_val(wp, &c1 * &fp) - Float::with_val(wp, &c2 * &gp);
    (ai, aip)
}

/// Large-argument expansion sums, truncated where the terms u_k ζ^{−k} stop
/// decreasing or drop below 2^{−wp}.
fn asymptotic_sums(zeta: &Float, wp: u32, alternate_pairs: bool) -> [Float; 4] {
    // [Σ_even u, Σ_odd u, Σ_even v, Σ_odd v], each term carrying ζ^{−k} and
    // the sign (−1)^k, or (−1)^{⌊k/2⌋} for the oscillatory expansions.
    let mut sums = [Float::new(wp), Float::new(wp), Float::new(wp), Float::new(wp)];
    let mut u = Float::with_val(wp, 1u32);
    let mut term = Float::with_val(wp, 1u32);
    let mut prev_mag = f64::INFINITY;
    let eps_exp = -(wp as i32) - 4;
    let mut k: u32 = 0;
    loop {
        if k > 0 {
            u *= (6 * k - 5) * (6 * k - 3) * (6 * k - 1);
            u /= 216 * k * (2 * k - 1);
            term.assign(&u);
            for _ in 0..k {
                term /= zeta;
            }
        }
        let mag = term.to_f64().abs();
        if k > 0 && (mag > prev_mag || term.get_exp().unwrap_or(i32::MIN) < eps_exp) {
            break;
        }
        prev_mag = mag;
        // v_k = −u_k (6k+1)/(6k−1)
        let v = if k == 0 { Float::with_val(wp, 1u32) } else { Float::with_val(wp, &term * (6 * k + 1)) / (1i64 - 6 * k as i64) };
        let sign_neg = if alternate_pairs { (k / 2) % 2 == 1 } else { k % 2 == 1 };
        let slot = (k % 2) as usize;
        if sign_neg {
            sums[slot] -= &term;
            sums[2 + slot] -= &v;
        } else {
            sums[slot] += &term;
            sums[2 + slot] += &v;
        }
        k += 1;
    }
    sums
}

fn asymptotic_pos(x: &Float, wp: u32) -> (Float, Float) {
    let x = Float::with_val(wp, x);
    let zeta = Float::with_val(wp, x.clone().sqrt() * &x) * 2u32 / 3u32;
    let [ue, uo, ve, vo] = asymptotic_sums(&zeta, wp, false);
    let pre = Float::with_val(wp, -&zeta).exp() / (Float::with_val(wp, Constant::Pi).sqrt() * 2u32);
    let q = Float::with_val(wp, x.clone().sqrt().sqrt());
    let ai = Float::with_val(wp, &pre / &q) * (ue + uo);
    let aip = -Float::with_val(wp, &pre * &q) * (ve + vo);
    (ai, aip)
}

fn asymptotic_neg(x: &Float, wp: u32) -> (Float, Float) {
    let y = Float::with_val(wp, -x);
    let zeta = Float::with_val(wp, y.clone().sqrt() * &y) * 2u32 / 3u32;
    let [ue, uo, ve, vo] = asymptotic_sums(&zeta, wp, true);
    let pi = Float::with_val(wp, Constant::Pi);
    let phase = Float::with_val(wp, &zeta - Float::with_val(wp, &pi / 4u32));
    let (s, c) = phase.sin_cos(Float::new(wp));
    let q = Float::with_val(wp, y.clone().sqrt().sqrt());
    let rp = pi.sqrt().recip();
    let ai = Float::with_val(wp, &rp / &q) * (Float::with_val(wp, &c * &ue) + Float::with_val(wp, &s * &uo));
    let aip = Float::with_val(wp, &rp * &q) * (Float::with_val(wp, &s * &ve) - Float::with_val(wp, &c * &vo));
    (ai, aip)
}
