//! Complex Γ, log Γ and the Barnes G-function in double precision.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::specfun::SpecError;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// ζ′(−1)
pub const ZETA_PRIME_MINUS_ONE: f64 = -0.165_421_143_700_450_94;

fn check_pole(z: Complex64) -> Result<(), SpecError> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(SpecError::PoleAtNonpositiveInteger(z.re));
    }
    Ok(())
}

/// log Γ(z) for Re z ≥ 1/2, continuous on that half-plane.
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// Γ(z) by the Lanczos approximation, with reflection for Re z < 1/2.
pub fn gamma_complex(z: Complex64) -> Result<Complex64, SpecError> {
    check_pole(z)?;
    if z.re < 0.5 {
        let s = (PI * z).sin();
        return Ok(PI / (s * ln_gamma_right(1.0 - z).exp()));
    }
    Ok(ln_gamma_right(z).exp())
}

/// log Γ(z). For Re z ≥ 1/2 this is the branch continuous from the positive
/// axis; on the left half-plane the reflection formula is used with principal
/// logarithms, so the imaginary part is only defined modulo 2π there.
pub fn ln_gamma_complex(z: Complex64) -> Result<Complex64, SpecError> {
    check_pole(z)?;
    if z.re < 0.5 {
        return Ok(PI.ln() - (PI * z).sin().ln() - ln_gamma_right(1.0 - z));
    }
    Ok(ln_gamma_right(z))
}

/// Bernoulli numbers B_4, B_6, …, B_20.
const BERNOULLI: [f64; 9] = [
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// log G(1 + x) for large |x| by its asymptotic expansion.
fn ln_barnes_asymptotic(x: Complex64) -> Complex64 {
    let lx = x.ln();
    let x2 = x * x;
    let mut s = (x2 / 2.0 - 1.0 / 12.0) * lx - 0.75 * x2 + x / 2.0 * (2.0 * PI).ln() + ZETA_PRIME_MINUS_ONE;
    let inv2 = 1.0 / x2;
    let mut p = inv2;
    for (k, &b) in BERNOULLI.iter().enumerate() {
        let k = (k + 1) as f64;
        s += b / (4.0 * k * (k + 1.0)) * p;
        p *= inv2;
    }
    s
}

/// log G(z), shifted up by G(z+1) = Γ(z)G(z) until the expansion is accurate.
///
/// Requires Re z > 0; the result is the branch continuous from the positive
/// real axis.
pub fn ln_barnes_g(z: Complex64) -> Result<Complex64, SpecError> {
    if !(z.re > 0.0) {
        return Err(SpecError::OutOfDomain(format!("Barnes G needs Re z > 0, got {z}")));
    }
    let mut w = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while (w - 1.0).norm() < 16.0 || w.re < 16.0 {
        acc -= ln_gamma_right_or_reflect(w)?;
        w += 1.0;
    }
    Ok(ln_barnes_asymptotic(w - 1.0) + acc)
}

fn ln_gamma_right_or_reflect(z: Complex64) -> Result<Complex64, SpecError> {
    if z.re >= 0.5 {
        Ok(ln_gamma_right(z))
    } else {
        // log Γ(z) = log Γ(z+1) − log z keeps the branch continuous for Re z > 0.
        Ok(ln_gamma_right(z + 1.0) - z.ln())
    }
}

pub fn barnes_g(z: Complex64) -> Result<Complex64, SpecError> {
    ln_barnes_g(z).map(|l| l.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gamma_values() {
        assert!((gamma_complex(c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        assert!((gamma_complex(c(0.5, 0.0)).unwrap() - PI.sqrt()).norm() < 1e-14);
        assert!((gamma_complex(c(5.0, 0.0)).unwrap() - 24.0).norm() < 24.0 * 1e-14);
        assert!((gamma_complex(c(-0.5, 0.0)).unwrap() + 2.0 * PI.sqrt()).norm() < 1e-14);
        assert!(matches!(gamma_complex(c(-3.0, 0.0)), Err(SpecError::PoleAtNonpositiveInteger(_))));
        assert!(matches!(gamma_complex(c(0.0, 0.0)), Err(SpecError::PoleAtNonpositiveInteger(_))));
    }

    #[test]
    fn gamma_on_imaginary_axis() {
        // |Γ(iy)|² = π/(y sinh πy)
        for y in [0.3, 1.0, 2.5] {
            let g = gamma_complex(c(0.0, y)).unwrap();
            let want = PI / (y * (PI * y).sinh());
            assert!((g.norm_sqr() / want - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn barnes_small_integers() {
        for z in [1.0, 2.0, 3.0] {
            assert!((barnes_g(c(z, 0.0)).unwrap() - 1.0).norm() < 1e-13);
        }
        // G(5) = 1!·2!·3! = 12
        assert!((barnes_g(c(5.0, 0.0)).unwrap() - 12.0).norm() < 12.0 * 1e-13);
        let b = c(0.0, 0.0);
        let p = barnes_g(1.0 + b).unwrap() * barnes_g(1.0 - b).unwrap();
        assert!((p - 1.0).norm() < 1e-13);
    }

    #[test]
    fn barnes_half_against_log_gamma_integral() {
        // log G(1+z) = (z/2)log 2π − z(z+1)/2 + z·logΓ(1+z) − ∫_0^z logΓ(1+x)dx at z = −1/2.
        let z = -0.5f64;
        let rule = crate::numerics::gauss_legendre(40, z, 0.0).unwrap();
        let integral = -rule.integrate(|x| ln_gamma_complex(c(1.0 + x, 0.0)).unwrap().re);
        let lg = z / 2.0 * (2.0 * PI).ln() - z * (z + 1.0) / 2.0 + z * ln_gamma_complex(c(1.0 + z, 0.0)).unwrap().re - integral;
        let g = barnes_g(c(0.5, 0.0)).unwrap();
        assert!((g.re - lg.exp()).abs() < 1e-13, "{} vs {}", g.re, lg.exp());
        assert!((g.re - 0.603_244_281_209_446).abs() < 1e-13);
        assert!(g.im.abs() < 1e-15);
    }

    #[test]
    fn barnes_functional_equation_complex() {
        for z in [c(0.7, 0.3), c(1.2, -0.4), c(0.5, 0.15), c(2.3, 1.1)] {
            let lhs = barnes_g(z + 1.0).unwrap();
            let rhs = gamma_complex(z).unwrap() * barnes_g(z).unwrap();
            assert!((lhs / rhs - 1.0).norm() < 1e-12, "z={z}");
        }
    }

    proptest! {
        #[test]
        fn recurrence(re in -6.0f64..6.0, im in -4.0f64..4.0) {
            prop_assume!(im.abs() > 1e-3 || (re - re.round()).abs() > 1e-3);
            let z = c(re, im);
            let r = gamma_complex(z + 1.0).unwrap() / (z * gamma_complex(z).unwrap());
            prop_assert!((r - 1.0).norm() < 1e-13);
        }

        #[test]
        fn reflection(re in -4.0f64..4.0, im in -2.0f64..2.0) {
            prop_assume!(im.abs() > 1e-2 || (re - re.round()).abs() > 1e-2);
            let z = c(re, im);
            let r = gamma_complex(z).unwrap() * gamma_complex(1.0 - z).unwrap() * (PI * z).sin() / PI;
            prop_assert!((r - 1.0).norm() < 1e-13);
        }
    }
}
