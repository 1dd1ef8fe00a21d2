use edgejump::fredholm::*;
use edgejump::numerics::{BigComplex, PrecisionCtx};
use edgejump::painleve::solve_as;
use edgejump::specfun::airy;
use edgejump::weightlab::{build_op_system, edge_lambda0, WeightParams};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rug::Float;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn zero_kappa_is_one() {
    let d = airy_fredholm_det(c(0.0, 0.0), -5.0, &NystromConfig::default()).unwrap();
    assert_eq!(d, c(1.0, 0.0));
}

#[test]
fn far_right_edge_is_one() {
    for k in [0.3, 0.7, 1.0] {
        let d = airy_fredholm_det(c(k * k, 0.0), 8.0, &NystromConfig::default()).unwrap();
        assert!((d - 1.0).norm() < 1e-10, "κ={k}: {d}");
    }
}

#[test]
fn small_tail_trace_at_large_t() {
    // det ≈ 1 − κ² tr K_Ai|[t,∞) once the trace is tiny
    let t = 4.0;
    let (ai, aip) = airy(t);
    // ∫_t^∞ K_Ai(x,x)dx = ∫_t^∞ (x − t)Ai(x)²dx
    let trace = (2.0 * t * t * ai * ai - ai * aip - 2.0 * t * aip * aip) / 3.0;
    let d = airy_fredholm_det(c(0.5, 0.0), t, &NystromConfig::default()).unwrap();
    assert!((d.re - (1.0 - 0.5 * trace)).abs() < trace * trace);
}

#[test]
fn tail_bound_is_enforced() {
    let cfg = NystromConfig { t_trunc: Some(3.0), ..NystromConfig::default() };
    assert!(matches!(airy_fredholm_det(c(0.5, 0.0), -2.0, &cfg), Err(FredholmError::TailBoundViolated { .. })));
    assert!(matches!(airy_fredholm_det(c(0.5, 0.0), -13.0, &NystromConfig::default()), Err(FredholmError::OutOfRange(_))));
    let cfg = NystromConfig { m: 20, ..NystromConfig::default() };
    assert!(matches!(airy_fredholm_det(c(0.5, 0.0), 0.0, &cfg), Err(FredholmError::BadConfig(_))));
}

#[test]
fn kernel_is_continuous_across_the_diagonal() {
    let x = -3.3;
    let ax = airy(x);
    let on = airy_kernel(x, ax, x, ax);
    for d in [1e-7, 2e-6, 1e-4] {
        let y = x + d;
        let k = airy_kernel(x, ax, y, airy(y));
        assert!((k - on).abs() < 2.0 * d, "d={d}");
    }
}

#[test]
fn nodes_doubling_meets_tol() {
    let cfg = NystromConfig::with_tol(1e-13);
    let r = airy_fredholm_det_detailed(c(0.49, 0.0), -10.0, &cfg).unwrap();
    assert!(r.change < 1e-13);
    assert!(r.tail < 1e-14);
}

#[test]
fn agrees_with_painleve_representation() {
    let cfg = NystromConfig::with_tol(1e-12);
    let mut worst: f64 = 0.0;
    for kappa in [0.3, 0.7, 0.95] {
        let sol = solve_as(c(kappa, 0.0), -8.0, 1e-12).unwrap();
        for i in 0..=24 {
            let t = -8.0 + 0.5 * i as f64;
            let fd = airy_fredholm_det(c(kappa * kappa, 0.0), t, &cfg).unwrap();
            let pv = sol.tracy_widom(t).unwrap();
            worst = worst.max((fd - pv).norm());
        }
    }
    assert!(worst < 1e-8, "worst {worst:e}");
}

#[test]
fn complex_kappa_against_painleve() {
    let kappa = c(0.6, 0.3);
    let sol = solve_as(kappa, -4.0, 1e-12).unwrap();
    for t in [-4.0, -1.5, 1.0] {
        let fd = airy_fredholm_det(kappa * kappa, t, &NystromConfig::default()).unwrap();
        assert!((fd - sol.tracy_widom(t).unwrap()).norm() < 1e-8, "t={t}");
    }
}

#[test]
fn increasing_in_t() {
    let cfg = NystromConfig::default();
    for kappa in [0.4, 0.9] {
        let vals: Vec<f64> = (0..40)
            .map(|i| airy_fredholm_det(c(kappa * kappa, 0.0), -8.0 + 12.0 * i as f64 / 39.0, &cfg).unwrap().re)
            .collect();
        for w in vals.windows(2) {
            assert!(w[1] > w[0] - 1e-12);
        }
        assert!(vals[39] <= 1.0 + 1e-12);
    }
}

fn eigenvalues(g: &GramMatrix) -> Vec<f64> {
    DMatrix::from_row_slice(g.n, g.n, &g.entries).symmetric_eigenvalues().iter().copied().collect()
}

#[test]
fn gram_limits() {
    let q = GramQuad::default();
    let g = hermite_gram(4, -30.0, &q);
    for j in 0..4 {
        for k in 0..4 {
            let want = if j == k { 1.0 } else { 0.0 };
            assert!((g.get(j, k) - want).abs() < 1e-15, "({j},{k}) {}", g.get(j, k));
        }
    }
    let g = hermite_gram(4, 30.0, &q);
    assert!(g.entries.iter().all(|e| e.abs() < 1e-300));
    let g = hermite_gram(7, 0.0, &q);
    for j in 0..7 {
        assert!((g.get(j, j) - 0.5).abs() < 1e-15);
        for k in 0..7 {
            if (j + k) % 2 == 1 {
                assert!(g.get(j, k).abs() > 1e-3 || j.abs_diff(k) > 1);
            } else if j != k {
                assert!(g.get(j, k).abs() < 1e-15, "({j},{k})");
            }
        }
    }
}

#[test]
fn gram_trace_matches_kernel_diagonal() {
    // tr G = ∫_{λ0}^∞ Σ ψ_k² computed on an independent uniform grid
    let (n, l0) = (9, 0.7);
    let g = hermite_gram(n, l0, &GramQuad::default());
    let (b, m) = (14.0, 200_000);
    let h = (b - l0) / m as f64;
    let f = |x: f64| hermite_functions_sq(n, x);
    let mut s = 0.5 * (f(l0) + f(b));
    for i in 1..m {
        s += f(l0 + h * i as f64);
    }
    assert!((s * h - g.trace()).abs() < 1e-9);
}

fn hermite_functions_sq(n: usize, x: f64) -> f64 {
    edgejump::specfun::hermite_functions(n, x).iter().map(|p| p * p).sum()
}

#[test]
fn gram_at_large_degree_is_a_projection_far_left() {
    let g = hermite_gram(120, -40.0, &GramQuad::default());
    for j in 0..120 {
        assert!((g.get(j, j) - 1.0).abs() < 1e-12);
    }
}

/// e^{−iπnβ}H_n(β)/H_n(0) against det(I − κ²G), both at weightlab precision.
#[test]
fn hankel_ratio_equals_gram_determinant() {
    let betas = [c(0.0, 0.4), c(0.3, 0.0), c(0.2, 0.1)];
    let mut worst: f64 = 0.0;
    for n in [4usize, 10, 20] {
        let ctx = PrecisionCtx::for_hankel(n);
        let p = ctx.bits();
        for l0 in [-1.0, 0.5, (2.0 * n as f64).sqrt()] {
            let base = build_op_system(&WeightParams::direct(c(0.0, 0.0), l0).unwrap(), n, &ctx).unwrap();
            for beta in betas {
                let sys = build_op_system(&WeightParams::direct(beta, l0).unwrap(), n, &ctx).unwrap();
                let b = BigComplex::from_c64(beta, p);
                let phase = (-&b.scale(&Float::with_val(p, n))).exp_i_pi();
                let lhs = &(&phase * &sys.hankel[n]) / &base.hankel[n];
                let k2 = &BigComplex::one(p) - &(-&b.scale(&Float::with_val(p, 2))).exp_i_pi();
                let det = finite_n_det_big(n, &Float::with_val(p, l0), &k2, &ctx);
                let err = (&lhs - &det).abs().to_f64();
                worst = worst.max(err);
                assert!(err < 1e-18, "n={n} λ0={l0} β={beta}: {err:e}");
            }
        }
    }
    eprintln!("worst Hankel/Gram mismatch {worst:e}");
}

#[test]
fn double_and_big_gram_agree() {
    let ctx = PrecisionCtx::new(160).unwrap();
    let k2 = c(0.4, -0.2);
    for (n, l0) in [(5usize, -0.3), (16, 2.1)] {
        let d = finite_n_det(n, l0, k2);
        let big = finite_n_det_big(n, &Float::with_val(160, l0), &BigComplex::from_c64(k2, 160), &ctx).to_c64();
        assert!((d - big).norm() < 1e-14, "n={n}");
    }
}

#[test]
fn airy_limit_at_large_n() {
    let n = 400;
    let t = -2.0;
    let l0 = edge_lambda0(n, t, &PrecisionCtx::new(128).unwrap()).to_f64();
    let k2 = c(0.49, 0.0);
    let fin = finite_n_det(n, l0, k2);
    let lim = airy_fredholm_det(k2, t, &NystromConfig::default()).unwrap();
    eprintln!("n=400 finite {fin} limit {lim} gap {:e}", (fin - lim).norm());
    assert!((fin - lim).norm() < 2e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gram_spectrum_in_unit_interval(n in 1usize..30, l0 in -8.0f64..8.0) {
        let g = hermite_gram(n, l0, &GramQuad::default());
        for j in 0..n {
            for k in 0..n {
                prop_assert_eq!(g.get(j, k), g.get(k, j));
            }
        }
        for e in eigenvalues(&g) {
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&e), "eigenvalue {}", e);
        }
    }

    #[test]
    fn gram_complement(n in 1usize..20, l0 in -4.0f64..4.0) {
        // G(λ0) + G_reflected(−λ0) = I with ψ_k(−x) = (−1)^k ψ_k(x)
        let a = hermite_gram(n, l0, &GramQuad::default());
        let b = hermite_gram(n, -l0, &GramQuad::default());
        for j in 0..n {
            for k in 0..n {
                let sign = if (j + k) % 2 == 0 { 1.0 } else { -1.0 };
                let want = if j == k { 1.0 } else { 0.0 };
                prop_assert!((a.get(j, k) + sign * b.get(j, k) - want).abs() < 1e-14);
            }
        }
    }
}

