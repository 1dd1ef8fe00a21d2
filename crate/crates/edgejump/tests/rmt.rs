use edgejump::fredholm::{finite_n_det, hermite_gram, GramQuad};
use edgejump::numerics::composite_gauss_legendre;
use edgejump::rmt::*;
use edgejump::specfun::hermite_functions;
use edgejump::weightlab::edge_lambda0;
use edgejump::numerics::PrecisionCtx;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn rng(master: u64) -> rand_chacha::ChaCha8Rng {
    stream_rng(SeedRecord { master, stream: 0 })
}

fn within(est: f64, se: f64, want: f64, sigmas: f64) -> bool {
    (est - want).abs() <= sigmas * se
}

#[test]
fn one_by_one_is_gaussian_with_variance_half() {
    let mut r = rng(1);
    let m = 100_000;
    let xs: Vec<f64> = (0..m).map(|_| sample_gue(1, &mut r).eigenvalues[0]).collect();
    let mean = xs.iter().sum::<f64>() / m as f64;
    let var = xs.iter().map(|x| x * x).sum::<f64>() / m as f64;
    // Var(x²) = 2σ⁴ = 1/2 for σ² = 1/2
    assert!(within(var, (0.5 / m as f64).sqrt(), 0.5, 4.0), "{var}");
    assert!(within(mean, (0.5 / m as f64).sqrt(), 0.0, 4.0));
}

#[test]
fn ql_matches_dense_eigensolver() {
    let mut r = rng(2);
    for n in [1, 2, 5, 17, 60] {
        let t = sample_tridiagonal(n, &mut r);
        let mut m = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = t.diag[i];
            if i + 1 < n {
                m[(i, i + 1)] = t.off[i];
                m[(i + 1, i)] = t.off[i];
            }
        }
        let mut want: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        want.sort_by(|a, b| b.total_cmp(a));
        let got = tridiagonal_eigenvalues(&t);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()), "n={n}");
        }
        for x in [-3.0, -0.1, 0.4, 2.5] {
            assert_eq!(sturm_count_above(&t, x), got.iter().filter(|&&e| e > x).count());
        }
    }
}

#[test]
fn seeded_runs_repeat_bit_for_bit() {
    let a = sample_gue(12, &mut rng(99));
    let b = sample_gue(12, &mut rng(99));
    assert_eq!(a, b);
    assert_eq!(counting_moments(10, 1.0, 3000, 2, 5), counting_moments(10, 1.0, 3000, 2, 5));
    assert_eq!(plancherel_edge_cdf(400, 0.5, &[0.0], 500, 10, 3), plancherel_edge_cdf(400, 0.5, &[0.0], 500, 10, 3));
}

#[test]
fn thinning_extremes() {
    let mut r = rng(3);
    let s = sample_gue(50, &mut r);
    assert_eq!(thin(&s, 0.0, &mut r).survivors, s.eigenvalues);
    let m = 20_000;
    let total: usize = (0..m).map(|_| thin(&s, 0.999, &mut r).survivors.len()).sum();
    let mean = total as f64 / m as f64;
    // Binomial(50, 0.001): mean 0.05, variance ≈ 0.05
    assert!(within(mean, (0.04995 / m as f64).sqrt(), 0.05, 4.0), "{mean}");
}

#[test]
fn survivors_are_a_subset_in_order() {
    let mut r = rng(4);
    let s = sample_gue(30, &mut r);
    let t = thin(&s, 0.4, &mut r);
    let mut it = s.eigenvalues.iter();
    for x in &t.survivors {
        assert!(it.any(|y| y == x));
    }
}

#[test]
fn gap_probability_against_determinant() {
    let (p, se) = gap_probability_mc(8, 3.0, 100_000, 11);
    let want = finite_n_det(8, 3.0, Complex64::new(1.0, 0.0)).re;
    eprintln!("gap n=8: mc {p} ± {se}, det {want}");
    assert!(within(p, se, want, 3.0));
}

#[test]
fn mean_square_against_kernel_diagonal() {
    let n = 8;
    let rule = composite_gauss_legendre(30, -12.0, 12.0, 24).unwrap();
    let want = rule.integrate(|x| x * x * hermite_functions(n, x).iter().map(|p| p * p).sum::<f64>());
    let m = 20_000;
    let mut r = rng(12);
    let xs: Vec<f64> = (0..m).map(|_| sample_gue(n, &mut r).eigenvalues.iter().map(|x| x * x).sum()).collect();
    let mean = xs.iter().sum::<f64>() / m as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
    assert!(within(mean, (var / m as f64).sqrt(), want, 3.0), "{mean} vs {want}");
}

#[test]
fn thinned_gap_against_determinant() {
    let (n, s) = (50, 0.5);
    let l0 = (2.0 * n as f64).sqrt();
    let st = thinning_experiment(n, s, l0, 200_000, 13);
    let want = finite_n_det(n, l0, Complex64::new(1.0 - s, 0.0)).re;
    eprintln!("thinning: mc {} ± {}, histogram {}, det {want}", st.p_thinned, st.stderr, st.p_histogram);
    assert!(within(st.p_thinned, st.stderr, want, 3.0));
    assert_eq!(st.hist.iter().sum::<usize>(), 200_000);
}

#[test]
fn histogram_form_is_the_same_draws() {
    // recount X on the very same draws, chunk by chunk
    let (n, s, l0, trials) = (20, 0.3, 4.0, 3000);
    let st = thinning_experiment(n, s, l0, trials, 21);
    let mut hist = vec![0usize; n + 1];
    let mut direct = 0.0;
    for c in 0..trials.div_ceil(CHUNK) {
        let mut r = stream_rng(SeedRecord { master: 21, stream: c as u64 });
        for _ in 0..CHUNK.min(trials - c * CHUNK) {
            let x = sturm_count_above(&sample_tridiagonal(n, &mut r), l0);
            hist[x] += 1;
            direct += s.powi(x as i32);
            for _ in 0..x {
                if rand::Rng::gen::<f64>(&mut r) >= s {
                    break;
                }
            }
        }
    }
    assert_eq!(hist, st.hist);
    assert!((direct / trials as f64 - st.p_histogram).abs() < 1e-14);
}

#[test]
fn counts_far_left_are_n() {
    let m = counting_moments(15, -30.0, 2000, 2, 7);
    assert_eq!(m[0].mean, 15.0);
    assert_eq!(m[0].stderr, 0.0);
    assert_eq!(m[1].mean, 225.0);
}

#[test]
fn counting_moments_against_gram() {
    let n = 50;
    let l0 = 8.5;
    let g = hermite_gram(n, l0, &GramQuad::default());
    let tr = g.trace();
    let tr2: f64 = g.entries.iter().map(|e| e * e).sum();
    let m = counting_moments(n, l0, 40_000, 2, 31);
    eprintln!("E[X] {} ± {} vs {tr}; E[X²] {} ± {} vs {}", m[0].mean, m[0].stderr, m[1].mean, m[1].stderr, tr + tr * tr - tr2);
    assert!(within(m[0].mean, m[0].stderr, tr, 3.0));
    assert!(within(m[1].mean, m[1].stderr, tr + tr * tr - tr2, 3.0));
}

#[test]
fn edge_count_mean_near_the_airy_limit() {
    let n = 200;
    let l0 = edge_lambda0(n, 0.0, &PrecisionCtx::new(128).unwrap()).to_f64();
    let exact = hermite_gram(n, l0, &GramQuad::default()).trace();
    let (ai, aip) = edgejump::specfun::airy(0.0);
    let limit = -ai * aip / 3.0;
    let m = counting_moments(n, l0, 20_000, 1, 41);
    eprintln!("n=200 E[X]: mc {} ± {}, finite {exact}, limit {limit}", m[0].mean, m[0].stderr);
    assert!(within(m[0].mean, m[0].stderr, exact, 3.0));
    assert!((exact - limit).abs() < 0.02);
}

#[test]
fn rsk_small_cases() {
    assert_eq!(plancherel_sample(1, &mut rng(0)), vec![1]);
    assert_eq!(rsk_shape(&[0, 1, 2], None), vec![3]);
    assert_eq!(rsk_shape(&[2, 1, 0], None), vec![1, 1, 1]);
    assert_eq!(rsk_shape(&[1, 2, 0], None), vec![2, 1]);
    assert_eq!(hook_dimension(&[2, 1]), 2);
    assert_eq!(hook_dimension(&[3, 2]), 5);
    assert_eq!(hook_dimension(&[10, 10, 10]), 7_646_001_090);
    let total: u128 = partitions(8).iter().map(|p| hook_dimension(p).pow(2)).sum();
    assert_eq!(total, 40_320);
}

#[test]
fn plancherel_four_chi_square() {
    let parts = partitions(4);
    let m = 100_000;
    let mut counts = vec![0usize; parts.len()];
    let mut r = rng(5);
    for _ in 0..m {
        let s = plancherel_sample(4, &mut r);
        counts[parts.iter().position(|p| *p == s).unwrap()] += 1;
    }
    let chi2: f64 = parts
        .iter()
        .zip(&counts)
        .map(|(p, &c)| {
            let e = m as f64 * hook_dimension(p).pow(2) as f64 / 24.0;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    // 4 degrees of freedom, 99.9% quantile 18.47
    assert!(chi2 < 18.47, "χ² = {chi2}");
}

#[test]
fn truncated_rsk_keeps_top_rows() {
    use rand::seq::SliceRandom;
    let mut r = rng(6);
    let mut p: Vec<u32> = (0..3000).collect();
    p.shuffle(&mut r);
    let full = rsk_shape(&p, None);
    let top = rsk_shape(&p, Some(8));
    assert_eq!(&full[..8], &top[..]);
    assert_eq!(full.iter().sum::<usize>(), 3000);
}

proptest! {
    #[test]
    fn first_row_is_longest_increasing_subsequence(seed in 0u64..1000, n in 1usize..300) {
        use rand::seq::SliceRandom;
        let mut r = rng(seed);
        let mut p: Vec<u32> = (0..n as u32).collect();
        p.shuffle(&mut r);
        prop_assert_eq!(rsk_shape(&p, None)[0], lis_length(&p));
        let shape = rsk_shape(&p, None);
        prop_assert!(shape.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn sturm_counts_are_monotone(seed in 0u64..500, n in 1usize..40) {
        let t = sample_tridiagonal(n, &mut rng(seed));
        let xs = [-10.0, -2.0, -0.5, 0.0, 0.5, 2.0, 10.0];
        let counts: Vec<usize> = xs.iter().map(|&x| sturm_count_above(&t, x)).collect();
        prop_assert!(counts.windows(2).all(|w| w[0] >= w[1]));
        prop_assert_eq!(counts[0], n);
        prop_assert_eq!(counts[6], 0);
    }
}
