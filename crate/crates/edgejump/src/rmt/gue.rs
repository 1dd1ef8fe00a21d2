use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::rmt::{bernoulli_estimate, run_chunked, SeedRecord};

/// Symmetric tridiagonal matrix: `diag` and the n−1 off-diagonal entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSample {
    pub n: usize,
    /// Descending.
    pub eigenvalues: Vec<f64>,
    pub seed: Option<SeedRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThinnedSample {
    /// Descending.
    pub survivors: Vec<f64>,
    pub s: f64,
}

/// Dumitriu–Edelman model scaled to the density ∏(x_i−x_j)²∏e^{−x_j²}:
/// diagonal N(0, 1/2), off-diagonal χ_{2(n−k)}/2.
pub fn sample_tridiagonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Tridiagonal {
    let sd = std::f64::consts::FRAC_1_SQRT_2;
    let diag = (0..n).map(|_| sd * rng.sample::<f64, _>(StandardNormal)).collect();
    let off = (1..n)
        .map(|k| 0.5 * ChiSquared::new(2.0 * (n - k) as f64).expect("positive dof").sample(rng).sqrt())
        .collect();
    Tridiagonal { diag, off }
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with
/// Wilkinson shifts, returned in descending order.
pub fn tridiagonal_eigenvalues(t: &Tridiagonal) -> Vec<f64> {
    let n = t.diag.len();
    let mut d = t.diag.clone();
    let mut e = t.off.clone();
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 60, "QL iteration did not converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| b.total_cmp(a));
    d
}

/// Number of eigenvalues above x from the signs of the LDLᵀ pivots of T − x.
pub fn sturm_count_above(t: &Tridiagonal, x: f64) -> usize {
    let n = t.diag.len();
    let mut below = 0;
    let mut q = 1.0;
    for i in 0..n {
        let b2 = if i == 0 { 0.0 } else { t.off[i - 1] * t.off[i - 1] };
        q = t.diag[i] - x - if i == 0 { 0.0 } else { b2 / q };
        if q == 0.0 {
            q = f64::EPSILON * (t.diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            below += 1;
        }
    }
    n - below
}

pub fn sample_gue<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SpectrumSample {
    assert!(n >= 1, "n must be positive");
    SpectrumSample { n, eigenvalues: tridiagonal_eigenvalues(&sample_tridiagonal(n, rng)), seed: None }
}

/// Removes each eigenvalue independently with probability s.
pub fn thin<R: Rng + ?Sized>(sample: &SpectrumSample, s: f64, rng: &mut R) -> ThinnedSample {
    let survivors = sample.eigenvalues.iter().copied().filter(|_| rng.gen::<f64>() >= s).collect();
    ThinnedSample { survivors, s }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub k: usize,
    pub mean: f64,
    pub stderr: f64,
}

/// Sample moments E[X^k], k = 1..=kmax, of the number X of eigenvalues
/// above λ0.
pub fn counting_moments(n: usize, lambda0: f64, trials: usize, kmax: usize, seed: u64) -> Vec<MomentEstimate> {
    let (s1, s2) = run_chunked(
        trials,
        seed,
        || (vec![0.0; kmax + 1], vec![0.0; kmax + 1]),
        |rng, (s1, s2)| {
            let x = sturm_count_above(&sample_tridiagonal(n, rng), lambda0) as f64;
            for k in 1..=kmax {
                let v = x.powi(k as i32);
                s1[k] += v;
                s2[k] += v * v;
            }
        },
        |(mut a1, mut a2), (b1, b2)| {
            for k in 0..a1.len() {
                a1[k] += b1[k];
                a2[k] += b2[k];
            }
            (a1, a2)
        },
    );
    let t = trials as f64;
    (1..=kmax)
        .map(|k| {
            let mean = s1[k] / t;
            let var = (s2[k] / t - mean * mean).max(0.0) * t / (t - 1.0).max(1.0);
            MomentEstimate { k, mean, stderr: (var / t).sqrt() }
        })
        .collect()
}

/// Frequency of no eigenvalue above λ0, with its standard error.
pub fn gap_probability_mc(n: usize, lambda0: f64, trials: usize, seed: u64) -> (f64, f64) {
    let hits = run_chunked(
        trials,
        seed,
        || 0usize,
        |rng, h| {
            if sturm_count_above(&sample_tridiagonal(n, rng), lambda0) == 0 {
                *h += 1;
            }
        },
        |a, b| a + b,
    );
    bernoulli_estimate(hits, trials)
}

/// Outcome of the thinning experiment at one cut.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThinningStats {
    pub trials: usize,
    /// Frequency of μ₁ ≤ λ0 after random deletions, and its standard error.
    pub p_thinned: f64,
    pub stderr: f64,
    /// hist[k] = number of draws with exactly k eigenvalues above λ0.
    pub hist: Vec<usize>,
    /// Σ_k (hist[k]/trials)·s^k: the average over draws of the conditional
    /// probability s^X that every eigenvalue above λ0 is deleted.
    pub p_histogram: f64,
}

/// Draws GUE spectra, deletes each eigenvalue with probability s, and
/// records whether the largest survivor sits at or below λ0. Only the
/// eigenvalues above λ0 matter for that event, so each draw needs just
/// their number X and X deletion coins.
pub fn thinning_experiment(n: usize, s: f64, lambda0: f64, trials: usize, seed: u64) -> ThinningStats {
    let (hits, hist) = run_chunked(
        trials,
        seed,
        || (0usize, vec![0usize; n + 1]),
        |rng, (hits, hist)| {
            let x = sturm_count_above(&sample_tridiagonal(n, rng), lambda0);
            hist[x] += 1;
            if (0..x).all(|_| rng.gen::<f64>() < s) {
                *hits += 1;
            }
        },
        |(ha, mut a), (hb, b)| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            (ha + hb, a)
        },
    );
    let (p, se) = bernoulli_estimate(hits, trials);
    let t = trials as f64;
    let p_histogram = hist.iter().enumerate().map(|(k, &h)| h as f64 / t * s.powi(k as i32)).sum();
    ThinningStats { trials, p_thinned: p, stderr: se, hist, p_histogram }
}
