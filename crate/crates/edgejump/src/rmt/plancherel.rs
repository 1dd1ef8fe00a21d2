use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rmt::{bernoulli_estimate, run_chunked};

/// Shape of the RSK insertion tableau of `perm`. With `max_rows` set, values
/// bumped out of the last kept row are dropped; the kept rows are exact
/// because row j only ever receives values bumped from row j − 1.
pub fn rsk_shape(perm: &[u32], max_rows: Option<usize>) -> Vec<usize> {
    let cap = max_rows.unwrap_or(usize::MAX);
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for &v in perm {
        let mut x = v;
        let mut r = 0;
        loop {
            if r == rows.len() {
                if r < cap {
                    rows.push(vec![x]);
                }
                break;
            }
            let row = &mut rows[r];
            let pos = row.partition_point(|&y| y < x);
            if pos == row.len() {
                row.push(x);
                break;
            }
            std::mem::swap(&mut row[pos], &mut x);
            r += 1;
        }
    }
    rows.iter().map(Vec::len).collect()
}

/// Length of the longest increasing subsequence by patience sorting.
pub fn lis_length(perm: &[u32]) -> usize {
    let mut piles: Vec<u32> = Vec::new();
    for &v in perm {
        let pos = piles.partition_point(|&y| y < v);
        if pos == piles.len() {
            piles.push(v);
        } else {
            piles[pos] = v;
        }
    }
    piles.len()
}

fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<u32> {
    let mut p: Vec<u32> = (0..n as u32).collect();
    p.shuffle(rng);
    p
}

/// Partition of N distributed by the Plancherel measure (dim λ)²/N!.
pub fn plancherel_sample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    rsk_shape(&random_permutation(n, rng), None)
}

/// The first `k` rows of a Plancherel partition of N.
pub fn plancherel_top_rows<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    rsk_shape(&random_permutation(n, rng), Some(k))
}

/// Number of standard Young tableaux of the given shape, N!/∏ hooks.
/// Exact for N ≤ 30.
pub fn hook_dimension(shape: &[usize]) -> u128 {
    let n: usize = shape.iter().sum();
    assert!(n <= 30, "hook formula kept exact only up to N = 30");
    let mut hooks: Vec<u128> = Vec::new();
    for (i, &len) in shape.iter().enumerate() {
        for j in 0..len {
            let arm = len - j - 1;
            let leg = shape[i + 1..].iter().filter(|&&l| l > j).count();
            hooks.push((arm + leg + 1) as u128);
        }
    }
    // divide as we go to stay inside u128
    let mut num: u128 = 1;
    let mut pending = hooks;
    for k in 1..=n as u128 {
        num *= k;
        pending.retain(|&h| {
            if num.is_multiple_of(h) {
                num /= h;
                false
            } else {
                true
            }
        });
    }
    for h in pending {
        num /= h;
    }
    num
}

/// All partitions of N in reverse lexicographic order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Empirical P(N^{−1/6}(μ₁ − 2√N) ≤ t) at one t.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeCdf {
    pub t: f64,
    pub p: f64,
    pub stderr: f64,
}

/// Plancherel partitions of N with each row deleted with probability s;
/// μ₁ is the largest surviving row (0 when none survive). Only the top
/// `k_rows` rows are built.
pub fn plancherel_edge_cdf(n: usize, s: f64, ts: &[f64], trials: usize, k_rows: usize, seed: u64) -> Vec<EdgeCdf> {
    let centre = 2.0 * (n as f64).sqrt();
    let scale = (n as f64).powf(1.0 / 6.0);
    let hits = run_chunked(
        trials,
        seed,
        || vec![0usize; ts.len()],
        |rng, hits| {
            let rows = plancherel_top_rows(n, k_rows, rng);
            let mu1 = rows.iter().copied().find(|_| rng.gen::<f64>() >= s).unwrap_or(0);
            let x = (mu1 as f64 - centre) / scale;
            for (h, &t) in hits.iter_mut().zip(ts) {
                if x <= t {
                    *h += 1;
                }
            }
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    );
    ts.iter()
        .zip(hits)
        .map(|(&t, h)| {
            let (p, stderr) = bernoulli_estimate(h, trials);
            EdgeCdf { t, p, stderr }
        })
        .collect()
}
