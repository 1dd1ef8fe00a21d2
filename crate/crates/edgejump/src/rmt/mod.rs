//! Monte Carlo: GUE spectra from the tridiagonal model, thinning, counting
//! statistics above a cut, and Plancherel-random partitions via RSK.
//!
//! Every experiment takes a master seed. Trials are cut into fixed-size
//! chunks and chunk c draws from ChaCha8 stream c, so results do not depend
//! on the number of threads.

mod gue;
mod plancherel;

pub use gue::{
    counting_moments, gap_probability_mc, sample_gue, sample_tridiagonal, sturm_count_above, thin,
    thinning_experiment, tridiagonal_eigenvalues, MomentEstimate, SpectrumSample, ThinnedSample, ThinningStats,
    Tridiagonal,
};
pub use plancherel::{
    hook_dimension, lis_length, partitions, plancherel_edge_cdf, plancherel_sample, plancherel_top_rows, rsk_shape,
    EdgeCdf,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Trials per RNG stream.
pub const CHUNK: usize = 1024;

/// Where a sample's randomness came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub master: u64,
    pub stream: u64,
}

pub fn stream_rng(seed: SeedRecord) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.master);
    rng.set_stream(seed.stream);
    rng
}

/// Mean and standard error of a Bernoulli frequency.
pub fn bernoulli_estimate(hits: usize, trials: usize) -> (f64, f64) {
    let p = hits as f64 / trials as f64;
    (p, (p * (1.0 - p) / trials as f64).sqrt())
}

/// Runs `trials` trials in chunks of [`CHUNK`], chunk c on stream c, and
/// folds the per-chunk accumulators with `merge`.
pub(crate) fn run_chunked<A, F, M>(trials: usize, master: u64, init: impl Fn() -> A + Sync, trial: F, merge: M) -> A
where
    A: Send,
    F: Fn(&mut ChaCha8Rng, &mut A) + Sync,
    M: Fn(A, A) -> A + Sync + Send,
{
    use rayon::prelude::*;
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(SeedRecord { master, stream: c as u64 });
            let mut acc = init();
            let count = CHUNK.min(trials - c * CHUNK);
            for _ in 0..count {
                trial(&mut rng, &mut acc);
            }
            acc
        })
        .reduce(&init, &merge)
}
