//! Seeded, splittable randomness for the Monte Carlo engines.
//!
//! Every stochastic run is driven by ChaCha12 streams. Work is divided
//! into a fixed number of blocks, each owning its own stream, so results
//! are bit-identical for any worker count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Name recorded in reports next to the seed.
pub const RNG_NAME: &str = "chacha12";

/// Number of independent sample blocks per Monte Carlo run.
pub const MC_BLOCKS: u64 = 256;

/// The RNG for one block of one seeded run.
pub fn block_rng(seed: u64, block: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Split `samples` into `MC_BLOCKS` contiguous blocks (the last ones may be
/// one sample shorter).
pub fn block_sizes(samples: u64) -> Vec<u64> {
    let blocks = MC_BLOCKS.min(samples.max(1));
    (0..blocks)
        .map(|b| samples / blocks + u64::from(b < samples % blocks))
        .collect()
}

/// Run a counting Monte Carlo: `body(rng, n)` processes one block of `n`
/// samples and returns per-block tallies, summed in block order.
pub fn run_blocks<T, F>(samples: u64, seed: u64, workers: usize, body: F) -> Vec<T>
where
    T: Send,
    F: Fn(ChaCha12Rng, u64) -> T + Sync,
{
    let sizes = block_sizes(samples);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| {
        use rayon::prelude::*;
        sizes
            .par_iter()
            .enumerate()
            .map(|(b, &n)| body(block_rng(seed, b as u64), n))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn blocks_cover_sample_count() {
        for s in [1u64, 100, 999, 1_000_000] {
            assert_eq!(block_sizes(s).iter().sum::<u64>(), s);
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let run = |workers| {
            run_blocks(100_000, 42, workers, |mut rng, n| {
                (0..n).filter(|_| rng.gen::<u64>() % 7 == 0).count() as u64
            })
            .iter()
            .sum::<u64>()
        };
        let one = run(1);
        assert_eq!(one, run(4));
        assert_eq!(one, run(16));
    }
}
