// SPDX-License-Identifier: Apache-2.0

//! Seeded instance streams for sweeps and suites, and the worker pool.
//!
//! Sample `i` of seed `s` draws from ChaCha8 stream `i` of `s`, so every
//! sample is reproducible on its own and independent of thread scheduling.

use anyhow::{bail, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vetolab::generators::{
    alpha_decisive, peer_selection, random_euclidean, random_profile, random_weights,
    GeneratedInstance,
};
use vetolab::{PreferenceProfile, Rational, WeightVector};

/// Environment variable capping sweep parallelism.
pub const THREADS_VAR: &str = "VETOLAB_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleSpec {
    pub samples: usize,
    pub seed: u64,
    /// Voter counts are drawn from `2..=n_max`.
    pub n_max: usize,
    /// Candidate counts are drawn from `2..=m_max`.
    pub m_max: usize,
}

impl SampleSpec {
    pub fn new(samples: usize, seed: u64, n_max: usize, m_max: usize) -> Result<Self> {
        if samples == 0 {
            bail!("--samples must be positive");
        }
        if n_max < 2 || m_max < 2 {
            bail!("--n and --m must be at least 2 (got {n_max} and {m_max})");
        }
        Ok(SampleSpec {
            samples,
            seed,
            n_max,
            m_max,
        })
    }

    fn rng(&self, index: usize, salt: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ salt);
        rng.set_stream(index as u64);
        rng
    }

    fn sizes(&self, rng: &mut ChaCha8Rng) -> (usize, usize) {
        (rng.gen_range(2..=self.n_max), rng.gen_range(2..=self.m_max))
    }

    /// Random profile with a uniformly random prediction.
    pub fn profile(&self, index: usize) -> ProfileSample {
        let mut rng = self.rng(index, 0x7072_6f66);
        let (n, m) = self.sizes(&mut rng);
        let predicted = rng.gen_range(0..m);
        let profile = random_profile(n, m, rng.gen()).expect("sizes are positive");
        ProfileSample {
            index,
            profile,
            predicted,
        }
    }

    /// Random `(profile, p, q)` with strictly positive weights.
    pub fn weighted(&self, index: usize) -> (PreferenceProfile, WeightVector, WeightVector) {
        let mut rng = self.rng(index, 0x7765_6967);
        let (n, m) = self.sizes(&mut rng);
        let profile = random_profile(n, m, rng.gen()).expect("sizes are positive");
        (
            profile,
            random_weights(n, rng.gen()),
            random_weights(m, rng.gen()),
        )
    }

    /// Aligned L1 instance in dimension 1 to 3 with a random prediction.
    pub fn aligned(&self, index: usize) -> InstanceSample {
        let mut rng = self.rng(index, 0x616c_6967);
        let (n, m) = self.sizes(&mut rng);
        let dim = rng.gen_range(1..=3);
        let predicted = rng.gen_range(0..m);
        let instance = random_euclidean(n, m, dim, rng.gen()).expect("sizes are positive");
        InstanceSample {
            index,
            instance,
            predicted,
        }
    }

    /// Peer-selection instance with `2..=n_max` peers.
    pub fn peers(&self, index: usize) -> InstanceSample {
        let mut rng = self.rng(index, 0x7065_6572);
        let n = rng.gen_range(2..=self.n_max);
        let predicted = rng.gen_range(0..n);
        let instance = peer_selection(n, rng.gen()).expect("n is positive");
        InstanceSample {
            index,
            instance,
            predicted,
        }
    }

    /// Planar instance whose voters are all `alpha`-decisive.
    pub fn decisive(&self, index: usize, alpha: &Rational) -> Result<InstanceSample> {
        let mut rng = self.rng(index, 0x6465_6369);
        let (n, m) = self.sizes(&mut rng);
        let predicted = rng.gen_range(0..m);
        let instance = alpha_decisive(n, m, alpha, rng.gen())?;
        Ok(InstanceSample {
            index,
            instance,
            predicted,
        })
    }
}

#[derive(Clone, Debug)]
pub struct ProfileSample {
    pub index: usize,
    pub profile: PreferenceProfile,
    pub predicted: usize,
}

#[derive(Clone, Debug)]
pub struct InstanceSample {
    pub index: usize,
    pub instance: GeneratedInstance,
    pub predicted: usize,
}

/// Thread count from [`THREADS_VAR`], or rayon's default when unset.
pub fn thread_count() -> Result<Option<usize>> {
    match std::env::var(THREADS_VAR) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k > 0 => Ok(Some(k)),
            _ => bail!("{THREADS_VAR} must be a positive integer, got `{v}`"),
        },
        Err(_) => Ok(None),
    }
}

/// Runs `f` on a pool sized by [`thread_count`].
pub fn in_pool<R: Send>(f: impl FnOnce() -> R + Send) -> Result<R> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = thread_count()? {
        builder = builder.num_threads(k);
    }
    Ok(builder.build()?.install(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_reproducible_and_in_range() {
        let spec = SampleSpec::new(10, 42, 6, 5).unwrap();
        for i in 0..10 {
            let a = spec.profile(i);
            let b = spec.profile(i);
            assert_eq!(a.profile, b.profile);
            assert!((2..=6).contains(&a.profile.n()) && (2..=5).contains(&a.profile.m()));
            assert!(a.predicted < a.profile.m());
        }
        assert_ne!(spec.profile(0).profile, spec.profile(1).profile);
    }

    #[test]
    fn rejects_tiny_sizes() {
        assert!(SampleSpec::new(1, 0, 1, 3).is_err());
    }
}
