//! Deterministic per-sample random streams.
//!
//! Each Monte-Carlo sample owns an [`RngStream`] keyed by `(master_seed, stream_id)`.
//! The generator is ChaCha8, which is counter based: the seed fixes the key and the
//! stream id selects one of 2^64 independent 2^68-byte keystreams, so creating stream
//! `m` costs nothing and never depends on which other streams were created before it.
//!
//! Derived distributions all consume the same stream:
//!
//! * normal: ziggurat (`rand_distr::StandardNormal`)
//! * exponential: ziggurat on the unit exponential, then scaled
//! * Poisson: `rand_distr::Poisson` (inversion for small means, PTRS rejection otherwise)
//! * Gamma: Marsaglia-Tsang, with the `U^(1/shape)` boost for `shape < 1`
//! * Beta: `rand_distr::Beta` (Cheng's BB/BC rejection)

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, Exp1, Gamma, Poisson, StandardNormal};

use crate::error::{config, Result};

#[derive(Debug, Clone)]
pub struct RngStream {
    inner: ChaCha8Rng,
    master_seed: u64,
    stream_id: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(master_seed);
        inner.set_stream(stream_id);
        Self {
            inner,
            master_seed,
            stream_id,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.inner)
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Exponential with the given mean (`scale = 1 / rate`).
    pub fn exponential(&mut self, scale: f64) -> f64 {
        let e: f64 = Exp1.sample(&mut self.inner);
        e * scale
    }

    pub fn poisson(&mut self, mean: f64) -> Result<u64> {
        if mean == 0.0 {
            return Ok(0);
        }
        let d = Poisson::new(mean).or_else(|e| config(format!("poisson({mean}): {e}")))?;
        let k: f64 = d.sample(&mut self.inner);
        Ok(k as u64)
    }

    pub fn gamma(&mut self, shape: f64, scale: f64) -> Result<f64> {
        let d = Gamma::new(shape, scale).or_else(|e| config(format!("gamma({shape}, {scale}): {e}")))?;
        Ok(d.sample(&mut self.inner))
    }

    pub fn beta(&mut self, alpha: f64, beta: f64) -> Result<f64> {
        let d = Beta::new(alpha, beta).or_else(|e| config(format!("beta({alpha}, {beta}): {e}")))?;
        Ok(d.sample(&mut self.inner))
    }

    /// Fills `out` with i.i.d. standard normals.
    pub fn fill_normal(&mut self, out: &mut [f64]) {
        for v in out {
            *v = StandardNormal.sample(&mut self.inner);
        }
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// The stream for Monte-Carlo sample `stream_id` under `master_seed`.
pub fn substream(master_seed: u64, stream_id: u64) -> RngStream {
    RngStream::new(master_seed, stream_id)
}
