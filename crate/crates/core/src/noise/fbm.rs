//! Fractional Brownian motion by circulant embedding (Davies-Harte).
//!
//! The fractional Gaussian noise covariance `gamma(k)` of `n` unit-lag increments is
//! embedded in a symmetric circulant matrix of order `2n`, whose eigenvalues are the
//! DFT of its first row. A complex Gaussian vector shaped by the square-root
//! eigenvalues and pushed through one more DFT yields `n` increments with exactly the
//! fGn law; increments are rescaled by `dt^H` and summed.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::mesh::{SamplePath, TimeMesh};
use crate::rng::RngStream;

/// Autocovariance of unit-spacing fGn at integer lag `k`.
pub fn fgn_autocovariance(hurst: f64, k: usize) -> f64 {
    let h2 = 2.0 * hurst;
    let k = k as f64;
    0.5 * ((k + 1.0).powf(h2) - 2.0 * k.powf(h2) + (k - 1.0).abs().powf(h2))
}

/// Precomputed embedding for one `(hurst, mesh)` pair; reusable across samples.
#[derive(Clone)]
pub struct DaviesHarte {
    hurst: f64,
    mesh: TimeMesh,
    /// `sqrt(lambda_k / (2n))` for `k = 0..2n`.
    weights: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for DaviesHarte {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DaviesHarte")
            .field("hurst", &self.hurst)
            .field("mesh", &self.mesh)
            .finish_non_exhaustive()
    }
}

impl DaviesHarte {
    pub fn new(hurst: f64, mesh: &TimeMesh) -> Result<Self> {
        if !(hurst > 0.0 && hurst < 1.0) {
            return Err(Error::Config(format!("Hurst parameter {hurst} outside (0, 1)")));
        }
        let n = mesh.steps();
        if !n.is_power_of_two() {
            return Err(Error::Config(format!(
                "fBm generation needs a power-of-two step count, got {n}"
            )));
        }
        let m = 2 * n;
        let mut row: Vec<Complex64> = (0..m)
            .map(|i| {
                let lag = if i <= n { i } else { m - i };
                Complex64::new(fgn_autocovariance(hurst, lag), 0.0)
            })
            .collect();
        let fft = FftPlanner::new().plan_fft_forward(m);
        fft.process(&mut row);

        let max = row.iter().map(|c| c.re).fold(f64::NEG_INFINITY, f64::max);
        let tol = -1e-10 * max;
        let mut weights = Vec::with_capacity(m);
        for (k, c) in row.iter().enumerate() {
            if c.re < tol {
                return Err(Error::Generation(format!(
                    "circulant embedding has negative eigenvalue {} at index {k} (H = {hurst}, n = {n})",
                    c.re
                )));
            }
            weights.push((c.re.max(0.0) / m as f64).sqrt());
        }
        Ok(Self {
            hurst,
            mesh: *mesh,
            weights,
            fft,
        })
    }

    pub fn mesh(&self) -> &TimeMesh {
        &self.mesh
    }

    /// Increments of a standard fBm on the mesh (length `n`).
    pub fn increments(&self, rng: &mut RngStream) -> Vec<f64> {
        let n = self.mesh.steps();
        let m = 2 * n;
        let mut w = vec![Complex64::new(0.0, 0.0); m];
        w[0] = Complex64::new(self.weights[0] * rng.normal(), 0.0);
        w[n] = Complex64::new(self.weights[n] * rng.normal(), 0.0);
        let half = std::f64::consts::FRAC_1_SQRT_2;
        for k in 1..n {
            let (a, b) = (rng.normal(), rng.normal());
            let z = Complex64::new(a, b) * (self.weights[k] * half);
            w[k] = z;
            w[m - k] = z.conj();
        }
        self.fft.process(&mut w);
        let scale = self.mesh.dt().powf(self.hurst);
        w[..n].iter().map(|c| c.re * scale).collect()
    }

    /// fBm path started at `offset` (i.e. `B^H_t + offset`).
    pub fn sample(&self, offset: f64, rng: &mut RngStream) -> SamplePath {
        let mut values = Vec::with_capacity(self.mesh.len());
        let mut b = 0.0;
        values.push(offset);
        for inc in self.increments(rng) {
            b += inc;
            values.push(b + offset);
        }
        SamplePath::from_parts_unchecked(self.mesh, 1, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::make_mesh;

    #[test]
    fn autocovariance_values() {
        assert_eq!(fgn_autocovariance(0.7, 0), 1.0);
        // H = 1/2 gives white noise
        assert!(fgn_autocovariance(0.5, 1).abs() < 1e-15);
        assert!(fgn_autocovariance(0.5, 5).abs() < 1e-15);
        let g1 = 0.5 * (2f64.powf(1.2) - 2.0);
        assert!((fgn_autocovariance(0.6, 1) - g1).abs() < 1e-15);
        assert!(fgn_autocovariance(0.3, 1) < 0.0);
    }

    #[test]
    fn eigenvalues_nonnegative_over_hurst_grid() {
        let mesh = make_mesh(0.0, 1.0, 1 << 12).unwrap();
        for h in [0.05, 0.1, 0.3, 0.5, 0.6, 0.7, 0.9, 0.95] {
            DaviesHarte::new(h, &mesh).unwrap();
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let mesh = make_mesh(0.0, 1.0, 12).unwrap();
        assert!(DaviesHarte::new(0.6, &mesh).is_err());
        let mesh = make_mesh(0.0, 1.0, 16).unwrap();
        assert!(DaviesHarte::new(0.0, &mesh).is_err());
        assert!(DaviesHarte::new(1.0, &mesh).is_err());
    }

    #[test]
    fn single_step_mesh() {
        let mesh = make_mesh(0.0, 2.0, 1).unwrap();
        let dh = DaviesHarte::new(0.3, &mesh).unwrap();
        let mut rng = crate::rng::substream(3, 0);
        let p = dh.sample(0.0, &mut rng);
        assert_eq!(p.len(), 2);
        assert_eq!(p.row(0), &[0.0]);
    }
}
