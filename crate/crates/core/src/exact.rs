//! Reference ("target") solutions used to measure the Euler error.

use crate::error::{config, Result};
use crate::mesh::SamplePath;
use crate::rng::RngStream;
use crate::solver::{euler_solve_strided, Rhs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetStrategy {
    /// Exact-in-law solution of `dx/dt = W_t x` given the Wiener values at the nodes.
    ExactLinearHomogeneous,
    /// Euler on the target mesh.
    FineEuler,
}

impl TargetStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            Self::ExactLinearHomogeneous => "exact_linear_homogeneous",
            Self::FineEuler => "fine_euler",
        }
    }
}

/// Solution of `dx/dt = W_t x` consistent with the sampled `W_{t_j}`:
///
/// `x_j = x0 exp( sum_{i<j} (W_i + W_{i+1}) dt / 2 + Z_i )`, `Z_i ~ N(0, dt^3 / 12)`,
///
/// i.e. the trapezoidal rule plus the exact conditional law of the remainder of
/// `int W ds` on each step. The `Z_i` are drawn from `rng` in step order.
pub fn exact_linear_homogeneous(x0: f64, wiener: &SamplePath, rng: &mut RngStream) -> Result<SamplePath> {
    let n = wiener.mesh().steps();
    let sd = (wiener.mesh().dt().powi(3) / 12.0).sqrt();
    let corrections: Vec<f64> = (0..n).map(|_| sd * rng.normal()).collect();
    exact_linear_homogeneous_with(x0, wiener, &corrections)
}

/// [`exact_linear_homogeneous`] with caller-supplied corrections `Z_i`.
pub fn exact_linear_homogeneous_with(x0: f64, wiener: &SamplePath, corrections: &[f64]) -> Result<SamplePath> {
    let mesh = wiener.mesh();
    if wiener.dim() != 1 {
        return config("exact linear solution needs a scalar Wiener path");
    }
    if corrections.len() != mesh.steps() {
        return config(format!(
            "expected {} corrections, got {}",
            mesh.steps(),
            corrections.len()
        ));
    }
    let half_dt = 0.5 * mesh.dt();
    let w = wiener.values();
    let mut values = Vec::with_capacity(mesh.len());
    let mut exponent = 0.0;
    values.push(x0);
    for (i, z) in corrections.iter().enumerate() {
        exponent += (w[i] + w[i + 1]) * half_dt + z;
        values.push(x0 * exponent.exp());
    }
    SamplePath::scalar(*mesh, values)
}

/// Euler target on the fine noise mesh, keeping every `stride`-th node.
pub fn fine_euler_target(rhs: &impl Rhs, x0: &[f64], fine_noise: &SamplePath, stride: usize) -> Result<SamplePath> {
    euler_solve_strided(rhs, x0, fine_noise, stride)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::make_mesh;
    use crate::noise::sample_wiener;
    use crate::rng::substream;
    use crate::solver::FnRhs;

    #[test]
    fn zero_initial_value_stays_zero() {
        let mesh = make_mesh(0.0, 1.0, 64).unwrap();
        let mut rng = substream(0, 0);
        let w = sample_wiener(&mesh, &mut rng);
        let x = exact_linear_homogeneous(0.0, &w, &mut rng).unwrap();
        assert!(x.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn flat_noise_without_correction_is_constant() {
        let mesh = make_mesh(0.0, 1.0, 16).unwrap();
        let w = SamplePath::scalar(mesh, vec![0.0; 17]).unwrap();
        let x = exact_linear_homogeneous_with(1.7, &w, &[0.0; 16]).unwrap();
        assert!(x.values().iter().all(|&v| v == 1.7));
    }

    #[test]
    fn correction_standard_deviation() {
        let dt: f64 = 0.0625;
        let sd = (dt.powi(3) / 12.0).sqrt();
        assert!((sd - 4.510_548_978e-3).abs() < 1e-12);
        assert!(((sd - 4.5069e-3) / sd).abs() < 0.01);
        // recover the Z_i from the log-increments of the solution
        let mesh = make_mesh(0.0, 1.0, 16).unwrap();
        let w = SamplePath::scalar(mesh, vec![0.0; 17]).unwrap();
        let mut zs = Vec::with_capacity(1_000_000);
        let mut rng = substream(12, 0);
        while zs.len() < 1_000_000 {
            let x = exact_linear_homogeneous(1.0, &w, &mut rng).unwrap();
            zs.extend(x.values().windows(2).map(|p| (p[1] / p[0]).ln()));
        }
        let m = zs.iter().sum::<f64>() / zs.len() as f64;
        let s = (zs.iter().map(|z| (z - m) * (z - m)).sum::<f64>() / (zs.len() - 1) as f64).sqrt();
        assert!(((s - sd) / sd).abs() < 0.01, "sd = {s}, want {sd}");
    }

    #[test]
    fn sign_preserved() {
        let mesh = make_mesh(0.0, 1.0, 128).unwrap();
        for seed in 0..20 {
            let mut rng = substream(seed, 0);
            let w = sample_wiener(&mesh, &mut rng);
            for x0 in [-0.8, 2.5] {
                let x = exact_linear_homogeneous(x0, &w, &mut rng).unwrap();
                assert!(x.values().iter().all(|v| v.signum() == x0.signum()));
            }
        }
    }

    #[test]
    fn fine_target_identity_for_zero_field() {
        let mesh = make_mesh(0.0, 1.0, 64).unwrap();
        let w = sample_wiener(&mesh, &mut substream(1, 0));
        let rhs = FnRhs::new(1, 1, |_, _, _, dx: &mut [f64]| dx[0] = 0.0);
        let x = fine_euler_target(&rhs, &[0.3], &w, 4).unwrap();
        assert_eq!(x.len(), 17);
        assert!(x.values().iter().all(|&v| v == 0.3));
    }
}
