//! Fixed-step Euler integration of `dx/dt = f(t, x, y)` along a precomputed noise path.

use crate::error::{config, Error, Result};
use crate::mesh::SamplePath;

/// Any component above this magnitude is treated as a blow-up.
pub const BLOW_UP: f64 = 1e100;

/// Right-hand side `f(t, x, y)` of a random ODE.
pub trait Rhs {
    fn state_dim(&self) -> usize;

    fn noise_dim(&self) -> usize;

    /// Writes `f(t, x, y)` into `dx`.
    fn eval(&self, t: f64, x: &[f64], y: &[f64], dx: &mut [f64]);
}

impl<R: Rhs + ?Sized> Rhs for &R {
    fn state_dim(&self) -> usize {
        (**self).state_dim()
    }

    fn noise_dim(&self) -> usize {
        (**self).noise_dim()
    }

    fn eval(&self, t: f64, x: &[f64], y: &[f64], dx: &mut [f64]) {
        (**self).eval(t, x, y, dx)
    }
}

/// Wraps a closure as an [`Rhs`] with declared dimensions.
pub struct FnRhs<F> {
    state_dim: usize,
    noise_dim: usize,
    f: F,
}

impl<F> FnRhs<F>
where
    F: Fn(f64, &[f64], &[f64], &mut [f64]),
{
    pub fn new(state_dim: usize, noise_dim: usize, f: F) -> Self {
        Self {
            state_dim,
            noise_dim,
            f,
        }
    }
}

impl<F> Rhs for FnRhs<F>
where
    F: Fn(f64, &[f64], &[f64], &mut [f64]),
{
    fn state_dim(&self) -> usize {
        self.state_dim
    }

    fn noise_dim(&self) -> usize {
        self.noise_dim
    }

    fn eval(&self, t: f64, x: &[f64], y: &[f64], dx: &mut [f64]) {
        (self.f)(t, x, y, dx)
    }
}

/// Euler scheme `x_j = x_{j-1} + dt f(t_{j-1}, x_{j-1}, y_{j-1})` on the noise mesh.
pub fn euler_solve(rhs: &impl Rhs, x0: &[f64], noise: &SamplePath) -> Result<SamplePath> {
    euler_solve_strided(rhs, x0, noise, 1)
}

/// Same recursion as [`euler_solve`] on the full noise mesh, keeping only every
/// `stride`-th node. Used for fine target solutions that are only compared at
/// coarse nodes.
pub fn euler_solve_strided(rhs: &impl Rhs, x0: &[f64], noise: &SamplePath, stride: usize) -> Result<SamplePath> {
    let d = rhs.state_dim();
    if x0.len() != d {
        return config(format!("initial state has length {}, rhs expects {d}", x0.len()));
    }
    if noise.dim() != rhs.noise_dim() {
        return config(format!(
            "noise has dimension {}, rhs expects {}",
            noise.dim(),
            rhs.noise_dim()
        ));
    }
    let mesh = noise.mesh();
    let out_mesh = mesh.coarsened(stride)?;
    check_state(x0, 0, mesh.node(0))?;

    let dt = mesh.dt();
    let mut out = Vec::with_capacity(out_mesh.len() * d);
    out.extend_from_slice(x0);
    let mut x = x0.to_vec();
    let mut dx = vec![0.0; d];
    for j in 1..=mesh.steps() {
        let t = mesh.node(j - 1);
        rhs.eval(t, &x, noise.row(j - 1), &mut dx);
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += dt * di;
        }
        check_state(&x, j, mesh.node(j))?;
        if j % stride == 0 {
            out.extend_from_slice(&x);
        }
    }
    Ok(SamplePath::from_parts_unchecked(out_mesh, d, out))
}

fn check_state(x: &[f64], step: usize, time: f64) -> Result<()> {
    match x.iter().position(|v| v.is_nan() || v.abs() > BLOW_UP) {
        None => Ok(()),
        Some(component) => Err(Error::Divergence { step, time, component }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::make_mesh;

    fn zero_noise(n: usize, tf: f64) -> SamplePath {
        let mesh = make_mesh(0.0, tf, n).unwrap();
        SamplePath::scalar(mesh, vec![0.0; n + 1]).unwrap()
    }

    #[test]
    fn zero_field_keeps_state() {
        let rhs = FnRhs::new(2, 1, |_, _, _, dx: &mut [f64]| dx.fill(0.0));
        let p = euler_solve(&rhs, &[1.5, -2.0], &zero_noise(8, 1.0)).unwrap();
        assert!(p.rows().all(|r| r == [1.5, -2.0]));
    }

    #[test]
    fn constant_field_is_exact() {
        let rhs = FnRhs::new(1, 1, |_, _, _, dx: &mut [f64]| dx[0] = 1.0);
        let noise = zero_noise(16, 1.0);
        let p = euler_solve(&rhs, &[0.0], &noise).unwrap();
        for (j, t) in noise.mesh().nodes().enumerate() {
            assert!((p.row(j)[0] - t).abs() < 1e-15);
        }
    }

    #[test]
    fn exponential_growth_hand_iterated() {
        let rhs = FnRhs::new(1, 1, |_, x: &[f64], _, dx: &mut [f64]| dx[0] = x[0]);
        let p = euler_solve(&rhs, &[1.0], &zero_noise(4, 1.0)).unwrap();
        assert_eq!(p.row(4)[0], 2.44140625);
    }

    #[test]
    fn noise_read_at_left_endpoint() {
        let mesh = make_mesh(0.0, 1.0, 4).unwrap();
        let noise = SamplePath::scalar(mesh, vec![1.0, 2.0, 3.0, 4.0, 100.0]).unwrap();
        let rhs = FnRhs::new(1, 1, |_, _, y: &[f64], dx: &mut [f64]| dx[0] = y[0]);
        let p = euler_solve(&rhs, &[0.0], &noise).unwrap();
        assert_eq!(p.row(4)[0], 0.25 * (1.0 + 2.0 + 3.0 + 4.0));
        assert_eq!(p.mesh(), noise.mesh());
    }

    #[test]
    fn affine_in_time_is_left_riemann_sum() {
        let (a, b) = (0.3, -1.7);
        let rhs = FnRhs::new(1, 1, move |t, _, _, dx: &mut [f64]| dx[0] = a + b * t);
        let n = 32;
        let noise = zero_noise(n, 2.0);
        let p = euler_solve(&rhs, &[0.5], &noise).unwrap();
        let dt = 2.0 / n as f64;
        for j in 0..=n {
            let jf = j as f64;
            // sum_{i<j} dt (a + b i dt)
            let want = 0.5 + a * jf * dt + b * dt * dt * jf * (jf - 1.0) / 2.0;
            assert!((p.row(j)[0] - want).abs() < 1e-13, "node {j}");
        }
    }

    #[test]
    fn first_order_on_decay() {
        let rhs = FnRhs::new(1, 1, |_, x: &[f64], _, dx: &mut [f64]| dx[0] = -x[0]);
        let err = |n: usize| {
            let noise = zero_noise(n, 1.0);
            let p = euler_solve(&rhs, &[1.0], &noise).unwrap();
            noise
                .mesh()
                .nodes()
                .enumerate()
                .map(|(j, t)| (p.row(j)[0] - (-t).exp()).abs())
                .fold(0.0, f64::max)
        };
        for k in 4..10 {
            let ratio = err(1 << k) / err(1 << (k + 1));
            assert!((1.8..=2.2).contains(&ratio), "N = 2^{k}: ratio {ratio}");
        }
    }

    #[test]
    fn strided_matches_full() {
        let rhs = FnRhs::new(1, 1, |t, x: &[f64], y: &[f64], dx: &mut [f64]| {
            dx[0] = -x[0] * y[0] + t.sin()
        });
        let mesh = make_mesh(0.0, 1.0, 64).unwrap();
        let noise = SamplePath::scalar(mesh, mesh.nodes().map(|t| (3.0 * t).cos()).collect()).unwrap();
        let full = euler_solve(&rhs, &[0.4], &noise).unwrap();
        let strided = euler_solve_strided(&rhs, &[0.4], &noise, 8).unwrap();
        assert_eq!(strided, full.coarsen(8).unwrap());
    }

    #[test]
    fn divergence_names_first_bad_step() {
        let rhs = FnRhs::new(1, 1, |_, x: &[f64], _, dx: &mut [f64]| dx[0] = x[0] * x[0]);
        let err = euler_solve(&rhs, &[1e60], &zero_noise(8, 1.0)).unwrap_err();
        match err {
            Error::Divergence { step, component, .. } => {
                assert_eq!(component, 0);
                assert_eq!(step, 1);
            }
            other => panic!("unexpected {other}"),
        }
        let nan = FnRhs::new(1, 1, |_, _, _, dx: &mut [f64]| dx[0] = f64::NAN);
        assert!(matches!(
            euler_solve(&nan, &[0.0], &zero_noise(4, 1.0)),
            Err(Error::Divergence { step: 1, .. })
        ));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let rhs = FnRhs::new(2, 1, |_, _, _, dx: &mut [f64]| dx.fill(0.0));
        assert!(euler_solve(&rhs, &[0.0], &zero_noise(4, 1.0)).is_err());
        let rhs = FnRhs::new(1, 2, |_, _, _, dx: &mut [f64]| dx.fill(0.0));
        assert!(euler_solve(&rhs, &[0.0], &zero_noise(4, 1.0)).is_err());
    }
}
