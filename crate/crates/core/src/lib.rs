//! Strong convergence of the Euler scheme for random ordinary differential equations.
//!
//! A random ODE `dx/dt = f(t, x, y_t)` is driven by a sample path `y_t` of a
//! stochastic process. This crate generates the noise paths, integrates with the
//! Euler method, builds reference solutions and estimates the strong order of
//! convergence by Monte Carlo.

pub mod convergence;
pub mod dist;
pub mod error;
pub mod exact;
pub mod mesh;
pub mod models;
pub mod noise;
pub mod params;
pub mod rng;
pub mod solver;

pub use convergence::{
    confidence_interval, expected_order, fit_power_law, run_experiment, ErrorRow, ErrorTable, ExperimentPlan, FitResult,
};
pub use dist::DistributionSpec;
pub use error::{Error, Result};
pub use mesh::{make_mesh, SamplePath, TimeMesh};
pub use models::{model_by_name, ModelSpec};
pub use noise::NoiseSpec;
pub use params::ParamValue;
pub use rng::{substream, RngStream};
pub use solver::{euler_solve, Rhs};
