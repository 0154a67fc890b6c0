//! Itô diffusions sampled with their exact transition laws.

use crate::mesh::{SamplePath, TimeMesh};
use crate::rng::RngStream;

pub(super) fn wiener(mesh: &TimeMesh, rng: &mut RngStream) -> SamplePath {
    let sd = mesh.dt().sqrt();
    let mut values = Vec::with_capacity(mesh.len());
    let mut w = 0.0;
    values.push(w);
    for _ in 0..mesh.steps() {
        w += sd * rng.normal();
        values.push(w);
    }
    SamplePath::from_parts_unchecked(*mesh, 1, values)
}

pub(super) fn ornstein_uhlenbeck(nu: f64, sigma: f64, y0: f64, mesh: &TimeMesh, rng: &mut RngStream) -> SamplePath {
    let dt = mesh.dt();
    let decay = (-nu * dt).exp();
    // (1 - e^{-2 nu dt}) / (2 nu), via expm1 to keep precision for small nu dt
    let sd = sigma * (-(-2.0 * nu * dt).exp_m1() / (2.0 * nu)).sqrt();
    let mut values = Vec::with_capacity(mesh.len());
    let mut y = y0;
    values.push(y);
    for _ in 0..mesh.steps() {
        y = y * decay + sd * rng.normal();
        values.push(y);
    }
    SamplePath::from_parts_unchecked(*mesh, 1, values)
}

pub(super) fn geometric_bm(mu: f64, sigma: f64, y0: f64, mesh: &TimeMesh, rng: &mut RngStream) -> SamplePath {
    let dt = mesh.dt();
    let drift = (mu - 0.5 * sigma * sigma) * dt;
    let sd = sigma * dt.sqrt();
    let mut values = Vec::with_capacity(mesh.len());
    let mut y = y0;
    values.push(y);
    for _ in 0..mesh.steps() {
        y *= (drift + sd * rng.normal()).exp();
        values.push(y);
    }
    SamplePath::from_parts_unchecked(*mesh, 1, values)
}

/// `dH = (mu1 + mu2 sin(theta t)) H dt + sigma sin(theta t) H dW`, stepped with the
/// log-normal law of `H_{t+dt} / H_t`.
pub(super) fn linear_ito(
    mu1: f64,
    mu2: f64,
    sigma: f64,
    theta: f64,
    y0: f64,
    mesh: &TimeMesh,
    rng: &mut RngStream,
) -> SamplePath {
    let dt = mesh.dt();
    let mut values = Vec::with_capacity(mesh.len());
    let mut y = y0;
    values.push(y);
    for j in 0..mesh.steps() {
        let (t0, t1) = (mesh.node(j), mesh.node(j + 1));
        let (mean, var) = if theta == 0.0 {
            (mu1 * dt, 0.0)
        } else {
            let var =
                sigma * sigma * (0.5 * dt - ((2.0 * theta * t1).sin() - (2.0 * theta * t0).sin()) / (4.0 * theta));
            let var = var.max(0.0);
            let drift = mu1 * dt - (mu2 / theta) * ((theta * t1).cos() - (theta * t0).cos());
            (drift - 0.5 * var, var)
        };
        y *= (mean + var.sqrt() * rng.normal()).exp();
        values.push(y);
    }
    SamplePath::from_parts_unchecked(*mesh, 1, values)
}
