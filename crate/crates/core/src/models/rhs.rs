//! Right-hand sides of the benchmark models.

use crate::solver::Rhs;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationParams {
    /// Mean specific growth `gamma`.
    pub growth: f64,
    /// Relative growth oscillation `epsilon` in `(0, 1)`.
    pub epsilon: f64,
    /// Carrying capacity `r`.
    pub capacity: f64,
    /// Harvest modulation `alpha`.
    pub harvest: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    /// Damping ratio `zeta0`.
    pub damping: f64,
    /// Natural frequency `omega0`.
    pub frequency: f64,
}

/// Hill thresholds `a, c` (auto-activation), `b, d` (mutual repression) and decay rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToggleParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub mu: f64,
    pub nu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherKppParams {
    pub diffusivity: f64,
    pub reaction: f64,
    pub capacity: f64,
}

/// A benchmark right-hand side, resolved for one spatial grid where relevant.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelRhs {
    /// `x' = y x`
    LinearHomogeneous,
    /// `x' = -|y|^2 x + y`
    AllNoiseLinear { dim: usize },
    /// `x' = -x + y`
    FbmLinear,
    /// Logistic growth with harvest, frozen for `x < 0`. Noise `(g, h)`.
    Population(PopulationParams),
    /// Damped oscillator driven by ground acceleration; state `(x, v)`.
    Earthquake(OscillatorParams),
    /// Two mutually repressing genes; noise `(A, B)`.
    ToggleSwitch(ToggleParams),
    /// Surplus minus claims and OU perturbation; noise `(O, C, R)`.
    Risk { nu: f64, premium: f64 },
    /// Method-of-lines Fisher-KPP with `intervals + 1` nodes on `[0, 1]`, influx `y`
    /// through the left boundary and no flux on the right. The reaction term is
    /// switched off where `u < 0`.
    FisherKpp { params: FisherKppParams, intervals: usize },
}

fn hill4(x: f64, k: f64) -> f64 {
    let x4 = x.powi(4);
    x4 / (k.powi(4) + x4)
}

fn repression4(x: f64, k: f64) -> f64 {
    let k4 = k.powi(4);
    k4 / (k4 + x.powi(4))
}

impl Rhs for ModelRhs {
    fn state_dim(&self) -> usize {
        match self {
            Self::LinearHomogeneous | Self::FbmLinear | Self::Population(_) | Self::Risk { .. } => 1,
            Self::AllNoiseLinear { dim } => *dim,
            Self::Earthquake(_) | Self::ToggleSwitch(_) => 2,
            Self::FisherKpp { intervals, .. } => intervals + 1,
        }
    }

    fn noise_dim(&self) -> usize {
        match self {
            Self::LinearHomogeneous | Self::FbmLinear | Self::Earthquake(_) | Self::FisherKpp { .. } => 1,
            Self::AllNoiseLinear { dim } => *dim,
            Self::Population(_) | Self::ToggleSwitch(_) => 2,
            Self::Risk { .. } => 3,
        }
    }

    fn eval(&self, _t: f64, x: &[f64], y: &[f64], dx: &mut [f64]) {
        match *self {
            Self::LinearHomogeneous => dx[0] = y[0] * x[0],
            Self::AllNoiseLinear { .. } => {
                let norm2: f64 = y.iter().map(|v| v * v).sum();
                for ((d, xi), yi) in dx.iter_mut().zip(x).zip(y) {
                    *d = -norm2 * xi + yi;
                }
            }
            Self::FbmLinear => dx[0] = -x[0] + y[0],
            Self::Population(p) => {
                let u = x[0];
                dx[0] = if u < 0.0 {
                    0.0
                } else {
                    let growth = p.growth * (1.0 + p.epsilon * y[0].sin());
                    growth * u * (p.capacity - u) / p.capacity - p.harvest * u * y[1] / (p.capacity + u)
                };
            }
            Self::Earthquake(p) => {
                let w = p.frequency;
                dx[0] = x[1];
                dx[1] = -2.0 * p.damping * w * x[1] - w * w * x[0] - y[0];
            }
            Self::ToggleSwitch(p) => {
                let (gx, gy) = (x[0], x[1]);
                let (act_a, act_b) = (y[0], y[1]);
                let repress_y = repression4(gy, p.b);
                let repress_x = repression4(gx, p.d);
                dx[0] = (act_a + hill4(gx, p.a)) * repress_y - p.mu * gx;
                dx[1] = (act_b + hill4(gy, p.c)) * repress_x - p.nu * gy;
            }
            Self::Risk { nu, premium } => {
                let (o, c, r) = (y[0], y[1], y[2]);
                dx[0] = r * x[0] + r * (c + o) + nu * o + premium;
            }
            Self::FisherKpp { params, intervals } => {
                let k = intervals;
                let dxs = 1.0 / k as f64;
                let diff = params.diffusivity / (dxs * dxs);
                let react = |u: f64| {
                    if u < 0.0 {
                        0.0
                    } else {
                        params.reaction * u * (1.0 - u / params.capacity)
                    }
                };
                let ghost_left = x[1] + 2.0 * dxs * y[0];
                dx[0] = diff * (ghost_left - 2.0 * x[0] + x[1]) + react(x[0]);
                for i in 1..k {
                    dx[i] = diff * (x[i - 1] - 2.0 * x[i] + x[i + 1]) + react(x[i]);
                }
                let ghost_right = x[k - 1];
                dx[k] = diff * (x[k - 1] - 2.0 * x[k] + ghost_right) + react(x[k]);
            }
        }
    }
}
