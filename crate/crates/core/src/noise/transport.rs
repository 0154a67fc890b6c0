//! Transport processes: random coefficients drawn once per path, then a
//! deterministic function of time.

use std::f64::consts::PI;

use crate::dist::DistributionSpec;
use crate::error::Result;
use crate::mesh::{SamplePath, TimeMesh};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransportForm {
    /// `t -> sum_i cbrt(sin(omega_i t))` with `omega_i ~ frequency`.
    SumSinCubeRoot { terms: usize, frequency: DistributionSpec },
    /// Ground acceleration of a sum of delayed, exponentially damped, oscillating
    /// quadratic fronts (an earthquake main shock and aftershocks).
    GroundAcceleration {
        terms: usize,
        onset: DistributionSpec,
        amplitude: DistributionSpec,
        decay: DistributionSpec,
        frequency: DistributionSpec,
    },
}

impl TransportForm {
    pub fn sum_sin_cube_root() -> Self {
        Self::SumSinCubeRoot {
            terms: 6,
            frequency: DistributionSpec::Gamma { shape: 7.5, scale: 2.0 },
        }
    }

    pub fn ground_acceleration() -> Self {
        Self::GroundAcceleration {
            terms: 12,
            onset: DistributionSpec::Exponential { scale: 0.25 },
            amplitude: DistributionSpec::Uniform { lo: 0.0, hi: 4.0 },
            decay: DistributionSpec::Uniform { lo: 8.0, hi: 12.0 },
            frequency: DistributionSpec::Uniform {
                lo: 8.0 * PI,
                hi: 32.0 * PI,
            },
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::SumSinCubeRoot { .. } => "sum_sin_cube_root",
            Self::GroundAcceleration { .. } => "ground_acceleration",
        }
    }

    pub(super) fn laws(&self) -> Vec<&DistributionSpec> {
        match self {
            Self::SumSinCubeRoot { frequency, .. } => vec![frequency],
            Self::GroundAcceleration {
                onset,
                amplitude,
                decay,
                frequency,
                ..
            } => vec![onset, amplitude, decay, frequency],
        }
    }

    pub(super) fn sample(&self, mesh: &TimeMesh, rng: &mut RngStream) -> Result<SamplePath> {
        let values = match self {
            Self::SumSinCubeRoot { terms, frequency } => {
                let omegas = (0..*terms).map(|_| frequency.sample(rng)).collect::<Result<Vec<_>>>()?;
                mesh.nodes()
                    .map(|t| omegas.iter().map(|w| (w * t).sin().cbrt()).sum())
                    .collect()
            }
            Self::GroundAcceleration {
                terms,
                onset,
                amplitude,
                decay,
                frequency,
            } => {
                let mut shocks = Vec::with_capacity(*terms);
                for _ in 0..*terms {
                    shocks.push(Shock {
                        onset: onset.sample(rng)?,
                        amplitude: amplitude.sample(rng)?,
                        decay: decay.sample(rng)?,
                        frequency: frequency.sample(rng)?,
                    });
                }
                mesh.nodes()
                    .map(|t| shocks.iter().map(|s| s.acceleration(t)).sum())
                    .collect()
            }
        };
        Ok(SamplePath::from_parts_unchecked(*mesh, 1, values))
    }
}

struct Shock {
    onset: f64,
    amplitude: f64,
    decay: f64,
    frequency: f64,
}

impl Shock {
    /// Four-term excitation of one front, with the Heaviside step `H(s) = 1` for `s >= 0`.
    fn acceleration(&self, t: f64) -> f64 {
        let s = t - self.onset;
        if s < 0.0 {
            return 0.0;
        }
        let (g, d, w) = (self.amplitude, self.decay, self.frequency);
        let envelope = (-d * s).exp();
        let (sin, cos) = (w * s).sin_cos();
        g * envelope * (2.0 * cos + (d * d - w * w) * s * s * cos - 2.0 * (d + w) * s * cos + d * w * s * s * sin)
    }
}
