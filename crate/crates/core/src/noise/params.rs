//! Named parameter access, used by configuration files and the CLI.

use super::{NoiseSpec, TransportForm};
use crate::dist::DistributionSpec;
use crate::error::{config, Result};
use crate::params::ParamValue;
use std::f64::consts::PI;

impl NoiseSpec {
    /// Default parameters for each kind, matching the nine-noise linear system.
    pub fn default_of(kind: &str) -> Result<Self> {
        Ok(match kind {
            "wiener" => Self::Wiener,
            "ornstein_uhlenbeck" => Self::OrnsteinUhlenbeck {
                nu: 0.3,
                sigma: 0.5,
                y0: 0.2,
            },
            "geometric_bm" => Self::GeometricBm {
                mu: 0.3,
                sigma: 0.5,
                y0: 0.2,
            },
            "linear_ito" => Self::LinearIto {
                mu1: 0.5,
                mu2: 0.3,
                sigma: 0.5,
                theta: 3.0 * PI,
                y0: 0.2,
            },
            "compound_poisson" => Self::CompoundPoisson {
                rate: 5.0,
                jump: DistributionSpec::Exponential { scale: 0.5 },
            },
            "poisson_step" => Self::PoissonStep {
                rate: 5.0,
                step: DistributionSpec::Uniform { lo: 0.0, hi: 1.0 },
            },
            "hawkes" => Self::Hawkes {
                lambda0: 3.0,
                base: 2.0,
                decay: 3.0,
                jump: DistributionSpec::Exponential { scale: 0.5 },
            },
            "transport" => Self::Transport(TransportForm::sum_sin_cube_root()),
            "fbm" => Self::FractionalBm { hurst: 0.6, y0: 0.2 },
            other => {
                return config(format!(
                    "unknown noise kind `{other}` (expected one of {})",
                    Self::KINDS.join(", ")
                ))
            }
        })
    }

    /// All parameters in a fixed order; `kind` is not included.
    pub fn params(&self) -> Vec<(&'static str, ParamValue)> {
        use ParamValue::*;
        match *self {
            Self::Wiener => vec![],
            Self::OrnsteinUhlenbeck { nu, sigma, y0 } => {
                vec![("nu", Real(nu)), ("sigma", Real(sigma)), ("y0", Real(y0))]
            }
            Self::GeometricBm { mu, sigma, y0 } => {
                vec![("mu", Real(mu)), ("sigma", Real(sigma)), ("y0", Real(y0))]
            }
            Self::LinearIto {
                mu1,
                mu2,
                sigma,
                theta,
                y0,
            } => vec![
                ("mu1", Real(mu1)),
                ("mu2", Real(mu2)),
                ("sigma", Real(sigma)),
                ("theta", Real(theta)),
                ("y0", Real(y0)),
            ],
            Self::CompoundPoisson { rate, jump } => vec![("rate", Real(rate)), ("jump", Law(jump))],
            Self::PoissonStep { rate, step } => vec![("rate", Real(rate)), ("step", Law(step))],
            Self::Hawkes {
                lambda0,
                base,
                decay,
                jump,
            } => vec![
                ("lambda0", Real(lambda0)),
                ("base", Real(base)),
                ("decay", Real(decay)),
                ("jump", Law(jump)),
            ],
            Self::Transport(TransportForm::SumSinCubeRoot { terms, frequency }) => vec![
                ("form", Name("sum_sin_cube_root".into())),
                ("terms", Count(terms)),
                ("frequency", Law(frequency)),
            ],
            Self::Transport(TransportForm::GroundAcceleration {
                terms,
                onset,
                amplitude,
                decay,
                frequency,
            }) => vec![
                ("form", Name("ground_acceleration".into())),
                ("terms", Count(terms)),
                ("onset", Law(onset)),
                ("amplitude", Law(amplitude)),
                ("decay", Law(decay)),
                ("frequency", Law(frequency)),
            ],
            Self::FractionalBm { hurst, y0 } => vec![("hurst", Real(hurst)), ("y0", Real(y0))],
        }
    }

    /// Overrides one parameter. Setting a transport `form` resets its laws to the
    /// defaults of that form, so `form` should be applied before the other keys.
    pub fn set_param(&mut self, key: &str, value: &ParamValue) -> Result<()> {
        let kind = self.kind();
        let unknown = || config(format!("`{kind}` noise has no parameter `{key}`"));
        match (self, key) {
            (Self::OrnsteinUhlenbeck { nu: v, .. }, "nu")
            | (Self::OrnsteinUhlenbeck { sigma: v, .. }, "sigma")
            | (Self::OrnsteinUhlenbeck { y0: v, .. }, "y0")
            | (Self::GeometricBm { mu: v, .. }, "mu")
            | (Self::GeometricBm { sigma: v, .. }, "sigma")
            | (Self::GeometricBm { y0: v, .. }, "y0")
            | (Self::LinearIto { mu1: v, .. }, "mu1")
            | (Self::LinearIto { mu2: v, .. }, "mu2")
            | (Self::LinearIto { sigma: v, .. }, "sigma")
            | (Self::LinearIto { theta: v, .. }, "theta")
            | (Self::LinearIto { y0: v, .. }, "y0")
            | (Self::CompoundPoisson { rate: v, .. }, "rate")
            | (Self::PoissonStep { rate: v, .. }, "rate")
            | (Self::Hawkes { lambda0: v, .. }, "lambda0")
            | (Self::Hawkes { base: v, .. }, "base")
            | (Self::Hawkes { decay: v, .. }, "decay")
            | (Self::FractionalBm { hurst: v, .. }, "hurst")
            | (Self::FractionalBm { y0: v, .. }, "y0") => *v = value.real(key)?,
            (Self::CompoundPoisson { jump: d, .. }, "jump")
            | (Self::PoissonStep { step: d, .. }, "step")
            | (Self::Hawkes { jump: d, .. }, "jump")
            | (Self::Transport(TransportForm::SumSinCubeRoot { frequency: d, .. }), "frequency")
            | (Self::Transport(TransportForm::GroundAcceleration { frequency: d, .. }), "frequency")
            | (Self::Transport(TransportForm::GroundAcceleration { onset: d, .. }), "onset")
            | (Self::Transport(TransportForm::GroundAcceleration { amplitude: d, .. }), "amplitude")
            | (Self::Transport(TransportForm::GroundAcceleration { decay: d, .. }), "decay") => *d = value.law(key)?,
            (Self::Transport(TransportForm::SumSinCubeRoot { terms: n, .. }), "terms")
            | (Self::Transport(TransportForm::GroundAcceleration { terms: n, .. }), "terms") => {
                *n = value.count(key)?
            }
            (Self::Transport(form), "form") => {
                let name = match value {
                    ParamValue::Name(s) => s.as_str(),
                    _ => return config(format!("`form` expects a name, got `{value}`")),
                };
                if name != form.name() {
                    *form = match name {
                        "sum_sin_cube_root" => TransportForm::sum_sin_cube_root(),
                        "ground_acceleration" => TransportForm::ground_acceleration(),
                        _ => return config(format!("unknown transport form `{name}`")),
                    };
                }
            }
            _ => return unknown(),
        }
        Ok(())
    }
}
