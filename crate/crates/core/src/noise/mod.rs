//! Seedable generators for the driving noise processes.
//!
//! Every generator is a pure function of `(spec, mesh, rng state)`. Diffusions use
//! exact transition laws and jump processes are event driven, so a path generated on
//! a fine mesh and subsampled has the exact finite-dimensional law of the coarse mesh.

mod diffusion;
mod fbm;
mod jump;
mod params;
mod transport;

pub use fbm::{fgn_autocovariance, DaviesHarte};
pub use transport::TransportForm;

use crate::dist::DistributionSpec;
use crate::error::{config, Result};
use crate::mesh::{SamplePath, TimeMesh};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSpec {
    Wiener,
    OrnsteinUhlenbeck {
        nu: f64,
        sigma: f64,
        y0: f64,
    },
    GeometricBm {
        mu: f64,
        sigma: f64,
        y0: f64,
    },
    /// `dH = (mu1 + mu2 sin(theta t)) H dt + sigma sin(theta t) H dW`.
    LinearIto {
        mu1: f64,
        mu2: f64,
        sigma: f64,
        theta: f64,
        y0: f64,
    },
    CompoundPoisson {
        rate: f64,
        jump: DistributionSpec,
    },
    /// Holds `0` until the first event, then the latest i.i.d. draw from `step`.
    PoissonStep {
        rate: f64,
        step: DistributionSpec,
    },
    /// Intensity of an exponentially decaying self-exciting process.
    Hawkes {
        lambda0: f64,
        base: f64,
        decay: f64,
        jump: DistributionSpec,
    },
    Transport(TransportForm),
    FractionalBm {
        hurst: f64,
        y0: f64,
    },
}

impl NoiseSpec {
    pub const KINDS: [&'static str; 9] = [
        "wiener",
        "ornstein_uhlenbeck",
        "geometric_bm",
        "linear_ito",
        "compound_poisson",
        "poisson_step",
        "hawkes",
        "transport",
        "fbm",
    ];

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Wiener => "wiener",
            Self::OrnsteinUhlenbeck { .. } => "ornstein_uhlenbeck",
            Self::GeometricBm { .. } => "geometric_bm",
            Self::LinearIto { .. } => "linear_ito",
            Self::CompoundPoisson { .. } => "compound_poisson",
            Self::PoissonStep { .. } => "poisson_step",
            Self::Hawkes { .. } => "hawkes",
            Self::Transport(_) => "transport",
            Self::FractionalBm { .. } => "fbm",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                config(format!("{}: `{name}` must be finite", self.kind()))
            }
        };
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                config(format!("{}: `{name}` must be positive, got {v}", self.kind()))
            }
        };
        let nonneg = |name: &str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                config(format!("{}: `{name}` must be non-negative, got {v}", self.kind()))
            }
        };
        match *self {
            Self::Wiener => Ok(()),
            Self::OrnsteinUhlenbeck { nu, sigma, y0 } => {
                positive("nu", nu)?;
                nonneg("sigma", sigma)?;
                finite("y0", y0)
            }
            Self::GeometricBm { mu, sigma, y0 } => {
                finite("mu", mu)?;
                nonneg("sigma", sigma)?;
                positive("y0", y0)
            }
            Self::LinearIto {
                mu1,
                mu2,
                sigma,
                theta,
                y0,
            } => {
                finite("mu1", mu1)?;
                finite("mu2", mu2)?;
                nonneg("sigma", sigma)?;
                finite("theta", theta)?;
                finite("y0", y0)
            }
            Self::CompoundPoisson { rate, jump } => {
                positive("rate", rate)?;
                jump.validate()
            }
            Self::PoissonStep { rate, step } => {
                positive("rate", rate)?;
                step.validate()
            }
            Self::Hawkes {
                lambda0,
                base,
                decay,
                jump,
            } => {
                nonneg("base", base)?;
                positive("decay", decay)?;
                if !(lambda0 >= base && lambda0.is_finite()) {
                    return config(format!(
                        "hawkes: initial rate {lambda0} must be at least the base rate {base}"
                    ));
                }
                jump.validate()?;
                if !jump.is_nonnegative() {
                    return config("hawkes: jump law must be non-negative");
                }
                Ok(())
            }
            Self::Transport(form) => {
                let terms = match form {
                    TransportForm::SumSinCubeRoot { terms, .. } | TransportForm::GroundAcceleration { terms, .. } => {
                        terms
                    }
                };
                if terms == 0 {
                    return config("transport: `terms` must be positive");
                }
                form.laws().into_iter().try_for_each(|d| d.validate())
            }
            Self::FractionalBm { hurst, y0 } => {
                if !(hurst > 0.0 && hurst < 1.0) {
                    return config(format!("fbm: Hurst parameter {hurst} outside (0, 1)"));
                }
                finite("y0", y0)
            }
        }
    }

    /// Validates and precomputes whatever can be shared across samples on `mesh`.
    pub fn prepare(&self, mesh: &TimeMesh) -> Result<PreparedNoise> {
        self.validate()?;
        let embedding = match *self {
            Self::FractionalBm { hurst, .. } => Some(DaviesHarte::new(hurst, mesh)?),
            _ => None,
        };
        Ok(PreparedNoise {
            spec: *self,
            mesh: *mesh,
            embedding,
        })
    }

    /// One-shot sampling; see [`NoiseSpec::prepare`] to amortize setup.
    pub fn sample(&self, mesh: &TimeMesh, rng: &mut RngStream) -> Result<SamplePath> {
        self.prepare(mesh)?.sample(rng)
    }

    pub fn is_fbm(&self) -> bool {
        matches!(self, Self::FractionalBm { .. })
    }
}

/// A validated noise spec bound to a mesh.
#[derive(Debug, Clone)]
pub struct PreparedNoise {
    spec: NoiseSpec,
    mesh: TimeMesh,
    embedding: Option<DaviesHarte>,
}

impl PreparedNoise {
    pub fn spec(&self) -> &NoiseSpec {
        &self.spec
    }

    pub fn mesh(&self) -> &TimeMesh {
        &self.mesh
    }

    pub fn sample(&self, rng: &mut RngStream) -> Result<SamplePath> {
        let mesh = &self.mesh;
        Ok(match self.spec {
            NoiseSpec::Wiener => diffusion::wiener(mesh, rng),
            NoiseSpec::OrnsteinUhlenbeck { nu, sigma, y0 } => diffusion::ornstein_uhlenbeck(nu, sigma, y0, mesh, rng),
            NoiseSpec::GeometricBm { mu, sigma, y0 } => diffusion::geometric_bm(mu, sigma, y0, mesh, rng),
            NoiseSpec::LinearIto {
                mu1,
                mu2,
                sigma,
                theta,
                y0,
            } => diffusion::linear_ito(mu1, mu2, sigma, theta, y0, mesh, rng),
            NoiseSpec::CompoundPoisson { rate, ref jump } => jump::compound_poisson(rate, jump, mesh, rng)?,
            NoiseSpec::PoissonStep { rate, ref step } => jump::poisson_step(rate, step, mesh, rng)?,
            NoiseSpec::Hawkes {
                lambda0,
                base,
                decay,
                ref jump,
            } => jump::hawkes(lambda0, base, decay, jump, mesh, rng)?,
            NoiseSpec::Transport(ref form) => form.sample(mesh, rng)?,
            NoiseSpec::FractionalBm { y0, .. } => self
                .embedding
                .as_ref()
                .expect("fbm noise is prepared with its embedding")
                .sample(y0, rng),
        })
    }
}

pub fn sample_wiener(mesh: &TimeMesh, rng: &mut RngStream) -> SamplePath {
    diffusion::wiener(mesh, rng)
}

macro_rules! sampler {
    ($(#[$doc:meta])* $name:ident, $pat:pat) => {
        $(#[$doc])*
        pub fn $name(spec: &NoiseSpec, mesh: &TimeMesh, rng: &mut RngStream) -> Result<SamplePath> {
            if !matches!(spec, $pat) {
                return config(format!("{} cannot sample a `{}` spec", stringify!($name), spec.kind()));
            }
            spec.sample(mesh, rng)
        }
    };
}

sampler!(sample_ou, NoiseSpec::OrnsteinUhlenbeck { .. });
sampler!(sample_gbm, NoiseSpec::GeometricBm { .. });
sampler!(sample_linear_ito, NoiseSpec::LinearIto { .. });
sampler!(sample_compound_poisson, NoiseSpec::CompoundPoisson { .. });
sampler!(sample_poisson_step, NoiseSpec::PoissonStep { .. });
sampler!(sample_hawkes, NoiseSpec::Hawkes { .. });
sampler!(sample_transport, NoiseSpec::Transport(_));
sampler!(
    /// Fails with a generation error if the circulant embedding is not non-negative definite.
    sample_fbm,
    NoiseSpec::FractionalBm { .. }
);
