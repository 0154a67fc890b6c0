//! The benchmark random ODEs, packaged with their noises, initial laws, target
//! strategies and default convergence settings.

mod rhs;

pub use rhs::{FisherKppParams, ModelRhs, OscillatorParams, PopulationParams, ToggleParams};

use std::f64::consts::PI;

use crate::dist::DistributionSpec;
use crate::error::{config, Result};
use crate::exact::TargetStrategy;
use crate::mesh::{SamplePath, TimeMesh};
use crate::noise::{NoiseSpec, PreparedNoise, TransportForm};
use crate::params::ParamValue;
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    LinearHomogeneous,
    AllNoiseLinear,
    FbmLinear,
    PopulationDynamics(PopulationParams),
    Earthquake(OscillatorParams),
    ToggleSwitch(ToggleParams),
    Risk {
        premium: f64,
    },
    FisherKpp {
        params: FisherKppParams,
        /// `(time steps N_i, spatial intervals K_i)` for each benchmark resolution.
        levels: Vec<(usize, usize)>,
        /// Spatial intervals of the target solution.
        k_target: usize,
    },
}

/// How the individual noise paths combine into the noise vector `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseMix {
    /// One coordinate per noise, in order.
    Stack,
    /// A scalar: the pointwise product of all noises.
    Product,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialLaw {
    /// Independent law per state component.
    Components(Vec<DistributionSpec>),
    /// The same law at every node of a spatial grid.
    Field(DistributionSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorNorm {
    Abs,
    Euclidean,
    /// Unnormalized sum of absolute nodal differences.
    SpatialSum,
}

impl ErrorNorm {
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        match self {
            Self::Abs | Self::SpatialSum => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
            Self::Euclidean => a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt(),
        }
    }
}

/// Spatial grid of a model state: `None` for ODE models, `Some(K)` intervals for
/// method-of-lines models.
pub type Grid = Option<usize>;

/// Default Monte-Carlo settings for a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarnessDefaults {
    pub resolutions: Vec<usize>,
    pub n_target: usize,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub noises: Vec<NoiseSpec>,
    pub mix: NoiseMix,
    pub initial: InitialLaw,
    pub target: TargetStrategy,
    pub horizon: f64,
    pub error_norm: ErrorNorm,
}

pub const MODEL_NAMES: [&str; 8] = [
    "linear_homogeneous",
    "all_noise_linear",
    "fbm_linear",
    "population_dynamics",
    "earthquake",
    "toggle_switch",
    "risk",
    "fisher_kpp",
];

fn pow2_range(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|k| 1usize << k).collect()
}

/// `dx/dt = W_t x`, `x0 ~ N(0, 1)`, exact target.
pub fn model_linear_homogeneous() -> ModelSpec {
    ModelSpec {
        kind: ModelKind::LinearHomogeneous,
        noises: vec![NoiseSpec::Wiener],
        mix: NoiseMix::Stack,
        initial: InitialLaw::Components(vec![DistributionSpec::Normal { mean: 0.0, sd: 1.0 }]),
        target: TargetStrategy::ExactLinearHomogeneous,
        horizon: 1.0,
        error_norm: ErrorNorm::Abs,
    }
}

/// `dx/dt = -|y|^2 x + y` with the nine noise kinds stacked in `y`.
pub fn model_all_noise_linear_system() -> ModelSpec {
    let noises: Vec<NoiseSpec> = NoiseSpec::KINDS
        .iter()
        .map(|k| NoiseSpec::default_of(k).expect("built-in noise kind"))
        .collect();
    let dim = noises.len();
    ModelSpec {
        kind: ModelKind::AllNoiseLinear,
        noises,
        mix: NoiseMix::Stack,
        initial: InitialLaw::Components(vec![DistributionSpec::Normal { mean: 0.0, sd: 1.0 }; dim]),
        target: TargetStrategy::FineEuler,
        horizon: 1.0,
        error_norm: ErrorNorm::Euclidean,
    }
}

/// `dx/dt = -x + B^H_t`.
pub fn model_fbm_linear(hurst: f64) -> Result<ModelSpec> {
    let noise = NoiseSpec::FractionalBm { hurst, y0: 0.0 };
    noise.validate()?;
    Ok(ModelSpec {
        kind: ModelKind::FbmLinear,
        noises: vec![noise],
        mix: NoiseMix::Stack,
        initial: InitialLaw::Components(vec![DistributionSpec::Normal { mean: 0.0, sd: 1.0 }]),
        target: TargetStrategy::FineEuler,
        horizon: 1.0,
        error_norm: ErrorNorm::Abs,
    })
}

/// Logistic growth with gBm-modulated rate and Poisson-step harvest.
pub fn model_population_dynamics() -> ModelSpec {
    ModelSpec {
        kind: ModelKind::PopulationDynamics(PopulationParams {
            growth: 0.8,
            epsilon: 0.3,
            capacity: 1.0,
            harvest: 0.64,
        }),
        noises: vec![
            NoiseSpec::GeometricBm {
                mu: 1.0,
                sigma: 0.8,
                y0: 1.0,
            },
            NoiseSpec::PoissonStep {
                rate: 15.0,
                step: DistributionSpec::Beta { alpha: 5.0, beta: 7.0 },
            },
        ],
        mix: NoiseMix::Stack,
        initial: InitialLaw::Components(vec![DistributionSpec::Beta { alpha: 7.0, beta: 5.0 }]),
        target: TargetStrategy::FineEuler,
        horizon: 1.0,
        error_norm: ErrorNorm::Abs,
    }
}

/// Single-storey structure under random ground acceleration, at rest initially.
pub fn model_earthquake() -> ModelSpec {
    ModelSpec {
        kind: ModelKind::Earthquake(OscillatorParams {
            damping: 0.6,
            frequency: 15.0,
        }),
        noises: vec![NoiseSpec::Transport(TransportForm::ground_acceleration())],
        mix: NoiseMix::Stack,
        initial: InitialLaw::Components(vec![DistributionSpec::Constant { value: 0.0 }; 2]),
        target: TargetStrategy::FineEuler,
        horizon: 2.0,
        error_norm: ErrorNorm::Euclidean,
    }
}

/// Gene toggle switch with compound-Poisson and linear Itô activations.
pub fn model_toggle_switch() -> ModelSpec {
    ModelSpec {
        kind: ModelKind::ToggleSwitch(ToggleParams {
            a: 0.25,
            b: 0.4,
            c: 0.25,
            d: 0.4,
            mu: 0.75,
            nu: 0.75,
        }),
        noises: vec![
            NoiseSpec::CompoundPoisson {
                rate: 5.0,
                jump: DistributionSpec::Uniform { lo: 0.0, hi: 0.5 },
            },
            NoiseSpec::LinearIto {
                mu1: 0.7,
                mu2: 0.3,
                sigma: 0.3,
                theta: 3.0 * PI,
                y0: 0.2,
            },
        ],
        mix: NoiseMix::Stack,
        initial: InitialLaw::Components(vec![DistributionSpec::Constant { value: 4.0 }; 2]),
        target: TargetStrategy::FineEuler,
        horizon: 5.0,
        error_norm: ErrorNorm::Euclidean,
    }
}

/// Insurance surplus with OU premium noise, compound-Poisson claims and gBm interest.
/// The OU drift doubles as the `nu` coefficient of the equation.
pub fn model_risk() -> ModelSpec {
    ModelSpec {
        kind: ModelKind::Risk { premium: 1.0 },
        noises: vec![
            NoiseSpec::OrnsteinUhlenbeck {
                nu: 5.0,
                sigma: 0.8,
                y0: 0.0,
            },
            NoiseSpec::CompoundPoisson {
                rate: 8.0,
                jump: DistributionSpec::Uniform { lo: 0.0, hi: 0.2 },
            },
            NoiseSpec::GeometricBm {
                mu: 0.02,
                sigma: 0.4,
                y0: 0.2,
            },
        ],
        mix: NoiseMix::Stack,
        initial: InitialLaw::Components(vec![DistributionSpec::Constant { value: 1.0 }]),
        target: TargetStrategy::FineEuler,
        horizon: 3.0,
        error_norm: ErrorNorm::Abs,
    }
}

/// Fisher-KPP on `[0, 1]` by the method of lines, with a Hawkes-modulated OU influx
/// on the left boundary.
pub fn model_fisher_kpp() -> ModelSpec {
    let tau = 0.005;
    ModelSpec {
        kind: ModelKind::FisherKpp {
            params: FisherKppParams {
                diffusivity: 0.009,
                reaction: 10.0,
                capacity: 1.0,
            },
            levels: vec![(1 << 5, 1 << 3), (1 << 7, 1 << 4), (1 << 9, 1 << 5)],
            k_target: 1 << 9,
        },
        noises: vec![
            NoiseSpec::Hawkes {
                lambda0: 3.0,
                base: 0.3,
                decay: 5.0,
                jump: DistributionSpec::Exponential { scale: 1.0 / 1.8 },
            },
            NoiseSpec::OrnsteinUhlenbeck {
                nu: 1.0 / tau,
                sigma: 0.1 / tau,
                y0: 0.0,
            },
        ],
        mix: NoiseMix::Product,
        initial: InitialLaw::Field(DistributionSpec::Constant { value: 0.0 }),
        target: TargetStrategy::FineEuler,
        horizon: 2.0,
        error_norm: ErrorNorm::SpatialSum,
    }
}

pub fn model_by_name(name: &str) -> Result<ModelSpec> {
    Ok(match name {
        "linear_homogeneous" => model_linear_homogeneous(),
        "all_noise_linear" => model_all_noise_linear_system(),
        "fbm_linear" => model_fbm_linear(0.3)?,
        "population_dynamics" => model_population_dynamics(),
        "earthquake" => model_earthquake(),
        "toggle_switch" => model_toggle_switch(),
        "risk" => model_risk(),
        "fisher_kpp" => model_fisher_kpp(),
        other => {
            return config(format!(
                "unknown model `{other}` (expected one of {})",
                MODEL_NAMES.join(", ")
            ))
        }
    })
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self.kind {
            ModelKind::LinearHomogeneous => "linear_homogeneous",
            ModelKind::AllNoiseLinear => "all_noise_linear",
            ModelKind::FbmLinear => "fbm_linear",
            ModelKind::PopulationDynamics(_) => "population_dynamics",
            ModelKind::Earthquake(_) => "earthquake",
            ModelKind::ToggleSwitch(_) => "toggle_switch",
            ModelKind::Risk { .. } => "risk",
            ModelKind::FisherKpp { .. } => "fisher_kpp",
        }
    }

    /// Default Monte-Carlo settings: resolutions, target steps and sample count.
    pub fn defaults(&self) -> HarnessDefaults {
        let (resolutions, n_target, samples) = match self.kind {
            ModelKind::LinearHomogeneous => (pow2_range(4, 14), 1 << 16, 500),
            ModelKind::AllNoiseLinear => (pow2_range(6, 9), 1 << 18, 80),
            ModelKind::FbmLinear => (pow2_range(6, 9), 1 << 18, 200),
            ModelKind::PopulationDynamics(_) => (pow2_range(4, 9), 1 << 18, 200),
            ModelKind::Earthquake(_) => (pow2_range(6, 9), 1 << 18, 100),
            ModelKind::ToggleSwitch(_) => (pow2_range(5, 9), 1 << 18, 100),
            ModelKind::Risk { .. } => (pow2_range(6, 9), 1 << 18, 400),
            ModelKind::FisherKpp { ref levels, .. } => (levels.iter().map(|l| l.0).collect(), 1 << 18, 40),
        };
        HarnessDefaults {
            resolutions,
            n_target,
            samples,
        }
    }

    /// Hurst parameter of the first fBm noise, if any.
    pub fn hurst(&self) -> Option<f64> {
        self.noises.iter().find_map(|n| match n {
            NoiseSpec::FractionalBm { hurst, .. } => Some(*hurst),
            _ => None,
        })
    }

    pub fn has_fbm(&self) -> bool {
        self.noises.iter().any(NoiseSpec::is_fbm)
    }

    /// Noise kinds the model's right-hand side is written for, in order.
    fn required_noise_kinds(&self) -> Vec<&'static str> {
        match self.kind {
            ModelKind::LinearHomogeneous => vec!["wiener"],
            ModelKind::AllNoiseLinear => self.noises.iter().map(NoiseSpec::kind).collect(),
            ModelKind::FbmLinear => vec!["fbm"],
            ModelKind::PopulationDynamics(_) => vec!["geometric_bm", "poisson_step"],
            ModelKind::Earthquake(_) => vec!["transport"],
            ModelKind::ToggleSwitch(_) => vec!["compound_poisson", "linear_ito"],
            ModelKind::Risk { .. } => vec!["ornstein_uhlenbeck", "compound_poisson", "geometric_bm"],
            ModelKind::FisherKpp { .. } => vec!["hawkes", "ornstein_uhlenbeck"],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return config(format!("horizon must be positive, got {}", self.horizon));
        }
        if self.noises.is_empty() {
            return config("model needs at least one noise");
        }
        let kinds: Vec<&str> = self.noises.iter().map(NoiseSpec::kind).collect();
        if kinds != self.required_noise_kinds() {
            return config(format!(
                "{} expects noises [{}], got [{}]",
                self.name(),
                self.required_noise_kinds().join(", "),
                kinds.join(", ")
            ));
        }
        for (i, n) in self.noises.iter().enumerate() {
            n.validate()
                .map_err(|e| crate::Error::Config(format!("noise {}: {e}", i + 1)))?;
        }
        if self.target == TargetStrategy::ExactLinearHomogeneous && self.kind != ModelKind::LinearHomogeneous {
            return config("the exact linear target only applies to linear_homogeneous");
        }
        match &self.initial {
            InitialLaw::Components(laws) => {
                if matches!(self.kind, ModelKind::FisherKpp { .. }) {
                    return config("fisher_kpp takes a single initial law for the whole field");
                }
                let d = self.state_dim(None)?;
                if laws.len() != d {
                    return config(format!("{} initial laws given, state dimension is {d}", laws.len()));
                }
                laws.iter().try_for_each(DistributionSpec::validate)?;
            }
            InitialLaw::Field(law) => {
                if !matches!(self.kind, ModelKind::FisherKpp { .. }) {
                    return config("a field initial law applies only to fisher_kpp");
                }
                law.validate()?;
            }
        }
        match &self.kind {
            ModelKind::PopulationDynamics(p) => {
                if !(p.growth > 0.0 && p.capacity > 0.0 && p.harvest >= 0.0 && (0.0..1.0).contains(&p.epsilon)) {
                    return config(format!("population parameters out of range: {p:?}"));
                }
            }
            ModelKind::Earthquake(p) => {
                if !(p.damping >= 0.0 && p.frequency > 0.0) {
                    return config(format!("oscillator parameters out of range: {p:?}"));
                }
            }
            ModelKind::ToggleSwitch(p) => {
                if ![p.a, p.b, p.c, p.d].iter().all(|v| *v > 0.0) || p.mu < 0.0 || p.nu < 0.0 {
                    return config(format!("toggle-switch parameters out of range: {p:?}"));
                }
            }
            ModelKind::Risk { premium } => {
                if !premium.is_finite() {
                    return config("premium must be finite");
                }
            }
            ModelKind::FisherKpp {
                params,
                levels,
                k_target,
            } => {
                if !(params.diffusivity > 0.0 && params.capacity > 0.0 && params.reaction.is_finite()) {
                    return config(format!("fisher-kpp parameters out of range: {params:?}"));
                }
                if *k_target < 2 {
                    return config("k_target must be at least 2");
                }
                for &(n, k) in levels {
                    if k < 2 || k_target % k != 0 {
                        return config(format!(
                            "spatial intervals {k} (N = {n}) must be >= 2 and divide k_target = {k_target}"
                        ));
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Spatial grid used at time resolution `n` (`None` for ODE models).
    pub fn grid_for(&self, n: usize) -> Result<Grid> {
        match &self.kind {
            ModelKind::FisherKpp { levels, .. } => levels
                .iter()
                .find(|l| l.0 == n)
                .map(|l| Some(l.1))
                .ok_or_else(|| crate::Error::Config(format!("fisher_kpp has no spatial level paired with N = {n}"))),
            _ => Ok(None),
        }
    }

    pub fn target_grid(&self) -> Grid {
        match &self.kind {
            ModelKind::FisherKpp { k_target, .. } => Some(*k_target),
            _ => None,
        }
    }

    pub fn state_dim(&self, grid: Grid) -> Result<usize> {
        Ok(match (&self.kind, grid) {
            (ModelKind::FisherKpp { .. }, Some(k)) => k + 1,
            (ModelKind::FisherKpp { .. }, None) => return config("fisher_kpp needs a spatial grid"),
            (ModelKind::AllNoiseLinear, _) => self.noises.len(),
            (ModelKind::Earthquake(_) | ModelKind::ToggleSwitch(_), _) => 2,
            _ => 1,
        })
    }

    pub fn noise_dim(&self) -> usize {
        match self.mix {
            NoiseMix::Stack => self.noises.len(),
            NoiseMix::Product => 1,
        }
    }

    pub fn rhs(&self, grid: Grid) -> Result<ModelRhs> {
        Ok(match &self.kind {
            ModelKind::LinearHomogeneous => ModelRhs::LinearHomogeneous,
            ModelKind::AllNoiseLinear => ModelRhs::AllNoiseLinear { dim: self.noises.len() },
            ModelKind::FbmLinear => ModelRhs::FbmLinear,
            ModelKind::PopulationDynamics(p) => ModelRhs::Population(*p),
            ModelKind::Earthquake(p) => ModelRhs::Earthquake(*p),
            ModelKind::ToggleSwitch(p) => ModelRhs::ToggleSwitch(*p),
            ModelKind::Risk { premium } => {
                let nu = match self.noises[0] {
                    NoiseSpec::OrnsteinUhlenbeck { nu, .. } => nu,
                    _ => return config("risk model needs an OU noise first"),
                };
                ModelRhs::Risk { nu, premium: *premium }
            }
            ModelKind::FisherKpp { params, .. } => {
                let Some(intervals) = grid else {
                    return config("fisher_kpp needs a spatial grid");
                };
                ModelRhs::FisherKpp {
                    params: *params,
                    intervals,
                }
            }
        })
    }

    /// Checks that a time resolution fits the model: explicit stability for the
    /// method-of-lines model.
    pub fn check_resolution(&self, n: usize, grid: Grid) -> Result<()> {
        if let (ModelKind::FisherKpp { params, .. }, Some(k)) = (&self.kind, grid) {
            let dt = self.horizon / n as f64;
            let dx = 1.0 / k as f64;
            let ratio = 2.0 * params.diffusivity * dt / (dx * dx);
            if ratio > 1.0 {
                return config(format!("unstable (N, K) = ({n}, {k}): 2 mu dt / dx^2 = {ratio:.4} > 1"));
            }
        }
        Ok(())
    }

    pub fn draw_initial(&self, grid: Grid, rng: &mut RngStream) -> Result<Vec<f64>> {
        match &self.initial {
            InitialLaw::Components(laws) => laws.iter().map(|l| l.sample(rng)).collect(),
            InitialLaw::Field(law) => {
                let d = self.state_dim(grid)?;
                (0..d).map(|_| law.sample(rng)).collect()
            }
        }
    }

    /// Restricts a state on grid `from` to the coarser grid `to` by taking nodes.
    pub fn restrict(&self, x: &[f64], from: Grid, to: Grid) -> Result<Vec<f64>> {
        match (from, to) {
            (Some(kf), Some(kc)) if kf != kc => {
                if kc == 0 || kf % kc != 0 {
                    return config(format!("spatial grid {kc} does not divide {kf}"));
                }
                let stride = kf / kc;
                Ok((0..=kc).map(|i| x[i * stride]).collect())
            }
            _ => Ok(x.to_vec()),
        }
    }

    pub fn prepare_noise(&self, mesh: &TimeMesh) -> Result<NoiseBundle> {
        let parts = self
            .noises
            .iter()
            .map(|n| n.prepare(mesh))
            .collect::<Result<Vec<_>>>()?;
        Ok(NoiseBundle { parts, mix: self.mix })
    }

    pub fn param_list(&self) -> Vec<(&'static str, ParamValue)> {
        use ParamValue::*;
        let mut out = vec![("horizon", Real(self.horizon))];
        match &self.kind {
            ModelKind::PopulationDynamics(p) => out.extend([
                ("growth", Real(p.growth)),
                ("epsilon", Real(p.epsilon)),
                ("capacity", Real(p.capacity)),
                ("harvest", Real(p.harvest)),
            ]),
            ModelKind::Earthquake(p) => out.extend([("damping", Real(p.damping)), ("frequency", Real(p.frequency))]),
            ModelKind::ToggleSwitch(p) => out.extend([
                ("a", Real(p.a)),
                ("b", Real(p.b)),
                ("c", Real(p.c)),
                ("d", Real(p.d)),
                ("mu", Real(p.mu)),
                ("nu", Real(p.nu)),
            ]),
            ModelKind::Risk { premium } => out.push(("premium", Real(*premium))),
            ModelKind::FisherKpp {
                params,
                levels,
                k_target,
            } => out.extend([
                ("diffusivity", Real(params.diffusivity)),
                ("reaction", Real(params.reaction)),
                ("capacity", Real(params.capacity)),
                ("levels", Pairs(levels.clone())),
                ("k_target", Count(*k_target)),
            ]),
            _ => {}
        }
        match &self.initial {
            InitialLaw::Components(laws) => out.push(("initial", Laws(laws.clone()))),
            InitialLaw::Field(law) => out.push(("initial", Law(*law))),
        }
        out
    }

    /// Overrides one model-level parameter by name. `hurst` is accepted for
    /// `fbm_linear` and forwarded to its noise.
    pub fn set_param(&mut self, key: &str, value: &ParamValue) -> Result<()> {
        let name = self.name();
        match (&mut self.kind, key) {
            (_, "horizon") => self.horizon = value.real(key)?,
            (ModelKind::FbmLinear, "hurst") => self.noises[0].set_param("hurst", value)?,
            (ModelKind::PopulationDynamics(p), "growth") => p.growth = value.real(key)?,
            (ModelKind::PopulationDynamics(p), "epsilon") => p.epsilon = value.real(key)?,
            (ModelKind::PopulationDynamics(p), "capacity") => p.capacity = value.real(key)?,
            (ModelKind::PopulationDynamics(p), "harvest") => p.harvest = value.real(key)?,
            (ModelKind::Earthquake(p), "damping") => p.damping = value.real(key)?,
            (ModelKind::Earthquake(p), "frequency") => p.frequency = value.real(key)?,
            (ModelKind::ToggleSwitch(p), "a") => p.a = value.real(key)?,
            (ModelKind::ToggleSwitch(p), "b") => p.b = value.real(key)?,
            (ModelKind::ToggleSwitch(p), "c") => p.c = value.real(key)?,
            (ModelKind::ToggleSwitch(p), "d") => p.d = value.real(key)?,
            (ModelKind::ToggleSwitch(p), "mu") => p.mu = value.real(key)?,
            (ModelKind::ToggleSwitch(p), "nu") => p.nu = value.real(key)?,
            (ModelKind::Risk { premium }, "premium") => *premium = value.real(key)?,
            (ModelKind::FisherKpp { params, .. }, "diffusivity") => params.diffusivity = value.real(key)?,
            (ModelKind::FisherKpp { params, .. }, "reaction") => params.reaction = value.real(key)?,
            (ModelKind::FisherKpp { params, .. }, "capacity") => params.capacity = value.real(key)?,
            (ModelKind::FisherKpp { levels, .. }, "levels") => *levels = value.pairs(key)?,
            (ModelKind::FisherKpp { k_target, .. }, "k_target") => *k_target = value.count(key)?,
            (ModelKind::FisherKpp { .. }, "initial") => self.initial = InitialLaw::Field(value.law(key)?),
            (_, "initial") => {
                self.initial = InitialLaw::Components(match value {
                    ParamValue::Laws(ls) => ls.clone(),
                    other => vec![other.law(key)?],
                })
            }
            _ => return config(format!("model `{name}` has no parameter `{key}`")),
        }
        Ok(())
    }
}

/// The model's noises bound to one mesh, combined per [`NoiseMix`].
#[derive(Debug, Clone)]
pub struct NoiseBundle {
    parts: Vec<PreparedNoise>,
    mix: NoiseMix,
}

impl NoiseBundle {
    /// Samples every component in order from the same stream and combines them.
    pub fn sample(&self, rng: &mut RngStream) -> Result<SamplePath> {
        let paths = self.parts.iter().map(|p| p.sample(rng)).collect::<Result<Vec<_>>>()?;
        match self.mix {
            NoiseMix::Stack => SamplePath::stack(&paths),
            NoiseMix::Product => {
                let stacked = SamplePath::stack(&paths)?;
                Ok(stacked.map_rows(1, |row, out| out[0] = row.iter().product()))
            }
        }
    }
}

/// Surplus `U = X + C + O` of the risk model from its solution and `(O, C, R)` noise.
pub fn risk_surplus(solution: &SamplePath, noise: &SamplePath) -> Result<SamplePath> {
    if solution.mesh() != noise.mesh() || solution.dim() != 1 || noise.dim() != 3 {
        return config("surplus needs a scalar solution and the (O, C, R) noise on the same mesh");
    }
    let values = solution
        .rows()
        .zip(noise.rows())
        .map(|(x, y)| x[0] + y[1] + y[0])
        .collect();
    SamplePath::scalar(*solution.mesh(), values)
}

#[cfg(test)]
mod tests;
