//! Monte-Carlo estimation of the strong Euler error and of its order.

use rayon::prelude::*;

use crate::error::{config, Error, Result};
use crate::exact::{exact_linear_homogeneous, TargetStrategy};
use crate::mesh::{SamplePath, TimeMesh};
use crate::models::{Grid, ModelKind, ModelSpec, NoiseBundle};
use crate::rng::substream;
use crate::solver::{euler_solve, euler_solve_strided};

/// Samples per accumulation block. Blocks are the unit of parallel work and are
/// merged in index order, so results do not depend on the number of workers.
const BLOCK: usize = 8;

const MAX_CI_RESOLUTIONS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub model: ModelSpec,
    pub resolutions: Vec<usize>,
    pub n_target: usize,
    pub samples: usize,
    pub master_seed: u64,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
}

impl ExperimentPlan {
    /// Plan with the model's default Monte-Carlo settings.
    pub fn with_defaults(model: ModelSpec, master_seed: u64) -> Self {
        let d = model.defaults();
        Self {
            model,
            resolutions: d.resolutions,
            n_target: d.n_target,
            samples: d.samples,
            master_seed,
            workers: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.samples < 2 {
            return config(format!("need at least 2 samples, got {}", self.samples));
        }
        if self.resolutions.is_empty() {
            return config("no resolutions given");
        }
        if self.resolutions.windows(2).any(|w| w[0] >= w[1]) {
            return config("resolutions must be strictly increasing");
        }
        if self.resolutions[0] == 0 {
            return config("resolutions must be positive");
        }
        for &n in &self.resolutions {
            if !self.n_target.is_multiple_of(n) {
                return config(format!(
                    "N = {n} does not divide N_tgt = {} ({} / {n} = {})",
                    self.n_target,
                    self.n_target,
                    self.n_target as f64 / n as f64
                ));
            }
        }
        if self.model.has_fbm() {
            for &n in self.resolutions.iter().chain([&self.n_target]) {
                if !n.is_power_of_two() {
                    return config(format!("fBm noise needs power-of-two resolutions, got {n}"));
                }
            }
        }
        for &n in &self.resolutions {
            let grid = self.model.grid_for(n)?;
            self.model.check_resolution(n, grid)?;
        }
        self.model.check_resolution(self.n_target, self.model.target_grid())?;
        Ok(())
    }

    fn target_mesh(&self) -> Result<TimeMesh> {
        TimeMesh::new(0.0, self.model.horizon, self.n_target)
    }

    /// Least common multiple of the resolutions: the mesh on which the target is kept.
    fn record_steps(&self) -> usize {
        self.resolutions.iter().fold(1, |acc, &n| lcm(acc, n))
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Welford) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        let (na, nb) = (self.count as f64, other.count as f64);
        self.mean += delta * nb / n;
        self.m2 += other.m2 + delta * delta * na * nb / n;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample variance with the `n - 1` denominator.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn sd(&self) -> f64 {
        self.variance().sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub n: usize,
    pub dt: f64,
    /// Maximum over nodes of the mean pathwise error.
    pub error: f64,
    /// Standard error of the mean at the node attaining `error`.
    pub std_err: f64,
    pub eps_min: f64,
    pub eps_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorTable {
    pub rows: Vec<ErrorRow>,
    pub samples: usize,
}

impl ErrorTable {
    pub fn dts(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.dt).collect()
    }

    pub fn errors(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.error).collect()
    }

    /// Fits the power law and, when every lower band is positive, its confidence interval.
    pub fn fit(&self) -> Result<FitResult> {
        let dts = self.dts();
        let (ln_c, p) = fit_power_law(&dts, &self.errors())?;
        let lo: Vec<f64> = self.rows.iter().map(|r| r.eps_min).collect();
        let hi: Vec<f64> = self.rows.iter().map(|r| r.eps_max).collect();
        let interval = if lo.iter().all(|v| *v > 0.0) && dts.len() <= MAX_CI_RESOLUTIONS {
            Some(confidence_interval(&dts, &lo, &hi)?)
        } else {
            None
        };
        Ok(FitResult { ln_c, p, interval })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub ln_c: f64,
    pub p: f64,
    /// `(p_min, p_max)`; absent when some lower error band is not positive.
    pub interval: Option<(f64, f64)>,
}

/// Reference path, Euler approximations and noise for one sample.
#[derive(Debug, Clone)]
pub struct SampleRun {
    /// Target on the recording mesh (the least common multiple of the resolutions).
    pub target: SamplePath,
    /// One Euler path per resolution.
    pub approximations: Vec<SamplePath>,
    /// Noise on the target mesh.
    pub noise: SamplePath,
}

struct Context<'a> {
    plan: &'a ExperimentPlan,
    bundle: NoiseBundle,
    record: usize,
    grids: Vec<Grid>,
}

impl<'a> Context<'a> {
    fn new(plan: &'a ExperimentPlan) -> Result<Self> {
        plan.validate()?;
        let bundle = plan.model.prepare_noise(&plan.target_mesh()?)?;
        let grids = plan
            .resolutions
            .iter()
            .map(|&n| plan.model.grid_for(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            plan,
            bundle,
            record: plan.record_steps(),
            grids,
        })
    }

    fn simulate(&self, sample: u64) -> Result<SampleRun> {
        let plan = self.plan;
        let model = &plan.model;
        let tag = |resolution: usize| {
            move |e: Error| Error::Sample {
                sample,
                resolution,
                source: Box::new(e),
            }
        };
        let mut rng = substream(plan.master_seed, sample);
        let tgrid = model.target_grid();
        let x0 = model.draw_initial(tgrid, &mut rng).map_err(tag(plan.n_target))?;
        let noise = self.bundle.sample(&mut rng).map_err(tag(plan.n_target))?;
        let stride = plan.n_target / self.record;
        let target = match model.target {
            TargetStrategy::ExactLinearHomogeneous => {
                exact_linear_homogeneous(x0[0], &noise, &mut rng).and_then(|p| p.coarsen(stride))
            }
            TargetStrategy::FineEuler => {
                let rhs = model.rhs(tgrid)?;
                euler_solve_strided(&rhs, &x0, &noise, stride)
            }
        }
        .map_err(tag(plan.n_target))?;
        let mut approximations = Vec::with_capacity(plan.resolutions.len());
        for (&n, &grid) in plan.resolutions.iter().zip(&self.grids) {
            let run = || -> Result<SamplePath> {
                let coarse = noise.coarsen(plan.n_target / n)?;
                let x0c = model.restrict(&x0, tgrid, grid)?;
                euler_solve(&model.rhs(grid)?, &x0c, &coarse)
            };
            approximations.push(run().map_err(tag(n))?);
        }
        Ok(SampleRun {
            target,
            approximations,
            noise,
        })
    }

    fn accumulate(&self, run: &SampleRun, acc: &mut [Vec<Welford>]) -> Result<()> {
        let model = &self.plan.model;
        let tgrid = model.target_grid();
        for (i, (&n, &grid)) in self.plan.resolutions.iter().zip(&self.grids).enumerate() {
            let step = self.record / n;
            let approx = &run.approximations[i];
            for (j, cell) in acc[i].iter_mut().enumerate() {
                let reference = run.target.row(j * step);
                let e = if grid == tgrid {
                    model.error_norm.distance(reference, approx.row(j))
                } else {
                    model
                        .error_norm
                        .distance(&model.restrict(reference, tgrid, grid)?, approx.row(j))
                };
                cell.push(e);
            }
        }
        Ok(())
    }

    fn empty(&self) -> Vec<Vec<Welford>> {
        self.plan
            .resolutions
            .iter()
            .map(|&n| vec![Welford::default(); n + 1])
            .collect()
    }

    fn block(&self, b: usize) -> Result<Vec<Vec<Welford>>> {
        let mut acc = self.empty();
        let end = ((b + 1) * BLOCK).min(self.plan.samples);
        for m in b * BLOCK..end {
            let run = self.simulate(m as u64)?;
            self.accumulate(&run, &mut acc)?;
        }
        Ok(acc)
    }
}

fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(f))
}

/// Per-node statistics of the pathwise error, one vector per resolution.
pub fn node_statistics(plan: &ExperimentPlan) -> Result<Vec<Vec<Welford>>> {
    let ctx = Context::new(plan)?;
    let blocks = plan.samples.div_ceil(BLOCK);
    let partial: Vec<Result<Vec<Vec<Welford>>>> = with_pool(plan.workers, || {
        (0..blocks).into_par_iter().map(|b| ctx.block(b)).collect()
    })?;
    let mut total = ctx.empty();
    for part in partial {
        for (t, p) in total.iter_mut().zip(part?) {
            for (a, b) in t.iter_mut().zip(&p) {
                a.merge(b);
            }
        }
    }
    Ok(total)
}

pub fn run_experiment(plan: &ExperimentPlan) -> Result<ErrorTable> {
    let stats = node_statistics(plan)?;
    let sqrt_m = (plan.samples as f64).sqrt();
    let rows = plan
        .resolutions
        .iter()
        .zip(&stats)
        .map(|(&n, nodes)| {
            let mut row = ErrorRow {
                n,
                dt: plan.model.horizon / n as f64,
                error: f64::NEG_INFINITY,
                std_err: 0.0,
                eps_min: f64::NEG_INFINITY,
                eps_max: f64::NEG_INFINITY,
            };
            for w in nodes {
                let s = w.sd() / sqrt_m;
                if w.mean() > row.error {
                    row.error = w.mean();
                    row.std_err = s;
                }
                row.eps_min = row.eps_min.max(w.mean() - 2.0 * s);
                row.eps_max = row.eps_max.max(w.mean() + 2.0 * s);
            }
            row
        })
        .collect();
    Ok(ErrorTable {
        rows,
        samples: plan.samples,
    })
}

/// Simulates one sample of the plan, as used inside [`run_experiment`].
pub fn simulate_sample(plan: &ExperimentPlan, sample: u64) -> Result<SampleRun> {
    Context::new(plan)?.simulate(sample)
}

/// Least-squares fit of `ln e = ln C + p ln dt`. Returns `(ln C, p)`.
pub fn fit_power_law(dts: &[f64], errors: &[f64]) -> Result<(f64, f64)> {
    if dts.len() != errors.len() {
        return config(format!("{} time steps but {} errors", dts.len(), errors.len()));
    }
    if dts.len() < 2 {
        return config("need at least two points to fit");
    }
    if let Some(v) = dts.iter().chain(errors).find(|v| !(**v > 0.0 && v.is_finite())) {
        return config(format!("fit needs positive finite data, got {v}"));
    }
    let x: Vec<f64> = dts.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = errors.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    let xbar = x.iter().sum::<f64>() / n;
    // shifting y leaves the slope unchanged and makes constant data give exactly 0
    let y0 = y[0];
    let ybar = y.iter().map(|v| v - y0).sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - xbar) * (v - xbar)).sum();
    let scale: f64 = x.iter().map(|v| v * v).sum();
    if sxx <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Singular("all time steps are equal".into()));
    }
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - xbar) * (b - y0 - ybar)).sum();
    let p = sxy / sxx;
    let ln_c = y0 + ybar - p * xbar;
    Ok((ln_c, p))
}

/// Range of fitted orders over all `2^R` choices of lower or upper error per row.
pub fn confidence_interval(dts: &[f64], eps_min: &[f64], eps_max: &[f64]) -> Result<(f64, f64)> {
    let r = dts.len();
    if eps_min.len() != r || eps_max.len() != r {
        return config("confidence interval needs one band per time step");
    }
    if r > MAX_CI_RESOLUTIONS {
        return config(format!("at most {MAX_CI_RESOLUTIONS} resolutions, got {r}"));
    }
    if let Some(i) = (0..r).find(|&i| !(eps_min[i] > 0.0 && eps_min[i] <= eps_max[i])) {
        return config(format!(
            "band {i} must satisfy 0 < eps_min <= eps_max, got [{}, {}]",
            eps_min[i], eps_max[i]
        ));
    }
    let mut vertex = vec![0.0; r];
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for mask in 0u32..(1 << r) {
        for (i, v) in vertex.iter_mut().enumerate() {
            *v = if mask >> i & 1 == 1 { eps_max[i] } else { eps_min[i] };
        }
        let (_, p) = fit_power_law(dts, &vertex)?;
        lo = lo.min(p);
        hi = hi.max(p);
    }
    Ok((lo, hi))
}

/// Theoretical strong order of the Euler scheme for the model.
pub fn expected_order(model: &ModelSpec) -> f64 {
    match model.kind {
        ModelKind::FbmLinear => model.hurst().map_or(1.0, |h| (h + 0.5).min(1.0)),
        _ => 1.0,
    }
}

/// [`expected_order`] by registry name with the model's default parameters.
pub fn expected_order_by_name(name: &str) -> Result<f64> {
    crate::models::model_by_name(name).map(|m| expected_order(&m))
}
