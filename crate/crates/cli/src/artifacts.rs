//! Experiment outputs on disk.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rodeconv::convergence::simulate_sample;
use rodeconv::{expected_order, run_experiment, ErrorTable, FitResult, NoiseSpec, RngStream, TimeMesh};
use serde::Serialize;

use crate::config::{ExperimentConfig, OutputFormat};
use crate::error::CliError;

pub const ERRORS_HEADER: &str = "N,dt,error,std_err,eps_min,eps_max";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitSummary {
    pub model: String,
    pub p: f64,
    #[serde(rename = "ln_C")]
    pub ln_c: f64,
    pub p_min: Option<f64>,
    pub p_max: Option<f64>,
    pub expected_order: f64,
    pub seed: u64,
    #[serde(rename = "M")]
    pub samples: usize,
    #[serde(rename = "N_tgt")]
    pub n_target: usize,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub table: ErrorTable,
    pub fit: FitResult,
    pub summary: FitSummary,
    pub written: Vec<PathBuf>,
}

fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn errors_csv(table: &ErrorTable) -> String {
    let mut s = String::from(ERRORS_HEADER);
    s.push('\n');
    for r in &table.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            r.n,
            sci(r.dt),
            sci(r.error),
            sci(r.std_err),
            sci(r.eps_min),
            sci(r.eps_max)
        );
    }
    s
}

pub fn loglog_dat(table: &ErrorTable, fit: &FitResult) -> String {
    let mut s = String::from("# ln_dt ln_error ln_fit\n");
    for r in &table.rows {
        let x = r.dt.ln();
        let _ = writeln!(s, "{} {} {}", sci(x), sci(r.error.ln()), sci(fit.ln_c + fit.p * x));
    }
    s
}

pub fn fit_summary(cfg: &ExperimentConfig, fit: &FitResult) -> FitSummary {
    let plan = &cfg.plan;
    FitSummary {
        model: plan.model.name().into(),
        p: fit.p,
        ln_c: fit.ln_c,
        p_min: fit.interval.map(|i| i.0),
        p_max: fit.interval.map(|i| i.1),
        expected_order: expected_order(&plan.model),
        seed: plan.master_seed,
        samples: plan.samples,
        n_target: plan.n_target,
    }
}

/// Target and approximation values at the coarse nodes of the first `count` samples.
pub fn sample_paths_csv(cfg: &ExperimentConfig, count: usize) -> Result<String, CliError> {
    let plan = &cfg.plan;
    let model = &plan.model;
    let record = plan.resolutions.iter().fold(1, |a, &n| lcm(a, n));
    let mut s = String::from("sample,N,t,component,target,approximation\n");
    for m in 0..count as u64 {
        let run = simulate_sample(plan, m)?;
        for (&n, approx) in plan.resolutions.iter().zip(&run.approximations) {
            let grid = model.grid_for(n)?;
            let step = record / n;
            for j in 0..approx.len() {
                let reference = model.restrict(run.target.row(j * step), model.target_grid(), grid)?;
                let t = approx.mesh().node(j);
                for (c, (a, b)) in reference.iter().zip(approx.row(j)).enumerate() {
                    let _ = writeln!(s, "{m},{n},{},{c},{},{}", sci(t), sci(*a), sci(*b));
                }
            }
        }
    }
    Ok(s)
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

fn write(path: PathBuf, contents: &str, written: &mut Vec<PathBuf>) -> Result<(), CliError> {
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    written.push(path);
    Ok(())
}

/// Runs the experiment and writes the requested artifacts into `dir`.
pub fn run(cfg: &ExperimentConfig, dir: &Path) -> Result<RunOutcome, CliError> {
    let table = run_experiment(&cfg.plan)?;
    let fit = table.fit()?;
    let summary = fit_summary(cfg, &fit);
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::new();
    for format in &cfg.output.formats {
        match format {
            OutputFormat::Csv => write(dir.join("errors.csv"), &errors_csv(&table), &mut written)?,
            OutputFormat::Json => {
                let json = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
                write(dir.join("fit.json"), &json, &mut written)?
            }
            OutputFormat::Loglog => write(dir.join("loglog.dat"), &loglog_dat(&table, &fit), &mut written)?,
        }
    }
    if cfg.output.sample_paths > 0 {
        let paths = sample_paths_csv(cfg, cfg.output.sample_paths)?;
        write(dir.join("sample_paths.csv"), &paths, &mut written)?;
    }
    Ok(RunOutcome {
        table,
        fit,
        summary,
        written,
    })
}

/// One noise path as `t value` lines.
pub fn dump_noise(spec: &NoiseSpec, mesh: &TimeMesh, seed: u64) -> Result<String, CliError> {
    let mut rng = RngStream::new(seed, 0);
    let path = spec.prepare(mesh)?.sample(&mut rng)?;
    let mut s = String::with_capacity(path.len() * 24);
    for (t, v) in mesh.nodes().zip(path.values()) {
        let _ = writeln!(s, "{t:?} {v:?}");
    }
    Ok(s)
}

/// Human-readable description of a plan, for `--dry-run` and `validate`.
pub fn describe(cfg: &ExperimentConfig) -> String {
    let plan = &cfg.plan;
    let mut s = String::new();
    let _ = writeln!(s, "model        {}", plan.model.name());
    let noises: Vec<&str> = plan.model.noises.iter().map(NoiseSpec::kind).collect();
    let _ = writeln!(s, "noises       {}", noises.join(", "));
    let _ = writeln!(s, "target       {}", plan.model.target.name());
    let _ = writeln!(s, "horizon      {:?}", plan.model.horizon);
    let res: Vec<String> = plan.resolutions.iter().map(ToString::to_string).collect();
    let _ = writeln!(s, "resolutions  {}", res.join(" "));
    let _ = writeln!(s, "N_tgt        {}", plan.n_target);
    let _ = writeln!(s, "samples      {}", plan.samples);
    let _ = writeln!(s, "seed         {}", plan.master_seed);
    let workers = if plan.workers == 0 {
        "all cores".to_string()
    } else {
        plan.workers.to_string()
    };
    let _ = writeln!(s, "workers      {workers}");
    let _ = writeln!(s, "order        {}", expected_order(&plan.model));
    s
}
