use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rodeconv::models::{model_by_name, MODEL_NAMES};
use rodeconv::{expected_order, NoiseSpec, TimeMesh};
use rodeconv_cli::config::{default_config, param_from_toml};
use rodeconv_cli::{
    artifacts, dump_noise, parse_config, print_config, run, CliError, ExperimentConfig, DEFAULT_OUTPUT_DIR,
    OUTPUT_DIR_ENV,
};

/// Strong convergence experiments for the Euler scheme on random ODEs.
#[derive(Parser)]
#[command(name = "rodeconv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment file and write its artifacts.
    Run {
        config: PathBuf,
        /// Validate and print the plan without computing anything.
        #[arg(long)]
        dry_run: bool,
        /// Worker threads (0 = all cores); overrides the config.
        #[arg(long)]
        workers: Option<usize>,
        /// Output directory; overrides the config and RODECONV_OUTPUT_DIR.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Check an experiment file.
    Validate { config: PathBuf },
    /// Write one noise sample path as `t value` lines.
    DumpNoise {
        /// Noise kind, e.g. `wiener` or `hawkes`.
        kind: String,
        /// Parameter override `key=value`; repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Final time.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Number of time steps.
        #[arg(long, default_value_t = 1024)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in models.
    ListModels,
    /// Print the configuration reproducing a model's default settings.
    Template { model: String },
}

fn read_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&text)
}

fn output_dir(flag: Option<PathBuf>, cfg: &ExperimentConfig) -> PathBuf {
    flag.or_else(|| cfg.output.dir.clone())
        .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR))
}

fn parse_assignment(s: &str) -> Result<(String, rodeconv::ParamValue), CliError> {
    let (key, raw) = s
        .split_once('=')
        .ok_or_else(|| CliError::config(format!("expected KEY=VALUE, got `{s}`")))?;
    let key = key.trim();
    let raw = raw.trim();
    let value = match format!("v = {raw}").parse::<toml::Table>() {
        Ok(t) => param_from_toml(&t["v"]).map_err(CliError::config)?,
        Err(_) => rodeconv::ParamValue::Name(raw.to_owned()),
    };
    Ok((key.to_owned(), value))
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            config,
            dry_run,
            workers,
            out_dir,
        } => {
            let mut cfg = read_config(&config)?;
            if let Some(w) = workers {
                cfg.plan.workers = w;
            }
            let dir = output_dir(out_dir, &cfg);
            if dry_run {
                print!("{}", artifacts::describe(&cfg));
                println!("output       {}", dir.display());
                return Ok(());
            }
            let outcome = run(&cfg, &dir)?;
            for row in &outcome.table.rows {
                println!(
                    "N = {:>7}  dt = {:.3e}  error = {:.4e}  std err = {:.3e}",
                    row.n, row.dt, row.error, row.std_err
                );
            }
            match outcome.fit.interval {
                Some((lo, hi)) => println!("p = {:.4}  CI [{lo:.4}, {hi:.4}]", outcome.fit.p),
                None => println!("p = {:.4}  (no CI: a lower error band is not positive)", outcome.fit.p),
            }
            for path in &outcome.written {
                println!("wrote {}", path.display());
            }
        }
        Command::Validate { config } => {
            let cfg = read_config(&config)?;
            print!("{}", artifacts::describe(&cfg));
            println!("ok");
        }
        Command::DumpNoise {
            kind,
            set,
            t,
            n,
            seed,
            out,
        } => {
            let mut spec = NoiseSpec::default_of(&kind)?;
            let mut assignments = set.iter().map(|s| parse_assignment(s)).collect::<Result<Vec<_>, _>>()?;
            assignments.sort_by_key(|(k, _)| k != "form");
            for (k, v) in &assignments {
                spec.set_param(k, v)?;
            }
            spec.validate()?;
            let mesh = TimeMesh::new(0.0, t, n)?;
            let text = dump_noise(&spec, &mesh, seed)?;
            match out {
                Some(path) => fs::write(&path, text).map_err(|e| CliError::io(&path, e))?,
                None => print!("{text}"),
            }
        }
        Command::ListModels => {
            for name in MODEL_NAMES {
                let m = model_by_name(name)?;
                let noises: Vec<&str> = m.noises.iter().map(NoiseSpec::kind).collect();
                println!(
                    "{name:<20} order {:<4} noises: {}",
                    expected_order(&m),
                    noises.join(", ")
                );
            }
        }
        Command::Template { model } => print!("{}", print_config(&default_config(&model)?)),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
