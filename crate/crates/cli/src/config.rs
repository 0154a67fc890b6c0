//! Experiment files.
//!
//! ```toml
//! [model]
//! name = "toggle_switch"
//! mu = 0.8
//!
//! [noise.2]            # 1-based position in the model's noise list
//! kind = "linear_ito"  # optional, checked when present
//! sigma = 0.4
//!
//! [harness]
//! resolutions = [32, 64, 128]
//! n_target = 4096
//! samples = 100
//! seed = 7
//! workers = 0
//!
//! [output]
//! dir = "results"
//! formats = ["csv", "json", "loglog"]
//! sample_paths = 3
//! ```
//!
//! Everything except `model.name` is optional and falls back to the model defaults.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::Range;
use std::path::PathBuf;

use rodeconv::models::{model_by_name, MODEL_NAMES};
use rodeconv::{DistributionSpec, ExperimentPlan, ModelSpec, ParamValue};
use serde::Deserialize;
use toml::{Spanned, Value};

use crate::error::{CliError, Issue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OutputFormat {
    /// `errors.csv`
    Csv,
    /// `fit.json`
    Json,
    /// `loglog.dat`
    Loglog,
}

impl OutputFormat {
    pub const ALL: [OutputFormat; 3] = [Self::Csv, Self::Json, Self::Loglog];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
            Self::Loglog => "loglog",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    /// Output directory; `None` defers to the environment or the built-in default.
    pub dir: Option<PathBuf>,
    pub formats: Vec<OutputFormat>,
    /// Number of samples whose target and approximation paths are written out.
    pub sample_paths: usize,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            dir: None,
            formats: OutputFormat::ALL.to_vec(),
            sample_paths: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub plan: ExperimentPlan,
    pub output: OutputSpec,
}

type RawTable = BTreeMap<Spanned<String>, Spanned<Value>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    model: Option<Spanned<RawTable>>,
    noise: Option<BTreeMap<Spanned<String>, RawTable>>,
    harness: Option<RawHarness>,
    output: Option<RawOutput>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHarness {
    resolutions: Option<Spanned<Vec<usize>>>,
    n_target: Option<Spanned<usize>>,
    samples: Option<Spanned<usize>>,
    seed: Option<u64>,
    workers: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
    formats: Option<Spanned<Vec<Spanned<String>>>>,
    sample_paths: Option<usize>,
}

fn line_at(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|b| *b == b'\n').count() + 1
}

struct Lines<'a>(&'a str);

impl Lines<'_> {
    fn of(&self, span: Range<usize>) -> Option<usize> {
        Some(line_at(self.0, span.start))
    }
}

/// Converts a TOML value to a model or noise parameter.
pub fn param_from_toml(value: &Value) -> Result<ParamValue, String> {
    Ok(match value {
        Value::Float(v) => ParamValue::Real(*v),
        Value::Integer(i) => match usize::try_from(*i) {
            Ok(n) => ParamValue::Count(n),
            Err(_) => ParamValue::Real(*i as f64),
        },
        Value::String(s) => ParamValue::Name(s.clone()),
        Value::Array(items) if items.iter().all(Value::is_array) => ParamValue::Pairs(
            items
                .iter()
                .map(|item| match item.as_array().map(Vec::as_slice) {
                    Some([Value::Integer(a), Value::Integer(b)]) if *a >= 0 && *b >= 0 => {
                        Ok((*a as usize, *b as usize))
                    }
                    _ => Err(format!("expected a pair of non-negative integers, got {item}")),
                })
                .collect::<Result<_, _>>()?,
        ),
        Value::Array(items) => ParamValue::Laws(
            items
                .iter()
                .map(|item| match item {
                    Value::String(s) => s.parse::<DistributionSpec>().map_err(|e| e.to_string()),
                    Value::Float(v) => Ok(DistributionSpec::Constant { value: *v }),
                    Value::Integer(i) => Ok(DistributionSpec::Constant { value: *i as f64 }),
                    other => Err(format!("expected a distribution or a number, got {other}")),
                })
                .collect::<Result<_, _>>()?,
        ),
        other => return Err(format!("unsupported value {other}")),
    })
}

/// Renders a parameter as a TOML value.
pub fn param_to_toml(value: &ParamValue) -> String {
    let quote = |s: &str| Value::String(s.to_owned()).to_string();
    match value {
        ParamValue::Real(v) => fmt_float(*v),
        ParamValue::Count(n) => n.to_string(),
        ParamValue::Law(d) => quote(&d.to_string()),
        ParamValue::Laws(ds) => {
            let parts: Vec<String> = ds.iter().map(|d| quote(&d.to_string())).collect();
            format!("[{}]", parts.join(", "))
        }
        ParamValue::Name(s) => quote(s),
        ParamValue::Pairs(ps) => {
            let parts: Vec<String> = ps.iter().map(|(a, b)| format!("[{a}, {b}]")).collect();
            format!("[{}]", parts.join(", "))
        }
    }
}

fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:?}")
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, CliError> {
    let lines = Lines(text);
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| line_at(text, s.start));
        CliError::Config(vec![Issue::new(line, e.message().trim().to_owned())])
    })?;
    let mut issues = Vec::new();

    let Some(model_table) = raw.model else {
        return Err(CliError::Config(vec![Issue::new(None, "model required")]));
    };
    let model_line = lines.of(model_table.span());
    let model_table = model_table.into_inner();
    let name = model_table.iter().find(|(k, _)| k.get_ref() == "name");
    let mut model: ModelSpec = match name {
        None => {
            return Err(CliError::Config(vec![Issue::new(
                model_line,
                "model required: missing `name`",
            )]))
        }
        Some((_, v)) => match v.get_ref().as_str().map(model_by_name) {
            Some(Ok(m)) => m,
            Some(Err(e)) => return Err(CliError::Config(vec![Issue::new(lines.of(v.span()), e.to_string())])),
            None => {
                return Err(CliError::Config(vec![Issue::new(
                    lines.of(v.span()),
                    format!("model name must be a string, one of {}", MODEL_NAMES.join(", ")),
                )]))
            }
        },
    };

    for (key, value) in &model_table {
        if key.get_ref() == "name" {
            continue;
        }
        let line = lines.of(key.span());
        let result = param_from_toml(value.get_ref())
            .and_then(|p| model.set_param(key.get_ref(), &p).map_err(|e| e.to_string()));
        if let Err(msg) = result {
            issues.push(Issue::new(line, msg));
        }
    }

    for (index, table) in raw.noise.iter().flatten() {
        let line = lines.of(index.span());
        let slot = index
            .get_ref()
            .parse::<usize>()
            .ok()
            .filter(|i| (1..=model.noises.len()).contains(i));
        let Some(i) = slot else {
            issues.push(Issue::new(
                line,
                format!(
                    "noise section `{}` must be a position from 1 to {}",
                    index.get_ref(),
                    model.noises.len()
                ),
            ));
            continue;
        };
        let noise = &mut model.noises[i - 1];
        // `form` first: it resets the other transport laws
        let mut entries: Vec<_> = table.iter().collect();
        entries.sort_by_key(|(k, _)| k.get_ref() != "form");
        for (key, value) in entries {
            let line = lines.of(key.span());
            if key.get_ref() == "kind" {
                match value.get_ref().as_str() {
                    Some(k) if k == noise.kind() => {}
                    _ => issues.push(Issue::new(
                        line,
                        format!("noise {i} is `{}`, not {}", noise.kind(), value.get_ref()),
                    )),
                }
                continue;
            }
            let result = param_from_toml(value.get_ref())
                .and_then(|p| noise.set_param(key.get_ref(), &p).map_err(|e| e.to_string()));
            if let Err(msg) = result {
                issues.push(Issue::new(line, msg));
            }
        }
    }

    if let Err(e) = model.validate() {
        issues.push(Issue::new(model_line, e.to_string()));
    }
    if !issues.is_empty() {
        return Err(CliError::Config(issues));
    }

    let defaults = model.defaults();
    let harness = raw.harness.unwrap_or(RawHarness {
        resolutions: None,
        n_target: None,
        samples: None,
        seed: None,
        workers: None,
    });
    let res_line = harness.resolutions.as_ref().and_then(|s| lines.of(s.span()));
    let tgt_line = harness.n_target.as_ref().and_then(|s| lines.of(s.span()));
    let m_line = harness.samples.as_ref().and_then(|s| lines.of(s.span()));
    let plan = ExperimentPlan {
        model,
        resolutions: harness.resolutions.map_or(defaults.resolutions, Spanned::into_inner),
        n_target: harness.n_target.map_or(defaults.n_target, Spanned::into_inner),
        samples: harness.samples.map_or(defaults.samples, Spanned::into_inner),
        master_seed: harness.seed.unwrap_or(0),
        workers: harness.workers.unwrap_or(0),
    };
    if let Err(e) = plan.validate() {
        let msg = e.to_string();
        let line = if msg.contains("sample") {
            m_line
        } else if msg.contains("divide") {
            tgt_line.or(res_line)
        } else {
            res_line.or(tgt_line)
        };
        return Err(CliError::Config(vec![Issue::new(line, msg)]));
    }

    let mut output = OutputSpec::default();
    if let Some(raw_out) = raw.output {
        output.dir = raw_out.dir;
        output.sample_paths = raw_out.sample_paths.unwrap_or(0);
        if let Some(formats) = raw_out.formats {
            let mut parsed = Vec::new();
            for f in formats.into_inner() {
                match OutputFormat::parse(f.get_ref()) {
                    Some(fmt) if !parsed.contains(&fmt) => parsed.push(fmt),
                    Some(_) => {}
                    None => issues.push(Issue::new(
                        lines.of(f.span()),
                        format!("unknown output format `{}` (expected csv, json or loglog)", f.get_ref()),
                    )),
                }
            }
            output.formats = parsed;
        }
    }
    if output.sample_paths > plan.samples {
        issues.push(Issue::new(
            None,
            format!(
                "sample_paths = {} exceeds the number of samples {}",
                output.sample_paths, plan.samples
            ),
        ));
    }
    if !issues.is_empty() {
        return Err(CliError::Config(issues));
    }
    Ok(ExperimentConfig { plan, output })
}

/// Writes a configuration that [`parse_config`] reads back to an equal value.
pub fn print_config(cfg: &ExperimentConfig) -> String {
    let plan = &cfg.plan;
    let mut s = String::new();
    let _ = writeln!(s, "[model]");
    let _ = writeln!(
        s,
        "name = {}",
        param_to_toml(&ParamValue::Name(plan.model.name().into()))
    );
    for (k, v) in plan.model.param_list() {
        let _ = writeln!(s, "{k} = {}", param_to_toml(&v));
    }
    for (i, noise) in plan.model.noises.iter().enumerate() {
        let _ = writeln!(s, "\n[noise.{}]", i + 1);
        let _ = writeln!(s, "kind = {}", param_to_toml(&ParamValue::Name(noise.kind().into())));
        for (k, v) in noise.params() {
            let _ = writeln!(s, "{k} = {}", param_to_toml(&v));
        }
    }
    let res: Vec<String> = plan.resolutions.iter().map(ToString::to_string).collect();
    let _ = writeln!(s, "\n[harness]");
    let _ = writeln!(s, "resolutions = [{}]", res.join(", "));
    let _ = writeln!(s, "n_target = {}", plan.n_target);
    let _ = writeln!(s, "samples = {}", plan.samples);
    let _ = writeln!(s, "seed = {}", plan.master_seed);
    let _ = writeln!(s, "workers = {}", plan.workers);
    let _ = writeln!(s, "\n[output]");
    if let Some(dir) = &cfg.output.dir {
        let _ = writeln!(s, "dir = {}", Value::String(dir.display().to_string()));
    }
    let formats: Vec<String> = cfg
        .output
        .formats
        .iter()
        .map(|f| Value::String(f.name().into()).to_string())
        .collect();
    let _ = writeln!(s, "formats = [{}]", formats.join(", "));
    let _ = writeln!(s, "sample_paths = {}", cfg.output.sample_paths);
    s
}

/// The configuration reproducing a model's default settings.
pub fn default_config(model: &str) -> Result<ExperimentConfig, CliError> {
    let model = model_by_name(model).map_err(|e| CliError::config(e.to_string()))?;
    Ok(ExperimentConfig {
        plan: ExperimentPlan::with_defaults(model, 0),
        output: OutputSpec::default(),
    })
}
