//! Loosely typed parameter values for key-value configuration.

use std::fmt;

use crate::dist::DistributionSpec;
use crate::error::{config, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Real(f64),
    Count(usize),
    Law(DistributionSpec),
    Laws(Vec<DistributionSpec>),
    Name(String),
    /// Integer pairs, e.g. `(time steps, spatial intervals)`.
    Pairs(Vec<(usize, usize)>),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Real(v) => write!(f, "{v:?}"),
            Self::Count(n) => write!(f, "{n}"),
            Self::Law(d) => write!(f, "{d}"),
            Self::Laws(ds) => {
                let parts: Vec<String> = ds.iter().map(ToString::to_string).collect();
                write!(f, "[{}]", parts.join(", "))
            }
            Self::Name(s) => f.write_str(s),
            Self::Pairs(ps) => {
                let parts: Vec<String> = ps.iter().map(|(a, b)| format!("({a}, {b})")).collect();
                write!(f, "[{}]", parts.join(", "))
            }
        }
    }
}

impl ParamValue {
    pub fn real(&self, key: &str) -> Result<f64> {
        match *self {
            Self::Real(v) => Ok(v),
            Self::Count(n) => Ok(n as f64),
            _ => config(format!("`{key}` expects a number, got `{self}`")),
        }
    }

    pub fn count(&self, key: &str) -> Result<usize> {
        match *self {
            Self::Count(n) => Ok(n),
            _ => config(format!("`{key}` expects a non-negative integer, got `{self}`")),
        }
    }

    pub fn law(&self, key: &str) -> Result<DistributionSpec> {
        match self {
            Self::Law(d) => Ok(*d),
            Self::Name(s) => s.parse(),
            Self::Real(v) => Ok(DistributionSpec::Constant { value: *v }),
            Self::Count(n) => Ok(DistributionSpec::Constant { value: *n as f64 }),
            _ => config(format!(
                "`{key}` expects a distribution like `uniform(0, 1)`, got `{self}`"
            )),
        }
    }

    pub fn laws(&self, key: &str) -> Result<Vec<DistributionSpec>> {
        match self {
            Self::Laws(ds) => Ok(ds.clone()),
            _ => config(format!("`{key}` expects a list of distributions, got `{self}`")),
        }
    }

    pub fn name(&self, key: &str) -> Result<&str> {
        match self {
            Self::Name(s) => Ok(s),
            _ => config(format!("`{key}` expects a name, got `{self}`")),
        }
    }

    pub fn pairs(&self, key: &str) -> Result<Vec<(usize, usize)>> {
        match self {
            Self::Pairs(ps) => Ok(ps.clone()),
            _ => config(format!("`{key}` expects a list of integer pairs, got `{self}`")),
        }
    }
}
