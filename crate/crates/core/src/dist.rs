//! Scalar laws used for jump sizes, random coefficients and initial conditions.

use std::fmt;
use std::str::FromStr;

use crate::error::{config, Error, Result};
use crate::rng::RngStream;

/// A univariate distribution. Parameters follow the scale (not rate) convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionSpec {
    Exponential { scale: f64 },
    Uniform { lo: f64, hi: f64 },
    Gamma { shape: f64, scale: f64 },
    Beta { alpha: f64, beta: f64 },
    Normal { mean: f64, sd: f64 },
    Constant { value: f64 },
}

impl DistributionSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Exponential { scale } => scale > 0.0 && scale.is_finite(),
            Self::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && lo < hi,
            Self::Gamma { shape, scale } => shape > 0.0 && scale > 0.0 && shape.is_finite() && scale.is_finite(),
            Self::Beta { alpha, beta } => alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite(),
            Self::Normal { mean, sd } => mean.is_finite() && sd >= 0.0 && sd.is_finite(),
            Self::Constant { value } => value.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            config(format!("invalid distribution parameters: {self}"))
        }
    }

    pub fn sample(&self, rng: &mut RngStream) -> Result<f64> {
        Ok(match *self {
            Self::Exponential { scale } => rng.exponential(scale),
            Self::Uniform { lo, hi } => lo + (hi - lo) * rng.uniform(),
            Self::Gamma { shape, scale } => rng.gamma(shape, scale)?,
            Self::Beta { alpha, beta } => rng.beta(alpha, beta)?,
            Self::Normal { mean, sd } => mean + sd * rng.normal(),
            Self::Constant { value } => value,
        })
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Self::Exponential { scale } => scale,
            Self::Uniform { lo, hi } => 0.5 * (lo + hi),
            Self::Gamma { shape, scale } => shape * scale,
            Self::Beta { alpha, beta } => alpha / (alpha + beta),
            Self::Normal { mean, .. } => mean,
            Self::Constant { value } => value,
        }
    }

    /// True when every draw is `>= 0`.
    pub fn is_nonnegative(&self) -> bool {
        match *self {
            Self::Exponential { .. } | Self::Gamma { .. } | Self::Beta { .. } => true,
            Self::Uniform { lo, .. } => lo >= 0.0,
            Self::Normal { mean, sd } => sd == 0.0 && mean >= 0.0,
            Self::Constant { value } => value >= 0.0,
        }
    }
}

impl fmt::Display for DistributionSpec {
    // `{:?}` on f64 prints the shortest representation that round-trips.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exponential { scale } => write!(f, "exponential({scale:?})"),
            Self::Uniform { lo, hi } => write!(f, "uniform({lo:?}, {hi:?})"),
            Self::Gamma { shape, scale } => write!(f, "gamma({shape:?}, {scale:?})"),
            Self::Beta { alpha, beta } => write!(f, "beta({alpha:?}, {beta:?})"),
            Self::Normal { mean, sd } => write!(f, "normal({mean:?}, {sd:?})"),
            Self::Constant { value } => write!(f, "constant({value:?})"),
        }
    }
}

impl FromStr for DistributionSpec {
    type Err = Error;

    /// Parses `name(p1, p2)`, e.g. `uniform(0, 0.5)` or `exponential(0.25)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Config(format!("cannot parse distribution `{s}`"));
        let open = s.find('(').ok_or_else(bad)?;
        let body = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let name = s[..open].trim().to_ascii_lowercase();
        let args = body
            .split(',')
            .map(|a| a.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let arity = |k: usize| {
            if args.len() == k {
                Ok(())
            } else {
                config(format!("`{name}` takes {k} parameter(s), got {}", args.len()))
            }
        };
        let spec = match name.as_str() {
            "exponential" | "exp" => {
                arity(1)?;
                Self::Exponential { scale: args[0] }
            }
            "uniform" => {
                arity(2)?;
                Self::Uniform {
                    lo: args[0],
                    hi: args[1],
                }
            }
            "gamma" => {
                arity(2)?;
                Self::Gamma {
                    shape: args[0],
                    scale: args[1],
                }
            }
            "beta" => {
                arity(2)?;
                Self::Beta {
                    alpha: args[0],
                    beta: args[1],
                }
            }
            "normal" => {
                arity(2)?;
                Self::Normal {
                    mean: args[0],
                    sd: args[1],
                }
            }
            "constant" => {
                arity(1)?;
                Self::Constant { value: args[0] }
            }
            _ => return config(format!("unknown distribution `{name}`")),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_known_laws() {
        assert_eq!(
            "uniform(0, 0.5)".parse::<DistributionSpec>().unwrap(),
            DistributionSpec::Uniform { lo: 0.0, hi: 0.5 }
        );
        assert_eq!(
            " Exponential( 0.25 ) ".parse::<DistributionSpec>().unwrap(),
            DistributionSpec::Exponential { scale: 0.25 }
        );
    }

    #[test]
    fn rejects_invalid() {
        for s in [
            "uniform(1, 0)",
            "gamma(0, 1)",
            "beta(1)",
            "cauchy(0, 1)",
            "normal 0 1",
            "normal(0, -1)",
        ] {
            assert!(s.parse::<DistributionSpec>().is_err(), "{s}");
        }
    }

    #[test]
    fn constant_and_means() {
        let mut rng = crate::rng::substream(0, 0);
        let c = DistributionSpec::Constant { value: 3.0 };
        assert_eq!(c.sample(&mut rng).unwrap(), 3.0);
        assert_eq!(DistributionSpec::Beta { alpha: 5.0, beta: 7.0 }.mean(), 5.0 / 12.0);
        assert_eq!(DistributionSpec::Gamma { shape: 7.5, scale: 2.0 }.mean(), 15.0);
    }

    fn any_law() -> impl Strategy<Value = DistributionSpec> {
        let pos = 1e-3f64..1e3;
        prop_oneof![
            pos.clone().prop_map(|scale| DistributionSpec::Exponential { scale }),
            (-1e3f64..1e3, pos.clone()).prop_map(|(lo, w)| DistributionSpec::Uniform { lo, hi: lo + w }),
            (pos.clone(), pos.clone()).prop_map(|(shape, scale)| DistributionSpec::Gamma { shape, scale }),
            (pos.clone(), pos.clone()).prop_map(|(alpha, beta)| DistributionSpec::Beta { alpha, beta }),
            (-1e3f64..1e3, 0.0f64..1e3).prop_map(|(mean, sd)| DistributionSpec::Normal { mean, sd }),
            (-1e3f64..1e3).prop_map(|value| DistributionSpec::Constant { value }),
        ]
    }

    proptest! {
        #[test]
        fn display_round_trips(d in any_law()) {
            let back: DistributionSpec = d.to_string().parse().unwrap();
            prop_assert_eq!(back, d);
        }
    }
}
