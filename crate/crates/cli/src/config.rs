//! Run configuration, shared by the command line and `--config` files.

use std::path::{Path, PathBuf};

use lpst_core::group::DEFAULT_BALL_CAP;
use lpst_core::io::AlphaChoice;
use lpst_core::pspace::{Budget, PExponent};
use lpst_core::uhf::DEFAULT_TOWER_CAP;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Experiment {
    Norm {
        matrix: PathBuf,
    },
    Group {
        group: String,
        radius: f64,
        coeffs: PathBuf,
    },
    Uhf {
        dims: Vec<usize>,
        alpha: AlphaChoice,
    },
    Metric {
        dims: Vec<usize>,
        alpha: AlphaChoice,
        states: Vec<PathBuf>,
    },
    Check {
        #[serde(default)]
        quick: bool,
    },
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Norm { .. } => "norm",
            Experiment::Group { .. } => "group",
            Experiment::Uhf { .. } => "uhf",
            Experiment::Metric { .. } => "metric",
            Experiment::Check { .. } => "check",
        }
    }
}

fn default_p() -> Vec<f64> {
    vec![2.0]
}
fn default_out() -> PathBuf {
    PathBuf::from("out")
}
fn default_ball_cap() -> usize {
    DEFAULT_BALL_CAP
}
fn default_tower_cap() -> usize {
    DEFAULT_TOWER_CAP
}
fn default_starts() -> usize {
    Budget::default().starts
}
fn default_iterations() -> usize {
    Budget::default().iterations
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default = "default_p")]
    pub p: Vec<f64>,
    /// Acknowledges non-default resource caps.
    #[serde(default)]
    pub cap_override: bool,
    #[serde(default = "default_ball_cap")]
    pub ball_cap: usize,
    #[serde(default = "default_tower_cap")]
    pub tower_cap: usize,
    #[serde(default = "default_starts")]
    pub starts: usize,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    pub experiment: Experiment,
}

impl RunConfig {
    pub fn new(experiment: Experiment) -> Self {
        RunConfig {
            seed: 0,
            out: default_out(),
            p: default_p(),
            cap_override: false,
            ball_cap: DEFAULT_BALL_CAP,
            tower_cap: DEFAULT_TOWER_CAP,
            starts: default_starts(),
            iterations: default_iterations(),
            experiment,
        }
    }

    /// Parses a TOML configuration. Relative paths are resolved against
    /// `base` when given.
    pub fn from_toml(text: &str, base: Option<&Path>) -> Result<Self, CliError> {
        let mut cfg: RunConfig =
            toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))?;
        if let Some(base) = base {
            let fix = |p: &mut PathBuf| {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            };
            fix(&mut cfg.out);
            match &mut cfg.experiment {
                Experiment::Norm { matrix } => fix(matrix),
                Experiment::Group { coeffs, .. } => fix(coeffs),
                Experiment::Metric { states, .. } => states.iter_mut().for_each(fix),
                Experiment::Uhf { .. } | Experiment::Check { .. } => {}
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plain data serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.p.is_empty() {
            return Err(CliError::Config("p list must be nonempty".into()));
        }
        self.exponents()?;
        let caps_changed = self.ball_cap != DEFAULT_BALL_CAP || self.tower_cap != DEFAULT_TOWER_CAP;
        if caps_changed && !self.cap_override {
            return Err(CliError::Config(
                "changing ball_cap or tower_cap requires cap_override (--cap-override)".into(),
            ));
        }
        if self.starts == 0 {
            return Err(CliError::Core(lpst_core::Error::ZeroBudget));
        }
        match &self.experiment {
            Experiment::Group { radius, .. } if !(radius.is_finite() && *radius >= 0.0) => Err(
                CliError::Config(format!("radius must be finite and >= 0, got {radius}")),
            ),
            Experiment::Metric { states, .. } if states.len() < 2 => {
                Err(CliError::Config("metric needs at least two state files".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn exponents(&self) -> Result<Vec<PExponent>, CliError> {
        self.p
            .iter()
            .map(|p| PExponent::new(*p).map_err(CliError::from))
            .collect()
    }

    pub fn budget(&self) -> Budget {
        Budget {
            starts: self.starts,
            iterations: self.iterations,
            seed: self.seed,
            ..Budget::default()
        }
    }
}

/// Parses a comma-separated list such as `1,1.5,2`.
pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| CliError::Config(format!("bad list entry {t:?} in {s:?}")))
        })
        .collect()
}

/// `auto` or a comma-separated list of coefficients.
pub fn parse_alpha(s: &str) -> Result<AlphaChoice, CliError> {
    if s.trim() == "auto" {
        Ok(AlphaChoice::Auto {})
    } else {
        parse_list(s).map(AlphaChoice::Explicit)
    }
}
