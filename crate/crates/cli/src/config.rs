//! Run configuration read from a TOML file.

use lubgap::asymptotics::{log_grid, AsymptoticOptions};
use lubgap::{ProblemParams, QuadSpec};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid `{field}`: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Numeric,
    Asymptotic,
    #[default]
    Both,
}

impl Mode {
    pub fn numeric(self) -> bool {
        matches!(self, Mode::Numeric | Mode::Both)
    }

    pub fn asymptotic(self) -> bool {
        matches!(self, Mode::Asymptotic | Mode::Both)
    }
}

/// Log-spaced epsilons from `eps_from` down to `eps_to`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub eps_from: f64,
    pub eps_to: f64,
    pub points: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Outputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub mode: Mode,
    pub problem: ProblemParams,
    #[serde(default)]
    pub quadrature: QuadSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
    #[serde(default)]
    pub outputs: Outputs,
    #[serde(default)]
    pub asymptotic: AsymptoticOptions,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config always serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let p = &self.problem;
        let pr = &p.profile;
        if !(pr.eps > 0.0 && pr.eps.is_finite()) {
            return Err(invalid(
                "problem.profile.eps",
                format!("must be positive, got {}", pr.eps),
            ));
        }
        if !(pr.r > 0.0 && pr.r.is_finite()) {
            return Err(invalid(
                "problem.profile.r",
                format!("must be positive, got {}", pr.r),
            ));
        }
        if !(pr.big_r > 0.0 && pr.big_r.is_finite()) {
            return Err(invalid(
                "problem.profile.big_r",
                format!("must be positive, got {}", pr.big_r),
            ));
        }
        if !(p.mu > 0.0 && p.mu.is_finite()) {
            return Err(invalid(
                "problem.mu",
                format!("must be positive, got {}", p.mu),
            ));
        }
        p.validate()
            .map_err(|e| invalid("problem", e.to_string()))?;
        self.quadrature
            .validate()
            .map_err(|e| invalid("quadrature", e.to_string()))?;
        if let Some(s) = &self.sweep {
            if !(s.eps_to > 0.0 && s.eps_from > s.eps_to && s.eps_from.is_finite()) {
                return Err(invalid(
                    "sweep",
                    format!(
                        "need eps_from > eps_to > 0, got {} and {}",
                        s.eps_from, s.eps_to
                    ),
                ));
            }
            if s.points < 3 {
                return Err(invalid(
                    "sweep.points",
                    format!("must be at least 3, got {}", s.points),
                ));
            }
        }
        Ok(())
    }

    /// The sweep grid, or the problem's single epsilon.
    pub fn eps_grid(&self) -> Vec<f64> {
        match &self.sweep {
            Some(s) => log_grid(s.eps_from, s.eps_to, s.points),
            None => vec![self.problem.profile.eps],
        }
    }
}
