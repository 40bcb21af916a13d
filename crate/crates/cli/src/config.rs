//! Experiment configuration: a TOML file with dotted keys.
//!
//! ```toml
//! potential_expr = "1 - x^2"
//! domain.x_min = -2.5
//! domain.x_max = 2.5
//! domain.boundary = "dirichlet"
//! kappa = 0.5
//! h_values = [0.2, 0.14, 0.1, 0.07, 0.05]
//! psi1.center = 0.0
//! psi1.width = 0.5
//! psi2.center = 0.0
//! psi2.width = 0.5
//! tasks = ["magnitude", "weyl_remainder"]
//! ```

use std::path::{Path, PathBuf};

use dirac_weyl_core::energy::DiagonalRule;
use dirac_weyl_core::grid::Boundary;
use dirac_weyl_core::{CutoffFunction, Potential};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest grid any single `h` may request.
pub const MAX_POINTS: usize = 16_384;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error("invalid potential_expr: {0}")]
    Potential(#[from] dirac_weyl_core::ParseError),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Magnitude,
    WeylRemainder,
    SmoothLeading,
    Tauberian,
    Truncation,
    Conditions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Domain {
    pub x_min: f64,
    pub x_max: f64,
    #[serde(default = "default_boundary")]
    pub boundary: Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutoffSpec {
    pub center: f64,
    pub width: f64,
}

impl From<CutoffSpec> for CutoffFunction {
    fn from(c: CutoffSpec) -> Self {
        CutoffFunction::new(c.center, c.width)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauberianSpec {
    /// Time cutoffs for the error sweep.
    #[serde(default = "default_t_values")]
    pub t_values: Vec<f64>,
    /// `h` of the sweep; the smallest configured `h` when absent.
    #[serde(default)]
    pub h: Option<f64>,
}

impl Default for TauberianSpec {
    fn default() -> Self {
        Self {
            t_values: default_t_values(),
            h: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSpec {
    #[serde(default = "default_gamma_values")]
    pub gamma_values: Vec<f64>,
    #[serde(default)]
    pub h: Option<f64>,
}

impl Default for TruncationSpec {
    fn default() -> Self {
        Self {
            gamma_values: default_gamma_values(),
            h: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub potential_expr: String,
    pub domain: Domain,
    pub kappa: f64,
    pub h_values: Vec<f64>,
    /// Grid points per semiclassical wavelength unit.
    #[serde(default = "default_grid_rule")]
    pub grid_rule: u32,
    pub psi1: CutoffSpec,
    pub psi2: CutoffSpec,
    #[serde(default = "default_tasks")]
    pub tasks: Vec<Task>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tau: f64,
    #[serde(default)]
    pub diagonal_rule: DiagonalRule,
    #[serde(default)]
    pub tauberian: TauberianSpec,
    #[serde(default)]
    pub truncation: TruncationSpec,
}

fn default_boundary() -> Boundary {
    Boundary::Periodic
}
fn default_grid_rule() -> u32 {
    8
}
fn default_tasks() -> Vec<Task> {
    vec![Task::Magnitude, Task::WeylRemainder, Task::Conditions]
}
fn default_epsilon() -> f64 {
    dirac_weyl_core::conditions::DEFAULT_EPSILON
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}
fn default_t_values() -> Vec<f64> {
    vec![0.1, 0.2, 0.4, 0.8]
}
fn default_gamma_values() -> Vec<f64> {
    vec![0.25, 0.5, 1.0, 2.0]
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let config: Self = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn has(&self, task: Task) -> bool {
        self.tasks.contains(&task)
    }

    pub fn potential(&self) -> Result<Potential, ConfigError> {
        Potential::parse(&self.potential_expr).map_err(|e| match e {
            dirac_weyl_core::Error::Expr(p) => ConfigError::Potential(p),
            other => ConfigError::Invalid(other.to_string()),
        })
    }

    pub fn smallest_h(&self) -> Option<f64> {
        self.h_values.iter().copied().reduce(f64::min)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |m: String| Err(ConfigError::Invalid(m));
        self.potential()?;
        if !(self.domain.x_min < self.domain.x_max) {
            return invalid(format!(
                "domain must satisfy x_min < x_max, got [{}, {}]",
                self.domain.x_min, self.domain.x_max
            ));
        }
        if !(self.kappa > 0.0 && self.kappa < 1.0) {
            return invalid(format!("kappa must lie in (0, 1), got {}", self.kappa));
        }
        if self.grid_rule == 0 {
            return invalid("grid_rule must be positive".into());
        }
        if self.h_values.iter().any(|&h| !(h > 0.0)) {
            return invalid("h_values must be positive".into());
        }
        if self.h_values.windows(2).any(|w| w[1] >= w[0]) {
            return invalid("h_values must be strictly descending".into());
        }
        if self.h_values.len() >= 3 {
            let ratios: Vec<f64> = self.h_values.windows(2).map(|w| w[1] / w[0]).collect();
            let mean = (ratios.iter().map(|r| r.ln()).sum::<f64>() / ratios.len() as f64).exp();
            if ratios.iter().any(|r| (r / mean - 1.0).abs() > 0.05) {
                return invalid(format!(
                    "h_values must be (approximately) geometric; successive ratios {ratios:?}"
                ));
            }
        }
        for (name, c) in [("psi1", self.psi1), ("psi2", self.psi2)] {
            if !(c.width > 0.0) {
                return invalid(format!("{name}.width must be positive"));
            }
        }
        if !(self.epsilon > 0.0) {
            return invalid(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if self.tauberian.t_values.iter().any(|&t| !(t > 0.0)) {
            return invalid("tauberian.t_values must be positive".into());
        }
        if self.truncation.gamma_values.iter().any(|&g| !(g > 0.0)) {
            return invalid("truncation.gamma_values must be positive".into());
        }
        let needs_rows = self.tasks.iter().any(|t| *t != Task::Conditions);
        if needs_rows && self.h_values.is_empty() {
            return invalid("h_values must not be empty".into());
        }
        Ok(())
    }
}
