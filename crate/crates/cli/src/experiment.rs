//! Sweep orchestration: one immutable problem per `h`, solved in parallel and
//! reassembled in configuration order.

use std::time::Instant;

use dirac_weyl_core::conditions::check_conditions;
use dirac_weyl_core::energy::{compute_i, compute_i_smooth, compute_i_truncated, EnergyQuadrature};
use dirac_weyl_core::fit::{fit_exponent, Fit, MIN_FIT_POINTS};
use dirac_weyl_core::problem::max_spacing;
use dirac_weyl_core::spectral::{problem_kernel, solve};
use dirac_weyl_core::tauberian::{mollified_projector_at, tauberian_energy_error, Mollifier};
use dirac_weyl_core::{
    smooth_leading_coefficient, weyl_leading, ConditionReport, CutoffFunction, Potential, SemiclassicalProblem,
    SingularWeight,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{ConfigError, ExperimentConfig, Task, MAX_POINTS};

pub const REPORT_VERSION: &str = "dirac-weyl-report/1";

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numeric failure at h = {h}: {source}")]
    Numeric { h: f64, source: dirac_weyl_core::Error },
}

impl RunError {
    fn at(h: f64, source: dirac_weyl_core::Error) -> Self {
        use dirac_weyl_core::Error as E;
        match source {
            E::Resolution { .. } | E::Problem(_) | E::Grid(_) | E::Kappa { .. } => {
                RunError::Config(ConfigError::Invalid(format!("at h = {h}: {source}")))
            }
            other => RunError::Numeric { h, source: other },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub h: f64,
    pub n_points: usize,
    #[serde(rename = "I_exact")]
    pub i_exact: f64,
    #[serde(rename = "I_weyl_leading")]
    pub i_weyl_leading: f64,
    #[serde(rename = "I_tauberian")]
    pub i_tauberian: Option<f64>,
    pub abs_err: f64,
    pub rel_err: f64,
    /// Wall-clock time; written to the CSV only so that `report.json` stays reproducible.
    #[serde(skip)]
    pub runtime_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothRow {
    pub h: f64,
    #[serde(rename = "I_smooth")]
    pub i_smooth: f64,
    pub kappa0: f64,
    pub rel_dev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauberianPoint {
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "I_tauberian")]
    pub i_tauberian: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauberianSection {
    pub h: f64,
    #[serde(rename = "I_sharp")]
    pub i_sharp: f64,
    pub points: Vec<TauberianPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationPoint {
    pub gamma: f64,
    #[serde(rename = "I_gamma")]
    pub i_gamma: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationSection {
    pub h: f64,
    #[serde(rename = "I_full")]
    pub i_full: f64,
    pub points: Vec<TruncationPoint>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Fits {
    pub magnitude_exponent: Option<Fit>,
    /// Slope of `|I - predicted_I|` against `h`.
    pub remainder_exponent: Option<Fit>,
    /// Slope of `|I - predicted_I| / I` against `h`.
    pub relative_remainder_exponent: Option<Fit>,
    #[serde(rename = "tauberian_T_exponent")]
    pub tauberian_t_exponent: Option<Fit>,
    pub truncation_gamma_exponent: Option<Fit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub version: String,
    pub config: ExperimentConfig,
    pub conditions: ConditionReport,
    pub rows: Vec<Row>,
    pub fits: Fits,
    pub smooth_leading: Vec<SmoothRow>,
    pub tauberian: Option<TauberianSection>,
    pub truncation: Option<TruncationSection>,
    pub notes: Vec<String>,
}

struct Outcome {
    row: Row,
    smooth: Option<SmoothRow>,
    tauberian: Option<TauberianSection>,
    truncation: Option<TruncationSection>,
}

struct Plan<'a> {
    config: &'a ExperimentConfig,
    potential: Potential,
    psi1: CutoffFunction,
    psi2: CutoffFunction,
    weight: SingularWeight,
    tauberian_h: Option<f64>,
    truncation_h: Option<f64>,
}

impl Plan<'_> {
    fn problem(&self, h: f64) -> Result<SemiclassicalProblem, RunError> {
        let c = self.config;
        SemiclassicalProblem::resolved(
            self.potential.clone(),
            h,
            (c.domain.x_min, c.domain.x_max),
            c.domain.boundary,
            c.grid_rule as f64,
            self.psi1,
            self.psi2,
        )
        .map(|p| p.with_tau(c.tau))
        .map_err(|e| RunError::at(h, e))
    }

    fn run(&self, h: f64) -> Result<Outcome, RunError> {
        let c = self.config;
        let start = Instant::now();
        let fail = |e| RunError::at(h, e);
        let problem = self.problem(h)?;
        let eigs = solve(&problem).map_err(fail)?;
        let kernel = problem_kernel(&problem, &eigs);
        let q = EnergyQuadrature::new(&kernel, &self.weight, &self.psi1, &self.psi2).with_rule(c.diagonal_rule);
        let i_exact = compute_i(&q).map_err(fail)?;
        let prediction = weyl_leading(&problem, &self.weight).map_err(fail)?;
        let i_weyl_leading = prediction.predicted_i.unwrap_or(f64::NAN);
        let abs_err = (i_exact - i_weyl_leading).abs();

        let smooth = c.has(Task::SmoothLeading).then(|| {
            let i_smooth = compute_i_smooth(&kernel, |_, _| 1.0, &self.psi1, &self.psi2);
            let kappa0 = smooth_leading_coefficient(&problem, |_, _| 1.0);
            SmoothRow {
                h,
                i_smooth,
                kappa0,
                rel_dev: (h * i_smooth - kappa0) / kappa0,
            }
        });

        let m = Mollifier::canonical();
        let period = kernel.period;
        let mut i_tauberian = None;
        let mut tauberian = None;
        if c.has(Task::Tauberian) {
            if let Some(&t_row) = c.tauberian.t_values.iter().max_by(|a, b| a.total_cmp(b)) {
                let mp = mollified_projector_at(&eigs, m, h, t_row, c.tau, period).map_err(fail)?;
                let qt =
                    EnergyQuadrature::new(&mp.kernel, &self.weight, &self.psi1, &self.psi2).with_rule(c.diagonal_rule);
                i_tauberian = Some(compute_i(&qt).map_err(fail)?);
            }
            if self.tauberian_h == Some(h) {
                let sweep = tauberian_energy_error(&problem, &eigs, &self.weight, m, &c.tauberian.t_values, i_exact)
                    .map_err(fail)?;
                tauberian = Some(TauberianSection {
                    h,
                    i_sharp: i_exact,
                    points: sweep
                        .points
                        .into_iter()
                        .map(|p| TauberianPoint {
                            t: p.t,
                            i_tauberian: p.i_tauberian,
                            error: p.error,
                        })
                        .collect(),
                });
            }
        }

        let mut truncation = None;
        if c.has(Task::Truncation) && self.truncation_h == Some(h) {
            let mut points = Vec::new();
            for &gamma in &c.truncation.gamma_values {
                let i_gamma = compute_i_truncated(&q, gamma).map_err(fail)?;
                points.push(TruncationPoint {
                    gamma,
                    i_gamma,
                    error: (i_exact - i_gamma).abs(),
                });
            }
            truncation = Some(TruncationSection {
                h,
                i_full: i_exact,
                points,
            });
        }

        Ok(Outcome {
            row: Row {
                h,
                n_points: problem.grid.n_points,
                i_exact,
                i_weyl_leading,
                i_tauberian,
                abs_err,
                rel_err: abs_err / i_exact.abs(),
                runtime_seconds: start.elapsed().as_secs_f64(),
            },
            smooth,
            tauberian,
            truncation,
        })
    }
}

fn fit_or_note(name: &str, pairs: &[(f64, f64)], notes: &mut Vec<String>) -> Option<Fit> {
    if pairs.len() < MIN_FIT_POINTS {
        if !pairs.is_empty() {
            notes.push(format!("{name}: {} points, fit needs {MIN_FIT_POINTS}", pairs.len()));
        }
        return None;
    }
    match fit_exponent(pairs) {
        Ok(f) => Some(f),
        Err(e) => {
            notes.push(format!("{name}: {e}"));
            None
        }
    }
}

/// Grid size each `h` needs, rejecting any that exceed [`MAX_POINTS`].
fn preflight(config: &ExperimentConfig, potential: &Potential, hs: &[f64]) -> Result<(), ConfigError> {
    let (a, b) = (config.domain.x_min, config.domain.x_max);
    let v_max = potential.max_on(a, b, 4097);
    for &h in hs {
        let spacing = max_spacing(h, v_max, config.grid_rule as f64);
        let needed = ((b - a) / spacing).ceil() as usize + 1;
        if needed > MAX_POINTS {
            return Err(ConfigError::Invalid(format!(
                "h = {h} needs about {needed} grid points, above the cap of {MAX_POINTS}"
            )));
        }
    }
    Ok(())
}

/// Runs every configured task; `workers` bounds the number of concurrently solved `h`.
pub fn run_experiment(config: &ExperimentConfig, workers: usize) -> Result<SweepReport, RunError> {
    config.validate()?;
    let potential = config.potential()?;
    let weight = SingularWeight::pure_power(config.kappa).map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let needs_rows = config.tasks.iter().any(|t| *t != Task::Conditions);
    let smallest = config.smallest_h();
    let plan = Plan {
        config,
        potential: potential.clone(),
        psi1: config.psi1.into(),
        psi2: config.psi2.into(),
        weight,
        tauberian_h: config
            .has(Task::Tauberian)
            .then(|| config.tauberian.h.or(smallest))
            .flatten(),
        truncation_h: config
            .has(Task::Truncation)
            .then(|| config.truncation.h.or(smallest))
            .flatten(),
    };

    let mut hs: Vec<f64> = if needs_rows {
        config.h_values.clone()
    } else {
        Vec::new()
    };
    let extra: Vec<f64> = [plan.tauberian_h, plan.truncation_h]
        .into_iter()
        .flatten()
        .filter(|h| !hs.contains(h))
        .collect();
    for h in extra {
        if !hs.contains(&h) {
            hs.push(h);
        }
    }
    preflight(config, &potential, &hs)?;

    let conditions_h = config.h_values.first().copied().unwrap_or(0.1);
    let conditions = check_conditions(&plan.problem(conditions_h)?, config.epsilon);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| ConfigError::Invalid(format!("cannot start {workers} workers: {e}")))?;
    let outcomes: Vec<Outcome> = pool.install(|| hs.par_iter().map(|&h| plan.run(h)).collect::<Result<Vec<_>, _>>())?;

    let mut notes = Vec::new();
    let mut rows = Vec::new();
    let mut smooth_leading = Vec::new();
    let mut tauberian = None;
    let mut truncation = None;
    for (h, o) in hs.iter().zip(outcomes) {
        if o.tauberian.is_some() {
            tauberian = o.tauberian;
        }
        if o.truncation.is_some() {
            truncation = o.truncation;
        }
        if needs_rows && config.h_values.contains(h) {
            rows.push(o.row);
            smooth_leading.extend(o.smooth);
        }
    }

    let mut fits = Fits::default();
    if config.has(Task::Magnitude) {
        let pairs: Vec<_> = rows.iter().map(|r| (r.h, r.i_exact)).collect();
        fits.magnitude_exponent = fit_or_note("magnitude_exponent", &pairs, &mut notes);
    }
    if config.has(Task::WeylRemainder) {
        let pairs: Vec<_> = rows.iter().map(|r| (r.h, r.abs_err)).collect();
        fits.remainder_exponent = fit_or_note("remainder_exponent", &pairs, &mut notes);
        let pairs: Vec<_> = rows.iter().map(|r| (r.h, r.rel_err)).collect();
        fits.relative_remainder_exponent = fit_or_note("relative_remainder_exponent", &pairs, &mut notes);
    }
    if let Some(t) = &tauberian {
        let pairs: Vec<_> = t.points.iter().map(|p| (p.t, p.error)).collect();
        fits.tauberian_t_exponent = fit_or_note("tauberian_T_exponent", &pairs, &mut notes);
    }
    if let Some(t) = &truncation {
        let pairs: Vec<_> = t.points.iter().map(|p| (p.gamma, p.error)).collect();
        fits.truncation_gamma_exponent = fit_or_note("truncation_gamma_exponent", &pairs, &mut notes);
    }

    Ok(SweepReport {
        version: REPORT_VERSION.to_string(),
        config: config.clone(),
        conditions,
        rows,
        fits,
        smooth_leading,
        tauberian,
        truncation,
        notes,
    })
}
