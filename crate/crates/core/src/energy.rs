//! Quadrature of `I = ∬ ω(x, y) e(x, y) ψ₂(x) e(y, x) ψ₁(y) dx dy` on the kernel grid.
//!
//! Off-diagonal pairs use the product trapezoid weight `Δx²`. On the diagonal the
//! kernel is frozen and `|z|^{-κ}` is integrated exactly across the cell strip
//! `|z| ≤ Δx/2`, giving the node weight `Δx · 2 (Δx/2)^{1-κ} / (1-κ)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cutoff::Window;
use crate::error::{Error, Result};
use crate::profile::plateau;
use crate::spectral::ProjectorKernel;
use crate::weight::SingularWeight;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagonalRule {
    #[default]
    AnalyticCell,
    /// Drops diagonal nodes entirely; only for error-budget experiments.
    Excise,
}

pub struct EnergyQuadrature<'a> {
    pub kernel: &'a ProjectorKernel,
    pub weight: &'a SingularWeight,
    pub psi1: &'a dyn Window,
    pub psi2: &'a dyn Window,
    pub diagonal_rule: DiagonalRule,
}

impl<'a> EnergyQuadrature<'a> {
    pub fn new(
        kernel: &'a ProjectorKernel,
        weight: &'a SingularWeight,
        psi1: &'a dyn Window,
        psi2: &'a dyn Window,
    ) -> Self {
        Self {
            kernel,
            weight,
            psi1,
            psi2,
            diagonal_rule: DiagonalRule::default(),
        }
    }

    pub fn with_rule(mut self, rule: DiagonalRule) -> Self {
        self.diagonal_rule = rule;
        self
    }
}

/// `Σ_i ψ₂(x_i) Σ_j ψ₁(x_j) K_ij² w(i, j)`, restricted to the cutoff supports.
///
/// Rows are reduced in parallel and summed in index order, so results do not
/// depend on the thread count.
fn sandwich_sum(
    kernel: &ProjectorKernel,
    psi1: &dyn Window,
    psi2: &dyn Window,
    w: impl Fn(usize, usize) -> f64 + Sync,
) -> f64 {
    let nodes = &kernel.nodes;
    let rows: Vec<(usize, f64)> = (0..nodes.len())
        .map(|i| (i, psi2.at(nodes[i])))
        .filter(|r| r.1 != 0.0)
        .collect();
    let cols: Vec<(usize, f64)> = (0..nodes.len())
        .map(|j| (j, psi1.at(nodes[j])))
        .filter(|c| c.1 != 0.0)
        .collect();
    let per_row: Vec<f64> = rows
        .par_iter()
        .map(|&(i, p2)| {
            let mut acc = 0.0;
            for &(j, p1) in &cols {
                let k = kernel.values[(i, j)];
                acc += p1 * k * k * w(i, j);
            }
            p2 * acc
        })
        .collect();
    per_row.iter().sum()
}

fn check_resolution(kernel: &ProjectorKernel) -> Result<()> {
    let allowed = kernel.h / crate::problem::DEFAULT_POINTS_PER_WAVELENGTH;
    if kernel.measure_weight > allowed * (1.0 + 1e-12) {
        let length = kernel.measure_weight * kernel.dim() as f64;
        return Err(Error::Resolution {
            h: kernel.h,
            spacing: kernel.measure_weight,
            max_spacing: allowed,
            min_points: crate::grid::min_points(length, allowed),
        });
    }
    Ok(())
}

fn singular_sum(q: &EnergyQuadrature<'_>, gamma: Option<f64>) -> Result<f64> {
    let kappa = q.weight.kappa;
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::Kappa { kappa, dimension: 1 });
    }
    check_resolution(q.kernel)?;
    let dx = q.kernel.measure_weight;
    let cell = match q.diagonal_rule {
        DiagonalRule::AnalyticCell => dx * 2.0 * (0.5 * dx).powf(1.0 - kappa) / (1.0 - kappa),
        DiagonalRule::Excise => 0.0,
    };
    let kernel = q.kernel;
    let weight = q.weight;
    Ok(sandwich_sum(kernel, q.psi1, q.psi2, |i, j| {
        if i == j {
            return cell * weight.amplitude(kernel.nodes[i]);
        }
        let z = kernel.separation(i, j);
        let mid = kernel.nodes[j] + 0.5 * z;
        let mut w = dx * dx * weight.raw(mid, z);
        if let Some(g) = gamma {
            w *= plateau(z / g);
        }
        w
    }))
}

/// The Dirac energy `I` with the configured diagonal rule.
pub fn compute_i(q: &EnergyQuadrature<'_>) -> Result<f64> {
    singular_sum(q, None)
}

/// `I` with `Ω` replaced by `Ω · β̄(z/γ)`, keeping only pairs closer than `γ`.
pub fn compute_i_truncated(q: &EnergyQuadrature<'_>, gamma: f64) -> Result<f64> {
    let min = 2.0 * q.kernel.measure_weight;
    if !(gamma >= min) {
        return Err(Error::Truncation { gamma, min });
    }
    singular_sum(q, Some(gamma))
}

/// Plain product-trapezoid quadrature with a bounded weight `ω(x, y)`.
pub fn compute_i_smooth(
    kernel: &ProjectorKernel,
    omega: impl Fn(f64, f64) -> f64 + Sync,
    psi1: &dyn Window,
    psi2: &dyn Window,
) -> f64 {
    let dx = kernel.measure_weight;
    sandwich_sum(kernel, psi1, psi2, |i, j| {
        dx * dx * omega(kernel.nodes[i], kernel.nodes[j])
    })
}
