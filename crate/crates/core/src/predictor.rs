//! Weyl-type predictions for the Dirac energy.
//!
//! In one dimension with `r(x) = √max(V(x) + τ, 0)` the density is
//! `G(x) = ½ · c(x) · ∬_{|ξ|,|η|<r} |ξ - η|^{κ-1} dξ dη = ½ · c(x) · 2^{κ+2} r^{κ+1} / (κ(κ+1))`,
//! where `c(x)` is the transform coefficient from [`crate::weight::fourier_hat`].
//!
//! The ½ is not cosmetic. With the transform normalized as in `weight`, the
//! frozen-coefficient evaluation `(2πh)^{-2} ∫ Ω(x,z) |∫_{|ξ|<r} e^{izξ/h} dξ|² dz`
//! equals half of `c · shell integral`; the tests check this against direct quadrature,
//! and full-pipeline runs agree with the halved density.

use serde::{Deserialize, Serialize};

use crate::cutoff::Window;
use crate::error::Result;
use crate::potential::Potential;
use crate::problem::SemiclassicalProblem;
use crate::weight::{unit_coefficient, SingularWeight};

const DENSITY_FACTOR: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylPrediction {
    pub g_values: Vec<f64>,
    pub leading_coefficient: f64,
    pub power: f64,
    pub h: Option<f64>,
    pub predicted_i: Option<f64>,
}

/// `∬_{[-r,r]²} |ξ - η|^{κ-1} dξ dη`
pub fn shell_integral(r: f64, kappa: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    2f64.powf(kappa + 2.0) * r.powf(kappa + 1.0) / (kappa * (kappa + 1.0))
}

fn density_with(unit: f64, weight: &SingularWeight, v: f64, x: f64) -> f64 {
    let r = v.max(0.0).sqrt();
    if r == 0.0 {
        return 0.0;
    }
    DENSITY_FACTOR * unit * weight.amplitude(x) * shell_integral(r, weight.kappa)
}

pub fn weyl_density(potential: &Potential, x: f64, weight: &SingularWeight, tau: f64) -> Result<f64> {
    let unit = unit_coefficient(weight)?;
    Ok(density_with(unit, weight, potential.value(x) + tau, x))
}

pub fn weyl_leading(problem: &SemiclassicalProblem, weight: &SingularWeight) -> Result<WeylPrediction> {
    let unit = unit_coefficient(weight)?;
    let nodes = problem.nodes();
    let g_values: Vec<f64> = nodes
        .iter()
        .map(|&x| density_with(unit, weight, problem.potential.value(x) + problem.tau, x))
        .collect();
    let dx = problem.grid.spacing;
    let leading_coefficient = nodes
        .iter()
        .zip(&g_values)
        .map(|(&x, g)| g * problem.psi1.at(x) * problem.psi2.at(x))
        .sum::<f64>()
        * dx;
    let power = -1.0 - weight.kappa;
    Ok(WeylPrediction {
        g_values,
        leading_coefficient,
        power,
        h: Some(problem.h),
        predicted_i: Some(leading_coefficient * problem.h.powf(power)),
    })
}

/// `(2π)^{-1} ∫ 2√max(V + τ, 0) ω(x, x) ψ₁ ψ₂ dx` on the given nodes.
pub fn smooth_leading_on(
    potential: &Potential,
    tau: f64,
    nodes: &[f64],
    dx: f64,
    omega_diag: impl Fn(f64) -> f64,
    psi1: &dyn Window,
    psi2: &dyn Window,
) -> f64 {
    nodes
        .iter()
        .map(|&x| {
            let r = (potential.value(x) + tau).max(0.0).sqrt();
            r * omega_diag(x) * psi1.at(x) * psi2.at(x)
        })
        .sum::<f64>()
        * dx
        / std::f64::consts::PI
}

pub fn smooth_leading_coefficient(problem: &SemiclassicalProblem, smooth_omega: impl Fn(f64, f64) -> f64) -> f64 {
    smooth_leading_on(
        &problem.potential,
        problem.tau,
        &problem.nodes(),
        problem.grid.spacing,
        |x| smooth_omega(x, x),
        &problem.psi1,
        &problem.psi2,
    )
}
