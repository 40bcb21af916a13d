//! Numerical laboratory for the singular Dirac-energy functional
//! `I = ∬ ω(x, y) |e(x, y, 0)|² ψ₂(x) ψ₁(y) dx dy` of one-dimensional semiclassical
//! Schrödinger operators `-h² ∂² - V`, and for its Weyl-type leading term.

pub mod catalog;
pub mod conditions;
pub mod cutoff;
pub mod energy;
pub mod error;
pub mod expr;
pub mod fit;
pub mod grid;
pub mod potential;
pub mod predictor;
pub mod problem;
pub mod profile;
pub mod quad;
pub mod spectral;
pub mod tauberian;
pub mod weight;
pub mod weyl_kernel;

pub use conditions::{check_conditions, scaling_field, ConditionReport, ScalingField, ScalingVariant};
pub use cutoff::{CutoffFunction, Unit, Window};
pub use energy::{compute_i, compute_i_smooth, compute_i_truncated, DiagonalRule, EnergyQuadrature};
pub use error::{Error, Result};
pub use expr::{ParseError, PotentialExpression};
pub use fit::{fit_exponent, Fit};
pub use grid::{Boundary, Grid};
pub use potential::Potential;
pub use predictor::{smooth_leading_coefficient, weyl_density, weyl_leading, WeylPrediction};
pub use problem::SemiclassicalProblem;
pub use spectral::{
    assemble_operator, eigendecompose, problem_kernel, projector_kernel, sandwich_trace_norm, sandwich_trace_product,
    solve, window_trace_norm, EigenSystem, ProjectorKernel, SymTridiagonal,
};
pub use tauberian::{
    mollified_projector, mollified_projector_at, tauberian_energy_error, tauberian_weight, MollifiedProjector,
    Mollifier,
};
pub use weight::{fourier_hat, numeric_fourier_hat, FourierWeight, SingularWeight};
pub use weyl_kernel::{weyl_kernel_1d, weyl_kernel_numeric, FrozenSymbol};
