//! Tauberian mollification of the spectral projector by eigenvalue reweighting.
//!
//! With the time cutoff `χ̄ = plateau` and `χ̂(s) = ∫ χ̄(t) e^{-ist} dt`, the mollified
//! projector weights each eigenvalue by `w(λ) = Φ(-Tλ/h)`, where
//! `Φ(v) = ∫_{-∞}^v χ̂(s) ds / 2π = ½ + π⁻¹ ∫_0^1 χ̄(t) sin(vt)/t dt`.
//!
//! `χ̂` has negative side lobes (a compactly supported plateau cannot have a nonnegative
//! transform), so `Φ` overshoots 1 by a few percent near `v ≈ 5` before settling.

use std::sync::OnceLock;

use faer::Mat;

use crate::energy::{compute_i, EnergyQuadrature};
use crate::error::{Error, Result};
use crate::fit::{fit_exponent, Fit};
use crate::problem::SemiclassicalProblem;
use crate::profile::plateau;
use crate::quad::GaussLegendre;
use crate::spectral::{EigenSystem, ProjectorKernel};
use crate::weight::SingularWeight;

/// Table range and step for `Φ`; beyond `V_MAX` the weight is taken as saturated.
pub const V_MAX: f64 = 400.0;
pub const V_STEP: f64 = 1.0 / 32.0;

const PANELS: usize = 160;
const NODES: usize = 16;

#[derive(Debug, Clone)]
pub struct Mollifier {
    phi: Vec<f64>,
    transform: Vec<f64>,
}

impl Mollifier {
    fn build() -> Self {
        let rule = GaussLegendre::new(NODES);
        let width = 1.0 / PANELS as f64;
        let mut nodes = Vec::with_capacity(PANELS * NODES);
        for p in 0..PANELS {
            let lo = p as f64 * width;
            nodes.extend(rule.mapped(lo, lo + width).map(|(t, w)| (t, w * plateau(t))));
        }
        let count = (V_MAX / V_STEP).round() as usize + 1;
        let (phi, transform) = (0..count)
            .map(|k| {
                let v = k as f64 * V_STEP;
                let mut si = 0.0;
                let mut co = 0.0;
                for &(t, w) in &nodes {
                    let (s, c) = (v * t).sin_cos();
                    si += w * if v == 0.0 { 0.0 } else { s / t };
                    co += w * c;
                }
                (0.5 + si / std::f64::consts::PI, 2.0 * co)
            })
            .unzip();
        Self { phi, transform }
    }

    /// The shared canonical mollifier, tabulated on first use.
    pub fn canonical() -> &'static Mollifier {
        static M: OnceLock<Mollifier> = OnceLock::new();
        M.get_or_init(Self::build)
    }

    /// Time cutoff `χ̄(t)`.
    pub fn profile(&self, t: f64) -> f64 {
        plateau(t)
    }

    /// Tabulated `χ̂(s)`, `|s| ≤ V_MAX`; zero beyond.
    pub fn transform(&self, s: f64) -> f64 {
        let a = s.abs();
        if a > V_MAX {
            return 0.0;
        }
        let k = ((a / V_STEP).round() as usize).min(self.transform.len() - 1);
        self.transform[k]
    }

    pub fn transform_table(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.transform.iter().enumerate().map(|(k, &c)| (k as f64 * V_STEP, c))
    }

    /// `Φ(v)` by cubic Hermite interpolation of the table.
    pub fn phi(&self, v: f64) -> f64 {
        if v < 0.0 {
            return 1.0 - self.phi(-v);
        }
        if v >= V_MAX {
            return 1.0;
        }
        let u = v / V_STEP;
        let k = (u.floor() as usize).min(self.phi.len() - 2);
        let s = u - k as f64;
        let two_pi = 2.0 * std::f64::consts::PI;
        let (p0, p1) = (self.phi[k], self.phi[k + 1]);
        let (m0, m1) = (
            self.transform[k] / two_pi * V_STEP,
            self.transform[k + 1] / two_pi * V_STEP,
        );
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * p0 + (s3 - 2.0 * s2 + s) * m0 + (-2.0 * s3 + 3.0 * s2) * p1 + (s3 - s2) * m1
    }
}

/// Smoothed step `w(λ) = Φ(-Tλ/h)`.
pub fn tauberian_weight(m: &Mollifier, lambda: f64, h: f64, t: f64) -> f64 {
    m.phi(-t * lambda / h)
}

#[derive(Debug, Clone)]
pub struct MollifiedProjector {
    pub weights: Vec<f64>,
    pub t: f64,
    pub h: f64,
    pub kernel: ProjectorKernel,
}

pub fn mollified_projector(
    eigs: &EigenSystem,
    m: &Mollifier,
    h: f64,
    t: f64,
    period: Option<f64>,
) -> Result<MollifiedProjector> {
    mollified_projector_at(eigs, m, h, t, 0.0, period)
}

/// As [`mollified_projector`], with the smoothed step centred at `tau`.
pub fn mollified_projector_at(
    eigs: &EigenSystem,
    m: &Mollifier,
    h: f64,
    t: f64,
    tau: f64,
    period: Option<f64>,
) -> Result<MollifiedProjector> {
    if !(t >= 2.0 * h) {
        return Err(Error::TimeScale { t, min: 2.0 * h });
    }
    let weights: Vec<f64> = eigs
        .energies
        .iter()
        .map(|&l| tauberian_weight(m, l - tau, h, t))
        .collect();
    // modes at or above V_MAX h / T carry weight exactly 0
    let active = weights.iter().rposition(|&w| w != 0.0).map_or(0, |k| k + 1);
    let values: Mat<f64> = eigs.weighted_outer(0..active, |k| weights[k]);
    Ok(MollifiedProjector {
        weights,
        t,
        h,
        kernel: ProjectorKernel {
            values,
            nodes: eigs.nodes.clone(),
            measure_weight: eigs.measure_weight,
            tau,
            h,
            period,
        },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TauberianPoint {
    pub t: f64,
    pub i_tauberian: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TauberianSweep {
    pub points: Vec<TauberianPoint>,
    /// Log-log slope of the error in `T`, when at least four errors are positive.
    pub fit: Option<Fit>,
}

/// `|I(sharp) - I(mollified)|` for each `T`.
pub fn tauberian_energy_error(
    problem: &SemiclassicalProblem,
    eigs: &EigenSystem,
    weight: &SingularWeight,
    m: &Mollifier,
    t_list: &[f64],
    sharp_i: f64,
) -> Result<TauberianSweep> {
    let period = problem_kernel_period(problem);
    let mut points = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let mp = mollified_projector_at(eigs, m, problem.h, t, problem.tau, period)?;
        let q = EnergyQuadrature::new(&mp.kernel, weight, &problem.psi1, &problem.psi2);
        let i_tauberian = compute_i(&q)?;
        points.push(TauberianPoint {
            t,
            i_tauberian,
            error: (sharp_i - i_tauberian).abs(),
        });
    }
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.error > 0.0)
        .map(|p| (p.t, p.error))
        .collect();
    let fit = if usable.len() >= 4 {
        Some(fit_exponent(&usable)?)
    } else {
        None
    };
    Ok(TauberianSweep { points, fit })
}

fn problem_kernel_period(problem: &SemiclassicalProblem) -> Option<f64> {
    match problem.grid.boundary {
        crate::grid::Boundary::Periodic => Some(problem.grid.length()),
        crate::grid::Boundary::Dirichlet => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutoff::CutoffFunction;
    use crate::grid::Boundary;
    use crate::potential::Potential;
    use crate::quad::{adaptive, Tolerance};
    use crate::spectral::{eigendecompose, problem_kernel, solve, SymTridiagonal};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn weight_symmetry() {
        let m = Mollifier::canonical();
        assert_eq!(tauberian_weight(m, 0.0, 0.05, 0.5), 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let l = rng.random_range(-5.0..5.0);
            let h = rng.random_range(0.01..0.2);
            let t = rng.random_range(0.05..2.0);
            let s = tauberian_weight(m, l, h, t) + tauberian_weight(m, -l, h, t);
            assert!((s - 1.0).abs() <= 1e-15, "{s}");
        }
    }

    #[test]
    fn table_matches_adaptive_quadrature() {
        let m = Mollifier::canonical();
        let tol = Tolerance {
            abs: 1e-13,
            rel: 1e-11,
            max_intervals: 20_000,
        };
        for v in [0.3, 1.0, 4.9, 17.25, 63.0, 211.7] {
            let direct =
                0.5 + adaptive(|t| plateau(t) * (v * t).sin() / t, 1e-300, 1.0, tol).unwrap() / std::f64::consts::PI;
            assert!((m.phi(v) - direct).abs() < 1e-9, "v = {v}: {} vs {direct}", m.phi(v));
            let on_grid = (v / V_STEP).round() * V_STEP;
            let transform_grid = 2.0 * adaptive(|t| plateau(t) * (on_grid * t).cos(), 0.0, 1.0, tol).unwrap();
            assert!((m.transform(v) - transform_grid).abs() < 1e-10);
        }
    }

    #[test]
    fn transform_normalization_and_decay() {
        let m = Mollifier::canonical();
        // ∫ χ̂ ds / 2π = χ̄(0) = 1
        assert!((2.0 * (m.phi(V_MAX - V_STEP) - 0.5) - 1.0).abs() < 1e-6);
        // total mass 2 ∫ χ̄ equals χ̂(0)
        let mass = 2.0 * adaptive(plateau, 0.0, 1.0, Tolerance::default()).unwrap();
        assert_relative_eq!(m.transform(0.0), mass, max_relative = 1e-12);
        // stretched-exponential decay: envelope over windows of width 50 keeps falling
        let envelope: Vec<f64> = (0..8)
            .map(|w| {
                let lo = 50.0 * w as f64;
                m.transform_table()
                    .filter(|(s, _)| *s >= lo && *s < lo + 50.0)
                    .map(|(_, c)| c.abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        assert!(envelope.windows(2).all(|p| p[1] < 0.5 * p[0]), "{envelope:?}");
        assert!(envelope[7] < 1e-6 && envelope[7] > 0.0, "{envelope:?}");
    }

    #[test]
    fn weight_shape() {
        let m = Mollifier::canonical();
        // saturates exactly past the table
        assert_eq!(m.phi(V_MAX), 1.0);
        assert_eq!(m.phi(-V_MAX), 0.0);
        // the plateau's transform has negative lobes, so Φ overshoots and is not monotone
        let overshoot = (0..8000).map(|k| m.phi(k as f64 * 0.005)).fold(0.0, f64::max);
        assert!(overshoot > 1.07 && overshoot < 1.09, "{overshoot}");
        assert!((m.phi(10.0) - 1.0).abs() < 0.02);
        assert!((m.phi(40.0) - 1.0).abs() < 1e-4);
        assert!((m.phi(160.0) - 1.0).abs() < 1e-6);
        // the saturation jump at the table edge stays below the transform truncation level
        assert!((m.phi(V_MAX - 1e-9) - 1.0).abs() < 1e-7);
    }

    #[test]
    fn isolated_eigenvalues() {
        let m = Mollifier::canonical();
        let op = SymTridiagonal {
            diag: vec![-3.0, 0.0, 4.0],
            off: vec![0.0, 0.0],
            corner: 0.0,
        };
        let eigs = eigendecompose(&op, 1.0).unwrap();
        let mp = mollified_projector(&eigs, m, 0.01, 1.0, None).unwrap();
        // λ = -3 sits at v = 300, inside the table where Φ - 1 ~ 1e-8
        assert!((mp.weights[0] - 1.0).abs() < 1e-6);
        assert_eq!(mp.weights[1..], [0.5, 0.0]);
        assert!(matches!(
            mollified_projector(&eigs, m, 0.01, 0.019, None),
            Err(Error::TimeScale { .. })
        ));
    }

    fn well(h: f64) -> (SemiclassicalProblem, EigenSystem) {
        let psi = CutoffFunction::new(0.0, 0.5);
        let p = SemiclassicalProblem::resolved(
            Potential::parse("1 - x^2").unwrap(),
            h,
            (-2.5, 2.5),
            Boundary::Dirichlet,
            8.0,
            psi,
            psi,
        )
        .unwrap();
        let eigs = solve(&p).unwrap();
        (p, eigs)
    }

    #[test]
    fn gapped_spectrum_reproduces_sharp_projector() {
        let (p, mut eigs) = well(0.1);
        // open a gap of width 2 around the level by shifting the spectrum
        for e in eigs.energies.iter_mut() {
            *e += if *e > 0.0 { 1.0 } else { -1.0 };
        }
        let m = Mollifier::canonical();
        let sharp = problem_kernel(&p, &eigs);
        let mp = mollified_projector(&eigs, m, p.h, 100.0, None).unwrap();
        let mut diff: f64 = 0.0;
        for j in 0..sharp.dim() {
            for i in 0..sharp.dim() {
                diff = diff.max((sharp.values[(i, j)] - mp.kernel.values[(i, j)]).abs());
            }
        }
        assert!(diff <= 1e-6 * sharp.max_abs());
    }

    #[test]
    fn deviation_sits_near_the_level() {
        let (p, eigs) = well(0.05);
        let m = Mollifier::canonical();
        let t = 0.5;
        let mp = mollified_projector(&eigs, m, p.h, t, None).unwrap();
        let contributing: Vec<f64> = eigs
            .energies
            .iter()
            .zip(&mp.weights)
            .filter(|(&l, &w)| (w - if l <= 0.0 { 1.0 } else { 0.0 }).abs() > 1e-3)
            .map(|(&l, _)| l)
            .collect();
        assert!(!contributing.is_empty());
        let scale = p.h / t;
        assert!(contributing.iter().all(|l| l.abs() <= 60.0 * scale), "{contributing:?}");
        let kernel = mp.kernel;
        assert!(kernel.is_symmetric());
        // weights undershoot to about -0.08, so the diagonal is only bounded below by that fraction
        let undershoot = mp.weights.iter().cloned().fold(0.0, f64::min);
        assert!(undershoot > -0.09, "{undershoot}");
        let top = (0..kernel.dim()).map(|i| kernel.values[(i, i)]).fold(0.0, f64::max);
        assert!((0..kernel.dim()).all(|i| kernel.values[(i, i)] >= undershoot * top));
    }

    #[test]
    fn trace_tends_to_count() {
        let (p, eigs) = well(0.1);
        let m = Mollifier::canonical();
        let count = eigs.count_below(0.0) as f64;
        let far = mollified_projector(&eigs, m, p.h, 1e4, None).unwrap();
        assert_relative_eq!(far.kernel.trace(), count, max_relative = 1e-9);
    }
}
