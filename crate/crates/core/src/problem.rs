use crate::cutoff::CutoffFunction;
use crate::error::{Error, Result};
use crate::grid::{min_points, Boundary, Grid};
use crate::potential::Potential;

/// Default resolution: grid points per semiclassical wavelength unit.
pub const DEFAULT_POINTS_PER_WAVELENGTH: f64 = 8.0;

/// Cutoff supports must keep this many spacings away from a Dirichlet wall.
pub const BOUNDARY_CLEARANCE: f64 = 4.0;

#[derive(Debug, Clone)]
pub struct SemiclassicalProblem {
    pub potential: Potential,
    pub h: f64,
    pub grid: Grid,
    pub psi1: CutoffFunction,
    pub psi2: CutoffFunction,
    pub tau: f64,
}

/// Largest spacing that resolves `h` for a potential bounded above by `v_max`.
pub fn max_spacing(h: f64, v_max: f64, points_per_wavelength: f64) -> f64 {
    h / (points_per_wavelength * (v_max.max(0.0) + 1.0).sqrt())
}

fn sampled_max(potential: &Potential, x_min: f64, x_max: f64) -> f64 {
    potential.max_on(x_min, x_max, 4097)
}

impl SemiclassicalProblem {
    pub fn new(potential: Potential, h: f64, grid: Grid, psi1: CutoffFunction, psi2: CutoffFunction) -> Result<Self> {
        let problem = Self {
            potential,
            h,
            grid,
            psi1,
            psi2,
            tau: 0.0,
        };
        problem.validate()?;
        Ok(problem)
    }

    /// Builds the coarsest grid satisfying the resolution rule with the given density.
    pub fn resolved(
        potential: Potential,
        h: f64,
        (x_min, x_max): (f64, f64),
        boundary: Boundary,
        points_per_wavelength: f64,
        psi1: CutoffFunction,
        psi2: CutoffFunction,
    ) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::Problem(format!("h must be positive, got {h}")));
        }
        let v_max = sampled_max(&potential, x_min, x_max);
        let spacing = max_spacing(h, v_max, points_per_wavelength);
        let grid = Grid::with_max_spacing(x_min, x_max, spacing, boundary)?;
        Self::new(potential, h, grid, psi1, psi2)
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0) {
            return Err(Error::Problem(format!("h must be positive, got {}", self.h)));
        }
        let g = &self.grid;
        let v_max = sampled_max(&self.potential, g.x_min, g.x_max);
        let allowed = max_spacing(self.h, v_max, DEFAULT_POINTS_PER_WAVELENGTH);
        if g.spacing > allowed * (1.0 + 1e-12) {
            return Err(Error::Resolution {
                h: self.h,
                spacing: g.spacing,
                max_spacing: allowed,
                min_points: min_points(g.length(), allowed),
            });
        }
        let clearance = match g.boundary {
            Boundary::Dirichlet => BOUNDARY_CLEARANCE * g.spacing,
            Boundary::Periodic => 0.0,
        };
        for (name, psi) in [("psi1", &self.psi1), ("psi2", &self.psi2)] {
            let (lo, hi) = psi.support();
            if lo < g.x_min + clearance || hi > g.x_max - clearance {
                return Err(Error::Problem(format!(
                    "{name} support [{lo}, {hi}] must stay {clearance:.3e} inside [{}, {}]",
                    g.x_min, g.x_max
                )));
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> Vec<f64> {
        self.grid.nodes()
    }
}
