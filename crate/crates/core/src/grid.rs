use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest grid accepted anywhere.
pub const MIN_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Dirichlet,
    Periodic,
}

/// Uniform grid on `[x_min, x_max]`.
///
/// `n_points` counts both endpoints. A Dirichlet grid carries its unknowns on the
/// `n_points - 2` interior points; a periodic grid identifies `x_max` with `x_min`
/// and keeps the first `n_points - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
    pub spacing: f64,
    pub boundary: Boundary,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize, boundary: Boundary) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::Grid(format!(
                "need finite x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n_points < MIN_POINTS {
            return Err(Error::Grid(format!(
                "n_points = {n_points} is below the minimum of {MIN_POINTS}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
            spacing: (x_max - x_min) / (n_points - 1) as f64,
            boundary,
        })
    }

    /// Coarsest grid whose spacing does not exceed `max_spacing`.
    pub fn with_max_spacing(x_min: f64, x_max: f64, max_spacing: f64, boundary: Boundary) -> Result<Self> {
        Self::new(x_min, x_max, min_points(x_max - x_min, max_spacing), boundary)
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn point(&self, i: usize) -> f64 {
        self.x_min + self.spacing * i as f64
    }

    /// Number of unknowns the discrete operator acts on.
    pub fn dim(&self) -> usize {
        match self.boundary {
            Boundary::Dirichlet => self.n_points - 2,
            Boundary::Periodic => self.n_points - 1,
        }
    }

    /// Coordinates of the unknowns.
    pub fn nodes(&self) -> Vec<f64> {
        let offset = match self.boundary {
            Boundary::Dirichlet => 1,
            Boundary::Periodic => 0,
        };
        (0..self.dim()).map(|i| self.point(i + offset)).collect()
    }

    /// Signed separation `x - y`, taken as the shortest image on periodic grids.
    pub fn separation(&self, x: f64, y: f64) -> f64 {
        let d = x - y;
        match self.boundary {
            Boundary::Dirichlet => d,
            Boundary::Periodic => {
                let l = self.length();
                d - l * (d / l).round()
            }
        }
    }
}

pub(crate) fn min_points(length: f64, max_spacing: f64) -> usize {
    // guard against ceil rounding a representable ratio upwards
    let intervals = (length / max_spacing * (1.0 - 1e-12)).ceil() as usize;
    (intervals + 1).max(MIN_POINTS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirichlet_keeps_interior() {
        let g = Grid::new(0.0, 1.0, 17, Boundary::Dirichlet).unwrap();
        assert_eq!(g.spacing, 1.0 / 16.0);
        let nodes = g.nodes();
        assert_eq!(nodes.len(), 15);
        assert_eq!(nodes[0], 1.0 / 16.0);
        assert!(nodes.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn periodic_drops_last_point() {
        let g = Grid::new(-1.0, 1.0, 33, Boundary::Periodic).unwrap();
        let nodes = g.nodes();
        assert_eq!(nodes.len(), 32);
        assert_eq!(nodes[0], -1.0);
        assert!((g.separation(0.95, -0.95) + 0.1).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::new(0.0, 1.0, 15, Boundary::Periodic).is_err());
        assert!(Grid::new(1.0, 1.0, 32, Boundary::Periodic).is_err());
    }

    #[test]
    fn max_spacing_rule() {
        let g = Grid::with_max_spacing(0.0, 1.0, 0.1, Boundary::Dirichlet).unwrap();
        assert_eq!(g.n_points, 16);
        let g = Grid::with_max_spacing(0.0, 10.0, 0.1, Boundary::Dirichlet).unwrap();
        assert_eq!(g.n_points, 101);
        assert!(g.spacing <= 0.1);
    }
}
