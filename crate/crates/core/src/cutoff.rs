use serde::{Deserialize, Serialize};

use crate::profile::plateau;

/// A smooth localizing cutoff: 1 on `[center - width/2, center + width/2]`,
/// supported in `[center - width, center + width]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffFunction {
    pub center: f64,
    pub width: f64,
}

impl CutoffFunction {
    pub fn new(center: f64, width: f64) -> Self {
        assert!(width > 0.0, "cutoff width must be positive");
        Self { center, width }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.width, self.center + self.width)
    }
}

/// Anything that can play the role of a cutoff in a sandwiched projector.
pub trait Window: Sync {
    fn at(&self, x: f64) -> f64;
}

impl Window for CutoffFunction {
    fn at(&self, x: f64) -> f64 {
        plateau((x - self.center) / self.width)
    }
}

/// The constant cutoff `1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Unit;

impl Window for Unit {
    fn at(&self, _: f64) -> f64 {
        1.0
    }
}

impl<W: Window + ?Sized> Window for &W {
    fn at(&self, x: f64) -> f64 {
        (**self).at(x)
    }
}
