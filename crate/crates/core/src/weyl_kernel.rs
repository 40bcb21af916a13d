//! Frozen-coefficient Weyl kernel `(2πh)^{-d} ∫_{|ξ|≤r} e^{i⟨z,ξ⟩/h} dξ`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::{adaptive, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrozenSymbol {
    pub dimension: usize,
    pub momentum_radius: f64,
    pub h: f64,
}

impl FrozenSymbol {
    pub fn new(dimension: usize, momentum_radius: f64, h: f64) -> Self {
        Self {
            dimension,
            momentum_radius,
            h,
        }
    }

    /// Symbol frozen at a point where the potential (plus energy level) equals `v`.
    pub fn from_potential(v: f64, h: f64) -> Self {
        Self::new(1, v.max(0.0).sqrt(), h)
    }
}

/// `sin(r z / h) / (π z)`, continued by `r / (π h)` at `z = 0`.
pub fn weyl_kernel_1d(symbol: &FrozenSymbol, z: f64) -> f64 {
    let r = symbol.momentum_radius;
    let t = r * z / symbol.h;
    if t.abs() < 1e-6 {
        // sin t / t = 1 - t^2/6 + O(t^4)
        r / (PI * symbol.h) * (1.0 - t * t / 6.0)
    } else {
        t.sin() / (PI * z)
    }
}

fn ball_volume(d: usize, r: f64) -> f64 {
    match d {
        1 => 2.0 * r,
        2 => PI * r * r,
        3 => 4.0 / 3.0 * PI * r.powi(3),
        _ => unreachable!(),
    }
}

fn tolerance(scale: f64) -> Tolerance {
    Tolerance {
        abs: 1e-13 * scale.max(f64::MIN_POSITIVE),
        rel: 1e-11,
        max_intervals: 20_000,
    }
}

/// Radial-quadrature evaluation in dimension 1, 2 or 3.
pub fn weyl_kernel_numeric(symbol: &FrozenSymbol, z: &[f64]) -> Result<f64> {
    let d = symbol.dimension;
    if !(1..=3).contains(&d) || z.len() != d {
        return Err(Error::Unsupported(format!(
            "numeric Weyl kernel needs dimension 1..=3 and a matching point, got d = {d}, |z| = {}",
            z.len()
        )));
    }
    let r = symbol.momentum_radius;
    let h = symbol.h;
    let prefactor = (2.0 * PI * h).powi(-(d as i32));
    if r == 0.0 {
        return Ok(0.0);
    }
    let s = z.iter().map(|c| c * c).sum::<f64>().sqrt() / h;
    if s == 0.0 {
        return Ok(prefactor * ball_volume(d, r));
    }
    let scale = ball_volume(d, r);
    let integral = match d {
        // 2 ∫_0^r cos(s ρ) dρ
        1 => 2.0 * adaptive(|rho| (s * rho).cos(), 0.0, r, tolerance(scale))?,
        // ∫_0^r ρ ∫_0^{2π} cos(s ρ cos θ) dθ dρ
        2 => {
            let inner = |rho: f64| -> Result<f64> {
                // symmetric in θ ↦ π - θ and θ ↦ -θ
                Ok(4.0 * adaptive(|th| (s * rho * th.cos()).cos(), 0.0, 0.5 * PI, tolerance(1.0))?)
            };
            let mut failure = None;
            let v = adaptive(
                |rho| match inner(rho) {
                    Ok(a) => rho * a,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                },
                0.0,
                r,
                tolerance(scale),
            )?;
            if let Some(e) = failure {
                return Err(e);
            }
            v
        }
        // ∫_0^r 4π ρ² sin(sρ)/(sρ) dρ
        _ => adaptive(
            |rho| {
                let t = s * rho;
                let sinc = if t.abs() < 1e-8 { 1.0 } else { t.sin() / t };
                4.0 * PI * rho * rho * sinc
            },
            0.0,
            r,
            tolerance(scale),
        )?,
    };
    Ok(prefactor * integral)
}
