//! The canonical plateau profile shared by cutoffs, the diagonal truncation and the
//! Tauberian time cutoff.
//!
//! `plateau(t)` is even, equal to 1 on `|t| <= 1/2`, zero on `|t| >= 1`, and on the
//! transition band it is the normalized running integral of the standard bump
//! `exp(1 - 1/(1 - u^2))`, which keeps it `C^inf`.

use std::sync::OnceLock;

use crate::quad::GaussLegendre;

/// Table resolution of the running integral on `[0, 1]`.
const CELLS: usize = 8192;

/// The standard bump `exp(1 - 1/(1 - u^2))` on `(-1, 1)`, zero outside.
pub fn bump(u: f64) -> f64 {
    let q = 1.0 - u * u;
    if q <= 0.0 {
        0.0
    } else {
        (1.0 - 1.0 / q).exp()
    }
}

fn table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let rule = GaussLegendre::new(16);
        let step = 1.0 / CELLS as f64;
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(CELLS + 1);
        out.push(0.0);
        for k in 0..CELLS {
            let a = k as f64 * step;
            acc += rule.integrate(a, a + step, |v| bump(2.0 * v - 1.0));
            out.push(acc);
        }
        out
    })
}

/// Running integral of the bump rescaled to `[0, 1]`: `int_0^s bump(2v - 1) dv`,
/// by cubic Hermite interpolation of an exact table (the derivative is the bump itself).
fn running(s: f64) -> f64 {
    let t = table();
    if s <= 0.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return t[CELLS];
    }
    let step = 1.0 / CELLS as f64;
    let k = ((s / step) as usize).min(CELLS - 1);
    let a = k as f64 * step;
    let u = (s - a) / step;
    let (d0, d1) = (bump(2.0 * a - 1.0) * step, bump(2.0 * (a + step) - 1.0) * step);
    let (h00, h10, h01, h11) = (
        (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u),
        u * (1.0 - u) * (1.0 - u),
        u * u * (3.0 - 2.0 * u),
        u * u * (u - 1.0),
    );
    h00 * t[k] + h10 * d0 + h01 * t[k + 1] + h11 * d1
}

fn total() -> f64 {
    table()[CELLS]
}

/// Smooth step falling from 1 at `s = 0` to 0 at `s = 1`.
pub fn falling_step(s: f64) -> f64 {
    if s <= 0.0 {
        1.0
    } else if s >= 1.0 {
        0.0
    } else if s <= 0.5 {
        1.0 - running(s) / total()
    } else {
        // symmetric bump: the complement equals the running integral from the far end
        running(1.0 - s) / total()
    }
}

/// Canonical plateau: 1 on `[-1/2, 1/2]`, supported in `[-1, 1]`.
pub fn plateau(t: f64) -> f64 {
    let a = t.abs();
    if a <= 0.5 {
        1.0
    } else if a >= 1.0 {
        0.0
    } else {
        falling_step(2.0 * a - 1.0)
    }
}
