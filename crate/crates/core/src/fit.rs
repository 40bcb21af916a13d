//! Least-squares power-law fits on log-log axes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_FIT_POINTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub points: usize,
}

/// Ordinary least squares of `log value` against `log h`.
pub fn fit_exponent(pairs: &[(f64, f64)]) -> Result<Fit> {
    if pairs.len() < MIN_FIT_POINTS {
        return Err(Error::TooFewPoints {
            needed: MIN_FIT_POINTS,
            got: pairs.len(),
        });
    }
    for &(h, value) in pairs {
        if !(value > 0.0) || !(h > 0.0) {
            return Err(Error::NonPositive { h, value });
        }
    }
    let n = pairs.len() as f64;
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Unsupported("all abscissae coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = (ssr / (n - 2.0) / sxx).sqrt();
    Ok(Fit {
        slope,
        intercept,
        stderr,
        points: pairs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const HS: [f64; 5] = [0.2, 0.14, 0.1, 0.07, 0.05];

    #[test]
    fn exact_power() {
        let pairs: Vec<_> = HS.iter().map(|&h| (h, 3.0 * h * h)).collect();
        let f = fit_exponent(&pairs).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12);
        assert!(f.stderr < 1e-10);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
        assert_eq!(f.points, 5);
    }

    #[test]
    fn constant() {
        let pairs: Vec<_> = HS.iter().map(|&h| (h, 7.0)).collect();
        assert!(fit_exponent(&pairs).unwrap().slope.abs() < 1e-12);
    }

    #[test]
    fn noisy_synthetic() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let pairs: Vec<_> = HS
            .iter()
            .map(|&h| (h, h.powf(-1.5) * (1.0 + 0.2 * h * rng.random_range(-1.0..1.0))))
            .collect();
        let f = fit_exponent(&pairs).unwrap();
        assert!((f.slope + 1.5).abs() < 0.1, "{f:?}");
    }

    #[test]
    fn rejections() {
        let err = fit_exponent(&[(0.2, 1.0), (0.1, 2.0), (0.05, 3.0)]).unwrap_err();
        assert!(matches!(err, Error::TooFewPoints { needed: 4, got: 3 }));
        let err = fit_exponent(&[(0.2, 1.0), (0.1, 2.0), (0.07, 0.0), (0.05, 3.0)]).unwrap_err();
        match err {
            Error::NonPositive { h, .. } => assert_eq!(h, 0.07),
            other => panic!("{other}"),
        }
    }
}
