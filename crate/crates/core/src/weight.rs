//! Homogeneous singular weights `Ω(x, z) = amplitude(x) · angular(z/|z|) · |z|^{-κ}`
//! and their Fourier transforms in `z`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::quad::{adaptive_endpoint_singular, oscillatory_tail, Tolerance};

type Map = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Profile {
    PurePower,
    /// Angular factor evaluated at the direction `±1`; must be even.
    Custom(Map),
}

#[derive(Clone)]
pub struct SingularWeight {
    pub kappa: f64,
    amplitude: Map,
    pub profile: Profile,
}

impl fmt::Debug for SingularWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let profile = match self.profile {
            Profile::PurePower => "pure_power",
            Profile::Custom(_) => "custom",
        };
        f.debug_struct("SingularWeight")
            .field("kappa", &self.kappa)
            .field("profile", &profile)
            .finish_non_exhaustive()
    }
}

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa > 0.0 && kappa < 1.0 {
        Ok(())
    } else {
        Err(Error::Kappa { kappa, dimension: 1 })
    }
}

impl SingularWeight {
    /// `|z|^{-κ}` with unit amplitude.
    pub fn pure_power(kappa: f64) -> Result<Self> {
        check_kappa(kappa)?;
        Ok(Self {
            kappa,
            amplitude: Arc::new(|_| 1.0),
            profile: Profile::PurePower,
        })
    }

    pub fn custom(kappa: f64, angular: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        check_kappa(kappa)?;
        let (plus, minus) = (angular(1.0), angular(-1.0));
        if (plus - minus).abs() > 1e-12 * plus.abs().max(minus.abs()) {
            return Err(Error::Unsupported(format!(
                "angular factor must be even (got {plus} at +1, {minus} at -1)"
            )));
        }
        Ok(Self {
            kappa,
            amplitude: Arc::new(|_| 1.0),
            profile: Profile::Custom(Arc::new(angular)),
        })
    }

    pub fn with_amplitude(mut self, amplitude: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.amplitude = Arc::new(amplitude);
        self
    }

    pub fn scaled(self, c: f64) -> Self {
        let a = self.amplitude.clone();
        self.with_amplitude(move |x| c * a(x))
    }

    pub fn amplitude(&self, x: f64) -> f64 {
        (self.amplitude)(x)
    }

    fn angular(&self, direction: f64) -> f64 {
        match &self.profile {
            Profile::PurePower => 1.0,
            Profile::Custom(f) => f(direction),
        }
    }

    /// Evaluation without the diagonal check; `z = 0` yields `inf`.
    pub(crate) fn raw(&self, x: f64, z: f64) -> f64 {
        let direction = if z < 0.0 { -1.0 } else { 1.0 };
        self.amplitude(x) * self.angular(direction) * z.abs().powf(-self.kappa)
    }

    /// `Ω(x, z)`; rejected on the diagonal.
    pub fn evaluate(&self, x: f64, z: f64) -> Result<f64> {
        if z == 0.0 {
            return Err(Error::SingularPoint);
        }
        Ok(self.raw(x, z))
    }

    /// Even part of the angular factor, `(angular(1) + angular(-1)) / 2`.
    pub(crate) fn angular_mean(&self) -> f64 {
        0.5 * (self.angular(1.0) + self.angular(-1.0))
    }
}

pub fn evaluate_weight(w: &SingularWeight, x: f64, z: f64) -> Result<f64> {
    w.evaluate(x, z)
}

/// `Ω̂(x, ζ) = coefficient · |ζ|^{κ-1}`, normalized as `2 (2π)^{-2} ∫ Ω(x, z) e^{i z ζ} dz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierWeight {
    pub kappa: f64,
    pub coefficient: f64,
}

impl FourierWeight {
    pub fn evaluate(&self, zeta: f64) -> f64 {
        self.coefficient * zeta.abs().powf(self.kappa - 1.0)
    }

    pub fn degree(&self) -> f64 {
        self.kappa - 1.0
    }
}

const NORMALIZATION: f64 = 2.0 / (4.0 * PI * PI);

/// `∫ |z|^{-κ} e^{i z ζ} dz = 2 Γ(1-κ) sin(πκ/2) |ζ|^{κ-1}`.
fn power_transform_constant(kappa: f64) -> f64 {
    2.0 * gamma(1.0 - kappa) * (0.5 * PI * kappa).sin()
}

pub fn fourier_hat(w: &SingularWeight, x: f64) -> Result<FourierWeight> {
    Ok(FourierWeight {
        kappa: w.kappa,
        coefficient: unit_coefficient(w)? * w.amplitude(x),
    })
}

/// Transform coefficient of the weight with its amplitude replaced by 1.
pub(crate) fn unit_coefficient(w: &SingularWeight) -> Result<f64> {
    check_kappa(w.kappa)?;
    match w.profile {
        Profile::PurePower => Ok(NORMALIZATION * power_transform_constant(w.kappa)),
        Profile::Custom(_) => {
            let unit = w.clone().with_amplitude(|_| 1.0);
            Ok(numeric_fourier_hat(&unit, 0.0, &[0.5, 1.0, 2.0])?.coefficient)
        }
    }
}

/// `∫_0^∞ z^{-κ} cos(ζ z) dz` by quadrature up to the first zero of the cosine
/// and extrapolated half-period panels beyond it.
fn half_line_transform(kappa: f64, zeta: f64) -> Result<f64> {
    let tol = Tolerance {
        abs: 1e-14,
        rel: 1e-12,
        max_intervals: 4000,
    };
    let first_zero = 0.5 * PI / zeta;
    let head = adaptive_endpoint_singular(|z| z.powf(-kappa) * (zeta * z).cos(), 0.0, first_zero, kappa, tol)?;
    let tail = oscillatory_tail(|z| z.powf(-kappa) * (zeta * z).cos(), first_zero, PI / zeta, 48, tol)?;
    let v = head + tail;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::TailDivergence { zeta })
    }
}

/// Numerical transform sampled at `zeta_samples`; the homogeneous coefficient is the
/// mean over samples, and samples that disagree with it flag a failed extrapolation.
pub fn numeric_fourier_hat(w: &SingularWeight, x: f64, zeta_samples: &[f64]) -> Result<FourierWeight> {
    check_kappa(w.kappa)?;
    if zeta_samples.is_empty() || zeta_samples.iter().any(|z| !(z.abs() > 0.0)) {
        return Err(Error::Unsupported("zeta samples must be nonzero".into()));
    }
    let scale = NORMALIZATION * w.amplitude(x) * 2.0 * w.angular_mean();
    let mut coefficients = Vec::with_capacity(zeta_samples.len());
    for &zeta in zeta_samples {
        let a = zeta.abs();
        let v = scale * half_line_transform(w.kappa, a)?;
        coefficients.push((zeta, v / a.powf(w.kappa - 1.0)));
    }
    let mean = coefficients.iter().map(|c| c.1).sum::<f64>() / coefficients.len() as f64;
    for &(zeta, c) in &coefficients {
        if (c - mean).abs() > 1e-6 * mean.abs().max(1e-300) {
            return Err(Error::TailDivergence { zeta });
        }
    }
    Ok(FourierWeight {
        kappa: w.kappa,
        coefficient: mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pointwise_values() {
        let w = SingularWeight::pure_power(0.5).unwrap();
        assert_eq!(w.evaluate(0.0, 4.0).unwrap(), 0.5);
        assert_eq!(w.evaluate(3.0, 1.0).unwrap(), 1.0);
        assert_relative_eq!(
            w.evaluate(0.0, 1.4).unwrap() / w.evaluate(0.0, 0.7).unwrap(),
            2f64.powf(-0.5)
        );
        assert!(matches!(w.evaluate(0.0, 0.0), Err(Error::SingularPoint)));
    }

    #[test]
    fn homogeneity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let w = SingularWeight::pure_power(0.3).unwrap().with_amplitude(|x| 1.0 + x * x);
        for _ in 0..200 {
            let x = rng.random_range(-2.0..2.0);
            let z = rng.random_range(-3.0..3.0);
            let s = rng.random_range(0.01..10.0);
            let lhs = w.evaluate(x, s * z).unwrap();
            let rhs = s.powf(-0.3) * w.evaluate(x, z).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
        }
    }

    #[test]
    fn rejects_out_of_range_kappa() {
        for k in [0.0, 1.0, 1.5, -0.2] {
            assert!(matches!(SingularWeight::pure_power(k), Err(Error::Kappa { .. })));
        }
        assert!(SingularWeight::custom(0.5, |d| d).is_err());
    }

    #[test]
    fn closed_form_constant_at_one_half() {
        let w = SingularWeight::pure_power(0.5).unwrap();
        let f = fourier_hat(&w, 0.0).unwrap();
        let want = (2.0 * PI).sqrt() / (2.0 * PI * PI);
        assert_relative_eq!(f.coefficient, want, max_relative = 1e-12);
        // 0.126987..., quoted elsewhere rounded to 0.12700
        assert!((f.coefficient - 0.12700).abs() < 2e-5);
        assert_relative_eq!(f.evaluate(4.0) / f.evaluate(1.0), 0.5, max_relative = 1e-14);
        assert_eq!(f.evaluate(-2.5), f.evaluate(2.5));
        // degree bookkeeping: -κ + (κ - 1) = -d
        assert_eq!(-w.kappa + f.degree(), -1.0);
    }

    #[test]
    fn numeric_transform_matches_closed_form() {
        for kappa in [0.25, 0.5, 0.75] {
            let w = SingularWeight::pure_power(kappa).unwrap();
            let exact = fourier_hat(&w, 0.0).unwrap();
            assert!(exact.coefficient > 0.0);
            for zeta in [0.5, 1.0, 2.0] {
                let v = NORMALIZATION * 2.0 * half_line_transform(kappa, zeta).unwrap();
                assert_relative_eq!(v, exact.evaluate(zeta), max_relative = 1e-4);
            }
            let numeric = numeric_fourier_hat(&w, 0.0, &[0.5, 1.0, 2.0]).unwrap();
            assert_relative_eq!(numeric.coefficient, exact.coefficient, max_relative = 1e-4);
        }
        let w = SingularWeight::pure_power(0.5).unwrap();
        let at_one = numeric_fourier_hat(&w, 0.0, &[1.0]).unwrap().evaluate(1.0);
        assert_relative_eq!(at_one, (2.0 * PI).sqrt() / (2.0 * PI * PI), max_relative = 1e-4);
    }

    #[test]
    fn transform_is_linear_in_amplitude() {
        let w = SingularWeight::custom(0.4, |_| 1.5).unwrap();
        let doubled = w.clone().scaled(2.0);
        let a = numeric_fourier_hat(&w, 0.3, &[1.0, 3.0]).unwrap();
        let b = numeric_fourier_hat(&doubled, 0.3, &[1.0, 3.0]).unwrap();
        assert_relative_eq!(b.coefficient, 2.0 * a.coefficient, max_relative = 1e-12);
        let closed = fourier_hat(&SingularWeight::pure_power(0.4).unwrap(), 0.0).unwrap();
        assert_relative_eq!(a.coefficient, 1.5 * closed.coefficient, max_relative = 1e-4);
    }

    #[test]
    fn homogeneity_of_transform() {
        let f = fourier_hat(&SingularWeight::pure_power(0.3).unwrap(), 0.0).unwrap();
        for s in [0.1, 2.0, 7.5] {
            for zeta in [0.3, 1.0, 4.0] {
                assert_relative_eq!(
                    f.evaluate(s * zeta),
                    s.powf(0.3 - 1.0) * f.evaluate(zeta),
                    max_relative = 1e-12
                );
            }
        }
    }
}
