//! The anisotropic propagator `exp(t R_1)` and its `alpha`-family, applied
//! exactly in Fourier space.

mod bessel;
mod decay;
mod sharpness;

pub use bessel::{bessel_j0, j0_asymptotic, j0_envelope, j0_quadrature, j0_series, j0_zero, SERIES_MAX_T};
pub use decay::{measure_decay, reliable_time, DecayReport};
pub use sharpness::{sharpness_check, OriginTrace, SharpnessReport};

use crate::error::{invalid, Result};
use crate::spectral::{Multiplier, SpectralField};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemigroupParams {
    alpha: f64,
    t: f64,
}

impl SemigroupParams {
    pub fn new(alpha: f64, t: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(t.is_finite() && t >= 0.0) {
            return Err(invalid("t", format!("time must be finite and >= 0, got {t}")));
        }
        Ok(Self { alpha, t })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn at(&self, t: f64) -> Result<Self> {
        Self::new(self.alpha, t)
    }

    pub fn multiplier(&self) -> Multiplier {
        Multiplier::SemigroupPhase {
            alpha: self.alpha,
            t: self.t,
        }
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if (1.0..=2.0).contains(&alpha) {
        Ok(())
    } else {
        Err(invalid("alpha", format!("{alpha} outside [1, 2]")))
    }
}

/// Multiplies every coefficient by `exp(-i t xi_1 / |xi|^alpha)`.
pub fn evolve_linear(f: &SpectralField, p: SemigroupParams) -> SpectralField {
    f.apply(&p.multiplier())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid2D;

    fn sample() -> SpectralField {
        let g = Grid2D::new(64, 16.0).unwrap();
        SpectralField::from_fn(&g, |x, y| (-(x * x + 0.5 * y * y)).exp() * (1.0 + 0.3 * x * y))
    }

    #[test]
    fn identity_at_zero_time() {
        let f = sample();
        let out = evolve_linear(&f, SemigroupParams::new(1.0, 0.0).unwrap());
        assert!((&out - &f).l2_norm() <= 1e-12 * f.l2_norm());
    }

    #[test]
    fn unitary_and_group_law() {
        let f = sample().without_mean();
        for &alpha in &[1.0, 1.5, 2.0] {
            let p = |t| SemigroupParams::new(alpha, t).unwrap();
            let a = evolve_linear(&evolve_linear(&f, p(3.5)), p(7.25));
            let b = evolve_linear(&f, p(10.75));
            assert!((&a - &b).l2_norm() <= 1e-12 * f.l2_norm());
            assert!((b.l2_norm() - f.l2_norm()).abs() <= 1e-12 * f.l2_norm());
        }
    }

    #[test]
    fn parameter_ranges() {
        assert!(SemigroupParams::new(0.5, 1.0).is_err());
        assert!(SemigroupParams::new(1.0, -1.0).is_err());
    }
}
