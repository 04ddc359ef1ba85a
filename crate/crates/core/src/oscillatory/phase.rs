use crate::error::{invalid, Result};
use crate::semigroup::check_alpha;

/// Phase `phi(xi) = v . xi - xi_1 / |xi|^alpha` with `v = x / t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpec {
    v: (f64, f64),
    alpha: f64,
}

impl PhaseSpec {
    pub fn new(v: (f64, f64), alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(v.0.is_finite() && v.1.is_finite()) {
            return Err(invalid("v", "velocity must be finite"));
        }
        Ok(Self { v, alpha })
    }

    pub fn v(&self) -> (f64, f64) {
        self.v
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn phase(&self, xi: (f64, f64)) -> f64 {
        let r2 = xi.0 * xi.0 + xi.1 * xi.1;
        self.v.0 * xi.0 + self.v.1 * xi.1 - xi.0 * r2.powf(-0.5 * self.alpha)
    }

    /// Gradient of the `v`-independent part, `-grad(xi_1 |xi|^-alpha)`.
    fn dispersive_gradient(&self, xi: (f64, f64)) -> (f64, f64) {
        let a = self.alpha;
        let (x1, x2) = xi;
        let r2 = x1 * x1 + x2 * x2;
        let s = r2.powf(-0.5 * a - 1.0);
        (s * ((a - 1.0) * x1 * x1 - x2 * x2), s * a * x1 * x2)
    }

    /// The velocity for which `xi` is a stationary point.
    pub fn stationary_velocity(alpha: f64, xi: (f64, f64)) -> Result<(f64, f64)> {
        let p = PhaseSpec::new((0.0, 0.0), alpha)?;
        nonzero(xi)?;
        let g = p.dispersive_gradient(xi);
        Ok((-g.0, -g.1))
    }
}

fn nonzero(xi: (f64, f64)) -> Result<()> {
    if xi.0 == 0.0 && xi.1 == 0.0 {
        Err(invalid("xi", "phase is singular at the origin"))
    } else {
        Ok(())
    }
}

/// `grad phi = v + |xi|^{-alpha-2} ((alpha-1) xi_1^2 - xi_2^2, alpha xi_1 xi_2)`.
pub fn phase_gradient(p: &PhaseSpec, xi: (f64, f64)) -> Result<(f64, f64)> {
    nonzero(xi)?;
    let g = p.dispersive_gradient(xi);
    Ok((p.v.0 + g.0, p.v.1 + g.1))
}

/// Hessian `[[h11, h12], [h12, h22]]` of the phase; independent of `v`.
pub fn phase_hessian(p: &PhaseSpec, xi: (f64, f64)) -> Result<[[f64; 2]; 2]> {
    nonzero(xi)?;
    let a = p.alpha;
    let (x1, x2) = xi;
    let r2 = x1 * x1 + x2 * x2;
    let s2 = r2.powf(-0.5 * a - 1.0);
    let s4 = s2 / r2;
    let c = a * (a + 2.0);
    // Hessian of xi_1 |xi|^-alpha, negated.
    let g11 = -3.0 * a * x1 * s2 + c * x1 * x1 * x1 * s4;
    let g12 = -a * x2 * s2 + c * x1 * x1 * x2 * s4;
    let g22 = -a * x1 * s2 + c * x1 * x2 * x2 * s4;
    Ok([[-g11, -g12], [-g12, -g22]])
}

/// `det H = -alpha^2 ((alpha-1) xi_1^2 + xi_2^2) / |xi|^{4+2 alpha}`.
///
/// Negative away from the degenerate set for every `alpha` in `[1, 2]`; for
/// `alpha = 1` this is `-xi_2^2 / |xi|^6`.
pub fn hessian_det(p: &PhaseSpec, xi: (f64, f64)) -> Result<f64> {
    nonzero(xi)?;
    let a = p.alpha;
    let (x1, x2) = xi;
    let r2 = x1 * x1 + x2 * x2;
    Ok(-a * a * ((a - 1.0) * x1 * x1 + x2 * x2) * r2.powf(-2.0 - a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fd_gradient(p: &PhaseSpec, xi: (f64, f64), h: f64) -> (f64, f64) {
        (
            (p.phase((xi.0 + h, xi.1)) - p.phase((xi.0 - h, xi.1))) / (2.0 * h),
            (p.phase((xi.0, xi.1 + h)) - p.phase((xi.0, xi.1 - h))) / (2.0 * h),
        )
    }

    #[test]
    fn unit_point_values() {
        let p = PhaseSpec::new((0.0, 0.0), 1.0).unwrap();
        assert!((hessian_det(&p, (0.0, 1.0)).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(hessian_det(&p, (1.0, 0.0)).unwrap(), 0.0);
        let g = phase_gradient(&p, (1.0, 1.0)).unwrap();
        let s = 2f64.powf(-1.5);
        assert!((g.0 + s).abs() < 1e-15 && (g.1 - s).abs() < 1e-15);
        let p2 = PhaseSpec::new((0.0, 0.0), 2.0).unwrap();
        assert!((hessian_det(&p2, (1.0, 0.0)).unwrap() + 4.0).abs() < 1e-14);
        assert!(phase_gradient(&p, (0.0, 0.0)).is_err());
    }

    #[test]
    fn closed_forms_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &alpha in &[1.0, 1.5, 2.0] {
            for _ in 0..100 {
                let r: f64 = rng.random_range(0.5..2.0);
                let th: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                let xi = (r * th.cos(), r * th.sin());
                let v = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                let p = PhaseSpec::new(v, alpha).unwrap();
                let g = phase_gradient(&p, xi).unwrap();
                let fd = fd_gradient(&p, xi, 1e-5);
                assert!((g.0 - fd.0).abs() < 1e-8 && (g.1 - fd.1).abs() < 1e-8);
                let h = phase_hessian(&p, xi).unwrap();
                let det = h[0][0] * h[1][1] - h[0][1] * h[0][1];
                assert!((det - hessian_det(&p, xi).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn stationary_velocity_zeroes_gradient() {
        let xi = (0.3, -1.1);
        let v = PhaseSpec::stationary_velocity(1.5, xi).unwrap();
        let g = phase_gradient(&PhaseSpec::new(v, 1.5).unwrap(), xi).unwrap();
        assert!(g.0.abs() < 1e-15 && g.1.abs() < 1e-15);
    }
}
