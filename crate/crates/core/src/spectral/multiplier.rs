use num_complex::Complex64;

/// Coordinate axis of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X1,
    X2,
}

impl Axis {
    fn pick(self, xi: (f64, f64)) -> f64 {
        match self {
            Axis::X1 => xi.0,
            Axis::X2 => xi.1,
        }
    }
}

/// Fourier multiplier identified by a symbolic tag.
///
/// `FracLap(s)` is `(-Delta)^s` with symbol `|xi|^{2s}` and `InvFracLap(s)` its
/// inverse on zero-mean fields. `SemigroupPhase` is the propagator
/// `exp(-i t xi_1 / |xi|^alpha)`. `VelocitySqg` maps a scalar to one component
/// of `(-R_2, R_1) |xi|^{1-alpha}`; `VelocityBouss` maps vorticity to one
/// component of `(-d_2, d_1)(-Delta)^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Multiplier {
    Riesz(Axis),
    FracLap(f64),
    InvFracLap(f64),
    Deriv(Axis),
    SemigroupPhase { alpha: f64, t: f64 },
    VelocitySqg { component: Axis, alpha: f64 },
    VelocityBouss(Axis),
}

const I: Complex64 = Complex64::new(0.0, 1.0);

impl Multiplier {
    /// Symbol value at frequency `xi`. At `xi = 0` the singular symbols are
    /// defined as 0 and the unimodular propagator as 1.
    pub fn symbol(&self, xi: (f64, f64)) -> Complex64 {
        let r2 = xi.0 * xi.0 + xi.1 * xi.1;
        let r = r2.sqrt();
        let origin = r2 == 0.0;
        match *self {
            Multiplier::Riesz(axis) => {
                if origin {
                    Complex64::new(0.0, 0.0)
                } else {
                    -I * (axis.pick(xi) / r)
                }
            }
            Multiplier::FracLap(s) => {
                if origin {
                    Complex64::new(if s == 0.0 { 1.0 } else { 0.0 }, 0.0)
                } else {
                    Complex64::new(r.powf(2.0 * s), 0.0)
                }
            }
            Multiplier::InvFracLap(s) => {
                if origin {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(r.powf(-2.0 * s), 0.0)
                }
            }
            Multiplier::Deriv(axis) => I * axis.pick(xi),
            Multiplier::SemigroupPhase { alpha, t } => {
                if origin {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::from_polar(1.0, -t * dispersion(xi, alpha))
                }
            }
            Multiplier::VelocitySqg { component, alpha } => {
                if origin {
                    return Complex64::new(0.0, 0.0);
                }
                let scale = r.powf(-alpha);
                match component {
                    Axis::X1 => I * (xi.1 * scale),
                    Axis::X2 => -I * (xi.0 * scale),
                }
            }
            Multiplier::VelocityBouss(component) => {
                if origin {
                    return Complex64::new(0.0, 0.0);
                }
                match component {
                    Axis::X1 => -I * (xi.1 / r2),
                    Axis::X2 => I * (xi.0 / r2),
                }
            }
        }
    }
}

/// Dispersion relation `xi_1 / |xi|^alpha` of the anisotropic semigroup.
pub fn dispersion(xi: (f64, f64), alpha: f64) -> f64 {
    let r2 = xi.0 * xi.0 + xi.1 * xi.1;
    if r2 == 0.0 {
        return 0.0;
    }
    if alpha == 1.0 {
        xi.0 / r2.sqrt()
    } else if alpha == 2.0 {
        xi.0 / r2
    } else {
        xi.0 * r2.powf(-0.5 * alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn riesz_symbol_at_unit_frequency() {
        let s = Multiplier::Riesz(Axis::X1).symbol((1.0, 0.0));
        assert!((s - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert_eq!(Multiplier::Riesz(Axis::X2).symbol((0.0, 0.0)), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn riesz_symbol_bounded() {
        for &(a, b) in &[(3.0, -4.0), (0.1, 7.0), (-2.0, -2.0)] {
            assert!(Multiplier::Riesz(Axis::X1).symbol((a, b)).norm() <= 1.0);
            assert!(Multiplier::Riesz(Axis::X2).symbol((a, b)).norm() <= 1.0);
        }
    }

    #[test]
    fn velocity_sqg_matches_riesz_pair() {
        let xi = (0.7, -1.3);
        let u1 = Multiplier::VelocitySqg { component: Axis::X1, alpha: 1.0 }.symbol(xi);
        let u2 = Multiplier::VelocitySqg { component: Axis::X2, alpha: 1.0 }.symbol(xi);
        assert!((u1 + Multiplier::Riesz(Axis::X2).symbol(xi)).norm() < 1e-15);
        assert!((u2 - Multiplier::Riesz(Axis::X1).symbol(xi)).norm() < 1e-15);
    }

    #[test]
    fn semigroup_is_unimodular() {
        let m = Multiplier::SemigroupPhase { alpha: 1.5, t: 12.3 };
        assert!((m.symbol((0.4, 2.0)).norm() - 1.0).abs() < 1e-15);
        assert_eq!(m.symbol((0.0, 0.0)), Complex64::new(1.0, 0.0));
    }
}
