//! Discrete norms on [`SpectralField`]. Spectral norms use Parseval with the
//! box area as weight, so `sobolev_norm(f, 0)` equals the quadrature `L^2` norm.

use super::field::SpectralField;
use crate::error::{invalid, Result};

impl SpectralField {
    /// `L^2` norm from the coefficients.
    pub fn l2_norm(&self) -> f64 {
        let sum: f64 = self.coeffs().iter().map(|c| c.norm_sqr()).sum();
        self.grid().l() * sum.sqrt()
    }

    /// `integral f g dx` for two real fields.
    pub fn inner(&self, other: &SpectralField) -> f64 {
        assert_eq!(self.grid(), other.grid(), "fields live on different grids");
        let sum: f64 = self
            .coeffs()
            .iter()
            .zip(other.coeffs())
            .map(|(a, b)| (a * b.conj()).re)
            .sum();
        self.grid().l().powi(2) * sum
    }

    /// Inhomogeneous `H^s` norm, `s` in `[-2, 8]`.
    pub fn sobolev_norm(&self, s: f64) -> Result<f64> {
        check_order(s)?;
        Ok(self.weighted_l2(|r2| (1.0 + r2).powf(s), true))
    }

    /// Homogeneous `H^s` seminorm; the zero mode is excluded.
    pub fn homogeneous_sobolev_norm(&self, s: f64) -> Result<f64> {
        check_order(s)?;
        Ok(self.weighted_l2(|r2| r2.powf(s), false))
    }

    fn weighted_l2<W: Fn(f64) -> f64>(&self, weight: W, with_mean: bool) -> f64 {
        let g = self.grid();
        let sum: f64 = self
            .coeffs()
            .iter()
            .enumerate()
            .filter(|&(idx, _)| with_mean || idx != 0)
            .map(|(idx, c)| {
                let (a, b) = g.xi(idx);
                weight(a * a + b * b) * c.norm_sqr()
            })
            .sum();
        g.l() * sum.sqrt()
    }

    /// Maximum of `|f|` over the physical grid.
    pub fn linf_norm(&self) -> f64 {
        linf(&self.to_physical())
    }

    /// Quadrature `L^1` norm.
    pub fn l1_norm(&self) -> f64 {
        l1(&self.to_physical(), self.grid().cell_area())
    }

    /// Point value at the origin, which is grid index 0.
    pub fn value_at_origin(&self) -> f64 {
        self.coeffs().iter().map(|c| c.re).sum()
    }
}

pub fn linf(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn l1(values: &[f64], cell_area: f64) -> f64 {
    values.iter().map(|v| v.abs()).sum::<f64>() * cell_area
}

fn check_order(s: f64) -> Result<()> {
    if (-2.0..=8.0).contains(&s) {
        Ok(())
    } else {
        Err(invalid("s", format!("Sobolev order {s} outside [-2, 8]")))
    }
}

#[cfg(test)]
mod tests {
    use crate::spectral::{Grid2D, SpectralField};
    use std::f64::consts::PI;

    #[test]
    fn zero_field_has_zero_norm() {
        let g = Grid2D::new(16, 3.0).unwrap();
        let z = SpectralField::zeros(&g);
        assert_eq!(z.sobolev_norm(2.0).unwrap(), 0.0);
        assert_eq!(z.linf_norm(), 0.0);
    }

    #[test]
    fn parseval_against_quadrature() {
        let g = Grid2D::new(64, 8.0).unwrap();
        let f = SpectralField::from_fn(&g, |x, y| (-(x * x + 2.0 * y * y)).exp() * (x + 0.3).sin());
        let phys: f64 = f.to_physical().iter().map(|v| v * v).sum::<f64>() * g.cell_area();
        let spec = f.sobolev_norm(0.0).unwrap();
        assert!((spec - phys.sqrt()).abs() <= 1e-12 * spec);
    }

    #[test]
    fn gaussian_h1_norm() {
        let g = Grid2D::new(256, 40.0).unwrap();
        let f = SpectralField::from_fn(&g, |x, y| (-(x * x + y * y)).exp());
        let exact = (1.5 * PI).sqrt();
        let got = f.sobolev_norm(1.0).unwrap();
        assert!((got - exact).abs() <= 1e-6 * exact, "{got} vs {exact}");
    }

    #[test]
    fn order_range_enforced() {
        let g = Grid2D::new(16, 3.0).unwrap();
        assert!(SpectralField::zeros(&g).sobolev_norm(9.0).is_err());
    }

    #[test]
    fn linf_of_plane_wave_and_gaussian() {
        let g = Grid2D::new(64, 2.0 * PI).unwrap();
        let f = SpectralField::from_fn(&g, |x, _| x.cos());
        assert!((f.linf_norm() - 1.0).abs() < 1e-14);
        let g = Grid2D::new(128, 20.0).unwrap();
        let f = SpectralField::from_fn(&g, |x, y| (-(x * x + y * y)).exp());
        assert!((f.linf_norm() - f.value_at_origin()).abs() < 1e-10);
        assert!((f.value_at_origin() - 1.0).abs() < 1e-10);
    }
}
