use rayon::prelude::*;

use super::{check_alpha, evolve_linear, SemigroupParams};
use crate::error::{invalid, Result};
use crate::fit::{fit_power_law, PowerLawFit};
use crate::littlewood_paley::{Exponent, LPBank};
use crate::spectral::SpectralField;

/// Sup-norm decay of `exp(t R_1)` applied to fixed data.
#[derive(Debug, Clone)]
pub struct DecayReport {
    pub alpha: f64,
    pub times: Vec<f64>,
    pub linf_values: Vec<f64>,
    pub fit: PowerLawFit,
    /// Theoretical decay exponent: 1/2 for `alpha = 1`, 1 otherwise.
    pub rate: f64,
    /// `B^{1+alpha}_{1,1}` norm of the data.
    pub besov: f64,
    /// `max_t ||e^{tR} f||_inf t^rate / ||f||_B` over the fit window.
    pub constant: f64,
    /// Time after which the fastest significant wave packets reach the
    /// periodic images.
    pub reliable_t_max: f64,
    pub boundary_contaminated: bool,
}

impl DecayReport {
    pub fn fitted_slope(&self) -> f64 {
        self.fit.slope
    }
}

/// Estimate of the last time the periodic box faithfully represents the
/// whole-plane evolution: half a box length travelled at the group speed
/// `|xi|^-alpha` of the amplitude-weighted mean frequency.
pub fn reliable_time(f: &SpectralField, alpha: f64) -> f64 {
    let g = f.grid();
    let (mut num, mut den) = (0.0, 0.0);
    for (idx, c) in f.coeffs().iter().enumerate().skip(1) {
        let (a, b) = g.xi(idx);
        let w = c.norm();
        num += w * a.hypot(b);
        den += w;
    }
    if den == 0.0 {
        return f64::INFINITY;
    }
    let k_mean = num / den;
    0.5 * g.l() * k_mean.powf(alpha)
}

pub fn measure_decay(
    f0: &SpectralField,
    alpha: f64,
    times: &[f64],
    window: Option<(f64, f64)>,
    bank: &LPBank,
) -> Result<DecayReport> {
    check_alpha(alpha)?;
    if times.windows(2).any(|w| w[1] <= w[0]) || times.first().is_none_or(|&t| t <= 0.0) {
        return Err(invalid("times", "must be positive and strictly increasing"));
    }
    let lo = times[0];
    let hi = *times.last().unwrap();
    let window = window.unwrap_or((lo, hi));
    if window.0 < lo || window.1 > hi || window.0 >= window.1 {
        return Err(invalid("window", format!("{window:?} not inside [{lo}, {hi}]")));
    }
    let linf_values: Vec<f64> = times
        .par_iter()
        .map(|&t| {
            let p = SemigroupParams::new(alpha, t).expect("validated");
            evolve_linear(f0, p).linf_norm()
        })
        .collect();
    let fit = fit_power_law(times, &linf_values, window)?;
    let rate = if alpha == 1.0 { 0.5 } else { 1.0 };
    let besov = bank.besov_norm(f0, 1.0 + alpha, Exponent::One, Exponent::One)?;
    let constant = times
        .iter()
        .zip(&linf_values)
        .filter(|(t, _)| (window.0..=window.1).contains(*t))
        .map(|(t, v)| v * t.powf(rate) / besov)
        .fold(0.0, f64::max);
    let reliable_t_max = reliable_time(f0, alpha);
    Ok(DecayReport {
        alpha,
        boundary_contaminated: hi > reliable_t_max,
        times: times.to_vec(),
        linf_values,
        fit,
        rate,
        besov,
        constant,
        reliable_t_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::geomspace;
    use crate::spectral::Grid2D;

    #[test]
    fn single_plane_wave_does_not_decay() {
        let g = Grid2D::new(32, 2.0 * std::f64::consts::PI).unwrap();
        let f = SpectralField::from_fn(&g, |x, y| (2.0 * x + y).cos());
        let bank = LPBank::new(&g);
        let times = geomspace(1.0, 50.0, 8);
        let rep = measure_decay(&f, 1.0, &times, None, &bank).unwrap();
        // grid sampling of a shifted wave loses at most 1 - cos(pi/32)
        let floor = (std::f64::consts::PI / 32.0).cos();
        for v in &rep.linf_values {
            assert!(*v <= 1.0 + 1e-12 && *v >= floor - 1e-12, "{v}");
        }
        assert!(rep.fit.slope.abs() < 0.01);
    }

    #[test]
    fn rejects_unsorted_times() {
        let g = Grid2D::new(16, 5.0).unwrap();
        let f = SpectralField::zeros(&g);
        let bank = LPBank::new(&g);
        assert!(measure_decay(&f, 1.0, &[1.0, 0.5, 2.0], None, &bank).is_err());
    }
}
