use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use super::phase::PhaseSpec;
use crate::error::{invalid, Error, Result};
use crate::littlewood_paley::bump;
use crate::semigroup::check_alpha;

/// Controls for the dense polar trapezoid rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    /// Required agreement between a rule and its halved-step refinement.
    pub tol: f64,
    /// Largest node count attempted before giving up.
    pub budget: usize,
    /// Minimum nodes per local oscillation period.
    pub points_per_period: f64,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            budget: 1 << 27,
            points_per_period: 20.0,
        }
    }
}

/// `int phi(2^-j xi) exp(i (x . xi - t xi_1 / |xi|^alpha)) d xi` over the
/// shell `2^{j-1} <= |xi| <= 2^{j+1}`, with `phi` the Littlewood-Paley bump.
///
/// The integrand is smooth, periodic in angle and vanishes to all orders at
/// both radii, so the trapezoid rule in polar coordinates converges
/// spectrally once the oscillation is resolved. The step is halved until two
/// successive rules agree to `q.tol`.
pub fn kernel_at(x: (f64, f64), t: f64, alpha: f64, j: i32, q: Quadrature) -> Result<Complex64> {
    check_alpha(alpha)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(invalid("t", format!("need finite t >= 0, got {t}")));
    }
    let scale = 2f64.powi(j);
    let (a, b) = (0.5 * scale, 2.0 * scale);
    let xn = x.0.hypot(x.1);
    let omega_theta = b * xn + t * a.powf(1.0 - alpha);
    let omega_r = xn + t * (alpha - 1.0) * a.powf(-alpha);
    let mut n_theta = ((q.points_per_period * omega_theta).ceil() as usize)
        .max(64)
        .next_power_of_two();
    let mut n_r = ((q.points_per_period * omega_r * (b - a) / TAU).ceil() as usize)
        .max(64)
        .next_power_of_two();
    let mut prev = polar_trapezoid(x, t, alpha, scale, n_r, n_theta);
    loop {
        n_r *= 2;
        n_theta *= 2;
        if n_r * n_theta > q.budget {
            return Err(Error::QuadratureBudgetExceeded {
                budget: q.budget,
                last_change: f64::NAN,
            });
        }
        let next = polar_trapezoid(x, t, alpha, scale, n_r, n_theta);
        let change = (next - prev).norm();
        if change <= q.tol {
            return Ok(next);
        }
        if (n_r * 2) * (n_theta * 2) > q.budget {
            return Err(Error::QuadratureBudgetExceeded {
                budget: q.budget,
                last_change: change,
            });
        }
        prev = next;
    }
}

fn polar_trapezoid(x: (f64, f64), t: f64, alpha: f64, scale: f64, n_r: usize, n_theta: usize) -> Complex64 {
    let (a, b) = (0.5 * scale, 2.0 * scale);
    let hr = (b - a) / n_r as f64;
    let radial: Vec<(f64, f64, f64)> = (1..n_r)
        .map(|i| {
            let r = a + i as f64 * hr;
            (r, bump(r / scale) * r, t * r.powf(1.0 - alpha))
        })
        .collect();
    let h_theta = TAU / n_theta as f64;
    let rows: Vec<Complex64> = (0..n_theta)
        .into_par_iter()
        .map(|k| {
            let (s, c) = (k as f64 * h_theta).sin_cos();
            let proj = x.0 * c + x.1 * s;
            let mut acc = Complex64::default();
            for &(r, w, tr) in &radial {
                let (ps, pc) = (r * proj - tr * c).sin_cos();
                acc += Complex64::new(w * pc, w * ps);
            }
            acc
        })
        .collect();
    rows.into_iter().sum::<Complex64>() * (hr * h_theta)
}

/// The shell kernel at `x = v t` for the phase `p`.
pub fn kernel_direct(p: &PhaseSpec, t: f64, q: Quadrature) -> Result<Complex64> {
    if !(t > 0.0) {
        return Err(invalid("t", format!("need t > 0, got {t}")));
    }
    let v = p.v();
    kernel_at((v.0 * t, v.1 * t), t, p.alpha(), 0, q)
}

/// `int phi(xi) d xi`, the `t = 0` value of the unit-shell kernel.
pub fn bump_mass() -> f64 {
    let n = 4096;
    let h = 1.5 / n as f64;
    TAU * (1..n)
        .map(|i| {
            let r = 0.5 + i as f64 * h;
            bump(r) * r
        })
        .sum::<f64>()
        * h
}

/// `int phi(xi_1, 0) d xi_1` over the real line.
pub fn bump_line_mass() -> f64 {
    let n = 4096;
    let h = 1.5 / n as f64;
    2.0 * (1..n).map(|i| bump(0.5 + i as f64 * h)).sum::<f64>() * h
}

/// Rescaled prediction `2^{2j} K_0(2^j x, 2^{j(1-alpha)} t)` for the shell-`j`
/// kernel.
pub fn rescaled_kernel(x: (f64, f64), t: f64, alpha: f64, j: i32, q: Quadrature) -> Result<Complex64> {
    let s = 2f64.powi(j);
    let k0 = kernel_at((s * x.0, s * x.1), s.powf(1.0 - alpha) * t, alpha, 0, q)?;
    Ok(k0 * (s * s))
}
