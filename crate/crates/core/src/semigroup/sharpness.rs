use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::bessel::{bessel_j0, j0_envelope, j0_quadrature, j0_series, SERIES_MAX_T};
use super::{check_alpha, evolve_linear, SemigroupParams};
use crate::error::{invalid, Result};
use crate::spectral::{dispersion, SpectralField};

/// `t -> (exp(tR) f)(0)` as the lattice sum `sum_k Re(c_k exp(-i t mu_k))`,
/// which is what `evolve_linear` followed by evaluation at the origin
/// computes, without the per-time field allocation.
#[derive(Debug, Clone)]
pub struct OriginTrace {
    coeffs: Vec<Complex64>,
    phases: Vec<f64>,
}

impl OriginTrace {
    pub fn new(f: &SpectralField, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let g = f.grid();
        let (mut coeffs, mut phases) = (Vec::new(), Vec::new());
        for (idx, &c) in f.coeffs().iter().enumerate() {
            if g.is_nyquist(idx) || c == Complex64::default() {
                continue;
            }
            coeffs.push(c);
            phases.push(dispersion(g.xi(idx), alpha));
        }
        Ok(Self { coeffs, phases })
    }

    pub fn value(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .zip(&self.phases)
            .map(|(c, &mu)| {
                let (s, co) = (t * mu).sin_cos();
                c.re * co + c.im * s
            })
            .sum()
    }
}

#[derive(Debug, Clone)]
pub struct SharpnessReport {
    pub f0: f64,
    pub times: Vec<f64>,
    /// Origin value from the lattice evolution.
    pub direct: Vec<f64>,
    /// Origin value from the radial identity `f(0) J_0(t)`.
    pub radial: Vec<f64>,
    /// `|f(0)| sqrt(2/(pi t))`.
    pub envelope: Vec<f64>,
    /// Largest `|direct - radial| / |f(0)|` over sample times `t <= agree_t_max`.
    pub two_path_error: f64,
    pub agree_t_max: f64,
    /// Local maxima of `|direct|` in the peak window with their envelope ratio.
    pub peaks: Vec<(f64, f64)>,
    /// Sign changes of `direct` in the peak window with the distance to the
    /// nearest `3pi/4 + k pi`.
    pub zeros: Vec<(f64, f64)>,
    /// Largest series/quadrature discrepancy of `J_0` on the sample times.
    pub bessel_agreement: f64,
}

impl SharpnessReport {
    pub fn worst_peak_deviation(&self) -> f64 {
        self.peaks.iter().map(|&(_, r)| (r - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn worst_zero_offset(&self) -> f64 {
        self.zeros.iter().map(|&(_, d)| d.abs()).fold(0.0, f64::max)
    }
}

/// Compares `exp(tR_1) f` at the origin with `f(0) J_0(t)` for radial data.
///
/// `times` are the reported sample times; peaks and zeros are located inside
/// `window` by scanning at spacing 0.05 and refining to `1e-9`.
pub fn sharpness_check(
    f: &SpectralField,
    times: &[f64],
    window: (f64, f64),
    agree_t_max: f64,
) -> Result<SharpnessReport> {
    let f0 = f.value_at_origin();
    if f0.abs() <= 1e-14 * f.coeffs().iter().map(|c| c.norm()).sum::<f64>().max(1e-300) {
        return Err(invalid("profile", "f(0) = 0; sharpness needs nonzero origin value"));
    }
    if !(window.0 > 0.0 && window.1 > window.0) {
        return Err(invalid("window", format!("{window:?} is not a positive interval")));
    }
    let trace = OriginTrace::new(f, 1.0)?;
    let direct: Vec<f64> = times
        .par_iter()
        .map(|&t| {
            let p = SemigroupParams::new(1.0, t).expect("nonnegative time");
            evolve_linear(f, p).value_at_origin()
        })
        .collect();
    let radial: Vec<f64> = times.iter().map(|&t| f0 * bessel_j0(t)).collect();
    let envelope: Vec<f64> = times.iter().map(|&t| f0.abs() * j0_envelope(t)).collect();
    let two_path_error = times
        .iter()
        .zip(direct.iter().zip(&radial))
        .filter(|(t, _)| **t <= agree_t_max)
        .map(|(_, (d, r))| (d - r).abs() / f0.abs())
        .fold(0.0, f64::max);
    let bessel_agreement = times
        .iter()
        .filter(|&&t| t <= SERIES_MAX_T)
        .map(|&t| (j0_series(t).unwrap() - j0_quadrature(t).unwrap()).abs())
        .fold(0.0, f64::max);

    let h = 0.05;
    let n = ((window.1 - window.0) / h).ceil() as usize + 1;
    let grid_t: Vec<f64> = (0..n).map(|i| window.0 + i as f64 * h).collect();
    let vals: Vec<f64> = grid_t.par_iter().map(|&t| trace.value(t)).collect();

    let mut peak_brackets = Vec::new();
    let mut zero_brackets = Vec::new();
    for i in 1..n - 1 {
        let (a, b, c) = (vals[i - 1].abs(), vals[i].abs(), vals[i + 1].abs());
        if b >= a && b > c {
            peak_brackets.push((grid_t[i - 1], grid_t[i + 1]));
        }
    }
    for i in 0..n - 1 {
        if vals[i] == 0.0 || (vals[i] > 0.0) != (vals[i + 1] > 0.0) {
            zero_brackets.push((grid_t[i], grid_t[i + 1]));
        }
    }
    let peaks = peak_brackets
        .par_iter()
        .map(|&(a, b)| {
            let t = golden_max(|t| trace.value(t).abs(), a, b, 1e-9);
            (t, trace.value(t).abs() / (f0.abs() * j0_envelope(t)))
        })
        .collect();
    let zeros = zero_brackets
        .par_iter()
        .map(|&(a, b)| {
            let t = bisect(|t| trace.value(t), a, b, 1e-10);
            let k = ((t - 0.75 * PI) / PI).round();
            (t, t - (0.75 * PI + k * PI))
        })
        .collect();

    Ok(SharpnessReport {
        f0,
        times: times.to_vec(),
        direct,
        radial,
        envelope,
        two_path_error,
        agree_t_max,
        peaks,
        zeros,
        bessel_agreement,
    })
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
