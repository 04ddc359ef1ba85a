//! Pseudo-spectral evaluation of `-u . grad q`, dealiased by truncation.

use num_complex::Complex64;

use crate::spectral::{dealias_in_place, from_physical_pair, linf, to_physical_pair, Grid2D, Multiplier, SpectralField};
use crate::spectral::Axis;

/// Physical-space samples of a velocity field.
pub(crate) struct Velocity {
    pub u1: Vec<f64>,
    pub u2: Vec<f64>,
}

impl Velocity {
    pub fn from_spectral(u1: &SpectralField, u2: &SpectralField) -> Self {
        let (u1, u2) = to_physical_pair(u1, u2);
        Self { u1, u2 }
    }

    pub fn max_speed(&self) -> f64 {
        self.u1
            .iter()
            .zip(&self.u2)
            .fold(0.0, |m, (a, b)| m.max(a.hypot(*b)))
    }
}

/// Physical `u . grad q` for a spectral scalar `q`, plus `max |grad q|`.
pub(crate) fn advection_physical(vel: &Velocity, q: &SpectralField) -> (Vec<f64>, f64) {
    let qx = q.apply(&Multiplier::Deriv(Axis::X1));
    let qy = q.apply(&Multiplier::Deriv(Axis::X2));
    let (gx, gy) = to_physical_pair(&qx, &qy);
    let mut grad_max = 0.0f64;
    let prod = (0..gx.len())
        .map(|i| {
            grad_max = grad_max.max(gx[i].hypot(gy[i]));
            vel.u1[i] * gx[i] + vel.u2[i] * gy[i]
        })
        .collect();
    (prod, grad_max)
}

/// Forward transforms two physical products, negates, truncates and removes
/// the mean.
pub(crate) fn tendencies(grid: &Grid2D, a: &[f64], b: &[f64], dealias: f64) -> (SpectralField, SpectralField) {
    let (fa, fb) = from_physical_pair(grid, a, b).expect("grid-sized products");
    (finish(fa, dealias), finish(fb, dealias))
}

fn finish(f: SpectralField, dealias: f64) -> SpectralField {
    let grid = f.grid().clone();
    let mut c: Vec<Complex64> = f.into_coeffs().into_iter().map(|z| -z).collect();
    dealias_in_place(&grid, &mut c, dealias);
    c[0] = Complex64::default();
    SpectralField::from_coeffs(&grid, c).expect("grid-sized")
}

/// `max_{i,j} ||d_j u_i||_inf` for a divergence-free velocity given in
/// spectral form.
pub(crate) fn velocity_gradient_inf(u1: &SpectralField, u2: &SpectralField) -> f64 {
    let d11 = u1.apply(&Multiplier::Deriv(Axis::X1));
    let d12 = u1.apply(&Multiplier::Deriv(Axis::X2));
    let d21 = u2.apply(&Multiplier::Deriv(Axis::X1));
    let (a, b) = to_physical_pair(&d11, &d12);
    let c = d21.to_physical();
    // d_2 u_2 = -d_1 u_1
    linf(&a).max(linf(&b)).max(linf(&c))
}

pub(crate) fn tendency(grid: &Grid2D, a: &[f64], dealias: f64) -> SpectralField {
    finish(SpectralField::from_physical(grid, a).expect("grid-sized product"), dealias)
}
