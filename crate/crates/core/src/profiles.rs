//! Initial data used by the experiments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::spectral::{Grid2D, Multiplier, SpectralField};

/// Zero-mean radial Gaussian `exp(-|x|^2 / w^2)`.
pub fn gaussian(grid: &Grid2D, width: f64) -> SpectralField {
    let w2 = width * width;
    SpectralField::from_fn(grid, |x, y| (-(x * x + y * y) / w2).exp()).without_mean()
}

/// Zero-mean compactly supported radial bump `exp(1 - 1/(1 - |x|^2/R^2))`.
pub fn compact_bump(grid: &Grid2D, radius: f64) -> SpectralField {
    let r2 = radius * radius;
    SpectralField::from_fn(grid, |x, y| {
        let s = (x * x + y * y) / r2;
        if s < 1.0 {
            (1.0 - 1.0 / (1.0 - s)).exp()
        } else {
            0.0
        }
    })
    .without_mean()
}

/// `(-Delta)^m` of the Gaussian of width `w`: radial, with its spectrum
/// pushed away from `xi = 0`.
pub fn band_pass_gaussian(grid: &Grid2D, width: f64, m: u32) -> SpectralField {
    gaussian(grid, width).apply(&Multiplier::FracLap(m as f64))
}

/// `cos(k . x)` for a lattice wavevector `k`.
pub fn plane_wave(grid: &Grid2D, k1: i64, k2: i64) -> SpectralField {
    let dk = grid.dk();
    let (a, b) = (k1 as f64 * dk, k2 as f64 * dk);
    SpectralField::from_fn(grid, |x, y| (a * x + b * y).cos())
}

/// Two off-centre Gaussians of opposite anisotropy, zero mean, restricted to
/// the 2/3-rule band.
pub fn sqg_pair(grid: &Grid2D) -> SpectralField {
    SpectralField::from_fn(grid, |x, y| {
        (-((x - 1.5).powi(2) + (y - 0.5).powi(2))).exp()
            + 0.7 * (-((x + 1.0).powi(2) + (y + 1.0).powi(2)) / 0.7).exp()
    })
    .without_mean()
    .truncated(2.0 / 3.0)
}

/// Vorticity and density perturbation profiles for the stratified runs.
pub fn bouss_pair(grid: &Grid2D) -> (SpectralField, SpectralField) {
    let omega = SpectralField::from_fn(grid, |x, y| {
        (-((x - 1.0).powi(2) + 2.0 * y * y)).exp()
            - 0.8 * (-((x + 1.0).powi(2) + (y + 1.0).powi(2))).exp()
    });
    let rho = SpectralField::from_fn(grid, |x, y| (-((x + 0.5).powi(2) + (y - 1.0).powi(2))).exp());
    (
        omega.without_mean().truncated(2.0 / 3.0),
        rho.without_mean().truncated(2.0 / 3.0),
    )
}

/// Random real field with independent uniform coefficients on
/// the shell `k_lo <= |xi| <= k_hi`.
pub fn random_band(grid: &Grid2D, k_lo: f64, k_hi: f64, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = (0..grid.len())
        .map(|idx| {
            let (a, b) = grid.xi(idx);
            let r = a.hypot(b);
            let re: f64 = rng.random_range(-1.0..1.0);
            let im: f64 = rng.random_range(-1.0..1.0);
            if r >= k_lo && r <= k_hi && !grid.is_nyquist(idx) {
                num_complex::Complex64::new(re, im)
            } else {
                num_complex::Complex64::default()
            }
        })
        .collect();
    SpectralField::from_coeffs(grid, coeffs)
        .expect("grid-sized")
        .without_mean()
}

/// Uniform random physical values in `[-1, 1]`.
pub fn random_physical(grid: &Grid2D, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..grid.len()).map(|_| rng.random_range(-1.0..1.0)).collect()
}
