use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Square periodic box `[-L/2, L/2)^2` sampled on `N x N` points.
///
/// Storage is row-major with the second axis fastest: flat index `i * N + j`
/// holds physical point `(x1_i, x2_j)` or, in spectral space, lattice
/// wavenumber `(k1_i, k2_j)`. Both use FFT ordering, so index `i` maps to the
/// signed integer `i` for `i < N/2` and `i - N` otherwise; the physical origin
/// sits at index 0.
#[derive(Clone)]
pub struct Grid2D {
    n: usize,
    l: f64,
    wavenumbers: Arc<Vec<f64>>,
    fft: Arc<Fft2>,
}

impl Grid2D {
    pub fn new(n: usize, l: f64) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "N = {n} must be a power of two and at least 16"
            )));
        }
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::InvalidGrid(format!("L = {l} must be positive")));
        }
        let dk = 2.0 * PI / l;
        let wavenumbers = (0..n).map(|i| signed_index(i, n) as f64 * dk).collect();
        Ok(Self {
            n,
            l,
            wavenumbers: Arc::new(wavenumbers),
            fft: Arc::new(Fft2::new(n)),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn dx(&self) -> f64 {
        self.l / self.n as f64
    }

    /// Lattice spacing `2*pi/L`.
    pub fn dk(&self) -> f64 {
        2.0 * PI / self.l
    }

    /// Largest resolved wavenumber along an axis, `pi*N/L`.
    pub fn k_max(&self) -> f64 {
        PI * self.n as f64 / self.l
    }

    /// Quadrature weight of one physical grid cell.
    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dx()
    }

    pub fn signed(&self, i: usize) -> i64 {
        signed_index(i, self.n)
    }

    /// Storage index of the lattice point `(k1, k2)`, wrapping modulo `N`.
    pub fn index_of(&self, k1: i64, k2: i64) -> usize {
        let n = self.n as i64;
        let i = k1.rem_euclid(n) as usize;
        let j = k2.rem_euclid(n) as usize;
        i * self.n + j
    }

    /// Storage index of `-k` for the mode stored at `idx`.
    pub fn mirror(&self, idx: usize) -> usize {
        let (i, j) = (idx / self.n, idx % self.n);
        ((self.n - i) % self.n) * self.n + (self.n - j) % self.n
    }

    pub fn is_nyquist(&self, idx: usize) -> bool {
        let half = self.n / 2;
        idx / self.n == half || idx % self.n == half
    }

    /// Frequency vector `xi = (2*pi/L) k` for storage index `idx`.
    pub fn xi(&self, idx: usize) -> (f64, f64) {
        (
            self.wavenumbers[idx / self.n],
            self.wavenumbers[idx % self.n],
        )
    }

    pub fn wavenumber(&self, i: usize) -> f64 {
        self.wavenumbers[i]
    }

    /// Physical coordinate for axis index `i` (minimum-image, origin at 0).
    pub fn coordinate(&self, i: usize) -> f64 {
        self.signed(i) as f64 * self.dx()
    }

    pub fn point(&self, idx: usize) -> (f64, f64) {
        (self.coordinate(idx / self.n), self.coordinate(idx % self.n))
    }

    /// Samples `f(x1, x2)` at every grid point.
    pub fn sample<F: Fn(f64, f64) -> f64>(&self, f: F) -> Vec<f64> {
        (0..self.len())
            .map(|idx| {
                let (x1, x2) = self.point(idx);
                f(x1, x2)
            })
            .collect()
    }

    pub(crate) fn fft(&self) -> &Fft2 {
        &self.fft
    }
}

impl fmt::Debug for Grid2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid2D")
            .field("n", &self.n)
            .field("l", &self.l)
            .finish()
    }
}

impl PartialEq for Grid2D {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.l == other.l
    }
}

fn signed_index(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// Unnormalized square 2D FFT built from cached 1D plans.
pub(crate) struct Fft2 {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub(crate) fn forward(&self, data: &mut [Complex64]) {
        self.run(&*self.forward, data);
    }

    pub(crate) fn inverse(&self, data: &mut [Complex64]) {
        self.run(&*self.inverse, data);
    }

    fn run(&self, plan: &dyn Fft<f64>, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.n * self.n);
        let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(data, &mut scratch);
        transpose_square(data, self.n);
        plan.process_with_scratch(data, &mut scratch);
        transpose_square(data, self.n);
    }
}

fn transpose_square(data: &mut [Complex64], n: usize) {
    const BLOCK: usize = 32;
    for ib in (0..n).step_by(BLOCK) {
        for jb in (ib..n).step_by(BLOCK) {
            for i in ib..(ib + BLOCK).min(n) {
                let j0 = if ib == jb { i + 1 } else { jb };
                for j in j0..(jb + BLOCK).min(n) {
                    data.swap(i * n + j, j * n + i);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid2D::new(8, 1.0).is_err());
        assert!(Grid2D::new(48, 1.0).is_err());
        assert!(Grid2D::new(32, 0.0).is_err());
        assert!(Grid2D::new(32, 10.0).is_ok());
    }

    #[test]
    fn lattice_layout() {
        let g = Grid2D::new(16, 2.0 * PI).unwrap();
        assert_eq!(g.signed(7), 7);
        assert_eq!(g.signed(8), -8);
        assert_eq!(g.signed(15), -1);
        let idx = g.index_of(-3, 2);
        assert_eq!(g.xi(idx), (-3.0, 2.0));
        assert_eq!(g.xi(g.mirror(idx)), (3.0, -2.0));
        assert!(g.is_nyquist(g.index_of(-8, 1)));
        assert!(!g.is_nyquist(g.index_of(7, -7)));
        assert_eq!(g.point(0), (0.0, 0.0));
    }

    #[test]
    fn transpose_is_involution() {
        let n = 70;
        let orig: Vec<Complex64> = (0..n * n).map(|k| Complex64::new(k as f64, 0.0)).collect();
        let mut v = orig.clone();
        transpose_square(&mut v, n);
        assert_eq!(v[3 * n + 5], orig[5 * n + 3]);
        transpose_square(&mut v, n);
        assert_eq!(v, orig);
    }
}
