use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::grid::Grid2D;
use super::multiplier::Multiplier;
use crate::error::{Error, Result};

/// Real scalar field on a [`Grid2D`], stored as Fourier-series coefficients.
///
/// Coefficients follow `f(x) = sum_k c_k exp(i xi_k . x)`, so the forward
/// transform divides by `N^2`. Every constructor leaves the coefficients
/// Hermitian-symmetric.
#[derive(Clone, Debug)]
pub struct SpectralField {
    grid: Grid2D,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: &Grid2D) -> Self {
        Self {
            grid: grid.clone(),
            coeffs: vec![Complex64::default(); grid.len()],
        }
    }

    pub fn from_physical(grid: &Grid2D, values: &[f64]) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        grid.fft().forward(&mut data);
        let scale = 1.0 / grid.len() as f64;
        data.iter_mut().for_each(|c| *c *= scale);
        let mut field = Self {
            grid: grid.clone(),
            coeffs: data,
        };
        field.symmetrize(false);
        Ok(field)
    }

    /// Samples `f` on the grid and transforms.
    pub fn from_fn<F: Fn(f64, f64) -> f64>(grid: &Grid2D, f: F) -> Self {
        Self::from_physical(grid, &grid.sample(f)).expect("sample has grid size")
    }

    /// Wraps raw coefficients, projecting them onto the Hermitian subspace.
    pub fn from_coeffs(grid: &Grid2D, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        let mut field = Self {
            grid: grid.clone(),
            coeffs,
        };
        field.symmetrize(false);
        Ok(field)
    }

    /// Builds a field from a symbol evaluated at every lattice frequency.
    pub fn from_spectrum<F: Fn(f64, f64) -> Complex64>(grid: &Grid2D, f: F) -> Self {
        let coeffs = (0..grid.len())
            .map(|idx| {
                let (a, b) = grid.xi(idx);
                f(a, b)
            })
            .collect();
        let mut field = Self {
            grid: grid.clone(),
            coeffs,
        };
        field.symmetrize(true);
        field
    }

    pub(crate) fn from_raw(grid: &Grid2D, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.len());
        Self {
            grid: grid.clone(),
            coeffs,
        }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient at lattice point `(k1, k2)`.
    pub fn coeff(&self, k1: i64, k2: i64) -> Complex64 {
        self.coeffs[self.grid.index_of(k1, k2)]
    }

    pub fn to_physical(&self) -> Vec<f64> {
        let mut data = self.coeffs.clone();
        self.grid.fft().inverse(&mut data);
        data.into_iter().map(|c| c.re).collect()
    }

    /// Multiplies every coefficient by `m(xi)`, then zeroes Nyquist rows and
    /// restores Hermitian symmetry.
    pub fn apply(&self, m: &Multiplier) -> Self {
        self.map_symbol(|xi| m.symbol(xi))
    }

    /// Applies a composition of multipliers in one pass.
    pub fn apply_all(&self, ms: &[Multiplier]) -> Self {
        self.map_symbol(|xi| ms.iter().map(|m| m.symbol(xi)).product())
    }

    /// Applies an arbitrary frequency-space symbol.
    pub fn map_symbol<F: Fn((f64, f64)) -> Complex64>(&self, symbol: F) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, &c)| c * symbol(self.grid.xi(idx)))
            .collect();
        let mut out = Self::from_raw(&self.grid, coeffs);
        out.symmetrize(true);
        out
    }

    /// Sets the zero mode to 0.
    pub fn without_mean(mut self) -> Self {
        self.coeffs[0] = Complex64::default();
        self
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// Keeps only modes with `|k_i| < fraction * N/2` on both axes.
    pub fn truncated(&self, fraction: f64) -> Self {
        let mut out = self.clone();
        dealias_in_place(&self.grid, &mut out.coeffs, fraction);
        out
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self::from_raw(&self.grid, self.coeffs.iter().map(|&c| c * a).collect())
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &Self) -> Self {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        Self::from_raw(
            &self.grid,
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&x, &y)| x + y * a)
                .collect(),
        )
    }

    /// Largest deviation from `c(-k) = conj(c(k))`.
    pub fn hermitian_defect(&self) -> f64 {
        (0..self.grid.len())
            .map(|idx| (self.coeffs[idx] - self.coeffs[self.grid.mirror(idx)].conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Projects onto Hermitian coefficients, optionally zeroing Nyquist rows.
    fn symmetrize(&mut self, zero_nyquist: bool) {
        hermitian_in_place(&self.grid, &mut self.coeffs, zero_nyquist);
    }
}

pub(crate) fn hermitian_in_place(grid: &Grid2D, coeffs: &mut [Complex64], zero_nyquist: bool) {
    for idx in 0..grid.len() {
        if zero_nyquist && grid.is_nyquist(idx) {
            coeffs[idx] = Complex64::default();
            continue;
        }
        let m = grid.mirror(idx);
        if m < idx {
            continue;
        }
        if m == idx {
            coeffs[idx].im = 0.0;
        } else {
            let avg = 0.5 * (coeffs[idx] + coeffs[m].conj());
            coeffs[idx] = avg;
            coeffs[m] = avg.conj();
        }
    }
}

pub(crate) fn dealias_in_place(grid: &Grid2D, coeffs: &mut [Complex64], fraction: f64) {
    let cut = fraction * (grid.n() / 2) as f64;
    let keep: Vec<bool> = (0..grid.n())
        .map(|i| (grid.signed(i).unsigned_abs() as f64) < cut)
        .collect();
    for (idx, c) in coeffs.iter_mut().enumerate() {
        if !(keep[idx / grid.n()] && keep[idx % grid.n()]) {
            *c = Complex64::default();
        }
    }
}

/// Inverse-transforms two fields with one complex FFT.
pub fn to_physical_pair(a: &SpectralField, b: &SpectralField) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.grid, b.grid, "fields live on different grids");
    let mut data: Vec<Complex64> = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(&x, &y)| x + Complex64::new(-y.im, y.re))
        .collect();
    a.grid.fft().inverse(&mut data);
    data.into_iter().map(|z| (z.re, z.im)).unzip()
}

/// Forward-transforms two real arrays with one complex FFT.
pub fn from_physical_pair(grid: &Grid2D, f: &[f64], g: &[f64]) -> Result<(SpectralField, SpectralField)> {
    for len in [f.len(), g.len()] {
        if len != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: len,
            });
        }
    }
    let mut z: Vec<Complex64> = f.iter().zip(g).map(|(&x, &y)| Complex64::new(x, y)).collect();
    grid.fft().forward(&mut z);
    let scale = 0.5 / grid.len() as f64;
    let mut fa = Vec::with_capacity(grid.len());
    let mut gb = Vec::with_capacity(grid.len());
    for idx in 0..grid.len() {
        let zk = z[idx];
        let zm = z[grid.mirror(idx)].conj();
        fa.push((zk + zm) * scale);
        let d = (zk - zm) * scale;
        gb.push(Complex64::new(d.im, -d.re));
    }
    Ok((SpectralField::from_raw(grid, fa), SpectralField::from_raw(grid, gb)))
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: Self) -> SpectralField {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: Self) -> SpectralField {
        self.axpy(-1.0, rhs)
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        self.scaled(rhs)
    }
}
