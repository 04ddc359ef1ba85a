//! Dyadic Littlewood-Paley projectors and homogeneous Besov norms.
//!
//! The radial profile is built from the smooth step
//! `chi(r) = h(2 - r) / (h(2 - r) + h(r - 1))`, `h(s) = exp(-1/s)` for `s > 0`,
//! which equals 1 on `r <= 1` and 0 on `r >= 2`. Then
//!
//! * bump `phi(r) = chi(r) - chi(2r)`, supported in `[1/2, 2]`, `phi(1) = 1`;
//! * fattened `phi~(r) = chi(r/2) - chi(4r)`, equal to 1 on `[1/2, 2]` and
//!   supported in `[1/4, 4]`.
//!
//! Dyadic sums of the bump telescope, so `sum_j phi(2^-j r) = 1` away from the
//! ends of the shell range.

use crate::error::{invalid, Result};
use crate::spectral::{l1, linf, to_physical_pair, Grid2D, SpectralField};

fn h(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// Smooth step: 1 on `[0, 1]`, 0 on `[2, inf)`.
pub fn chi(r: f64) -> f64 {
    if r <= 1.0 {
        1.0
    } else if r >= 2.0 {
        0.0
    } else {
        let a = h(2.0 - r);
        a / (a + h(r - 1.0))
    }
}

pub fn bump(r: f64) -> f64 {
    chi(r) - chi(2.0 * r)
}

pub fn fattened_bump(r: f64) -> f64 {
    chi(0.5 * r) - chi(4.0 * r)
}

/// Lebesgue exponent for Besov norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exponent {
    One,
    Two,
    Infinity,
}

/// Projector family `P_j` (bump) and `Q_j` (fattened bump) on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LPBank {
    j_min: i32,
    j_max: i32,
}

impl LPBank {
    /// Shell range covering the lattice of `grid`: `2^j_min` is the largest
    /// power of two not above `2*pi/L` and `2^j_max` the smallest not below
    /// the corner frequency `sqrt(2)*pi*N/L`.
    pub fn new(grid: &Grid2D) -> Self {
        let j_min = grid.dk().log2().floor() as i32;
        let j_max = (std::f64::consts::SQRT_2 * grid.k_max()).log2().ceil() as i32;
        Self { j_min, j_max }
    }

    pub fn with_range(j_min: i32, j_max: i32) -> Result<Self> {
        if j_min > j_max {
            return Err(invalid("j_range", format!("[{j_min}, {j_max}] is empty")));
        }
        Ok(Self { j_min, j_max })
    }

    pub fn j_range(&self) -> (i32, i32) {
        (self.j_min, self.j_max)
    }

    pub fn shells(&self) -> impl Iterator<Item = i32> {
        self.j_min..=self.j_max
    }

    fn check(&self, j: i32) -> Result<()> {
        if (self.j_min..=self.j_max).contains(&j) {
            Ok(())
        } else {
            Err(invalid(
                "j",
                format!("shell {j} outside [{}, {}]", self.j_min, self.j_max),
            ))
        }
    }

    /// Symbol of `P_j` (or `Q_j` when `fattened`) at radius `r`.
    pub fn weight(j: i32, r: f64, fattened: bool) -> f64 {
        let s = r * 2f64.powi(-j);
        if fattened {
            fattened_bump(s)
        } else {
            bump(s)
        }
    }

    pub fn project(&self, f: &SpectralField, j: i32, fattened: bool) -> Result<SpectralField> {
        self.check(j)?;
        Ok(f.map_symbol(|(a, b)| Self::weight(j, a.hypot(b), fattened).into()))
    }

    /// `||Q_j f||_{L^b}` for every shell in range.
    pub fn shell_norms(&self, f: &SpectralField, b: Exponent) -> Vec<(i32, f64)> {
        let shells: Vec<i32> = self.shells().collect();
        let cell = f.grid().cell_area();
        let norm = |vals: &[f64]| match b {
            Exponent::One => l1(vals, cell),
            Exponent::Infinity => linf(vals),
            Exponent::Two => (vals.iter().map(|v| v * v).sum::<f64>() * cell).sqrt(),
        };
        let mut out = Vec::with_capacity(shells.len());
        for pair in shells.chunks(2) {
            let qa = self.project(f, pair[0], true).expect("shell in range");
            if b == Exponent::Two {
                out.push((pair[0], qa.l2_norm()));
                if let Some(&jb) = pair.get(1) {
                    out.push((jb, self.project(f, jb, true).expect("shell in range").l2_norm()));
                }
                continue;
            }
            let qb = match pair.get(1) {
                Some(&jb) => self.project(f, jb, true).expect("shell in range"),
                None => SpectralField::zeros(f.grid()),
            };
            let (va, vb) = to_physical_pair(&qa, &qb);
            out.push((pair[0], norm(&va)));
            if let Some(&jb) = pair.get(1) {
                out.push((jb, norm(&vb)));
            }
        }
        out
    }

    /// Homogeneous Besov norm `B^a_{b,c}`: the `l^c` norm over shells of
    /// `2^{ja} ||Q_j f||_{L^b}`.
    pub fn besov_norm(&self, f: &SpectralField, a: f64, b: Exponent, c: Exponent) -> Result<f64> {
        if !(0.0..=6.0).contains(&a) {
            return Err(invalid("a", format!("smoothness {a} outside [0, 6]")));
        }
        let terms = self
            .shell_norms(f, b)
            .into_iter()
            .map(|(j, v)| 2f64.powf(j as f64 * a) * v);
        Ok(match c {
            Exponent::One => terms.sum(),
            Exponent::Two => terms.map(|v| v * v).sum::<f64>().sqrt(),
            Exponent::Infinity => terms.fold(0.0, f64::max),
        })
    }

    /// The data norm `B^2_{1,1}` of the dispersive estimate.
    pub fn besov_211(&self, f: &SpectralField) -> f64 {
        self.besov_norm(f, 2.0, Exponent::One, Exponent::One)
            .expect("a = 2 is admissible")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn profile_supports() {
        assert_eq!(bump(0.49), 0.0);
        assert_eq!(bump(2.01), 0.0);
        assert_eq!(bump(1.0), 1.0);
        assert_eq!(fattened_bump(0.5), 1.0);
        assert_eq!(fattened_bump(2.0), 1.0);
        assert_eq!(fattened_bump(4.0), 0.0);
        assert_eq!(fattened_bump(0.25), 0.0);
        for k in 0..400 {
            let r = 0.3 + k as f64 * 0.005;
            assert_eq!(fattened_bump(r) * bump(r), bump(r), "r = {r}");
        }
    }

    #[test]
    fn dyadic_sum_is_one() {
        for k in 0..1000 {
            let r = 0.01 * 1.01f64.powi(k);
            if !(0.04..=100.0).contains(&r) {
                continue;
            }
            let s: f64 = (-6..=8).map(|j| LPBank::weight(j, r, false)).sum();
            assert!((s - 1.0).abs() <= 1e-12, "r = {r}: {s}");
        }
    }

    #[test]
    fn project_plane_wave() {
        let g = Grid2D::new(32, 2.0 * PI).unwrap();
        let bank = LPBank::new(&g);
        let f = SpectralField::from_fn(&g, |x, _| x.cos());
        let p0 = bank.project(&f, 0, false).unwrap();
        assert!((&p0 - &f).l2_norm() < 1e-14);
        let p5 = bank.project(&f, 5, false).unwrap();
        assert!(p5.l2_norm() < 1e-14);
        assert!(bank.project(&f, 40, false).is_err());
    }

    #[test]
    fn shell_range_from_grid() {
        let g = Grid2D::new(256, 40.0).unwrap();
        assert_eq!(LPBank::new(&g).j_range(), (-3, 5));
    }
}
