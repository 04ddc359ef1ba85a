//! Binary checkpoint format.
//!
//! Little-endian layout: magic `ADSP`, version `u32`, `N` as `u32`, `L` as
//! `f64`, then `N^2` pairs `(re, im)` of `f64`. Coefficients are written in
//! ascending signed wavenumber order `k1, k2 = -N/2 .. N/2-1`, `k2` fastest.

use std::io::{Read, Write};

use num_complex::Complex64;

use super::{Grid2D, SpectralField};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"ADSP";
pub const VERSION: u32 = 1;

pub fn write_dump<W: Write>(field: &SpectralField, mut out: W) -> Result<()> {
    let g = field.grid();
    let n = g.n() as i64;
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&(g.n() as u32).to_le_bytes())?;
    out.write_all(&g.l().to_le_bytes())?;
    let mut buf = Vec::with_capacity(g.len() * 16);
    for k1 in -n / 2..n / 2 {
        for k2 in -n / 2..n / 2 {
            let c = field.coeff(k1, k2);
            buf.extend_from_slice(&c.re.to_le_bytes());
            buf.extend_from_slice(&c.im.to_le_bytes());
        }
    }
    out.write_all(&buf)?;
    Ok(())
}

pub fn read_dump<R: Read>(mut input: R) -> Result<SpectralField> {
    let mut head = [0u8; 20];
    input
        .read_exact(&mut head)
        .map_err(|e| Error::Dump(format!("header: {e}")))?;
    if &head[0..4] != MAGIC {
        return Err(Error::Dump("bad magic".into()));
    }
    let version = u32::from_le_bytes(head[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(Error::Dump(format!("unsupported version {version}")));
    }
    let n = u32::from_le_bytes(head[8..12].try_into().unwrap()) as usize;
    let l = f64::from_le_bytes(head[12..20].try_into().unwrap());
    let grid = Grid2D::new(n, l)?;
    let mut body = vec![0u8; grid.len() * 16];
    input
        .read_exact(&mut body)
        .map_err(|e| Error::Dump(format!("body: {e}")))?;
    let mut coeffs = vec![Complex64::default(); grid.len()];
    let half = n as i64 / 2;
    for (pos, chunk) in body.chunks_exact(16).enumerate() {
        let k1 = (pos / n) as i64 - half;
        let k2 = (pos % n) as i64 - half;
        let re = f64::from_le_bytes(chunk[0..8].try_into().unwrap());
        let im = f64::from_le_bytes(chunk[8..16].try_into().unwrap());
        coeffs[grid.index_of(k1, k2)] = Complex64::new(re, im);
    }
    Ok(SpectralField::from_raw(&grid, coeffs))
}
