//! Periodic grids, FFTs, Fourier multipliers and discrete norms.

mod dump;
mod field;
mod grid;
mod multiplier;
mod norms;

pub use dump::{read_dump, write_dump};
pub use field::{from_physical_pair, to_physical_pair, SpectralField};
pub(crate) use field::dealias_in_place;
pub use grid::Grid2D;
pub use multiplier::{dispersion, Axis, Multiplier};
pub use norms::{l1, linf};
