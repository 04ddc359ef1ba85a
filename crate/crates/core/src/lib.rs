pub mod boussinesq;
pub mod error;
pub mod fit;
pub mod harness;
pub mod littlewood_paley;
pub mod oscillatory;
pub mod profiles;
pub mod semigroup;
pub mod spectral;
pub mod sqg;
mod transport;

pub use error::{Error, Result};
