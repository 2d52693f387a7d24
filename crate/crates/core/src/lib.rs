pub mod derived;
pub mod error;
pub mod linalg;
pub mod quiver;
pub mod random;
pub mod spectral;
pub mod weight;

pub use error::{Error, Result};
