pub mod chrono;
pub mod cli;
pub mod cone;
pub mod error;
pub mod extreal;
pub mod geometry;
pub mod homext;
pub mod hypernorm;
pub mod lorentz;
pub mod matrix;
pub mod mcp;
pub mod poset;
pub mod suite;

pub use error::{Error, Result};
pub use extreal::{rat, ExtNonneg, ExtSigned, Rational};
