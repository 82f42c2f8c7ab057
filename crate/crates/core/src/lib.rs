pub mod algebra;
pub mod approximation;
pub mod characters;
pub mod error;
pub mod lfunctions;
pub mod universality;

pub use error::{Error, Result};
