pub mod entropy;
pub mod error;
pub mod ext_real;
pub mod harness;
pub mod lct;
pub mod linalg;
pub mod states;
pub mod symplectic;

pub use error::{Error, Result};
pub use ext_real::ExtReal;
