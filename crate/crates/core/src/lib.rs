pub mod criteria;
pub mod document;
pub mod error;
pub mod estimator;
pub mod fixtures;
pub mod invariants;
pub mod numkernel;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64;
