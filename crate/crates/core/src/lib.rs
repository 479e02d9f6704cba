//! Gröbner bases, randomized saturation and Hilbert-function tools for
//! zero-dimensional polynomial systems over `F_p` and `Q`.

pub mod arith;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod groebner;
pub mod hilbert;
pub mod linalg;
pub mod poly;
pub mod problems;
pub mod saturate;

pub use error::{Error, Result};
