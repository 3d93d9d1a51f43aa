//! Exact verification kernel for the twisted current algebra sl(2n)[u]^τ̃ and
//! the twisted Yangian of type D.

pub mod current;
pub mod error;
pub mod liealg;
pub mod phi;
pub mod relations;
pub mod report;
pub mod sample;
pub mod scalars;
pub mod suites;
pub mod yangian;

pub use error::{Result, TydError};
