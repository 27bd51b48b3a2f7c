pub mod classify;
#[cfg(feature = "cli")]
pub mod cli;
pub mod curve;
pub mod error;
pub mod gaps;
pub mod local;
pub mod locus;
pub mod poly;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
