//! Rate estimation, code construction and frame error rate simulation for
//! polar-coded 8-ASK, on top of [`pcm_core`].

pub mod construct;
pub mod error;
pub mod fer;
pub mod parallel;
pub mod report;
pub mod spec_file;
pub mod tables;

pub use error::{Result, SimError};
