pub mod analysis;
pub mod config;
pub mod error;
pub mod flow;
pub mod grid;
pub mod harness;
pub mod pml;
pub mod probe;
pub mod run;
pub mod snapshot;
pub mod solver;

pub use error::{Error, Result};
