pub mod counting;
pub mod error;
pub mod experiments;
pub mod generators;
pub mod geometry;
pub mod graph;
pub mod hull;
pub mod io;
pub mod pipeline;
pub mod stats;

pub use error::{Error, Result};
