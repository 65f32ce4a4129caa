pub mod adversarial;
pub mod checks;
pub mod cli;
pub mod clusterers;
pub mod error;
pub mod evaluation;
pub mod graph;
pub mod graph_io;
pub mod hierarchy;
pub mod matching;
pub mod objectives;
pub mod oracle;

pub use error::{Error, Result};

#[cfg(test)]
mod testgen;
