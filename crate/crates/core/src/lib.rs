pub mod cli;
pub mod complexity;
pub mod derivatives;
pub mod error;
pub mod model;
pub mod optimal_circuit;
pub mod oracle;
pub mod pip2d;
pub mod quadrature;
pub mod quench;

pub use error::{Error, Result};
