//! Linear relations and the geometric and descriptor formulations of linear
//! port-Hamiltonian systems, with conversions between them.

pub mod cli;
pub mod error;
pub mod extension;
pub mod generate;
pub mod io;
pub mod phcore;
pub mod relations;
pub mod sim;
pub mod transforms;

pub use error::{Error, Result};
