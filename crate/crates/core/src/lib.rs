pub mod cli;
pub mod engine;
pub mod error;
pub mod hamiltonian;
pub mod kernels;
pub mod numerics;
pub mod zeros;

pub use error::{Result, ZhlError};
