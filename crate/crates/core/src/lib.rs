//! Gradient methods under restricted Lipschitz and restricted strong
//! convexity assumptions, numerical certification of their constants and
//! rate bounds, and augmented-ℓ1 sparse recovery by linearized Bregman.

pub mod augl1;
pub mod certify;
pub mod cli;
mod error;
pub mod numkit;
pub mod oracles;
pub mod solvers;

pub use error::{Error, Result};
