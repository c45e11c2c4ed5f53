//! State-vector simulation of two controlled quantum teleportation protocols
//! over a four-qubit cluster channel: a POVM-based scheme whose inconclusive
//! outcome destroys the input, and an information-preserving scheme whose
//! failures leave the input with the sender.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod protocols;
pub mod qcore;

pub use error::{Error, Result};
