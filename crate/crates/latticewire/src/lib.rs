//! Lattice coset coding simulator for the wiretap channel.
//!
//! The crate builds finite coset codebooks from low-dimensional lattices,
//! runs them through a software baseband link (pulse shaping, slow fading,
//! AWGN, synchronization, channel estimation, coset decoding) and measures
//! empirical reliability and confidentiality: bit error rates for the
//! legitimate receiver and conditional entropy of the secret given the
//! eavesdropper's observations.

pub mod cli;
pub mod config;
pub mod coset;
pub mod decode;
pub mod demo;
pub mod error;
pub mod image;
pub mod lattice;
pub mod metrics;
pub mod phy;
pub mod pipeline;

pub use error::{Error, Result};
pub use lattice::{BinaryCode, CodeName, CosetCodebook, SchemeId};
