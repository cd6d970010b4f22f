//! Exact twisted vertex operator representations of A-D-E root lattices.

pub mod affine;
pub mod charq;
pub mod cli;
pub mod dist;
pub mod error;
pub mod fock;
pub mod groupalg;
pub mod lattice;
pub mod rep;
pub mod scalar;

pub use error::{Error, Result};
