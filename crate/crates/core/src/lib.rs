//! Kernels for checking identities about truncated Eisenstein integrals,
//! Siegel theta functions of the (2,1) lattice and the Petersson norm of Δ.

pub mod borcherds;
pub mod eisenstein;
pub mod error;
pub mod hdomain;
pub mod qspace;
pub mod quad;
pub mod specfun;
pub mod theta;
pub mod verify;

pub use error::{Error, Result};
