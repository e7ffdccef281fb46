//! Numerical toolkit for the classification of elementary particles by
//! coadjoint orbits of the Poincare group and its 5D Kaluza-Klein-type
//! extensions, together with the induced spacetime connection, charged
//! particle motion and pointwise residual evaluators for the coupled
//! gravito-electromagnetic field equations.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the command
//! line live in the companion `kaluza-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod connection;
pub mod error;
pub mod fields;
pub mod groups;
pub mod hyperlin;
pub mod linalg;
pub mod momenta;

pub use error::{Error, Result};
