//! Concentration of eigenfunction measures for one-dimensional Schrödinger
//! operators `−d²/dx² + V + W` with even single-well potentials.

pub mod eigensolver;
pub mod error;
pub mod interp;
pub mod measures;
pub mod orthopoly;
pub mod potential;
pub mod quad;
pub mod report;
pub mod special;
pub mod turning;
pub mod wkb;

pub use error::{Error, Result};
