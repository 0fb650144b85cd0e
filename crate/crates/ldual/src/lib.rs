//! Langlands duality for characters and crystal bases of simple Lie
//! algebras, and exact checks of interpolating quantum group modules.

pub mod characters;
pub mod crystal;
pub mod error;
pub mod interpolating;
pub mod liealg;
pub mod qt_algebra;
pub mod sweep;
pub mod tableaux;

pub use error::{Error, Result};
