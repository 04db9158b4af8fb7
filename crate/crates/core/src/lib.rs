//! Supercharacter theories of parabolic contractions of GL(n), O(M) and Sp(M)
//! over odd prime fields, computed exactly.

pub mod cli;
pub mod contraction;
pub mod error;
pub mod grouptools;
pub mod matfq;
pub mod orbits;
pub mod roots;
pub mod rook;
pub mod scalars;
pub mod superchar;
pub mod verify;

pub use error::{Error, Result};
