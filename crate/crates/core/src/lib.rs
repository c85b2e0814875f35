//! Quadratic algebras over explicit base rings: classification by
//! discriminant and parity, twisted binary quadratic forms, and Picard
//! groups of imaginary quadratic orders.

pub mod algebras;
pub mod cli;
pub mod error;
pub mod forms;
pub mod glue;
pub mod lattice;
pub mod picard;
pub mod quadtype;
pub mod ring;

pub use error::{Error, Result};
