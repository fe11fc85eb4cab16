//! Exact computations with open-closed homotopy algebras.

pub mod cli;
pub mod coalgebra;
pub mod deformation;
pub mod document;
pub mod error;
pub mod fixtures;
pub mod graded;
pub mod linalg;
pub mod structures;
pub mod transfer;
pub mod trees;

pub use error::{Error, Result};
