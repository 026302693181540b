//! Y-seed mutation sequences of cluster algebras: exact cluster
//! transformations, mutation networks and their Neumann-Zagier matrices,
//! tropical C-matrix dynamics, Jacobian determinant identities, gluing
//! equations and dilogarithms.

pub mod catalog;
pub mod cli;
pub mod cluster;
pub mod error;
pub mod field;
pub mod generate;
pub mod geometry;
pub mod io;
pub mod jacobian;
pub mod matrix;
pub mod network;
pub mod ratfun;
pub mod tropical;

pub use error::{Error, Result};
