//! Dirichlet eigenvalues of finite subsets of weighted networks, and numerical
//! checks of the universal eigenvalue inequalities they satisfy.
//!
//! The pipeline is: build a [`network::HostNetwork`] (directly, from JSON, from
//! a Cayley ball via [`cayley`], or at random via [`random`]), diagonalize it
//! with [`eigen::dirichlet_system`], then evaluate any checker in
//! [`inequality`]. [`experiment`] wires this into sweeps with CSV/JSON output.

pub mod cayley;
pub mod eigen;
pub mod error;
pub mod experiment;
pub mod inequality;
pub mod network;
pub mod random;

pub use error::{Error, Result};
