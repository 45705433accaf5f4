//! Numerical toolkit for co-recursive spectral polynomials in the tridiagonal
//! representation of quantum Hamiltonians.
//!
//! Changing the initial values `P_0 = 1`, `P_1 = αz − β` of the three-term
//! recursion of a solvable reference problem induces a short-range potential.
//! The crate evaluates the resulting polynomials, Green's functions, spectra,
//! wavefunctions and the induced potential in configuration space.

pub mod error;
pub mod greens;
pub mod potentials;
pub mod quadrature;
pub mod recursion;
pub mod repro;
pub mod specfun;
pub mod spectra;
pub mod systems;
pub mod tridiag;
pub mod wavefunctions;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
