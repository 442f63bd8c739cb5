//! Quantum scattering of a polarizable atom off a charged wire.
//!
//! The wire's field induces an attractive `-2αλ²/r²` potential in the plane
//! transverse to the wire. For each angular-momentum channel `m` with
//! `ν² = 4αλ²M − m² > 0` the radial Hamiltonian needs a self-adjoint
//! extension, labelled by a phase. This crate builds the per-extension
//! S-matrix, averages it over all extensions, and carries the result through
//! to absorption cross-sections and their classical limit, with an
//! independent numerical route alongside every closed form.

pub mod absorption;
pub mod classical;
pub mod extensions;
pub mod quadrature;
pub mod scenario;
pub mod specfun;
pub mod spectrum;

pub use num_complex::Complex64;

/// Complex scalar used throughout the crate.
pub type ComplexValue = Complex64;
