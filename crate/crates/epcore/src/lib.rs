//! Small open quantum systems described by complex-symmetric effective
//! Hamiltonians.
//!
//! The model is a set of `N` levels with parameter-dependent real energies
//! `e_i(a)` and fixed decay widths, coupled either pairwise (`N = 2`) or
//! through a distinguished hub level (star topology, `N > 2`).  The crate
//! builds the non-Hermitian matrix, diagonalizes it with a complex-orthogonal
//! Jacobi method, tracks eigenvalue trajectories across parameter sweeps,
//! locates exceptional points where two eigenstates coalesce, and evaluates
//! two-resonance scattering cross sections.
//!
//! Everything here is `no_std` + `alloc`; file formats and the command line
//! front end live in the companion `eplab` crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod epfinder;
pub mod matrix;
pub mod model;
pub mod scattering;
pub mod spectral;
pub mod sweep;

pub use num_complex::Complex64;
