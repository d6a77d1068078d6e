//! Spectral analysis of a family of PT-symmetric tridiagonal lattice
//! Hamiltonians H(a, z): reality domains and exceptional points of their
//! spectra, topology of the real spectral locus, Hermitian metrics
//! solving the intertwining relation H†Θ = ΘH, positivity domains,
//! perturbative (linearized) metrics with integer secular polynomials,
//! and the associated charge operator.
//!
//! The crate is organized bottom-up:
//!
//! * [`cmatrix`] — dense complex/real matrix containers.
//! * [`linalg`] — eigensolvers, SVD/nullspace, polynomial roots, bisection.
//! * [`lattice`] — the Hamiltonian family, parity, grid mapping.
//! * [`spectra`] — eigenvalue sweeps, exceptional points, reality intervals.
//! * [`topology`] — real-locus extraction, nesting patterns, enumeration.
//! * [`metric`] — intertwiner bases, closed forms, positivity, linearization.
//! * [`observables`] — observable bases and the charge operator.

// Subscript-style loops match the linear-algebra notation they implement,
// and `!(x > 0)` guards deliberately reject NaN parameters.
#![allow(clippy::needless_range_loop)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::manual_is_multiple_of)]

pub mod cmatrix;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod metric;
pub mod observables;
pub mod spectra;
pub mod topology;

pub use cmatrix::{C64, CMatrix, RMatrix};
pub use error::{Error, Result};
pub use lattice::{build_hamiltonian, build_parity, coupling_from_grid, GridSpec, HamiltonianSpec};
