//! Diagnostics for the quantum Monte Carlo sign problem of spin-1/2
//! Hamiltonians.
//!
//! The crate casts a Pauli-string Hamiltonian into permutation matrix
//! representation (a diagonal part plus off-diagonal generalized
//! permutations), walks the computational state graph to enumerate
//! fundamental cycles and their complex weights, and evaluates a family of
//! sign-problem functionals: the stoquasticity distance, the vanishing
//! geometric phase (VGP) indicator over cycle phases, the trace gap
//! f_eta = tr e^{eta |H_off|} - tr e^{-eta H_off}, and the exact average
//! sign. On top of that sit structural (non-spectral) VGP classifiers for
//! sparse and two-local models, a small series-expansion QMC engine with
//! divided-difference weights, random-basis statistics (Haar averages of
//! the bosonized trace and random-Pauli expectations), and a periodic
//! unit-cell optimization pipeline.

pub mod diagnostics;
pub mod error;
pub mod graph;
pub mod models;
pub mod numerics;
pub mod pauli;
pub mod pmr;
pub mod qmc;
pub mod randbasis;
pub mod report;
pub mod search;
pub mod structural;

pub use error::{Error, Result};

/// Largest spin count for dense (2^N-dimensional) computations.
pub const DENSE_CAP: usize = 12;
