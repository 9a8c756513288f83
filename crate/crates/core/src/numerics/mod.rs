//! Self-contained numeric kernel: Hermitian eigendecomposition, traces of
//! matrix exponentials, GF(2) circuit enumeration, the modified Bessel
//! function I_1 and a seeded random stream.

pub mod bessel;
pub mod gf2;
pub mod matrix;
pub mod rng;

pub use bessel::bessel_i1;
pub use gf2::gf2_circuits;
pub use matrix::{householder_qr, offdiag_components, submatrix, CMatrix};
pub use rng::RandomStream;
