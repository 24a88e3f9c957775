//! Time-optimal realization of unitary operations under constrained Hamiltonians.
//!
//! The crate is `no_std` (it needs `alloc`) and carries the numerical core:
//!
//! - [`matrix`], [`linalg`], [`ops`] and [`pauli`]: dense complex operator algebra,
//!   Hilbert-Schmidt geometry on `U(N)`, matrix exponentials and Pauli strings.
//! - [`engine`]: the brachistochrone flow `F(t) = U(t) F(0) U(t)†` for a norm
//!   constraint plus linear homogeneous constraints, its diagnostics, the formal
//!   (time-ordered) solution and a numeric shooting search for arbitrary targets.
//! - [`heisenberg`]: the two-qubit anisotropic Heisenberg family, its optimal
//!   control waveforms and the closed-form block-diagonal propagator.
//! - [`gates`]: SWAP, 'QFT' and entangler targets, their optimal solutions, the
//!   integer-parameter search that selects them and independent verification.
//! - [`fast`]: `j`-qubit Pauli subspaces, commutation-closure checks and the
//!   three-qubit propagator for the free-one-qubit-operation model.
//!
//! Every operation is a pure function on immutable values.
#![no_std]

extern crate alloc;

pub mod engine;
pub mod error;
pub mod fast;
pub mod gates;
pub mod heisenberg;
pub mod linalg;
pub mod matrix;
pub mod ops;
pub mod pauli;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, HermitianOperator, UnitaryOperator};

pub use num_complex::Complex64;
