//! The brachistochrone flow for a norm constraint plus linear homogeneous
//! constraints `Tr(g_j H̃) = 0`.
//!
//! With the multiplier of the norm constraint fixed to one, `F = H̃ + F'` where
//! `F'` lies in the span of the forbidden generators. `F` evolves by conjugation,
//! `F(t) = U(t) F(0) U(t)†`, and the physical Hamiltonian is recovered as the
//! allowed part of `F(t)`.

mod constraints;
mod flow;
mod formal;
mod least_squares;
mod nelder_mead;
mod shooting;

pub use constraints::{hamiltonian_from_f, rescale_f_initial, ConstraintSet};
pub use flow::{
    conservation_drift, geodesic_residual, geodesic_series, integrate_schrodinger, propagate, propagate_final,
    sample_diagnostics, BrachistochroneState, Diagnostics, PropagateOptions, SampleDiagnostics, Trajectory,
};
pub use formal::formal_solution_unitary;
pub use least_squares::{levenberg_marquardt, LeastSquaresResult, LevenbergMarquardtOptions};
pub use nelder_mead::{nelder_mead, NelderMeadOptions, NelderMeadResult};
pub use shooting::{shoot_for_target, su_basis, ShootingOptions, ShootingReport};
