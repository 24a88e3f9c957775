use alloc::vec::Vec;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::constraints::{rescale_f_initial, ConstraintSet};
use super::flow::{propagate, propagate_final, PropagateOptions};
use super::least_squares::{levenberg_marquardt, LevenbergMarquardtOptions};
use super::nelder_mead::{nelder_mead, NelderMeadOptions};
use crate::error::{Error, Result};
use crate::linalg::principal_generator;
use crate::matrix::{ComplexMatrix, HermitianOperator, UnitaryOperator};
use crate::ops::{gate_fidelity, global_phase, hs_inner_hermitian, traceless_part};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingOptions {
    /// Required gate infidelity `1 − |Tr(U_f† U(T))|/N`.
    pub tol: f64,
    /// RK4 steps per objective evaluation.
    pub search_steps: usize,
    /// Final re-verification uses `dt = T / verify_divisor`.
    pub verify_divisor: usize,
    /// Random starting points per duration seed, besides the geodesic one.
    pub restarts: usize,
    /// Objective evaluations of the coarse Nelder-Mead pass.
    pub max_evals: usize,
    /// Levenberg-Marquardt iterations of the joint `(F(0), T)` solve.
    pub lm_iters: usize,
    /// Number of initial durations, spread geometrically from the
    /// unconstrained geodesic time up to `max_duration_factor` times it.
    pub duration_seeds: usize,
    pub max_duration_factor: f64,
    pub seed: u64,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            search_steps: 100,
            verify_divisor: 10_000,
            restarts: 3,
            max_evals: 400,
            lm_iters: 40,
            duration_seeds: 6,
            max_duration_factor: 4.0,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShootingReport {
    pub success: bool,
    /// Normalized `F(0)`.
    pub f0: HermitianOperator,
    /// Coefficients of `F(0)` in [`su_basis`] before normalization.
    pub coefficients: Vec<f64>,
    pub duration: f64,
    /// Infidelity re-measured with the fine verification step.
    pub infidelity: f64,
    /// `χ` with `U(T) ≈ e^{iχ} U_f`.
    pub chi: f64,
    pub evaluations: usize,
}

/// Orthonormal basis of traceless Hermitian `N × N` matrices (generalized
/// Gell-Mann matrices scaled to `Tr(e_k²) = 1`).
pub fn su_basis(n: usize) -> Vec<HermitianOperator> {
    let mut out = Vec::with_capacity(n * n - 1);
    let s = 1.0 / 2f64.sqrt();
    for j in 0..n {
        for k in j + 1..n {
            let mut sym = ComplexMatrix::zeros(n);
            sym[(j, k)] = Complex64::new(s, 0.0);
            sym[(k, j)] = Complex64::new(s, 0.0);
            out.push(HermitianOperator::from_matrix_unchecked(sym));
            let mut anti = ComplexMatrix::zeros(n);
            anti[(j, k)] = Complex64::new(0.0, -s);
            anti[(k, j)] = Complex64::new(0.0, s);
            out.push(HermitianOperator::from_matrix_unchecked(anti));
        }
    }
    for l in 1..n {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut d = ComplexMatrix::zeros(n);
        for m in 0..l {
            d[(m, m)] = Complex64::new(norm, 0.0);
        }
        d[(l, l)] = Complex64::new(-(l as f64) * norm, 0.0);
        out.push(HermitianOperator::from_matrix_unchecked(d));
    }
    out
}

fn combine(basis: &[HermitianOperator], coeffs: &[f64]) -> HermitianOperator {
    let n = basis[0].dim();
    basis.iter().zip(coeffs).fold(HermitianOperator::zeros(n), |acc, (e, &c)| acc.add_scaled(e, c))
}

struct Search<'a> {
    target: &'a UnitaryOperator,
    constraints: &'a ConstraintSet,
    basis: Vec<HermitianOperator>,
    opts: ShootingOptions,
    evaluations: usize,
}

impl Search<'_> {
    fn final_unitary(&mut self, coeffs: &[f64], duration: f64) -> Option<UnitaryOperator> {
        self.evaluations += 1;
        let f0 = rescale_f_initial(&combine(&self.basis, coeffs), self.constraints).ok()?;
        propagate_final(&f0, self.constraints, duration, self.opts.search_steps).ok()
    }

    fn infidelity(&mut self, coeffs: &[f64], duration: f64) -> f64 {
        match self.final_unitary(coeffs, duration) {
            Some(u) => 1.0 - gate_fidelity(self.target, &u).unwrap_or(0.0),
            None => 1.0,
        }
    }

    /// Entries of `e^{−iχ} U_f† U(T) − 1` with the phase `χ` aligned to the trace.
    fn residual(&mut self, coeffs: &[f64], duration: f64) -> Option<Vec<f64>> {
        let u = self.final_unitary(coeffs, duration)?;
        let m = self.target.matrix().adjoint().matmul(u.matrix());
        let tr = m.trace();
        let phase = if tr.norm() > 0.0 { tr.conj() / tr.norm() } else { Complex64::new(1.0, 0.0) };
        let n = m.dim();
        let mut out = Vec::with_capacity(2 * n * n);
        for r in 0..n {
            for c in 0..n {
                let mut z = m[(r, c)] * phase;
                if r == c {
                    z -= 1.0;
                }
                out.push(z.re);
                out.push(z.im);
            }
        }
        Some(out)
    }

    fn success_level(&self) -> f64 {
        self.opts.tol * 0.25
    }

    /// Coarse Nelder-Mead over `F(0)` at the seed duration, then
    /// Levenberg-Marquardt on the residual with `T` as an extra unknown.
    /// Returns `(coefficients, T, infidelity)`.
    fn solve_from(&mut self, start: &[f64], duration: f64) -> (Vec<f64>, f64, f64) {
        let target = self.success_level();
        let opts = self.opts;
        let nm = nelder_mead(
            |c| self.infidelity(c, duration),
            start,
            NelderMeadOptions { max_evals: opts.max_evals, initial_step: 0.15, target, f_tol: 1e-15 },
        );
        if nm.value <= target {
            return (nm.x, duration, nm.value);
        }
        let dim = nm.x.len();
        let mut z = nm.x.clone();
        z.push(duration);
        let lm = levenberg_marquardt(
            |z| {
                let t = z[dim];
                if t > 0.0 && t.is_finite() {
                    self.residual(&z[..dim], t)
                } else {
                    None
                }
            },
            &z,
            LevenbergMarquardtOptions { max_iters: opts.lm_iters, target: 0.1 * target, fd_step: 1e-7 },
        );
        let t = lm.x[dim];
        let value = self.infidelity(&lm.x[..dim], t);
        if value < nm.value {
            (lm.x[..dim].to_vec(), t, value)
        } else {
            (nm.x, duration, nm.value)
        }
    }
}

/// Numeric search for the shortest `T` and an `F(0)` whose brachistochrone
/// flow reaches `U_f` up to a global phase.
///
/// Durations at which the flow hits the target are isolated, so `T` is solved
/// for together with `F(0)`: for each seed duration (ascending, starting at
/// the unconstrained geodesic time) and each start (geodesic generator plus
/// seeded random coefficients) a coarse Nelder-Mead pass over `F(0)` is
/// followed by Levenberg-Marquardt on `(F(0), T)`. The shortest converged
/// solution wins and is re-verified with a fine [`propagate`]. Seeds longer
/// than the best solution so far are skipped. Optimality is not certified.
/// Failure is reported, not raised.
pub fn shoot_for_target(
    target: &UnitaryOperator,
    constraints: &ConstraintSet,
    opts: ShootingOptions,
) -> Result<ShootingReport> {
    let n = target.dim();
    if let Some(g) = constraints.generators().first() {
        if g.dim() != n {
            return Err(Error::DimensionMismatch { left: g.dim(), right: n });
        }
    }
    let identity = UnitaryOperator::identity(n);
    if gate_fidelity(&identity, target)? >= 1.0 - 1e-12 {
        return Ok(ShootingReport {
            success: true,
            f0: HermitianOperator::zeros(n),
            coefficients: alloc::vec![0.0; n * n - 1],
            duration: 0.0,
            infidelity: 1.0 - gate_fidelity(&identity, target)?,
            chi: global_phase(&identity, target)?,
            evaluations: 0,
        });
    }

    let mut search = Search { target, constraints, basis: su_basis(n), opts, evaluations: 0 };
    let omega = constraints.omega();
    let generator = traceless_part(&principal_generator(target)?);
    let geodesic: Vec<f64> = search.basis.iter().map(|e| hs_inner_hermitian(e, &generator)).collect::<Result<_>>()?;
    let t_floor = (generator.trace_sq() / n as f64).sqrt() / omega;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let dim = search.basis.len();
    let seeds = opts.duration_seeds.max(1);
    let ratio = if seeds > 1 { opts.max_duration_factor.max(1.0).powf(1.0 / (seeds - 1) as f64) } else { 1.0 };

    // (coefficients, T, infidelity) of the best success, else the closest miss.
    let mut best_success: Option<(Vec<f64>, f64, f64)> = None;
    let mut closest: (Vec<f64>, f64, f64) = (geodesic.clone(), t_floor, f64::INFINITY);
    for k in 0..seeds {
        let duration = t_floor * ratio.powi(k as i32);
        if best_success.as_ref().is_some_and(|b| duration > b.1) {
            break;
        }
        let mut starts = alloc::vec![geodesic.clone()];
        for _ in 0..opts.restarts {
            starts.push((0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<f64>>());
        }
        for start in &starts {
            let (c, t, value) = search.solve_from(start, duration);
            if value <= search.success_level() {
                if best_success.as_ref().is_none_or(|b| t < b.1) {
                    best_success = Some((c, t, value));
                }
            } else if value < closest.2 {
                closest = (c, t, value);
            }
        }
    }

    match best_success {
        Some((c, t, _)) => finish(&mut search, c, t, true),
        None => {
            let (c, t, _) = closest;
            finish(&mut search, c, t, false)
        }
    }
}

fn finish(search: &mut Search<'_>, coeffs: Vec<f64>, duration: f64, candidate: bool) -> Result<ShootingReport> {
    let f0 = rescale_f_initial(&combine(&search.basis, &coeffs), search.constraints)?;
    let dt = duration / search.opts.verify_divisor.max(1) as f64;
    let traj = propagate(
        &f0,
        search.constraints,
        duration,
        dt,
        PropagateOptions { record_every: usize::MAX, ..Default::default() },
    )?;
    let u = &traj.final_state().ok_or(Error::EmptyTrajectory)?.u;
    let infidelity = 1.0 - gate_fidelity(search.target, u)?;
    Ok(ShootingReport {
        success: candidate && infidelity <= search.opts.tol,
        f0,
        coefficients: coeffs,
        duration,
        infidelity,
        chi: global_phase(search.target, u)?,
        evaluations: search.evaluations,
    })
}
