use alloc::vec::Vec;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use num_complex::Complex64;

use super::constraints::{hamiltonian_from_f, ConstraintSet};
use crate::error::{Error, Result};
use crate::linalg::polar_unitary;
use crate::matrix::{times_minus_i, ComplexMatrix, HermitianOperator, UnitaryOperator};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagateOptions {
    /// Re-project `U` onto the unitary group every this many steps.
    pub reproject_every: Option<usize>,
    /// Keep every `record_every`-th step (the final step is always kept).
    pub record_every: usize,
}

impl Default for PropagateOptions {
    fn default() -> Self {
        Self { reproject_every: Some(100), record_every: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BrachistochroneState {
    pub t: f64,
    pub u: UnitaryOperator,
    /// `F(t) = U F(0) U†`.
    pub f: HermitianOperator,
    /// `H̃(t)`, the allowed part of `F(t)`.
    pub h: HermitianOperator,
}

/// Worst-case drifts over a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    /// `max ‖U†U − 1‖_max`.
    pub unitarity_error: f64,
    /// `max |Tr F(t)² − Tr F(0)²|`.
    pub trf2_drift: f64,
    /// `max |Tr H̃² − N ω²|`.
    pub norm_residual: f64,
    /// `max_j |Tr(g_j H̃)|`.
    pub linear_residual: f64,
    /// `None` with fewer than three samples.
    pub geodesic_residual: Option<f64>,
}

/// Per-sample values written to trajectory CSV rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleDiagnostics {
    pub unitarity_error: f64,
    pub trf2_drift: f64,
    /// `max(|Tr H̃² − N ω²|, max_j |Tr(g_j H̃)|)`.
    pub constraint_residual: f64,
    /// Undefined at the two end samples.
    pub geodesic_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<BrachistochroneState>,
    pub step: f64,
    pub constraints: ConstraintSet,
    pub diagnostics: Diagnostics,
}

impl Trajectory {
    /// Wraps samples and computes their diagnostics.
    pub fn from_samples(samples: Vec<BrachistochroneState>, step: f64, constraints: ConstraintSet) -> Result<Self> {
        let mut traj = Self { samples, step, constraints, diagnostics: Diagnostics::default() };
        traj.refresh_diagnostics()?;
        Ok(traj)
    }

    /// Recomputes [`Trajectory::diagnostics`] from the current samples.
    pub fn refresh_diagnostics(&mut self) -> Result<()> {
        let per = sample_diagnostics(self)?;
        let mut d = Diagnostics::default();
        for (s, p) in self.samples.iter().zip(&per) {
            d.unitarity_error = d.unitarity_error.max(p.unitarity_error);
            d.trf2_drift = d.trf2_drift.max(p.trf2_drift);
            d.norm_residual = d.norm_residual.max(self.constraints.norm_residual(&s.h));
            d.linear_residual = d.linear_residual.max(self.constraints.linear_residual(&s.h)?);
        }
        d.geodesic_residual = geodesic_residual(self).ok();
        self.diagnostics = d;
        Ok(())
    }

    pub fn final_state(&self) -> Option<&BrachistochroneState> {
        self.samples.last()
    }

    pub fn duration(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }
}

/// Fixed-step classical RK4 for `i dU/dt = H(t, U) U`.
///
/// `hamiltonian` returns `H` at `(t, U)`; `observer` sees every accepted step
/// (`step` counts from 1). Returns `U` at `t0 + duration`.
pub fn integrate_schrodinger<H, O>(
    u0: &ComplexMatrix,
    t0: f64,
    duration: f64,
    steps: usize,
    reproject_every: Option<usize>,
    mut hamiltonian: H,
    mut observer: O,
) -> Result<ComplexMatrix>
where
    H: FnMut(f64, &ComplexMatrix) -> Result<ComplexMatrix>,
    O: FnMut(usize, f64, &ComplexMatrix) -> Result<()>,
{
    let steps = steps.max(1);
    let h = duration / steps as f64;
    let half = Complex64::new(h / 2.0, 0.0);
    let full = Complex64::new(h, 0.0);
    let mut u = u0.clone();
    let mut rhs =
        |t: f64, u: &ComplexMatrix| -> Result<ComplexMatrix> { Ok(times_minus_i(&hamiltonian(t, u)?.matmul(u))) };
    for step in 1..=steps {
        let t = t0 + (step - 1) as f64 * h;
        let k1 = rhs(t, &u)?;
        let k2 = rhs(t + h / 2.0, &u.add_scaled(&k1, half))?;
        let k3 = rhs(t + h / 2.0, &u.add_scaled(&k2, half))?;
        let k4 = rhs(t + h, &u.add_scaled(&k3, full))?;
        let mut incr = k1;
        incr = incr.add_scaled(&k2, Complex64::new(2.0, 0.0));
        incr = incr.add_scaled(&k3, Complex64::new(2.0, 0.0));
        incr += &k4;
        u = u.add_scaled(&incr, Complex64::new(h / 6.0, 0.0));
        if !u.is_finite() {
            return Err(Error::BlowUp { step });
        }
        if let Some(every) = reproject_every {
            if every > 0 && step % every == 0 {
                u = polar_unitary(&u).map_err(|_| Error::BlowUp { step })?.into_matrix();
            }
        }
        observer(step, t0 + step as f64 * h, &u)?;
    }
    Ok(u)
}

fn step_count(duration: f64, dt: f64) -> Result<usize> {
    if !(duration.is_finite() && duration > 0.0) {
        return Err(Error::InvalidArgument(alloc::format!("duration must be positive, got {duration}")));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidArgument(alloc::format!("step must be positive, got {dt}")));
    }
    Ok(((duration / dt).round() as usize).max(1))
}

fn state_at(t: f64, u: &ComplexMatrix, f0: &HermitianOperator, c: &ConstraintSet) -> Result<BrachistochroneState> {
    let f = HermitianOperator::from_matrix_unchecked(f0.matrix().conjugate_by(u));
    let h = c.allowed_part(&f)?;
    Ok(BrachistochroneState { t, u: UnitaryOperator::from_matrix_unchecked(u.clone()), f, h })
}

/// Integrates the brachistochrone flow from `U(0) = 1`.
///
/// At every RK4 stage the Hamiltonian is the allowed part of `U F(0) U†`;
/// `F(0)` should already be normalized with [`super::rescale_f_initial`].
/// The step is adjusted to `T / round(T / dt)` so the last sample lands on `T`.
pub fn propagate(
    f0: &HermitianOperator,
    c: &ConstraintSet,
    duration: f64,
    dt: f64,
    opts: PropagateOptions,
) -> Result<Trajectory> {
    hamiltonian_from_f(f0, c)?;
    let steps = step_count(duration, dt)?;
    let h = duration / steps as f64;
    let n = f0.dim();
    let record_every = opts.record_every.max(1);

    let mut samples = Vec::with_capacity(steps / record_every + 2);
    samples.push(state_at(0.0, &ComplexMatrix::identity(n), f0, c)?);
    integrate_schrodinger(
        &ComplexMatrix::identity(n),
        0.0,
        duration,
        steps,
        opts.reproject_every,
        |_, u| {
            Ok(c.allowed_part(&HermitianOperator::from_matrix_unchecked(f0.matrix().conjugate_by(u)))?.into_matrix())
        },
        |step, t, u| {
            if step % record_every == 0 || step == steps {
                samples.push(state_at(t, u, f0, c)?);
            }
            Ok(())
        },
    )?;
    Trajectory::from_samples(samples, h * record_every as f64, c.clone())
}

/// Final `U(T)` of the flow without recording samples.
///
/// Same scheme as [`propagate`] without re-projection, on preallocated
/// buffers; this is the inner loop of the shooting search.
pub fn propagate_final(
    f0: &HermitianOperator,
    c: &ConstraintSet,
    duration: f64,
    steps: usize,
) -> Result<UnitaryOperator> {
    hamiltonian_from_f(f0, c)?;
    FlowKernel::new(f0, c).final_unitary(duration, steps)
}

/// Allocation-free RK4 for `dU/dt = −i H̃(U) U`, `H̃(U)` the allowed part of `U F₀ U†`.
struct FlowKernel {
    n: usize,
    f0: Vec<Complex64>,
    generators: Vec<Vec<Complex64>>,
    scratch: Vec<Complex64>,
    f: Vec<Complex64>,
}

impl FlowKernel {
    fn new(f0: &HermitianOperator, c: &ConstraintSet) -> Self {
        let n = f0.dim();
        Self {
            n,
            f0: f0.matrix().as_slice().to_vec(),
            generators: c.generators().iter().map(|g| g.matrix().as_slice().to_vec()).collect(),
            scratch: alloc::vec![Complex64::default(); n * n],
            f: alloc::vec![Complex64::default(); n * n],
        }
    }

    /// `out = −i H̃(u) u`.
    fn rhs(&mut self, u: &[Complex64], out: &mut [Complex64]) {
        let n = self.n;
        let zero = Complex64::default();
        // scratch = u F0
        for r in 0..n {
            for col in 0..n {
                let mut acc = zero;
                for k in 0..n {
                    acc += u[r * n + k] * self.f0[k * n + col];
                }
                self.scratch[r * n + col] = acc;
            }
        }
        // f = scratch u†
        for r in 0..n {
            for col in 0..n {
                let mut acc = zero;
                for k in 0..n {
                    acc += self.scratch[r * n + k] * u[col * n + k].conj();
                }
                self.f[r * n + col] = acc;
            }
        }
        for g in &self.generators {
            let overlap: f64 = g.iter().zip(&self.f).map(|(a, b)| (a.conj() * b).re).sum();
            for (fv, gv) in self.f.iter_mut().zip(g) {
                *fv -= gv * overlap;
            }
        }
        // out = −i f u
        for r in 0..n {
            for col in 0..n {
                let mut acc = zero;
                for k in 0..n {
                    acc += self.f[r * n + k] * u[k * n + col];
                }
                out[r * n + col] = Complex64::new(acc.im, -acc.re);
            }
        }
    }

    fn final_unitary(&mut self, duration: f64, steps: usize) -> Result<UnitaryOperator> {
        let n = self.n;
        let steps = steps.max(1);
        let h = duration / steps as f64;
        let len = n * n;
        let mut u = ComplexMatrix::identity(n).as_slice().to_vec();
        let mut stage = alloc::vec![Complex64::default(); len];
        let mut k = alloc::vec![Complex64::default(); len];
        let mut acc = alloc::vec![Complex64::default(); len];
        for step in 1..=steps {
            self.rhs(&u, &mut k);
            for i in 0..len {
                acc[i] = k[i];
                stage[i] = u[i] + k[i] * (h / 2.0);
            }
            self.rhs(&stage, &mut k);
            for i in 0..len {
                acc[i] += k[i] * 2.0;
                stage[i] = u[i] + k[i] * (h / 2.0);
            }
            self.rhs(&stage, &mut k);
            for i in 0..len {
                acc[i] += k[i] * 2.0;
                stage[i] = u[i] + k[i] * h;
            }
            self.rhs(&stage, &mut k);
            for i in 0..len {
                u[i] += (acc[i] + k[i]) * (h / 6.0);
            }
            if !u.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::BlowUp { step });
            }
        }
        Ok(UnitaryOperator::from_matrix_unchecked(ComplexMatrix::from_vec(n, u)))
    }
}

fn trace_power(f: &ComplexMatrix, m: usize) -> Complex64 {
    let mut p = f.clone();
    for _ in 1..m {
        p = p.matmul(f);
    }
    p.trace()
}

/// `max_t |Tr F(t)^m − Tr F(0)^m|`.
pub fn conservation_drift(traj: &Trajectory, m: usize) -> Result<f64> {
    let first = traj.samples.first().ok_or(Error::EmptyTrajectory)?;
    let n = first.f.dim();
    if m == 0 || m > n {
        return Err(Error::InvalidArgument(alloc::format!("power must be in 1..={n}, got {m}")));
    }
    let reference = trace_power(first.f.matrix(), m);
    Ok(traj.samples.iter().map(|s| (trace_power(s.f.matrix(), m) - reference).norm()).fold(0.0, f64::max))
}

/// Norm of `d/dt[(1 − P_1)(U̇U†)]` at every interior sample.
///
/// `U̇U†` is estimated between consecutive samples as
/// `(U_{k+1} − U_k)(U_{k+1} + U_k)† / (2Δt)`, which is exactly constant for a
/// constant Hamiltonian, so the residual of a geodesic is pure roundoff.
pub fn geodesic_series(traj: &Trajectory) -> Result<Vec<f64>> {
    let s = &traj.samples;
    if s.len() < 3 {
        return Err(Error::TooFewSamples { need: 3, got: s.len() });
    }
    let n = s[0].u.dim();
    let id = ComplexMatrix::identity(n);
    let mids: Vec<ComplexMatrix> = s
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0].u.matrix(), w[1].u.matrix());
            let dt = w[1].t - w[0].t;
            let g = (b - a).matmul(&(b + a).adjoint()).scale_real(0.5 / dt);
            let tr = g.trace() / n as f64;
            g.add_scaled(&id, -tr)
        })
        .collect();
    Ok((1..s.len() - 1)
        .map(|k| {
            let dt = (s[k + 1].t - s[k - 1].t) / 2.0;
            (&mids[k] - &mids[k - 1]).max_abs() / dt
        })
        .collect())
}

/// Largest [`geodesic_series`] value; near zero exactly for constant-H evolution.
pub fn geodesic_residual(traj: &Trajectory) -> Result<f64> {
    Ok(geodesic_series(traj)?.into_iter().fold(0.0, f64::max))
}

pub fn sample_diagnostics(traj: &Trajectory) -> Result<Vec<SampleDiagnostics>> {
    let first = traj.samples.first().ok_or(Error::EmptyTrajectory)?;
    let tr2_0 = first.f.trace_sq();
    let geo = geodesic_series(traj).ok();
    let last = traj.samples.len() - 1;
    traj.samples
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let norm = traj.constraints.norm_residual(&s.h);
            let lin = traj.constraints.linear_residual(&s.h)?;
            Ok(SampleDiagnostics {
                unitarity_error: s.u.matrix().unitarity_residual(),
                trf2_drift: (s.f.trace_sq() - tr2_0).abs(),
                constraint_residual: norm.max(lin),
                geodesic_residual: match &geo {
                    Some(g) if k > 0 && k < last => Some(g[k - 1]),
                    _ => None,
                },
            })
        })
        .collect()
}
