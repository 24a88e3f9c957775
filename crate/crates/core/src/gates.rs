//! Target gates, their time-optimal Heisenberg-model solutions and the
//! integer-parameter search that selects among the solution branches.
//!
//! Every solution family is indexed by integers `(m, n, p, q, r)` coming from
//! the `2π` ambiguities in matching the closed-form propagator to the target.
//! Each family member has a duration `ωT` from a quadratic form in the
//! integers; [`integer_search`] enumerates a box, keeps members whose
//! closed-form `U(T)` actually equals the target up to phase, and returns the
//! fastest.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use crate::engine::{conservation_drift, geodesic_residual, integrate_schrodinger, BrachistochroneState, Trajectory};
use crate::error::{Error, Result};
use crate::heisenberg::{alphas, closed_form_unitary, hamiltonian_at, heisenberg_constraints, ModelParameters};
use crate::matrix::{ComplexMatrix, HermitianOperator, UnitaryOperator};
use crate::ops::{gate_fidelity, global_phase};

/// Candidates must reach the target with at least this fidelity.
pub const FEASIBILITY_FIDELITY: f64 = 1.0 - 1e-8;
/// Pass thresholds of [`verify`].
pub const MAX_INFIDELITY: f64 = 1e-6;
pub const MAX_CONSTRAINT_RESIDUAL: f64 = 1e-9;
/// Below this the trajectory counts as a geodesic.
pub const GEODESIC_THRESHOLD: f64 = 1e-6;
/// Default number of RK4 steps over `[0, T]` in [`verify`].
pub const DEFAULT_DT_DIVISOR: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    Swap,
    QftPrime,
    Entangler,
    Custom,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::Swap => "swap",
            GateKind::QftPrime => "qft-prime",
            GateKind::Entangler => "entangler",
            GateKind::Custom => "custom",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "swap" => Ok(GateKind::Swap),
            "qft-prime" | "qft_prime" => Ok(GateKind::QftPrime),
            "entangler" => Ok(GateKind::Entangler),
            "custom" => Ok(GateKind::Custom),
            other => Err(Error::Parse(alloc::format!("unknown gate '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateTarget {
    pub kind: GateKind,
    pub matrix: UnitaryOperator,
    /// Entangler angle.
    pub phi: Option<f64>,
}

impl GateTarget {
    pub fn custom(matrix: UnitaryOperator) -> Self {
        Self { kind: GateKind::Custom, matrix, phi: None }
    }
}

fn real_unitary(rows: &[&[f64]]) -> UnitaryOperator {
    UnitaryOperator::from_matrix_unchecked(ComplexMatrix::from_real_rows(rows).expect("4x4 literal"))
}

const SWAP_ROWS: [[f64; 4]; 4] =
    [[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]];

pub fn target_swap() -> GateTarget {
    let rows: Vec<&[f64]> = SWAP_ROWS.iter().map(|r| &r[..]).collect();
    GateTarget { kind: GateKind::Swap, matrix: real_unitary(&rows), phi: None }
}

/// SWAP with an extra `i` on `|11⟩`; conjugating by a Hadamard on qubit 1
/// gives the two-qubit quantum Fourier transform.
pub fn target_qft_prime() -> GateTarget {
    let mut m = target_swap().matrix.into_matrix();
    m[(3, 3)] = Complex64::new(0.0, 1.0);
    GateTarget { kind: GateKind::QftPrime, matrix: UnitaryOperator::from_matrix_unchecked(m), phi: None }
}

/// Rotates `|00⟩` toward `−|11⟩` by `φ ∈ [0, π]`.
pub fn target_entangler(phi: f64) -> Result<GateTarget> {
    if !(0.0..=PI).contains(&phi) {
        return Err(Error::AngleOutOfRange(phi));
    }
    let (s, c) = phi.sin_cos();
    let matrix = real_unitary(&[&[c, 0.0, 0.0, s], &[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0], &[-s, 0.0, 0.0, c]]);
    Ok(GateTarget { kind: GateKind::Entangler, matrix, phi: Some(phi) })
}

/// `W ⊗ 1`, a Hadamard on qubit 1.
pub fn hadamard_on_first() -> UnitaryOperator {
    let h = FRAC_1_SQRT_2;
    real_unitary(&[&[h, 0.0, h, 0.0], &[0.0, h, 0.0, h], &[h, 0.0, -h, 0.0], &[0.0, h, 0.0, -h]])
}

/// `|x⟩ ↦ ½ Σ_y e^{πixy/2} |y⟩`.
pub fn qft_two_qubit() -> UnitaryOperator {
    let mut m = ComplexMatrix::zeros(4);
    for x in 0..4 {
        for y in 0..4 {
            m[(x, y)] = Complex64::from_polar(0.5, PI * (x * y) as f64 / 2.0);
        }
    }
    UnitaryOperator::from_matrix_unchecked(m)
}

/// Von Neumann entropy (bits) of one qubit of a two-qubit pure state.
pub fn entanglement_entropy(state: &[Complex64]) -> Result<f64> {
    if state.len() != 4 {
        return Err(Error::InvalidArgument(alloc::format!("need a two-qubit state, got {} amplitudes", state.len())));
    }
    let norm: f64 = state.iter().map(|a| a.norm_sqr()).sum();
    // ρ_A = M M† with M[a][b] = ψ_{ab}.
    let (a, b, c, d) = (state[0], state[1], state[2], state[3]);
    let r00 = (a.norm_sqr() + b.norm_sqr()) / norm;
    let r11 = (c.norm_sqr() + d.norm_sqr()) / norm;
    let r01 = (a * c.conj() + b * d.conj()) / norm;
    let disc = ((r00 - r11).powi(2) + 4.0 * r01.norm_sqr()).sqrt();
    let entropy = [0.5 * (r00 + r11 + disc), 0.5 * (r00 + r11 - disc)]
        .iter()
        .filter(|&&l| l > 1e-300)
        .map(|&l| -l * l.log2())
        .sum();
    Ok(entropy)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct IntegerTuple {
    pub m: i64,
    pub n: i64,
    pub p: i64,
    pub q: i64,
    pub r: i64,
}

impl IntegerTuple {
    pub const fn new(m: i64, n: i64, p: i64, q: i64, r: i64) -> Self {
        Self { m, n, p, q, r }
    }

    /// Smaller magnitudes first, then non-negative entries before negative ones.
    fn tie_key(&self) -> ([u64; 5], [bool; 5]) {
        let v = [self.m, self.n, self.p, self.q, self.r];
        (v.map(|x| x.unsigned_abs()), v.map(|x| x < 0))
    }
}

impl fmt::Display for IntegerTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m={}, n={}, p={}, q={}, r={})", self.m, self.n, self.p, self.q, self.r)
    }
}

/// How the optimal Hamiltonian depends on time.
#[derive(Debug, Clone, PartialEq)]
pub enum HamiltonianDesc {
    Constant(HermitianOperator),
    /// `H(t) = sign·√2ω [[−cos μ, 0, 0, sin μ], 0, 0, [sin μ, 0, 0, cos μ]]`
    /// with `μ(t) = μ₀ + 2γ₊t`.
    Entangler {
        mu0: f64,
        gamma_plus: f64,
        sign: i8,
    },
    /// General member of the control family; evaluate from the parameters.
    Controls,
}

/// Outcome of [`verify`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verification {
    pub infidelity: f64,
    /// `χ` with `U(T) ≈ e^{iχ} U_f`.
    pub chi: f64,
    /// `max(norm_residual, linear_residual)`.
    pub constraint_residual: f64,
    /// `max_t |Tr H(t)² − 4ω²|`.
    pub norm_residual: f64,
    /// `max_t max_j |Tr(g_j H(t))|`.
    pub linear_residual: f64,
    pub geodesic_residual: f64,
    pub trf2_drift: f64,
    pub unitarity_error: f64,
    /// `max_t ‖H(t) − allowed part of U(t) F(0) U(t)†‖`: how far the driven
    /// evolution is from a brachistochrone.
    pub brachistochrone_residual: f64,
    pub geodesic: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisResult {
    pub target: GateTarget,
    pub params: ModelParameters,
    /// `T`, in units of `1/ω`.
    pub duration: f64,
    pub chi: f64,
    pub tuple: IntegerTuple,
    pub hamiltonian: HamiltonianDesc,
    pub verification: Verification,
}

impl SynthesisResult {
    pub fn hamiltonian_at(&self, t: f64) -> HermitianOperator {
        hamiltonian_at(&self.params, t)
    }

    pub fn omega_t(&self) -> f64 {
        self.params.omega * self.duration
    }
}

/// A family member: parameters and duration, before the fidelity filter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub tuple: IntegerTuple,
    pub params: ModelParameters,
    pub duration: f64,
    /// Closed-form gate fidelity at `T`.
    pub fidelity: f64,
}

impl Candidate {
    pub fn feasible(&self) -> bool {
        self.fidelity >= FEASIBILITY_FIDELITY
    }
}

fn swap_member(omega: f64, k: IntegerTuple) -> Option<(ModelParameters, f64)> {
    let (p, q, d) = (k.p as f64, k.q as f64, (k.m - k.n) as f64);
    let jz_term = 1.0 - 2.0 * (p + q) - 4.0 * d;
    let obj = 2.0 * (1.0 + 2.0 * p).powi(2) + jz_term.powi(2);
    let t = PI * obj.sqrt() / (4.0 * omega);
    let params = ModelParameters {
        b0_minus: PI / 2.0 * (1.0 + 2.0 * p) / t,
        psi_minus: PI / 4.0 * (1.0 + 2.0 * q),
        jz: -PI / 4.0 * jz_term / t,
        omega,
        ..Default::default()
    };
    Some((params, t))
}

fn qft_member(omega: f64, k: IntegerTuple) -> Option<(ModelParameters, f64)> {
    let (p, q, r, d) = (k.p as f64, k.q as f64, k.r as f64, (k.m - k.n) as f64);
    let jz_term = 1.0 - 4.0 * (p + q) - 8.0 * d;
    let obj = 8.0 * (1.0 + 2.0 * p).powi(2) + jz_term.powi(2) + 2.0 * (1.0 + 4.0 * r).powi(2);
    let t = PI * obj.sqrt() / (8.0 * omega);
    let sign = if k.r.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let params = ModelParameters {
        b0_plus: sign * PI / 4.0 * (1.0 + 4.0 * r) / t,
        b0_minus: PI / 2.0 * (1.0 + 2.0 * p) / t,
        psi_plus: PI * r / 2.0,
        psi_minus: PI / 4.0 * (1.0 + 2.0 * q),
        jz: -PI / 8.0 * jz_term / t,
        omega,
        ..Default::default()
    };
    Some((params, t))
}

/// `shift` is `q + x`. The consistent reading; see the tests for the
/// alternative `q − x`, which fails the fidelity filter.
fn entangler_member_shifted(omega: f64, k: IntegerTuple, shift: f64) -> Option<(ModelParameters, f64)> {
    let (p, d) = (k.p as f64, (k.m - k.n) as f64);
    let radicand = p * p - shift * shift;
    if radicand < 0.0 {
        return None;
    }
    let obj = 2.0 * radicand + d * d;
    if obj <= 0.0 {
        return None;
    }
    let t = PI * obj.sqrt() / (2.0 * omega);
    let sign = if k.r.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let params = ModelParameters {
        b0_plus: sign * PI * radicand.sqrt() / t,
        gamma_plus: PI * shift / t,
        jz: PI / 2.0 * d / t,
        omega,
        ..Default::default()
    };
    Some((params, t))
}

fn entangler_member(omega: f64, x: f64, k: IntegerTuple) -> Option<(ModelParameters, f64)> {
    entangler_member_shifted(omega, k, k.q as f64 + x)
}

fn check_omega(omega: f64) -> Result<()> {
    if omega.is_finite() && omega > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(alloc::format!("omega must be positive, got {omega}")))
    }
}

fn entangler_x(target: &GateTarget) -> Result<f64> {
    let phi = target.phi.ok_or_else(|| Error::InvalidArgument("entangler target without angle".to_string()))?;
    if phi == 0.0 {
        return Err(Error::IdentityTarget);
    }
    if !(0.0..=PI).contains(&phi) {
        return Err(Error::AngleOutOfRange(phi));
    }
    Ok(phi / PI)
}

fn member(target: &GateTarget, omega: f64, k: IntegerTuple) -> Result<Option<(ModelParameters, f64)>> {
    Ok(match target.kind {
        GateKind::Swap => swap_member(omega, k),
        GateKind::QftPrime => qft_member(omega, k),
        GateKind::Entangler => entangler_member(omega, entangler_x(target)?, k),
        GateKind::Custom => {
            return Err(Error::InvalidArgument("integer search needs a named target".to_string()));
        }
    })
}

fn candidate(target: &GateTarget, omega: f64, k: IntegerTuple) -> Result<Option<Candidate>> {
    let Some((params, duration)) = member(target, omega, k)? else {
        return Ok(None);
    };
    let fidelity = gate_fidelity(&target.matrix, &closed_form_unitary(&params, duration))?;
    Ok(Some(Candidate { tuple: k, params, duration, fidelity }))
}

/// Every family member with all integers in `[−bounds, bounds]`. `r` only
/// enters the 'QFT' and entangler families; it is fixed to 0 for SWAP.
pub fn enumerate_candidates(target: &GateTarget, omega: f64, bounds: u32) -> Result<Vec<Candidate>> {
    check_omega(omega)?;
    let b = i64::from(bounds);
    let r_range = if target.kind == GateKind::Swap { 0..=0 } else { -b..=b };
    let mut out = Vec::new();
    for m in -b..=b {
        for n in -b..=b {
            for p in -b..=b {
                for q in -b..=b {
                    for r in r_range.clone() {
                        if let Some(c) = candidate(target, omega, IntegerTuple::new(m, n, p, q, r))? {
                            out.push(c);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Fastest feasible candidate (see [`enumerate_candidates`]). Ties within
/// `1e−12` in `ωT` go to the lexicographically smallest
/// `(|m|, |n|, |p|, |q|, |r|)`.
pub fn integer_search(target: &GateTarget, omega: f64, bounds: u32) -> Result<SynthesisResult> {
    let all = enumerate_candidates(target, omega, bounds)?;
    let better = |a: &Candidate, b: &Candidate| {
        let (ta, tb) = (a.duration * omega, b.duration * omega);
        if (ta - tb).abs() <= 1e-12 {
            a.tuple.tie_key() < b.tuple.tie_key()
        } else {
            ta < tb
        }
    };
    let mut best: Option<&Candidate> = None;
    for c in all.iter().filter(|c| c.feasible()) {
        if best.is_none_or(|b| better(c, b)) {
            best = Some(c);
        }
    }
    match best {
        Some(c) => assemble(target.clone(), c.params, c.duration, c.tuple),
        None => {
            let closest = all.iter().max_by(|a, b| a.fidelity.total_cmp(&b.fidelity));
            let detail = match closest {
                Some(c) => alloc::format!(
                    "best infeasible candidate {} with omega*T = {} and fidelity {}",
                    c.tuple,
                    c.duration * omega,
                    c.fidelity
                ),
                None => String::from("no family member exists in bounds"),
            };
            Err(Error::NoFeasibleTuple(detail))
        }
    }
}

fn describe(params: &ModelParameters) -> HamiltonianDesc {
    if params.gamma_plus == 0.0 && params.gamma_minus == 0.0 {
        return HamiltonianDesc::Constant(hamiltonian_at(params, 0.0));
    }
    let amplitude = 2f64.sqrt() * params.omega;
    let entangler_shape = params.b0_minus == 0.0
        && params.jz == 0.0
        && params.gamma_minus == 0.0
        && (params.b0_plus.abs() - amplitude).abs() <= 1e-12 * amplitude;
    if entangler_shape {
        HamiltonianDesc::Entangler {
            mu0: 2.0 * params.psi_plus,
            gamma_plus: params.gamma_plus,
            sign: if params.b0_plus > 0.0 { -1 } else { 1 },
        }
    } else {
        HamiltonianDesc::Controls
    }
}

fn assemble(
    target: GateTarget,
    params: ModelParameters,
    duration: f64,
    tuple: IntegerTuple,
) -> Result<SynthesisResult> {
    let chi = global_phase(&target.matrix, &closed_form_unitary(&params, duration))?;
    let mut result = SynthesisResult {
        target,
        params,
        duration,
        chi,
        tuple,
        hamiltonian: describe(&params),
        verification: Verification::default(),
    };
    result.verification = verify(&result, DEFAULT_DT_DIVISOR)?;
    Ok(result)
}

/// Optimal SWAP: `ωT = √3π/4`, constant `H`, `χ = −π/4`.
pub fn solve_swap(omega: f64) -> Result<SynthesisResult> {
    check_omega(omega)?;
    let tuple = IntegerTuple::default();
    let (params, duration) = swap_member(omega, tuple).expect("always defined");
    assemble(target_swap(), params, duration, tuple)
}

/// Optimal 'QFT': `ωT = √11π/8`, constant `H`, `χ = −3π/8`.
pub fn solve_qft_prime(omega: f64) -> Result<SynthesisResult> {
    check_omega(omega)?;
    let tuple = IntegerTuple::default();
    let (params, duration) = qft_member(omega, tuple).expect("always defined");
    assemble(target_qft_prime(), params, duration, tuple)
}

/// The `m = n`, `p = 1`, `q = −1` entangler branch:
/// `ωT = π√(x(1 − x/2))`, `γ₊ = ω(x − 1)/√(x(1 − x/2))`, `x = φ/π`.
///
/// This branch is time-optimal for `φ ≤ 3π/4`; above that a branch with
/// `|m − n| = 1` is faster, which [`integer_search`] reports.
pub fn solve_entangler(omega: f64, phi: f64) -> Result<SynthesisResult> {
    check_omega(omega)?;
    if phi == 0.0 {
        return Err(Error::IdentityTarget);
    }
    let target = target_entangler(phi)?;
    let tuple = IntegerTuple::new(0, 0, 1, -1, 0);
    let (params, duration) = entangler_member(omega, phi / PI, tuple).expect("radicand x(2 − x) ≥ 0");
    assemble(target, params, duration, tuple)
}

impl Default for Verification {
    fn default() -> Self {
        Self {
            infidelity: f64::NAN,
            chi: f64::NAN,
            constraint_residual: f64::NAN,
            norm_residual: f64::NAN,
            linear_residual: f64::NAN,
            geodesic_residual: f64::NAN,
            trf2_drift: f64::NAN,
            unitarity_error: f64::NAN,
            brachistochrone_residual: f64::NAN,
            geodesic: false,
            passed: false,
        }
    }
}

/// Integrates `i dU/dt = H(t) U` with the result's explicit controls over
/// `dt_divisor` RK4 steps and measures fidelity, constraints, geodesic
/// residual and the `Tr F²` drift of `F(t) = U F(0) U†`.
///
/// Failures are reported in the record; errors only signal malformed input.
pub fn verify(result: &SynthesisResult, dt_divisor: usize) -> Result<Verification> {
    let omega = result.params.omega;
    check_omega(omega)?;
    let duration = result.duration;
    if !(duration.is_finite() && duration > 0.0) {
        return Err(Error::InvalidArgument(alloc::format!("duration must be positive, got {duration}")));
    }
    let steps = dt_divisor.max(10);
    let stride = (steps / 1000).max(1);
    let constraints = heisenberg_constraints(omega)?;
    let f0 = result.params.initial_f();

    let record = |t: f64, u: &ComplexMatrix| -> Result<BrachistochroneState> {
        Ok(BrachistochroneState {
            t,
            u: UnitaryOperator::from_matrix_unchecked(u.clone()),
            f: HermitianOperator::from_matrix_unchecked(f0.matrix().conjugate_by(u)),
            h: result.hamiltonian_at(t),
        })
    };
    let mut samples = alloc::vec![record(0.0, &ComplexMatrix::identity(4))?];
    let u_final = integrate_schrodinger(
        &ComplexMatrix::identity(4),
        0.0,
        duration,
        steps,
        Some(100),
        |t, _| Ok(result.hamiltonian_at(t).into_matrix()),
        |step, t, u| {
            if step % stride == 0 || step == steps {
                samples.push(record(t, u)?);
            }
            Ok(())
        },
    )?;
    let u_final = UnitaryOperator::from_matrix_unchecked(u_final);

    let mut norm_residual = 0.0f64;
    let mut linear_residual = 0.0f64;
    let mut brachistochrone_residual = 0.0f64;
    let mut unitarity_error = 0.0f64;
    for s in &samples {
        norm_residual = norm_residual.max(constraints.norm_residual(&s.h));
        linear_residual = linear_residual.max(constraints.linear_residual(&s.h)?);
        let allowed = constraints.allowed_part(&s.f)?;
        brachistochrone_residual = brachistochrone_residual.max(allowed.matrix().max_abs_diff(s.h.matrix()));
        unitarity_error = unitarity_error.max(s.u.matrix().unitarity_residual());
    }
    let trajectory = Trajectory::from_samples(samples, duration / steps as f64 * stride as f64, constraints)?;
    let geodesic = geodesic_residual(&trajectory)?;
    let trf2_drift = conservation_drift(&trajectory, 2)?;

    let infidelity = 1.0 - gate_fidelity(&result.target.matrix, &u_final)?;
    let constraint_residual = norm_residual.max(linear_residual);
    Ok(Verification {
        infidelity,
        chi: global_phase(&result.target.matrix, &u_final)?,
        constraint_residual,
        norm_residual,
        linear_residual,
        geodesic_residual: geodesic,
        trf2_drift,
        unitarity_error,
        brachistochrone_residual,
        geodesic: geodesic < GEODESIC_THRESHOLD,
        passed: infidelity <= MAX_INFIDELITY && constraint_residual <= MAX_CONSTRAINT_RESIDUAL,
    })
}

/// Rows `(t, α₀₊, α_x₊, α_y₊, α_z₊, α₀₋, α_x₋, α_y₋, α_z₋)` on a uniform grid over `[0, T]`.
pub fn alpha_trace(result: &SynthesisResult, samples: usize) -> Result<Vec<[f64; 9]>> {
    if samples < 2 {
        return Err(Error::TooFewSamples { need: 2, got: samples });
    }
    Ok((0..samples)
        .map(|k| {
            let t = result.duration * k as f64 / (samples - 1) as f64;
            let (a, b) = alphas(&result.params, t);
            let [a0, ax, ay, az] = a.as_array();
            let [b0, bx, by, bz] = b.as_array();
            [t, a0, ax, ay, az, b0, bx, by, bz]
        })
        .collect())
}
