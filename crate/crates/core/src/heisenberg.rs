//! Two-qubit anisotropic Heisenberg model with z-axis fields.
//!
//! `H = −Σ_j J_j σ_j⊗σ_j + B₁ σ_z⊗1 + B₂ 1⊗σ_z` splits into the
//! {|00⟩,|11⟩} and {|01⟩,|10⟩} blocks. The optimal controls rotate each block
//! at constant rate, which gives the closed-form propagator below.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use crate::engine::ConstraintSet;
use crate::error::Result;
use crate::matrix::{ComplexMatrix, HermitianOperator, UnitaryOperator};
use crate::pauli::{pauli_string_matrix, PauliString};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HeisenbergCouplings {
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
    pub b1: f64,
    pub b2: f64,
}

impl HeisenbergCouplings {
    /// From the sum/difference combinations `B± = B₁ ± B₂`, `J± = Jx ± Jy`.
    pub fn from_combinations(b_plus: f64, b_minus: f64, j_plus: f64, j_minus: f64, jz: f64) -> Self {
        Self {
            jx: 0.5 * (j_plus + j_minus),
            jy: 0.5 * (j_plus - j_minus),
            jz,
            b1: 0.5 * (b_plus + b_minus),
            b2: 0.5 * (b_plus - b_minus),
        }
    }

    pub fn b_plus(&self) -> f64 {
        self.b1 + self.b2
    }

    pub fn b_minus(&self) -> f64 {
        self.b1 - self.b2
    }

    pub fn j_plus(&self) -> f64 {
        self.jx + self.jy
    }

    pub fn j_minus(&self) -> f64 {
        self.jx - self.jy
    }

    pub fn is_finite(&self) -> bool {
        [self.jx, self.jy, self.jz, self.b1, self.b2].iter().all(|v| v.is_finite())
    }
}

/// Computational-basis matrix (|00⟩, |01⟩, |10⟩, |11⟩).
pub fn build_hamiltonian(c: &HeisenbergCouplings) -> HermitianOperator {
    let (bp, bm, jp, jm, jz) = (c.b_plus(), c.b_minus(), c.j_plus(), c.j_minus(), c.jz);
    let mut m = ComplexMatrix::zeros(4);
    m[(0, 0)] = Complex64::new(-jz + bp, 0.0);
    m[(1, 1)] = Complex64::new(jz + bm, 0.0);
    m[(2, 2)] = Complex64::new(jz - bm, 0.0);
    m[(3, 3)] = Complex64::new(-jz - bp, 0.0);
    m[(0, 3)] = Complex64::new(-jm, 0.0);
    m[(3, 0)] = Complex64::new(-jm, 0.0);
    m[(1, 2)] = Complex64::new(-jp, 0.0);
    m[(2, 1)] = Complex64::new(-jp, 0.0);
    HermitianOperator::from_matrix_unchecked(m)
}

/// `|B₊² + B₋² + J₊² + J₋² + 2J_z² − 2ω²|`, equivalently `|Tr H² − 4ω²| / 2`.
pub fn constraint_residual(c: &HeisenbergCouplings, omega: f64) -> f64 {
    let lhs = c.b_plus().powi(2) + c.b_minus().powi(2) + c.j_plus().powi(2) + c.j_minus().powi(2) + 2.0 * c.jz.powi(2);
    (lhs - 2.0 * omega * omega).abs()
}

/// Constants of the optimal control family.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModelParameters {
    pub b0_plus: f64,
    pub b0_minus: f64,
    pub psi_plus: f64,
    pub psi_minus: f64,
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    pub jz: f64,
    pub omega: f64,
}

impl ModelParameters {
    /// `Ω₊ = √(B₀₊² + γ₊²)`.
    pub fn omega_plus(&self) -> f64 {
        self.b0_plus.hypot(self.gamma_plus)
    }

    pub fn omega_minus(&self) -> f64 {
        self.b0_minus.hypot(self.gamma_minus)
    }

    pub fn lambda_xy(&self) -> f64 {
        0.5 * (self.gamma_plus + self.gamma_minus)
    }

    pub fn lambda_yx(&self) -> f64 {
        0.5 * (self.gamma_plus - self.gamma_minus)
    }

    /// Constraint part of `F`: `λ_xy σ_x⊗σ_y + λ_yx σ_y⊗σ_x`. Constant in time.
    pub fn fprime(&self) -> HermitianOperator {
        let xy = pauli_string_matrix(&PauliString::parse("X1Y2", 2).expect("valid literal"));
        let yx = pauli_string_matrix(&PauliString::parse("Y1X2", 2).expect("valid literal"));
        xy.scale(self.lambda_xy()).add_scaled(&yx, self.lambda_yx())
    }

    /// `F(0) = H(0) + F'`.
    pub fn initial_f(&self) -> HermitianOperator {
        hamiltonian_at(self, 0.0).add_scaled(&self.fprime(), 1.0)
    }

    /// `|B₀₊² + B₀₋² + 2J_z² − 2ω²|`; zero means every `controls_at` output
    /// meets the energy constraint.
    pub fn energy_residual(&self) -> f64 {
        (self.b0_plus.powi(2) + self.b0_minus.powi(2) + 2.0 * self.jz.powi(2) - 2.0 * self.omega.powi(2)).abs()
    }

    /// Entrywise comparison with phases taken mod 2π.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let phase = |a: f64, b: f64| {
            let d = num_traits::Euclid::rem_euclid(&(a - b), &(2.0 * PI));
            d.min(2.0 * PI - d) <= tol
        };
        let close = |a: f64, b: f64| (a - b).abs() <= tol;
        close(self.b0_plus, other.b0_plus)
            && close(self.b0_minus, other.b0_minus)
            && phase(self.psi_plus, other.psi_plus)
            && phase(self.psi_minus, other.psi_minus)
            && close(self.gamma_plus, other.gamma_plus)
            && close(self.gamma_minus, other.gamma_minus)
            && close(self.jz, other.jz)
            && close(self.omega, other.omega)
    }
}

/// `B±(t) = B₀± cos 2(γ±t + ψ±)`, `J±(t) = ∓B₀∓ sin 2(γ∓t + ψ∓)`.
pub fn controls_at(p: &ModelParameters, t: f64) -> HeisenbergCouplings {
    let mu_plus = 2.0 * (p.gamma_plus * t + p.psi_plus);
    let mu_minus = 2.0 * (p.gamma_minus * t + p.psi_minus);
    HeisenbergCouplings::from_combinations(
        p.b0_plus * mu_plus.cos(),
        p.b0_minus * mu_minus.cos(),
        -p.b0_minus * mu_minus.sin(),
        p.b0_plus * mu_plus.sin(),
        p.jz,
    )
}

pub fn hamiltonian_at(p: &ModelParameters, t: f64) -> HermitianOperator {
    build_hamiltonian(&controls_at(p, t))
}

/// One block of the closed form; `a0² + ax² + ay² + az² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alphas {
    pub a0: f64,
    pub ax: f64,
    pub ay: f64,
    pub az: f64,
}

impl Alphas {
    pub fn norm_sq(&self) -> f64 {
        self.a0 * self.a0 + self.ax * self.ax + self.ay * self.ay + self.az * self.az
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a0, self.ax, self.ay, self.az]
    }
}

fn block_alphas(b0: f64, gamma: f64, psi: f64, t: f64, sign: f64) -> Alphas {
    let big = b0.hypot(gamma);
    let (so, co) = ((big * t).sin(), (big * t).cos());
    // sin(Ωt)/Ω → t as Ω → 0.
    let sinc = if big > 0.0 { so / big } else { t };
    let (sg, cg) = ((gamma * t).sin(), (gamma * t).cos());
    let phase = gamma * t + 2.0 * psi;
    Alphas {
        a0: cg * co + gamma * sg * sinc,
        ax: sign * b0 * sinc * phase.sin(),
        ay: sign * (sg * co - gamma * cg * sinc),
        az: -b0 * sinc * phase.cos(),
    }
}

/// `(α₊, α₋)` at time `t`.
pub fn alphas(p: &ModelParameters, t: f64) -> (Alphas, Alphas) {
    (
        block_alphas(p.b0_plus, p.gamma_plus, p.psi_plus, t, 1.0),
        block_alphas(p.b0_minus, p.gamma_minus, p.psi_minus, t, -1.0),
    )
}

/// Exact propagator of `H(t) = build_hamiltonian(controls_at(p, t))` with `U(0) = 1`.
pub fn closed_form_unitary(p: &ModelParameters, t: f64) -> UnitaryOperator {
    let (a, b) = alphas(p, t);
    let ep = Complex64::from_polar(1.0, p.jz * t);
    let em = ep.conj();
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let mut u = ComplexMatrix::zeros(4);
    u[(0, 0)] = ep * c(a.a0, a.az);
    u[(0, 3)] = ep * c(a.ay, a.ax);
    u[(3, 0)] = ep * c(-a.ay, a.ax);
    u[(3, 3)] = ep * c(a.a0, -a.az);
    u[(1, 1)] = em * c(b.a0, b.az);
    u[(1, 2)] = em * c(b.ay, b.ax);
    u[(2, 1)] = em * c(-b.ay, b.ax);
    u[(2, 2)] = em * c(b.a0, -b.az);
    UnitaryOperator::from_matrix_unchecked(u)
}

/// Forbidden directions of the model: every two-qubit Pauli product with
/// mixed letters and every transverse one-qubit field.
pub fn heisenberg_forbidden() -> Vec<HermitianOperator> {
    const LABELS: [&str; 10] = ["X1Y2", "X1Z2", "Y1X2", "Y1Z2", "Z1X2", "Z1Y2", "X1", "Y1", "X2", "Y2"];
    LABELS.iter().map(|s| pauli_string_matrix(&PauliString::parse(s, 2).expect("valid literal")).scale(0.5)).collect()
}

/// [`heisenberg_forbidden`] at energy scale `ω`.
pub fn heisenberg_constraints(omega: f64) -> Result<ConstraintSet> {
    ConstraintSet::new(omega, heisenberg_forbidden())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::integrate_schrodinger;

    fn ps(s: &str) -> HermitianOperator {
        pauli_string_matrix(&PauliString::parse(s, 2).unwrap())
    }

    fn pauli_route(c: &HeisenbergCouplings) -> HermitianOperator {
        ps("X1X2")
            .scale(-c.jx)
            .add_scaled(&ps("Y1Y2"), -c.jy)
            .add_scaled(&ps("Z1Z2"), -c.jz)
            .add_scaled(&ps("Z1"), c.b1)
            .add_scaled(&ps("Z2"), c.b2)
    }

    fn sample_params() -> ModelParameters {
        ModelParameters {
            b0_plus: 0.7,
            b0_minus: -1.1,
            psi_plus: 0.3,
            psi_minus: -0.8,
            gamma_plus: 0.45,
            gamma_minus: -1.3,
            jz: 0.25,
            omega: 1.0,
        }
    }

    fn integrate(p: &ModelParameters, t: f64, steps: usize) -> ComplexMatrix {
        integrate_schrodinger(
            &ComplexMatrix::identity(4),
            0.0,
            t,
            steps,
            None,
            |s, _| Ok(hamiltonian_at(p, s).into_matrix()),
            |_, _, _| Ok(()),
        )
        .unwrap()
    }

    #[test]
    fn matrix_pattern_matches_pauli_sum() {
        let c = HeisenbergCouplings { jx: 0.3, jy: -1.2, jz: 0.7, b1: 0.4, b2: -0.9 };
        assert!(build_hamiltonian(&c).matrix().max_abs_diff(pauli_route(&c).matrix()) < 1e-15);
        assert_eq!(build_hamiltonian(&HeisenbergCouplings::default()).matrix().max_abs(), 0.0);
    }

    #[test]
    fn jx_only_pattern() {
        let h = build_hamiltonian(&HeisenbergCouplings { jx: 1.0, ..Default::default() });
        let m = h.matrix();
        for (r, c) in [(1, 2), (2, 1), (0, 3), (3, 0)] {
            assert_eq!(m[(r, c)], Complex64::new(-1.0, 0.0));
        }
        assert!((m.frobenius() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn swap_couplings() {
        let s = 1.0 / 3f64.sqrt();
        let c = HeisenbergCouplings { jx: -s, jy: -s, jz: -s, b1: 0.0, b2: 0.0 };
        let want = ComplexMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, -1.0, 2.0, 0.0],
            &[0.0, 2.0, -1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap()
        .scale_real(s);
        assert!(build_hamiltonian(&c).matrix().max_abs_diff(&want) < 1e-15);
        assert!(constraint_residual(&c, 1.0) < 1e-12);
        assert_eq!(constraint_residual(&HeisenbergCouplings::default(), 1.0), 2.0);
    }

    #[test]
    fn controls_examples() {
        let p = ModelParameters { b0_plus: 0.6, b0_minus: -0.4, jz: 0.1, omega: 1.0, ..Default::default() };
        let c = controls_at(&p, 2.3);
        assert!((c.b_plus() - 0.6).abs() < 1e-15 && (c.b_minus() + 0.4).abs() < 1e-15);
        assert!(c.j_plus().abs() < 1e-15 && c.j_minus().abs() < 1e-15);

        let swap_family = ModelParameters { b0_plus: 0.0, gamma_minus: 0.0, ..sample_params() };
        for k in 0..20 {
            let c = controls_at(&swap_family, 0.37 * k as f64);
            assert_eq!(c.b_plus(), 0.0);
            assert_eq!(c.j_minus(), 0.0);
        }
    }

    #[test]
    fn energy_condition_holds_on_grid() {
        let mut p = sample_params();
        p.jz = ((2.0 * p.omega.powi(2) - p.b0_plus.powi(2) - p.b0_minus.powi(2)) / 2.0).sqrt();
        assert!(p.energy_residual() < 1e-14);
        for k in 0..200 {
            let c = controls_at(&p, 0.05 * k as f64);
            assert!(constraint_residual(&c, p.omega) < 1e-12);
            assert!((hamiltonian_at(&p, 0.05 * k as f64).trace_sq() - 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn alphas_are_normalized() {
        let mut degenerate = sample_params();
        degenerate.b0_minus = 0.0;
        degenerate.gamma_minus = 0.0;
        for p in [sample_params(), degenerate] {
            for k in 0..300 {
                let (a, b) = alphas(&p, 0.02 * k as f64);
                assert!((a.norm_sq() - 1.0).abs() < 1e-12);
                assert!((b.norm_sq() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn closed_form_structure() {
        let p = sample_params();
        assert!(closed_form_unitary(&p, 0.0).matrix().max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
        let u = closed_form_unitary(&p, 1.7);
        assert!(u.matrix().unitarity_residual() < 1e-13);
        for (r, c) in [(0, 1), (0, 2), (1, 0), (1, 3), (2, 0), (2, 3), (3, 1), (3, 2)] {
            assert_eq!(u.matrix()[(r, c)], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn closed_form_matches_ode() {
        let mut degenerate = sample_params();
        degenerate.b0_plus = 0.0;
        degenerate.gamma_plus = 0.0;
        for p in [sample_params(), degenerate] {
            for t in [0.4, 1.5, 3.0] {
                let numeric = integrate(&p, t, 4000);
                assert!(closed_form_unitary(&p, t).matrix().max_abs_diff(&numeric) < 1e-9, "t={t}");
            }
        }
    }

    #[test]
    fn rotating_frame_factorization() {
        // U(t) = e^{iF't} e^{−i(H(0)+F')t} with constant F'.
        let p = sample_params();
        let t = 1.3;
        let fp = p.fprime();
        let want = fp.evolution(-t).unwrap().compose(&p.initial_f().evolution(t).unwrap());
        assert!(closed_form_unitary(&p, t).matrix().max_abs_diff(want.matrix()) < 1e-12);
    }

    #[test]
    fn fprime_is_forbidden() {
        let c = heisenberg_constraints(1.0).unwrap();
        assert_eq!(c.generators().len(), 10);
        let fp = sample_params().fprime();
        assert!(c.allowed_part(&fp).unwrap().matrix().max_abs() < 1e-15);
        let h = hamiltonian_at(&sample_params(), 0.8);
        assert!(c.linear_residual(&h).unwrap() < 1e-15);
    }

    #[test]
    fn phase_comparison_is_periodic() {
        let p = sample_params();
        let q = ModelParameters { psi_plus: p.psi_plus + 2.0 * PI, ..p };
        assert!(p.approx_eq(&q, 1e-12));
        assert!(!p.approx_eq(&ModelParameters { jz: 0.3, ..p }, 1e-12));
    }
}
