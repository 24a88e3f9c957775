//! Systems where one-qubit operations cost no time.
//!
//! Hermitian operators on `n` qubits split into `g_0 ⊕ g_1 ⊕ … ⊕ g_n`, where
//! `g_j` is spanned by the Pauli strings acting on exactly `j` qubits. With
//! `g_0 ⊕ g_1` free, the three-qubit brachistochrone has `H̃ ∈ g_2` and a
//! constant constraint part `F' ∈ g_3`, so time ordering can be dropped.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianOperator, UnitaryOperator};
use crate::pauli::PauliString;

/// Inputs farther than this from their required subspace are rejected.
pub const MEMBERSHIP_TOL: f64 = 1e-10;

/// The Pauli strings spanning `g_j` on `n` qubits, stored unnormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitSubspaceBasis {
    n_qubits: usize,
    j: usize,
    strings: Vec<PauliString>,
}

impl QubitSubspaceBasis {
    pub fn new(n_qubits: usize, j: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > 10 {
            return Err(Error::InvalidArgument(alloc::format!("qubit count {n_qubits} not in 1..=10")));
        }
        if j > n_qubits {
            return Err(Error::InvalidArgument(alloc::format!("weight {j} exceeds {n_qubits} qubits")));
        }
        Ok(Self { n_qubits, j, strings: PauliString::of_weight(n_qubits, j) })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn strings(&self) -> &[PauliString] {
        &self.strings
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    /// Hilbert-space dimension `2^n`.
    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    fn project_matrix(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: a.dim() });
        }
        // Tr(σσ') = 2^n δ, so the orthogonal projector carries 1/2^n.
        let inv = 1.0 / self.dim() as f64;
        let mut out = ComplexMatrix::zeros(a.dim());
        for s in &self.strings {
            s.accumulate_into(&mut out, s.trace_with(a)? * inv);
        }
        Ok(out)
    }

    /// HS norm of the projection of `a` onto this subspace.
    fn component_norm(&self, a: &ComplexMatrix) -> Result<f64> {
        let inv = 1.0 / self.dim() as f64;
        let mut sum = 0.0;
        for s in &self.strings {
            sum += s.trace_with(a)?.norm_sqr() * inv;
        }
        Ok(sum.sqrt())
    }
}

/// Orthogonal projection onto `g_j`: `Σ_σ σ Tr(σA) / 2^n`.
pub fn project_subspace(a: &HermitianOperator, basis: &QubitSubspaceBasis) -> Result<HermitianOperator> {
    Ok(HermitianOperator::from_matrix_unchecked(basis.project_matrix(a.matrix())?))
}

/// `‖A − P(A)‖_max`.
pub fn subspace_residual(a: &HermitianOperator, basis: &QubitSubspaceBasis) -> Result<f64> {
    Ok(project_subspace(a, basis)?.matrix().max_abs_diff(a.matrix()))
}

/// Projects `a` onto `g_j` if it is already there up to [`MEMBERSHIP_TOL`]
/// (relative to its size), otherwise errors.
pub fn require_in_subspace(a: &HermitianOperator, basis: &QubitSubspaceBasis) -> Result<HermitianOperator> {
    let projected = project_subspace(a, basis)?;
    let residual = projected.matrix().max_abs_diff(a.matrix());
    if residual > MEMBERSHIP_TOL * a.matrix().max_abs().max(1.0) {
        return Err(Error::OutsideSubspace { j: basis.j(), residual });
    }
    Ok(projected)
}

/// The `l` with `[g_j, g_k] ⊆ ⊕ g_l`: `|j−k|+1, |j−k|+3, …, j+k−1`, capped at `n`.
pub fn predicted_weights(n: usize, j: usize, k: usize) -> Vec<usize> {
    if j == 0 || k == 0 {
        return Vec::new();
    }
    (j.abs_diff(k) + 1..=(j + k - 1).min(n)).step_by(2).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosureViolation {
    pub a: PauliString,
    pub b: PauliString,
    /// Weight of the subspace the commutator leaked into.
    pub weight: usize,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosureReport {
    pub n: usize,
    pub j: usize,
    pub k: usize,
    pub predicted: Vec<usize>,
    pub pairs_checked: usize,
    /// Largest component found outside the predicted subspaces.
    pub max_outside: f64,
    pub violations: Vec<ClosureViolation>,
}

impl ClosureReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `[g_j, g_k] ⊆ g_{|j−k|+1} ⊕ g_{|j−k|+3} ⊕ … ⊕ g_{j+k−1}` for every
/// pair of basis strings on `n ≤ 4` qubits; components outside must be below
/// `1e−12`.
pub fn commutation_closure_check(n: usize, j: usize, k: usize) -> Result<ClosureReport> {
    if !(1..=4).contains(&n) {
        return Err(Error::InvalidArgument(alloc::format!("qubit count {n} out of supported range 1..=4")));
    }
    let left = QubitSubspaceBasis::new(n, j)?;
    let right = QubitSubspaceBasis::new(n, k)?;
    let predicted = predicted_weights(n, j, k);
    let outside: Vec<QubitSubspaceBasis> =
        (0..=n).filter(|l| !predicted.contains(l)).map(|l| QubitSubspaceBasis::new(n, l)).collect::<Result<_>>()?;
    let mut report = ClosureReport { n, j, k, predicted, pairs_checked: 0, max_outside: 0.0, violations: Vec::new() };
    let mats: Vec<ComplexMatrix> = right.strings().iter().map(PauliString::to_matrix).collect();
    for a in left.strings() {
        let am = a.to_matrix();
        for (b, bm) in right.strings().iter().zip(&mats) {
            let c = am.commutator(bm);
            report.pairs_checked += 1;
            for sub in &outside {
                let norm = sub.component_norm(&c)?;
                report.max_outside = report.max_outside.max(norm);
                if norm >= 1e-12 {
                    report.violations.push(ClosureViolation { a: a.clone(), b: b.clone(), weight: sub.j(), norm });
                }
            }
        }
    }
    Ok(report)
}

fn check_three_qubit(
    h0: &HermitianOperator,
    fp0: &HermitianOperator,
) -> Result<(HermitianOperator, HermitianOperator)> {
    if h0.dim() != 8 || fp0.dim() != 8 {
        return Err(Error::DimensionMismatch { left: 8, right: if h0.dim() != 8 { h0.dim() } else { fp0.dim() } });
    }
    let h0 = require_in_subspace(h0, &QubitSubspaceBasis::new(3, 2)?)?;
    let fp0 = require_in_subspace(fp0, &QubitSubspaceBasis::new(3, 3)?)?;
    Ok((h0, fp0))
}

/// `U(t) = e^{iF't} e^{−i(H̃(0) + F')t}` for `H̃(0) ∈ g_2`, `F' ∈ g_3` on three qubits.
pub fn three_qubit_evolution(h0: &HermitianOperator, fp0: &HermitianOperator, t: f64) -> Result<UnitaryOperator> {
    let (h0, fp0) = check_three_qubit(h0, fp0)?;
    let total = h0.add_scaled(&fp0, 1.0);
    Ok(fp0.evolution(-t)?.compose(&total.evolution(t)?))
}

/// `H̃(t) = e^{iF't} H̃(0) e^{−iF't}`; stays in `g_2`.
pub fn rotating_hamiltonian(h0: &HermitianOperator, fp0: &HermitianOperator, t: f64) -> Result<HermitianOperator> {
    let (h0, fp0) = check_three_qubit(h0, fp0)?;
    Ok(h0.conjugate_by(&fp0.evolution(-t)?))
}

/// Random element of `g_j` with coefficients drawn by `coeff`.
pub fn random_in_subspace(basis: &QubitSubspaceBasis, mut coeff: impl FnMut() -> f64) -> HermitianOperator {
    let mut m = ComplexMatrix::zeros(basis.dim());
    for s in basis.strings() {
        s.accumulate_into(&mut m, Complex64::new(coeff(), 0.0));
    }
    HermitianOperator::from_matrix_unchecked(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::pauli_string_matrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ps(s: &str, n: usize) -> HermitianOperator {
        pauli_string_matrix(&PauliString::parse(s, n).unwrap())
    }

    #[test]
    fn basis_sizes() {
        for n in 1..=4usize {
            for j in 0..=n {
                let b = QubitSubspaceBasis::new(n, j).unwrap();
                let binom = (0..j).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
                assert_eq!(b.len(), binom * 3usize.pow(j as u32));
            }
        }
        assert!(QubitSubspaceBasis::new(2, 3).is_err());
    }

    #[test]
    fn projection_examples() {
        let x1 = ps("X1", 3);
        let g1 = QubitSubspaceBasis::new(3, 1).unwrap();
        let g2 = QubitSubspaceBasis::new(3, 2).unwrap();
        assert!(project_subspace(&x1, &g1).unwrap().matrix().max_abs_diff(x1.matrix()) < 1e-15);
        assert!(project_subspace(&x1, &g2).unwrap().matrix().max_abs() < 1e-15);
        assert!(project_subspace(&x1, &QubitSubspaceBasis::new(2, 1).unwrap()).is_err());
    }

    #[test]
    fn completeness_and_idempotence() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut m = ComplexMatrix::zeros(8);
        for r in 0..8 {
            for c in 0..8 {
                m[(r, c)] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        let a = HermitianOperator::new(&m + &m.adjoint()).unwrap();
        let mut sum = HermitianOperator::zeros(8);
        for j in 0..=3 {
            let b = QubitSubspaceBasis::new(3, j).unwrap();
            let p = project_subspace(&a, &b).unwrap();
            let pp = project_subspace(&p, &b).unwrap();
            assert!(pp.matrix().max_abs_diff(p.matrix()) < 1e-13);
            sum = sum.add_scaled(&p, 1.0);
        }
        assert!(sum.matrix().max_abs_diff(a.matrix()) < 1e-12);
    }

    #[test]
    fn predicted_weight_lists() {
        assert_eq!(predicted_weights(3, 0, 2), Vec::<usize>::new());
        assert_eq!(predicted_weights(3, 2, 3), alloc::vec![2]);
        assert_eq!(predicted_weights(2, 1, 1), alloc::vec![1]);
        assert_eq!(predicted_weights(4, 2, 2), alloc::vec![1, 3]);
    }

    #[test]
    fn closure_examples() {
        let r = commutation_closure_check(3, 0, 2).unwrap();
        assert!(r.passed() && r.max_outside == 0.0);
        assert!(commutation_closure_check(3, 2, 3).unwrap().passed());
        assert!(commutation_closure_check(2, 1, 1).unwrap().passed());
        assert!(commutation_closure_check(5, 1, 1).is_err());
    }

    #[test]
    fn three_qubit_limits() {
        let h0 = ps("X1X2", 3).add_scaled(&ps("Y2Z3", 3), 0.4);
        let f = ps("X1Y2Z3", 3).scale(0.7);
        let zero = HermitianOperator::zeros(8);
        let u = three_qubit_evolution(&h0, &zero, 0.9).unwrap();
        assert!(u.matrix().max_abs_diff(h0.evolution(0.9).unwrap().matrix()) < 1e-13);
        let u = three_qubit_evolution(&zero, &f, 0.9).unwrap();
        assert!(u.matrix().max_abs_diff(&ComplexMatrix::identity(8)) < 1e-13);
        assert!(three_qubit_evolution(&ps("X1", 3), &f, 1.0).is_err());
        assert!(three_qubit_evolution(&h0, &ps("X1X2", 3), 1.0).is_err());
    }

    #[test]
    fn rotating_hamiltonian_stays_in_g2() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g2 = QubitSubspaceBasis::new(3, 2).unwrap();
        let g3 = QubitSubspaceBasis::new(3, 3).unwrap();
        let h0 = random_in_subspace(&g2, || rng.gen_range(-1.0..1.0));
        let f = random_in_subspace(&g3, || rng.gen_range(-0.5..0.5));
        assert!(rotating_hamiltonian(&h0, &f, 0.0).unwrap().matrix().max_abs_diff(h0.matrix()) < 1e-14);
        for k in 0..10 {
            let h = rotating_hamiltonian(&h0, &f, 0.5 * k as f64).unwrap();
            assert!(subspace_residual(&h, &g2).unwrap() < 1e-10);
            assert!((h.trace_sq() - h0.trace_sq()).abs() < 1e-10);
        }
        // Commuting pair: Z1Z2 and Z1Z2Z3 commute.
        let hz = ps("Z1Z2", 3);
        let fz = ps("Z1Z2Z3", 3);
        assert!(rotating_hamiltonian(&hz, &fz, 1.7).unwrap().matrix().max_abs_diff(hz.matrix()) < 1e-13);
    }
}
