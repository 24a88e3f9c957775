//! Hilbert-Schmidt geometry on `U(N)`: inner product, projections, the
//! bi-invariant speed and the phase-insensitive gate fidelity.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianOperator, UnitaryOperator};

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left: a, right: b })
    }
}

/// `⟨A, B⟩ = Tr(A†B)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    same_dim(a.dim(), b.dim())?;
    Ok(a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x.conj() * y).sum())
}

/// `⟨A, B⟩` for Hermitian operators, which is real.
pub fn hs_inner_hermitian(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    hs_inner(a.matrix(), b.matrix()).map(|z| z.re)
}

/// `A − (Tr A / N)·1`.
pub fn traceless_part(a: &HermitianOperator) -> HermitianOperator {
    let n = a.dim();
    a.add_scaled(&HermitianOperator::identity(n), -a.trace() / n as f64)
}

/// `P_U(A) = (1/N)·Tr(A U†)·U`.
pub fn project_onto_u(a: &ComplexMatrix, u: &UnitaryOperator) -> Result<ComplexMatrix> {
    same_dim(a.dim(), u.dim())?;
    // Tr(A U†) = conj(Tr(U A†)) = conj(⟨A, U⟩)
    let coeff = hs_inner(a, u.matrix())?.conj() / a.dim() as f64;
    Ok(u.matrix().scale(coeff))
}

/// `ds²_U = ⟨dU, (1 − P_U)(dU)⟩ = ‖dU‖² − |Tr(dU U†)|²/N`.
pub fn metric_speed_sq(du: &ComplexMatrix, u: &UnitaryOperator) -> Result<f64> {
    same_dim(du.dim(), u.dim())?;
    let full = hs_inner(du, du)?.re;
    let along = hs_inner(u.matrix(), du)?.norm_sqr() / du.dim() as f64;
    Ok((full - along).max(0.0))
}

/// `|Tr(U†V)| / N`, equal to one exactly when `V = e^{iχ} U`.
pub fn gate_fidelity(u: &UnitaryOperator, v: &UnitaryOperator) -> Result<f64> {
    same_dim(u.dim(), v.dim())?;
    let f = hs_inner(u.matrix(), v.matrix())?.norm() / u.dim() as f64;
    Ok(f.min(1.0))
}

/// Global phase `χ = arg(Tr(U_f† U) / N)` of `U` relative to the target `U_f`.
pub fn global_phase(target: &UnitaryOperator, u: &UnitaryOperator) -> Result<f64> {
    same_dim(target.dim(), u.dim())?;
    Ok(hs_inner(target.matrix(), u.matrix())?.arg())
}

/// Matrix exponential of an arbitrary finite matrix.
pub fn matrix_exp(a: &ComplexMatrix) -> ComplexMatrix {
    crate::linalg::matrix_exp(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{pauli_matrix, Pauli};
    use alloc::vec;
    use core::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sx() -> ComplexMatrix {
        pauli_matrix(Pauli::X)
    }
    fn sy() -> ComplexMatrix {
        pauli_matrix(Pauli::Y)
    }
    fn sz() -> ComplexMatrix {
        pauli_matrix(Pauli::Z)
    }

    #[test]
    fn hs_inner_examples() {
        let id4 = ComplexMatrix::identity(4);
        assert_eq!(hs_inner(&id4, &id4).unwrap(), c(4.0, 0.0));
        assert_eq!(hs_inner(&sx(), &sy()).unwrap(), c(0.0, 0.0));
        let xy = sx().kron(&sy());
        assert!((hs_inner(&xy, &xy).unwrap() - c(4.0, 0.0)).norm() < 1e-15);
        assert!(matches!(hs_inner(&id4, &sx()), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn hs_inner_conjugate_symmetric() {
        let a = ComplexMatrix::new(2, vec![c(1.0, 2.0), c(0.5, -1.0), c(3.0, 0.0), c(0.0, 1.0)]).unwrap();
        let b = ComplexMatrix::new(2, vec![c(-1.0, 0.5), c(2.0, 2.0), c(0.0, -3.0), c(1.0, 1.0)]).unwrap();
        let ab = hs_inner(&a, &b).unwrap();
        let ba = hs_inner(&b, &a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-15);
    }

    #[test]
    fn traceless_part_examples() {
        let id = HermitianOperator::identity(3);
        assert!(traceless_part(&id).matrix().max_abs() < 1e-15);
        let z = HermitianOperator::new(sz()).unwrap();
        assert_eq!(traceless_part(&z), z);
        let d = HermitianOperator::from_real_rows(&[&[2.0, 0.0], &[0.0, 0.0]]).unwrap();
        let want = HermitianOperator::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap();
        assert!(traceless_part(&d).matrix().max_abs_diff(want.matrix()) < 1e-15);
    }

    #[test]
    fn projection_examples() {
        let id2 = UnitaryOperator::identity(2);
        assert!(project_onto_u(&sx(), &id2).unwrap().max_abs() < 1e-15);
        let a = sx().add_scaled(&ComplexMatrix::identity(2), c(3.0, 0.0));
        let p = project_onto_u(&a, &id2).unwrap();
        assert!(p.max_abs_diff(&ComplexMatrix::identity(2).scale_real(3.0)) < 1e-15);

        let u = HermitianOperator::new(sx().kron(&sz())).unwrap().evolution(0.4).unwrap();
        let pu = project_onto_u(u.matrix(), &u).unwrap();
        assert!(pu.max_abs_diff(u.matrix()) < 1e-14);
        let ppa = project_onto_u(&project_onto_u(&sx().kron(&sy()), &u).unwrap(), &u).unwrap();
        let pa = project_onto_u(&sx().kron(&sy()), &u).unwrap();
        assert!(ppa.max_abs_diff(&pa) < 1e-12);
    }

    #[test]
    fn metric_examples() {
        let id2 = UnitaryOperator::identity(2);
        assert!(metric_speed_sq(id2.matrix(), &id2).unwrap().abs() < 1e-15);
        let du = sz().scale(c(0.0, -1.0));
        assert!((metric_speed_sq(&du, &id2).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn matrix_exp_examples() {
        assert_eq!(matrix_exp(&ComplexMatrix::zeros(3)), ComplexMatrix::identity(3));
        let e = matrix_exp(&sx().scale(c(0.0, -PI / 2.0)));
        assert!(e.max_abs_diff(&sx().scale(c(0.0, -1.0))) < 1e-15);
    }

    #[test]
    fn fidelity_examples() {
        let u = HermitianOperator::new(sy().kron(&sx())).unwrap().evolution(0.9).unwrap();
        assert!((gate_fidelity(&u, &u).unwrap() - 1.0).abs() < 1e-15);
        assert!((gate_fidelity(&u, &u.with_phase(1.234)).unwrap() - 1.0).abs() < 1e-15);
        let swap = UnitaryOperator::new(
            ComplexMatrix::from_real_rows(&[
                &[1.0, 0.0, 0.0, 0.0],
                &[0.0, 0.0, 1.0, 0.0],
                &[0.0, 1.0, 0.0, 0.0],
                &[0.0, 0.0, 0.0, 1.0],
            ])
            .unwrap(),
        )
        .unwrap();
        assert!((gate_fidelity(&UnitaryOperator::identity(4), &swap).unwrap() - 0.5).abs() < 1e-15);
        assert!((global_phase(&u, &u.with_phase(0.7)).unwrap() - 0.7).abs() < 1e-14);
    }
}
