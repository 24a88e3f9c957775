use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianOperator, UnitaryOperator};

/// `U(t) = [T exp(i ∫₀ᵗ F'(s) ds)] · exp(−i F(0) t)`.
///
/// The ordered exponential is a midpoint product of `exp(i F'(s_mid) Δs)`
/// factors, later times to the left. Each factor is exactly unitary.
pub fn formal_solution_unitary<S>(mut fprime: S, f0: &HermitianOperator, t: f64, dt: f64) -> Result<UnitaryOperator>
where
    S: FnMut(f64) -> HermitianOperator,
{
    if !(dt.is_finite() && dt > 0.0) || !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidArgument(alloc::format!("need t >= 0 and dt > 0, got t={t}, dt={dt}")));
    }
    let n = f0.dim();
    // `t / dt` is often meant to be integral; don't let rounding add a step.
    let ratio = t / dt;
    let nearest = ratio.round();
    let steps = if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) { nearest } else { ratio.ceil() };
    let steps = (steps as usize).max(1);
    let h = t / steps as f64;
    let mut ordered = ComplexMatrix::identity(n);
    for k in 0..steps {
        let mid = (k as f64 + 0.5) * h;
        let fp = fprime(mid);
        if fp.dim() != n {
            return Err(Error::DimensionMismatch { left: n, right: fp.dim() });
        }
        let factor = crate::linalg::exp_hermitian(&fp, Complex64::new(0.0, h))?;
        ordered = factor.matmul(&ordered);
    }
    let u = ordered.matmul(f0.evolution(t)?.matrix());
    let residual = u.unitarity_residual();
    if residual > 1e-8 {
        return Err(Error::UnitarityLost(residual));
    }
    Ok(UnitaryOperator::from_matrix_unchecked(u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{pauli_string_matrix, PauliString};

    fn ps(s: &str) -> HermitianOperator {
        pauli_string_matrix(&PauliString::parse(s, 2).unwrap())
    }

    #[test]
    fn zero_fprime_is_free_evolution() {
        let f0 = ps("X1Z2").add_scaled(&ps("Y1"), 0.4);
        let u = formal_solution_unitary(|_| HermitianOperator::zeros(4), &f0, 1.3, 0.01).unwrap();
        assert!(u.matrix().max_abs_diff(f0.evolution(1.3).unwrap().matrix()) < 1e-13);
    }

    #[test]
    fn commuting_constant_fprime() {
        let f0 = ps("Z1Z2");
        let fp = ps("Z1").scale(0.6);
        let u = formal_solution_unitary(|_| fp.clone(), &f0, 0.9, 0.1).unwrap();
        let want = f0.add_scaled(&fp, -1.0).evolution(0.9).unwrap();
        assert!(u.matrix().max_abs_diff(want.matrix()) < 1e-13);
    }

    #[test]
    fn constant_noncommuting_fprime() {
        let f0 = ps("X1X2").add_scaled(&ps("Z2"), 0.3);
        let fp = ps("X1Y2").scale(0.5);
        let u = formal_solution_unitary(|_| fp.clone(), &f0, 1.1, 0.05).unwrap();
        let want = fp.evolution(-1.1).unwrap().compose(&f0.evolution(1.1).unwrap());
        assert!(u.matrix().max_abs_diff(want.matrix()) < 1e-13);
    }

    #[test]
    fn integral_ratio_keeps_step_count() {
        // 0.41904055705523474 / (that / 400) evaluates slightly above 400.
        let t = 0.41904055705523474;
        let mut calls = 0;
        formal_solution_unitary(
            |_| {
                calls += 1;
                HermitianOperator::zeros(4)
            },
            &ps("Z1"),
            t,
            t / 400.0,
        )
        .unwrap();
        assert_eq!(calls, 400);
    }

    #[test]
    fn rejects_bad_step() {
        assert!(formal_solution_unitary(|_| HermitianOperator::zeros(2), &ps("Z1"), 1.0, 0.0).is_err());
    }
}
