//! Eigendecomposition, matrix exponential and related factorizations.
//!
//! Hermitian and anti-Hermitian exponentials go through a cyclic complex Jacobi
//! eigensolver, which keeps `exp(−iHt)` unitary to roundoff. Everything else uses
//! scaling and squaring with a degree-13 Padé approximant.

use alloc::vec::Vec;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianOperator, UnitaryOperator};

const MAX_SWEEPS: usize = 64;

/// Eigenvalues in ascending order; `vectors` holds the matching eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V · diag(f(λ)) · V†`.
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.values.len();
        let fv: Vec<Complex64> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, f) in fv.iter().enumerate() {
                    acc += self.vectors[(r, k)] * f * self.vectors[(c, k)].conj();
                }
                out[(r, c)] = acc;
            }
        }
        out
    }
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
pub fn hermitian_eigen(h: &HermitianOperator) -> Result<HermitianEigen> {
    let mut a = h.matrix().clone();
    let n = a.dim();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius();
    if scale == 0.0 {
        return Ok(HermitianEigen { values: alloc::vec![0.0; n], vectors: v });
    }

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n).flat_map(|p| (p + 1..n).map(move |q| (p, q))).map(|(p, q)| a[(p, q)].norm_sqr()).sum();
        if off.sqrt() <= 1e-15 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta == 0.0 { 1.0 } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // G = diag(1, e^{-iφ}) · [[c, s], [-s, c]] on the (p, q) plane.
                let gpp = Complex64::new(c, 0.0);
                let gpq = Complex64::new(s, 0.0);
                let gqp = -phase.conj() * s;
                let gqq = phase.conj() * c;
                for k in 0..n {
                    let (x, y) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = x * gpp + y * gqp;
                    a[(k, q)] = x * gpq + y * gqq;
                }
                for k in 0..n {
                    let (x, y) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = gpp.conj() * x + gqp.conj() * y;
                    a[(q, k)] = gpq.conj() * x + gqq.conj() * y;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let (x, y) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = x * gpp + y * gqp;
                    v[(k, q)] = x * gpq + y * gqq;
                }
            }
        }
    }
    if !converged {
        let off: f64 = (0..n).flat_map(|p| (p + 1..n).map(move |q| (p, q))).map(|(p, q)| a[(p, q)].norm_sqr()).sum();
        if off.sqrt() > 1e-12 * scale {
            return Err(Error::NoConvergence);
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, dst)] = v[(r, src)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// `exp(s·H)` for Hermitian `H` and complex scalar `s`.
pub fn exp_hermitian(h: &HermitianOperator, s: Complex64) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(h)?;
    Ok(eig.map(|l| (s * l).exp()))
}

/// Matrix exponential.
///
/// Hermitian and anti-Hermitian arguments are exponentiated through their
/// eigendecomposition, so anti-Hermitian input yields a unitary to roundoff.
pub fn matrix_exp(a: &ComplexMatrix) -> ComplexMatrix {
    let scale = a.max_abs().max(1.0);
    if a.anti_hermitian_residual() <= 1e-14 * scale {
        // A = −iK with K = iA Hermitian.
        let k = HermitianOperator::from_matrix_unchecked(a.scale(Complex64::new(0.0, 1.0)));
        if let Ok(m) = exp_hermitian(&k, Complex64::new(0.0, -1.0)) {
            return m;
        }
    } else if a.hermitian_residual() <= 1e-14 * scale {
        let h = HermitianOperator::from_matrix_unchecked(a.clone());
        if let Ok(m) = exp_hermitian(&h, Complex64::new(1.0, 0.0)) {
            return m;
        }
    }
    expm_pade(a)
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Scaling and squaring with the `[13/13]` Padé approximant.
pub fn expm_pade(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    let norm = a.norm_one();
    let squarings = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = a.scale_real(2f64.powi(-squarings));
    let id = ComplexMatrix::identity(n);
    let a2 = a.matmul(&a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);
    let b = |k: usize| Complex64::new(PADE13[k], 0.0);

    let inner_u = a6.scale(b(13)).add_scaled(&a4, b(11)).add_scaled(&a2, b(9));
    let u = a6.matmul(&inner_u).add_scaled(&a6, b(7)).add_scaled(&a4, b(5)).add_scaled(&a2, b(3)).add_scaled(&id, b(1));
    let u = a.matmul(&u);
    let inner_v = a6.scale(b(12)).add_scaled(&a4, b(10)).add_scaled(&a2, b(8));
    let v = a6.matmul(&inner_v).add_scaled(&a6, b(6)).add_scaled(&a4, b(4)).add_scaled(&a2, b(2)).add_scaled(&id, b(0));

    let p = &v + &u;
    let q = &v - &u;
    // q is well conditioned after scaling; a singular q would mean a broken input.
    let mut r = solve(&q, &p).expect("Padé denominator is nonsingular after scaling");
    for _ in 0..squarings {
        r = r.matmul(&r);
    }
    r
}

/// Solves `A X = B` by LU decomposition with partial pivoting.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::DimensionMismatch { left: n, right: b.dim() });
    }
    let mut lu = a.clone();
    let mut x = b.clone();
    for k in 0..n {
        let pivot = (k..n).max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm())).unwrap_or(k);
        if lu[(pivot, k)].norm() == 0.0 {
            return Err(Error::Singular);
        }
        if pivot != k {
            for c in 0..n {
                let t = lu[(k, c)];
                lu[(k, c)] = lu[(pivot, c)];
                lu[(pivot, c)] = t;
                let t = x[(k, c)];
                x[(k, c)] = x[(pivot, c)];
                x[(pivot, c)] = t;
            }
        }
        let d = lu[(k, k)];
        for r in k + 1..n {
            let f = lu[(r, k)] / d;
            if f.re == 0.0 && f.im == 0.0 {
                continue;
            }
            for c in k..n {
                let t = lu[(k, c)];
                lu[(r, c)] -= f * t;
            }
            for c in 0..n {
                let t = x[(k, c)];
                x[(r, c)] -= f * t;
            }
        }
    }
    for k in (0..n).rev() {
        let d = lu[(k, k)];
        for c in 0..n {
            let mut acc = x[(k, c)];
            for j in k + 1..n {
                acc -= lu[(k, j)] * x[(j, c)];
            }
            x[(k, c)] = acc / d;
        }
    }
    Ok(x)
}

/// Nearest unitary `U (U†U)^{-1/2}` (unitary factor of the polar decomposition).
pub fn polar_unitary(m: &ComplexMatrix) -> Result<UnitaryOperator> {
    let gram = HermitianOperator::from_matrix_unchecked(m.adjoint().matmul(m));
    let eig = hermitian_eigen(&gram)?;
    if eig.values.iter().any(|&l| l <= 0.0) {
        return Err(Error::Singular);
    }
    let inv_sqrt = eig.map(|l| Complex64::new(1.0 / l.sqrt(), 0.0));
    Ok(UnitaryOperator::from_matrix_unchecked(m.matmul(&inv_sqrt)))
}

/// Hermitian `K` with eigenvalues in `[−π, π)` such that `exp(−iK) = U`.
///
/// Eigenvectors come from the Hermitian part `(U + U†)/2`; clusters of equal
/// cosines are split by the anti-Hermitian part restricted to the cluster.
pub fn principal_generator(u: &UnitaryOperator) -> Result<HermitianOperator> {
    let m = u.matrix();
    let n = m.dim();
    let adj = m.adjoint();
    let half = Complex64::new(0.5, 0.0);
    let re_part = HermitianOperator::from_matrix_unchecked((m + &adj).scale(half));
    let im_part = HermitianOperator::from_matrix_unchecked((m - &adj).scale(Complex64::new(0.0, -0.5)));
    let eig = hermitian_eigen(&re_part)?;

    let mut basis = ComplexMatrix::zeros(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (eig.values[end] - eig.values[start]).abs() < 1e-9 {
            end += 1;
        }
        let width = end - start;
        if width == 1 {
            for r in 0..n {
                basis[(r, start)] = eig.vectors[(r, start)];
            }
        } else {
            // Restrict im_part to the cluster subspace and diagonalize there.
            let mut sub = alloc::vec![Complex64::new(0.0, 0.0); width * width];
            for i in 0..width {
                for j in 0..width {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for r in 0..n {
                        for c in 0..n {
                            acc += eig.vectors[(r, start + i)].conj()
                                * im_part.matrix()[(r, c)]
                                * eig.vectors[(c, start + j)];
                        }
                    }
                    sub[i * width + j] = acc;
                }
            }
            let sub = HermitianOperator::from_matrix_unchecked(ComplexMatrix::from_vec(width, sub));
            let sub_eig = hermitian_eigen(&sub)?;
            for k in 0..width {
                for r in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..width {
                        acc += eig.vectors[(r, start + i)] * sub_eig.vectors[(i, k)];
                    }
                    basis[(r, start + k)] = acc;
                }
            }
        }
        start = end;
    }

    // exp(−iκ) = λ  ⇒  κ = −arg λ, folded into [−π, π).
    let mut out = ComplexMatrix::zeros(n);
    for k in 0..n {
        let mut lambda = Complex64::new(0.0, 0.0);
        for r in 0..n {
            for c in 0..n {
                lambda += basis[(r, k)].conj() * m[(r, c)] * basis[(c, k)];
            }
        }
        let mut kappa = -lambda.arg();
        if kappa >= core::f64::consts::PI {
            kappa -= 2.0 * core::f64::consts::PI;
        }
        for r in 0..n {
            for c in 0..n {
                out[(r, c)] += basis[(r, k)] * kappa * basis[(c, k)].conj();
            }
        }
    }
    Ok(HermitianOperator::from_matrix_unchecked(out))
}
