use alloc::vec::Vec;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::matrix::HermitianOperator;
use crate::ops::hs_inner_hermitian;

const TRACELESS_TOL: f64 = 1e-12;
const DEPENDENT_TOL: f64 = 1e-10;

/// Energy scale `ω` plus an HS-orthonormal list of forbidden directions `g_j`.
///
/// Allowed Hamiltonians satisfy `Tr H̃² = N ω²` and `Tr(g_j H̃) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSet {
    omega: f64,
    generators: Vec<HermitianOperator>,
}

impl ConstraintSet {
    /// Orthonormalizes `forbidden` (modified Gram-Schmidt). Linearly dependent
    /// generators are dropped.
    pub fn new(omega: f64, forbidden: Vec<HermitianOperator>) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidArgument(alloc::format!("omega must be positive, got {omega}")));
        }
        if let Some(first) = forbidden.first() {
            let dim = first.dim();
            if let Some(bad) = forbidden.iter().find(|g| g.dim() != dim) {
                return Err(Error::DimensionMismatch { left: dim, right: bad.dim() });
            }
        }
        let mut generators: Vec<HermitianOperator> = Vec::with_capacity(forbidden.len());
        for g in forbidden {
            let scale = g.trace_sq().sqrt().max(1.0);
            if g.trace().abs() > TRACELESS_TOL * scale {
                return Err(Error::NotTraceless(g.trace().abs()));
            }
            let mut v = g;
            for e in &generators {
                let overlap = hs_inner_hermitian(e, &v)?;
                v = v.add_scaled(e, -overlap);
            }
            let norm = v.trace_sq().sqrt();
            if norm > DEPENDENT_TOL * scale {
                generators.push(v.scale(1.0 / norm));
            }
        }
        Ok(Self { omega, generators })
    }

    /// Only the norm constraint.
    pub fn unconstrained(omega: f64) -> Result<Self> {
        Self::new(omega, Vec::new())
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn generators(&self) -> &[HermitianOperator] {
        &self.generators
    }

    /// Same generators, different energy scale.
    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidArgument(alloc::format!("omega must be positive, got {omega}")));
        }
        Ok(Self { omega, generators: self.generators.clone() })
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        match self.generators.first() {
            Some(g) if g.dim() != dim => Err(Error::DimensionMismatch { left: g.dim(), right: dim }),
            _ => Ok(()),
        }
    }

    /// Component of `a` along the span of the forbidden generators.
    pub fn forbidden_part(&self, a: &HermitianOperator) -> Result<HermitianOperator> {
        self.check_dim(a.dim())?;
        let mut out = HermitianOperator::zeros(a.dim());
        for g in &self.generators {
            out = out.add_scaled(g, hs_inner_hermitian(g, a)?);
        }
        Ok(out)
    }

    /// Orthogonal complement of [`Self::forbidden_part`].
    pub fn allowed_part(&self, a: &HermitianOperator) -> Result<HermitianOperator> {
        self.check_dim(a.dim())?;
        let mut out = a.clone();
        for g in &self.generators {
            out = out.add_scaled(g, -hs_inner_hermitian(g, a)?);
        }
        Ok(out)
    }

    /// `max_j |Tr(g_j H)|`.
    pub fn linear_residual(&self, h: &HermitianOperator) -> Result<f64> {
        self.check_dim(h.dim())?;
        self.generators.iter().try_fold(0.0f64, |m, g| Ok(m.max(hs_inner_hermitian(g, h)?.abs())))
    }

    /// `|Tr H² − N ω²|`.
    pub fn norm_residual(&self, h: &HermitianOperator) -> f64 {
        (h.trace_sq() - h.dim() as f64 * self.omega * self.omega).abs()
    }
}

/// `H̃ = F − Σ_j ⟨g_j, F⟩ g_j`, the allowed part of a traceless `F`.
pub fn hamiltonian_from_f(f: &HermitianOperator, c: &ConstraintSet) -> Result<HermitianOperator> {
    let scale = f.matrix().max_abs().max(1.0);
    if f.trace().abs() > 1e-10 * scale {
        return Err(Error::NotTraceless(f.trace().abs()));
    }
    c.allowed_part(f)
}

/// Scales `F0` so that its allowed part satisfies `Tr H̃² = N ω²`.
pub fn rescale_f_initial(f0: &HermitianOperator, c: &ConstraintSet) -> Result<HermitianOperator> {
    let h = hamiltonian_from_f(f0, c)?;
    let tr2 = h.trace_sq();
    let scale = f0.trace_sq().max(1.0);
    if tr2 <= 1e-24 * scale {
        return Err(Error::FullyForbidden);
    }
    let n = f0.dim() as f64;
    Ok(f0.scale((n * c.omega() * c.omega() / tr2).sqrt()))
}
