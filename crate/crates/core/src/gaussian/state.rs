use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{symmetrize, symplectic_form, MATRIX_TOL, PHYSICALITY_FLOOR};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quadrature {
    Q,
    P,
}

impl Quadrature {
    pub(crate) fn offset(self) -> usize {
        match self {
            Quadrature::Q => 0,
            Quadrature::P => 1,
        }
    }
}

/// First and second moments of an n-mode Gaussian state.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

/// Result of [`physicality_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Physicality {
    pub is_physical: bool,
    /// Largest `|Σ_ij - Σ_ji|`.
    pub asymmetry: f64,
    /// Smallest eigenvalue of `Σ + (i/2)Ω`.
    pub min_eigenvalue: f64,
}

impl GaussianState {
    /// Builds a state from raw moments. The covariance must be square,
    /// match the mean and be symmetric; physicality is not enforced here.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::invalid("mean", format!("length {dim} is not 2n with n >= 1")));
        }
        if cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: cov.nrows().max(cov.ncols()),
            });
        }
        if asymmetry(&cov) > MATRIX_TOL {
            return Err(Error::invalid("cov", "covariance matrix is not symmetric"));
        }
        let mut cov = cov;
        symmetrize(&mut cov);
        Ok(Self { mean, cov })
    }

    pub(crate) fn from_parts_unchecked(mean: DVector<f64>, mut cov: DMatrix<f64>) -> Self {
        symmetrize(&mut cov);
        Self { mean, cov }
    }

    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::invalid("n_modes", "at least one mode is required"));
        }
        let dim = 2 * n_modes;
        Ok(Self {
            mean: DVector::zeros(dim),
            cov: DMatrix::identity(dim, dim) * 0.5,
        })
    }

    /// Single-mode coherent state with quadrature means `(q, p)`.
    pub fn coherent(q: f64, p: f64) -> Self {
        Self {
            mean: DVector::from_vec(vec![q, p]),
            cov: DMatrix::identity(2, 2) * 0.5,
        }
    }

    /// Single-mode squeezed vacuum `S(r)|0⟩`: variances `(½e^{-2r}, ½e^{2r})`.
    /// Negative `r` squeezes the momentum quadrature instead.
    pub fn squeezed_vacuum(r: f64) -> Self {
        Self {
            mean: DVector::zeros(2),
            cov: DMatrix::from_diagonal(&DVector::from_vec(vec![
                0.5 * (-2.0 * r).exp(),
                0.5 * (2.0 * r).exp(),
            ])),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn quadrature_index(&self, mode: usize, quad: Quadrature) -> Result<usize> {
        self.check_mode(mode)?;
        Ok(2 * mode + quad.offset())
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.n_modes() {
            return Err(Error::ModeOutOfRange {
                index: mode,
                n_modes: self.n_modes(),
            });
        }
        Ok(())
    }

    /// Tensor product `self ⊗ other`; the modes of `other` follow those of `self`.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let (a, b) = (self.mean.len(), other.mean.len());
        let mut mean = DVector::zeros(a + b);
        mean.rows_mut(0, a).copy_from(&self.mean);
        mean.rows_mut(a, b).copy_from(&other.mean);
        let mut cov = DMatrix::zeros(a + b, a + b);
        cov.view_mut((0, 0), (a, a)).copy_from(&self.cov);
        cov.view_mut((a, a), (b, b)).copy_from(&other.cov);
        GaussianState { mean, cov }
    }

    /// Marginal state of the listed modes, in the listed order.
    pub fn reduced(&self, modes: &[usize]) -> Result<GaussianState> {
        if modes.is_empty() {
            return Err(Error::invalid("modes", "empty mode list"));
        }
        let mut idx = Vec::with_capacity(2 * modes.len());
        for &m in modes {
            self.check_mode(m)?;
            idx.push(2 * m);
            idx.push(2 * m + 1);
        }
        let mean = DVector::from_iterator(idx.len(), idx.iter().map(|&i| self.mean[i]));
        let cov = DMatrix::from_fn(idx.len(), idx.len(), |r, c| self.cov[(idx[r], idx[c])]);
        Ok(GaussianState { mean, cov })
    }

    /// Variance of the linear combination `cᵀx`, i.e. `cᵀΣc`.
    pub fn variance_of(&self, coefficients: &[f64]) -> Result<f64> {
        if coefficients.len() != self.mean.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mean.len(),
                found: coefficients.len(),
            });
        }
        let c = DVector::from_column_slice(coefficients);
        Ok((c.transpose() * &self.cov * &c)[(0, 0)])
    }

    /// Mean of the linear combination `cᵀx`.
    pub fn mean_of(&self, coefficients: &[f64]) -> Result<f64> {
        if coefficients.len() != self.mean.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mean.len(),
                found: coefficients.len(),
            });
        }
        Ok(coefficients.iter().zip(self.mean.iter()).map(|(c, m)| c * m).sum())
    }

    /// Shifts the mean by `shift` (a displacement in phase space).
    pub fn displaced(&self, shift: &DVector<f64>) -> Result<GaussianState> {
        if shift.len() != self.mean.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mean.len(),
                found: shift.len(),
            });
        }
        Ok(GaussianState {
            mean: &self.mean + shift,
            cov: self.cov.clone(),
        })
    }

    /// Mean photon number proxy `tr(Σ) - n`; zero for the vacuum.
    pub fn excess_trace(&self) -> f64 {
        self.cov.trace() - self.n_modes() as f64
    }

    pub fn physicality(&self) -> Physicality {
        physicality_check(self)
    }
}

pub fn vacuum_state(n_modes: usize) -> Result<GaussianState> {
    GaussianState::vacuum(n_modes)
}

fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Checks symmetry of `Σ` and positive semidefiniteness of `Σ + (i/2)Ω`.
pub fn physicality_check(state: &GaussianState) -> Physicality {
    let cov = &state.cov;
    let asym = asymmetry(cov);
    let omega = symplectic_form(state.n_modes());
    let dim = cov.nrows();
    let h = DMatrix::from_fn(dim, dim, |i, j| {
        let sym = 0.5 * (cov[(i, j)] + cov[(j, i)]);
        Complex64::new(sym, 0.5 * omega[(i, j)])
    });
    let min_eigenvalue = h
        .symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let all_finite = cov.iter().all(|v| v.is_finite()) && state.mean.iter().all(|v| v.is_finite());
    Physicality {
        is_physical: all_finite && asym <= MATRIX_TOL && min_eigenvalue >= PHYSICALITY_FLOOR,
        asymmetry: asym,
        min_eigenvalue,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_moments() {
        let v = vacuum_state(1).unwrap();
        assert_eq!(v.mean().as_slice(), &[0.0, 0.0]);
        assert_eq!(v.cov()[(0, 0)], 0.5);
        assert_eq!(v.cov()[(1, 1)], 0.5);
        assert_eq!(v.cov()[(0, 1)], 0.0);

        let v2 = vacuum_state(2).unwrap();
        assert_eq!(*v2.cov(), DMatrix::identity(4, 4) * 0.5);
    }

    #[test]
    fn zero_modes_rejected() {
        assert!(matches!(vacuum_state(0), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn vacuum_is_physical_and_sits_on_the_boundary() {
        let p = physicality_check(&vacuum_state(3).unwrap());
        assert!(p.is_physical);
        assert!(p.min_eigenvalue.abs() < 1e-12);
    }

    #[test]
    fn sub_vacuum_noise_is_unphysical() {
        let s = GaussianState::new(DVector::zeros(2), DMatrix::identity(2, 2) * 0.1).unwrap();
        let p = physicality_check(&s);
        assert!(!p.is_physical);
        assert!((p.min_eigenvalue - (0.1 - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn asymmetric_covariance_rejected() {
        let mut cov = DMatrix::identity(2, 2) * 0.5;
        cov[(0, 1)] = 0.1;
        assert!(GaussianState::new(DVector::zeros(2), cov).is_err());
    }

    #[test]
    fn reduced_picks_blocks_in_order() {
        let s = GaussianState::coherent(1.0, 2.0).tensor(&GaussianState::squeezed_vacuum(0.3));
        let r = s.reduced(&[1, 0]).unwrap();
        assert_eq!(r.mean().as_slice(), &[0.0, 0.0, 1.0, 2.0]);
        assert!((r.cov()[(0, 0)] - 0.5 * (-0.6f64).exp()).abs() < 1e-15);
        assert!(s.reduced(&[2]).is_err());
    }
}
