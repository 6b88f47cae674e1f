use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

type CMatrix = DMatrix<Complex64>;

/// A complex operator on the number basis truncated to `dim` levels.
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator {
    matrix: CMatrix,
}

impl FockOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::invalid("matrix", "operator must be square and non-empty"));
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: CMatrix::identity(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self { matrix: &self.matrix * &other.matrix })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self { matrix: &self.matrix + &other.matrix })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self { matrix: &self.matrix - &other.matrix })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { matrix: &self.matrix * c }
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self { matrix: &self.matrix * &other.matrix - &other.matrix * &self.matrix })
    }

    /// `selfᵏ` by repeated squaring.
    pub fn pow(&self, k: u64) -> Self {
        Self { matrix: matrix_power(&self.matrix, k) }
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `e^{iHt}` for Hermitian `H = self`, via its eigendecomposition.
    pub fn expi(&self, t: f64) -> Result<CMatrix> {
        let scale = 1.0 + self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if self.hermiticity_error() > 1e-10 * scale {
            return Err(Error::invalid("operator", "exponent is not Hermitian"));
        }
        let h = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = h.symmetric_eigen();
        let phases = eig.eigenvalues.map(|w| Complex64::from_polar(1.0, w * t));
        let v = &eig.eigenvectors;
        let mut vd = v.clone();
        for (j, mut col) in vd.column_iter_mut().enumerate() {
            col *= phases[j];
        }
        Ok(vd * v.adjoint())
    }
}

pub(crate) fn matrix_power(m: &CMatrix, mut k: u64) -> CMatrix {
    let mut result = CMatrix::identity(m.nrows(), m.ncols());
    let mut base = m.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = &result * &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Number of levels kept by the interior-block policy: the top quarter of
/// the truncated basis is discarded.
pub fn interior_dim(dim: usize) -> usize {
    dim - dim / 4
}

/// Spectral norm of the leading `interior_dim(dim)` block.
pub fn interior_norm(m: &CMatrix) -> f64 {
    let k = interior_dim(m.nrows());
    let block = m.view((0, 0), (k, k)).into_owned();
    block.singular_values().iter().cloned().fold(0.0, f64::max)
}

/// `q = (a + a†)/√2` and `p = −i(a − a†)/√2`, so that `[q, p] = i`.
pub fn quadrature_matrices(dim: usize) -> Result<(FockOperator, FockOperator)> {
    quadrature_matrices_hbar(dim, 1.0)
}

/// Quadratures normalized to `[q, p] = iħ`.
pub fn quadrature_matrices_hbar(dim: usize, hbar: f64) -> Result<(FockOperator, FockOperator)> {
    if dim < 4 {
        return Err(Error::invalid("dim", format!("{dim} < 4")));
    }
    if !(hbar > 0.0) {
        return Err(Error::invalid("hbar", format!("{hbar} is not positive")));
    }
    let s = (0.5 * hbar).sqrt();
    let mut q = CMatrix::zeros(dim, dim);
    let mut p = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        let a = s * (n as f64).sqrt();
        q[(n - 1, n)] = Complex64::new(a, 0.0);
        q[(n, n - 1)] = Complex64::new(a, 0.0);
        p[(n - 1, n)] = Complex64::new(0.0, -a);
        p[(n, n - 1)] = Complex64::new(0.0, a);
    }
    Ok((FockOperator { matrix: q }, FockOperator { matrix: p }))
}
