use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex<f64>;

/// Dense square complex matrix, the numerical carrier for every operator in
/// the crate. Construction checks squareness and rejects NaN/Inf entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<C64>,
}

impl ComplexMatrix {
    pub fn new(inner: DMatrix<C64>) -> Result<Self> {
        if inner.nrows() != inner.ncols() || inner.nrows() == 0 {
            return Err(Error::NotSquare {
                rows: inner.nrows(),
                cols: inner.ncols(),
            });
        }
        for i in 0..inner.nrows() {
            for j in 0..inner.ncols() {
                let z = inner[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFiniteEntry { row: i, col: j });
                }
            }
        }
        Ok(Self { inner })
    }

    /// Build from a generator over (row, col). Panics only through `new` if
    /// the generator yields non-finite entries.
    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        Self::new(DMatrix::from_fn(dim, dim, f))
    }

    /// Row-major real and imaginary parts, as exchanged in the JSON format.
    pub fn from_parts(dim: usize, re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        if re.len() != dim || im.len() != dim || re.iter().chain(im).any(|r| r.len() != dim) {
            return Err(Error::NotSquare {
                rows: re.len(),
                cols: re.first().map_or(0, |r| r.len()),
            });
        }
        Self::from_fn(dim, |i, j| C64::new(re[i][j], im[i][j]))
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            inner: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: DMatrix::identity(dim, dim),
        }
    }

    /// Diagonal matrix with real entries.
    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        Self {
            inner: DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    C64::new(values[i], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        }
    }

    /// Rank-one projector |psi><psi| onto a (not necessarily normalised)
    /// vector; the vector is normalised first.
    pub fn pure_state(amplitudes: &[C64]) -> Result<Self> {
        let norm2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if norm2 <= 0.0 || !norm2.is_finite() {
            return Err(Error::InvalidState {
                reason: "zero or non-finite state vector".into(),
            });
        }
        let n = amplitudes.len();
        Self::from_fn(n, |i, j| amplitudes[i] * amplitudes[j].conj() / norm2)
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn raw(&self) -> &DMatrix<C64> {
        &self.inner
    }

    pub fn into_raw(self) -> DMatrix<C64> {
        self.inner
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.inner[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            inner: self.inner.adjoint(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.inner.diagonal().sum()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            inner: &self.inner + &other.inner,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            inner: &self.inner - &other.inner,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            inner: &self.inner * &other.inner,
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            inner: &self.inner * C64::new(factor, 0.0),
        }
    }

    /// Conjugation U . self . U^dag.
    pub fn conjugate_by(&self, u: &Unitary) -> Result<Self> {
        self.check_dim(u.matrix())?;
        let um = u.matrix().raw();
        Ok(Self {
            inner: um * &self.inner * um.adjoint(),
        })
    }

    /// Max-norm of the matrix, used for elementwise residual checks.
    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm, sqrt(sum |a_ij|^2).
    pub fn frobenius_norm(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max-norm residual against the adjoint; zero iff exactly Hermitian.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let d = (self.inner[(i, j)] - self.inner[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        self.hermiticity_residual() <= tolerance
    }

    /// Max-norm residual of U U^dag - I.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.dim();
        let prod = &self.inner * self.inner.adjoint();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod[(i, j)] - C64::new(expected, 0.0)).norm());
            }
        }
        worst
    }

    pub(crate) fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }
}

/// A matrix certified unitary at construction time.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    matrix: ComplexMatrix,
}

impl Unitary {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, tol::UNITARITY)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tolerance: f64) -> Result<Self> {
        let residual = matrix.unitarity_residual();
        if residual > tolerance {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_square() {
        let m = DMatrix::<C64>::zeros(2, 3);
        assert!(matches!(
            ComplexMatrix::new(m),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn rejects_non_finite() {
        let mut m = DMatrix::<C64>::zeros(2, 2);
        m[(0, 1)] = C64::new(f64::NAN, 0.0);
        assert!(matches!(
            ComplexMatrix::new(m),
            Err(Error::NonFiniteEntry { row: 0, col: 1 })
        ));
    }

    #[test]
    fn hermiticity_residual_detects_asymmetry() {
        let m = ComplexMatrix::from_fn(2, |i, j| {
            if (i, j) == (0, 1) {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .unwrap();
        assert!((m.hermiticity_residual() - 1.0).abs() < 1e-15);
        assert_eq!(ComplexMatrix::identity(3).hermiticity_residual(), 0.0);
    }

    #[test]
    fn unitary_gate_rejects_contraction() {
        let half = ComplexMatrix::identity(2).scale(0.5);
        assert!(matches!(Unitary::new(half), Err(Error::NotUnitary { .. })));
        assert!(Unitary::new(ComplexMatrix::identity(4)).is_ok());
    }

    #[test]
    fn pure_state_normalises() {
        let rho = ComplexMatrix::pure_state(&[C64::new(3.0, 0.0), C64::new(4.0, 0.0)]).unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-15);
        assert!((rho.entry(0, 0).re - 9.0 / 25.0).abs() < 1e-15);
    }
}
