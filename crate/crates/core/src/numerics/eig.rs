use nalgebra::linalg::{SymmetricEigen, SVD};
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::numerics::matrix::{C64, ComplexMatrix, Unitary};
use crate::tol;

const MAX_ITER: usize = 10_000;

/// Eigendecomposition of a Hermitian matrix. Eigenvalues come back sorted
/// ascending with the eigenvector columns permuted to match, so that
/// H = V diag(lambda) V^dag.
pub fn herm_eig(h: &ComplexMatrix, hermiticity_tol: f64) -> Result<(Vec<f64>, Unitary)> {
    let residual = h.hermiticity_residual();
    if residual > hermiticity_tol {
        return Err(Error::NotHermitian { residual });
    }
    let eig = SymmetricEigen::try_new(h.raw().clone(), f64::EPSILON, MAX_ITER)
        .ok_or(Error::NoConvergence)?;

    let n = h.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("eigenvalues are finite")
            .then(a.cmp(&b))
    });
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| eig.eigenvectors[(i, order[j])])?;
    Ok((values, Unitary::new(vectors)?))
}

/// Hermitian PSD square root. Eigenvalues in [-psd_tol, 0) are clamped to
/// zero before rooting; anything below -psd_tol is rejected.
pub fn matrix_sqrt_psd(m: &ComplexMatrix, psd_tol: f64) -> Result<ComplexMatrix> {
    rebuild_from_spectrum(m, psd_tol, f64::sqrt)
}

/// Spectral power M^s of a Hermitian PSD matrix, with 0^s defined as 0 for
/// s > 0 so rank-deficient states are first-class inputs.
pub fn matrix_power_psd(m: &ComplexMatrix, s: f64, psd_tol: f64) -> Result<ComplexMatrix> {
    if s <= 0.0 || !s.is_finite() {
        return Err(Error::InvalidExponent { value: s });
    }
    rebuild_from_spectrum(m, psd_tol, move |x| if x == 0.0 { 0.0 } else { x.powf(s) })
}

fn rebuild_from_spectrum(
    m: &ComplexMatrix,
    psd_tol: f64,
    f: impl Fn(f64) -> f64,
) -> Result<ComplexMatrix> {
    let (values, vectors) = herm_eig(m, tol::HERMITICITY)?;
    if let Some(&min) = values.first() {
        if min < -psd_tol {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
    }
    let mapped: Vec<f64> = values.iter().map(|&v| f(v.max(0.0))).collect();
    let v = vectors.matrix().raw();
    let d = DMatrix::<C64>::from_diagonal(&DVector::from_iterator(
        mapped.len(),
        mapped.iter().map(|&x| C64::new(x, 0.0)),
    ));
    ComplexMatrix::new(v * d * v.adjoint())
}

/// Singular values sorted descending.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let svd = SVD::try_new(a.raw().clone(), false, false, f64::EPSILON, MAX_ITER)
        .ok_or(Error::NoConvergence)?;
    Ok(svd.singular_values.iter().copied().collect())
}

pub(crate) struct FullSvd {
    pub singular_values: Vec<f64>,
    pub u: DMatrix<C64>,
    pub v_t: DMatrix<C64>,
}

pub(crate) fn full_svd(a: &ComplexMatrix) -> Result<FullSvd> {
    let svd = SVD::try_new(a.raw().clone(), true, true, f64::EPSILON, MAX_ITER)
        .ok_or(Error::NoConvergence)?;
    Ok(FullSvd {
        singular_values: svd.singular_values.iter().copied().collect(),
        u: svd.u.expect("u requested"),
        v_t: svd.v_t.expect("v_t requested"),
    })
}

/// Trace norm ||A||_1, the sum of singular values.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(a)?.iter().sum())
}

/// |A| = sqrt(A A^dag), Hermitian PSD with Tr |A| = ||A||_1. Computed
/// spectrally, so it is an eigendecomposition route independent of the
/// SVD route used by `trace_norm`.
pub fn abs_of(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let aa = ComplexMatrix::new(a.raw() * a.raw().adjoint())?;
    // A A^dag is PSD up to roundoff that scales with ||A||^2.
    let scale = aa.max_abs().max(1.0);
    matrix_sqrt_psd(&aa, tol::PSD * scale)
}
