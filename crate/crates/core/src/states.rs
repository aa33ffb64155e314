//! Validated density matrices, spectra, supports, and constructors for
//! diagonal (classical) states.

use crate::error::{Error, Result};
use crate::numerics::eig::herm_eig;
use crate::numerics::matrix::{C64, ComplexMatrix};
use crate::tol;

/// A probability vector of eigenvalues. Entries are kept in construction
/// order; sorting is always explicit so that ordering-sensitive bounds
/// cannot silently pick up a convention.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SortDirection {
    Ascending,
    Descending,
}

impl Spectrum {
    /// Strict constructor for user-supplied vectors: entries below -1e-12
    /// or a sum off unity by more than 1e-10 are rejected; entries in
    /// [-1e-12, 0) are clamped to exactly 0.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSpectrum {
                reason: "empty vector".into(),
            });
        }
        let mut clamped = Vec::with_capacity(values.len());
        for &v in &values {
            if !v.is_finite() || v < tol::SPECTRUM_FLOOR {
                return Err(Error::InvalidSpectrum {
                    reason: format!("entry {} below floor {:e}", v, tol::SPECTRUM_FLOOR),
                });
            }
            clamped.push(v.max(0.0));
        }
        let sum: f64 = clamped.iter().sum();
        if (sum - 1.0).abs() > tol::SPECTRUM_SUM {
            return Err(Error::InvalidSpectrum {
                reason: format!("sum {} differs from 1 by more than {:e}", sum, tol::SPECTRUM_SUM),
            });
        }
        Ok(Self { values: clamped })
    }

    /// Constructor for eigenvalues of an already-validated state. Values at
    /// or below the rank threshold are numerical zeros of the eigensolver
    /// (the stored matrix cannot distinguish them from exact zeros) and are
    /// snapped to 0, matching the `numerical_rank` convention; leaving the
    /// +-1e-16 noise in place would leak sqrt(eps) errors into every
    /// Bhattacharyya-style bound computed from the spectrum. Renormalised
    /// only if the snapping pushed the sum outside the spectrum tolerance.
    pub(crate) fn from_state_eigenvalues(values: Vec<f64>) -> Self {
        let mut clamped: Vec<f64> = values
            .iter()
            .map(|&v| if v <= tol::RANK { 0.0 } else { v })
            .collect();
        let sum: f64 = clamped.iter().sum();
        if (sum - 1.0).abs() > tol::SPECTRUM_SUM && sum > 0.0 {
            for v in &mut clamped {
                *v /= sum;
            }
        }
        Self { values: clamped }
    }

    pub fn uniform(dim: usize) -> Self {
        Self {
            values: vec![1.0 / dim as f64; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sorted(&self, direction: SortDirection) -> Spectrum {
        let mut v = self.values.clone();
        v.sort_by(|a, b| a.partial_cmp(b).expect("spectrum entries are finite"));
        if direction == SortDirection::Descending {
            v.reverse();
        }
        Spectrum { values: v }
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

/// Sorted copy of a spectrum. Thin wrapper kept for symmetry with the other
/// per-operation entry points.
pub fn sort_spectrum(p: &Spectrum, direction: SortDirection) -> Spectrum {
    p.sorted(direction)
}

/// A quantum state: Hermitian within 1e-10, eigenvalues above -1e-9, unit
/// trace within 1e-10. The ascending spectrum is computed once and cached.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    spectrum: Spectrum,
}

impl DensityMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Cached spectrum, ascending.
    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn purity(&self) -> f64 {
        self.spectrum.values().iter().map(|v| v * v).sum()
    }
}

/// Validate a raw matrix as a quantum state. Each failure names the violated
/// invariant together with the measured residual.
pub fn validate_state(m: &ComplexMatrix) -> Result<DensityMatrix> {
    let residual = m.hermiticity_residual();
    if residual > tol::HERMITICITY {
        return Err(Error::NotHermitian { residual });
    }
    let trace = m.trace();
    if (trace.re - 1.0).abs() > tol::SPECTRUM_SUM || trace.im.abs() > tol::SPECTRUM_SUM {
        return Err(Error::TraceNotOne { trace: trace.re });
    }
    let (values, _) = herm_eig(m, tol::HERMITICITY)?;
    if let Some(&min) = values.first() {
        if min < -tol::PSD {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
    }
    Ok(DensityMatrix {
        matrix: m.clone(),
        spectrum: Spectrum::from_state_eigenvalues(values),
    })
}

/// Diagonal state diag(p) with the entries of `p` in their given order.
/// A valid `Spectrum` always yields a valid state, so this cannot fail.
pub fn diag_state(p: &Spectrum) -> DensityMatrix {
    DensityMatrix {
        matrix: ComplexMatrix::diag_real(p.values()),
        spectrum: p.sorted(SortDirection::Ascending),
    }
}

/// An orthogonal projector with its rank.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    matrix: ComplexMatrix,
    rank: usize,
}

impl Projector {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Tr(P Q), real for Hermitian projectors; the pairwise support overlap.
    pub fn overlap(&self, other: &Projector) -> Result<f64> {
        Ok(self.matrix.mul(&other.matrix)?.trace().re)
    }
}

/// Projector onto the span of eigenvectors with eigenvalue above `rank_tol`.
pub fn support_projector(rho: &DensityMatrix, rank_tol: f64) -> Result<Projector> {
    let (values, vectors) = herm_eig(rho.matrix(), tol::HERMITICITY)?;
    let n = rho.dim();
    let vm = vectors.matrix().raw();
    let mut p = nalgebra::DMatrix::<C64>::zeros(n, n);
    let mut rank = 0;
    for (k, &lambda) in values.iter().enumerate() {
        if lambda > rank_tol {
            let col = vm.column(k);
            p += col * col.adjoint();
            rank += 1;
        }
    }
    Ok(Projector {
        matrix: ComplexMatrix::new(p)?,
        rank,
    })
}

/// Number of eigenvalues above `rank_tol`, read off the cached spectrum.
pub fn numerical_rank(rho: &DensityMatrix, rank_tol: f64) -> usize {
    rho.spectrum()
        .values()
        .iter()
        .filter(|&&v| v > rank_tol)
        .count()
}
