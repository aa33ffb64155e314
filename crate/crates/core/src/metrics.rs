//! Distance and similarity measures on density matrices: Hilbert-Schmidt,
//! trace and Bures distances, fidelity, and their mutual relations.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numerics::eig::{herm_eig, trace_norm};
use crate::numerics::matrix::{C64, ComplexMatrix};
use crate::states::{DensityMatrix, Spectrum, support_projector};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    HilbertSchmidt,
    Trace,
    Bures,
}

impl MetricKind {
    pub const ALL: [MetricKind; 3] = [
        MetricKind::HilbertSchmidt,
        MetricKind::Trace,
        MetricKind::Bures,
    ];

    /// Maximal distance between any two states; independent of dimension.
    pub fn diameter(self) -> f64 {
        match self {
            MetricKind::HilbertSchmidt => 2.0_f64.sqrt(),
            MetricKind::Trace => 1.0,
            MetricKind::Bures => 2.0_f64.sqrt(),
        }
    }

    /// Whether the metric is monotone under quantum channels. Bures and
    /// trace are; Hilbert-Schmidt is not.
    pub fn is_monotone(self) -> bool {
        !matches!(self, MetricKind::HilbertSchmidt)
    }

    pub fn distance(self, rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
        match self {
            MetricKind::HilbertSchmidt => d_hs(rho1, rho2),
            MetricKind::Trace => d_trace(rho1, rho2),
            MetricKind::Bures => d_bures(rho1, rho2),
        }
    }

    /// The same metric evaluated between diagonal states diag(p), diag(q);
    /// for commuting states the quantum distances reduce exactly to these
    /// classical formulas.
    pub fn classical_distance(self, p: &[f64], q: &[f64]) -> f64 {
        match self {
            MetricKind::HilbertSchmidt => d_hs_classical(p, q),
            MetricKind::Trace => d_trace_classical(p, q),
            MetricKind::Bures => d_bures_classical(p, q),
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MetricKind::HilbertSchmidt => "hs",
            MetricKind::Trace => "trace",
            MetricKind::Bures => "bures",
        };
        f.write_str(s)
    }
}

impl FromStr for MetricKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "hs" | "hilbert-schmidt" | "hilbert_schmidt" => Ok(MetricKind::HilbertSchmidt),
            "trace" | "tr" => Ok(MetricKind::Trace),
            "bures" => Ok(MetricKind::Bures),
            other => Err(format!("unknown metric '{}'", other)),
        }
    }
}

/// Hilbert-Schmidt distance sqrt(Tr (rho1-rho2)^2). For a Hermitian
/// difference this is the Frobenius norm, so no eigensolve is needed.
pub fn d_hs(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    let delta = rho1.matrix().sub(rho2.matrix())?;
    Ok(delta.frobenius_norm())
}

/// Trace distance (1/2) Tr |rho1 - rho2|.
pub fn d_trace(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    let delta = rho1.matrix().sub(rho2.matrix())?;
    Ok(0.5 * trace_norm(&delta)?)
}

/// Square root of a state that respects its numerical rank: eigenvalues of
/// a density matrix below the rank threshold are pure rounding noise, and
/// rooting them would amplify an O(eps) perturbation into an O(sqrt(eps))
/// error in the fidelity of rank-deficient states.
fn sqrt_state(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    let (values, vectors) = herm_eig(rho.matrix(), tol::HERMITICITY)?;
    let n = rho.dim();
    let v = vectors.matrix().raw();
    let d = nalgebra::DMatrix::<C64>::from_fn(n, n, |i, j| {
        if i == j && values[i] > tol::RANK {
            C64::new(values[i].sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    ComplexMatrix::new(v * d * v.adjoint())
}

/// Root fidelity Tr |sqrt(rho1) sqrt(rho2)|, evaluated as the trace norm of
/// the product of the two PSD roots. Symmetry in the arguments is a test
/// assertion, not enforced by averaging: an asymmetry beyond tolerance
/// indicates a numerics bug and must surface.
pub fn root_fidelity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    rho1.matrix().check_dim(rho2.matrix())?;
    let r1 = sqrt_state(rho1)?;
    let r2 = sqrt_state(rho2)?;
    trace_norm(&r1.mul(&r2)?)
}

/// Fidelity, the square of the root fidelity. Equals |<psi|phi>|^2 for
/// pure states.
pub fn fidelity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    let rf = root_fidelity(rho1, rho2)?;
    Ok(rf * rf)
}

/// Bures distance sqrt(2 - 2 Tr|sqrt(rho1) sqrt(rho2)|). The argument of
/// the square root is clamped to [0, 2] since the root fidelity can exceed
/// 1 by roundoff.
pub fn d_bures(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    let rf = root_fidelity(rho1, rho2)?;
    Ok((2.0 - 2.0 * rf).clamp(0.0, 2.0).sqrt())
}

/// Bhattacharyya coefficient sum_i sqrt(p_i q_i), the classical root
/// fidelity of two probability vectors.
pub fn bhattacharyya(p: &Spectrum, q: &Spectrum) -> Result<f64> {
    p.check_dim(q)?;
    Ok(bhattacharyya_slice(p.values(), q.values()))
}

pub(crate) fn bhattacharyya_slice(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a * b).max(0.0).sqrt()).sum()
}

/// The Fuchs - van de Graaf sandwich: 1 - sqrt(F) <= D_tr <= sqrt(1 - F).
/// Returns (lower, trace distance, upper).
pub fn fuchs_vdg_check(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<(f64, f64, f64)> {
    let rf = root_fidelity(rho1, rho2)?;
    let dtr = d_trace(rho1, rho2)?;
    let lower = 1.0 - rf;
    let upper = (1.0 - rf * rf).max(0.0).sqrt();
    Ok((lower, dtr, upper))
}

/// True iff the supports are orthogonal: Tr(P1 P2) <= tol for the two
/// support projectors.
pub fn orthogonal_supports(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    tolerance: f64,
) -> Result<bool> {
    rho1.matrix().check_dim(rho2.matrix())?;
    let p1 = support_projector(rho1, tol::RANK)?;
    let p2 = support_projector(rho2, tol::RANK)?;
    Ok(p1.overlap(&p2)? <= tolerance)
}

/// Classical L2 distance between probability vectors; equals d_hs of the
/// corresponding diagonal states.
pub fn d_hs_classical(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Classical L1/2 distance; equals d_trace of the diagonal states.
pub fn d_trace_classical(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Classical Bures distance sqrt(2 - 2 B(p, q)).
pub fn d_bures_classical(p: &[f64], q: &[f64]) -> f64 {
    (2.0 - 2.0 * bhattacharyya_slice(p, q)).clamp(0.0, 2.0).sqrt()
}
