//! Deterministic discrimination of state sets and the maximal-simplex view
//! of it: states can be told apart with certainty iff their supports do not
//! overlap, iff they sit at mutual diameter distance for the trace or Bures
//! metric.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::MetricKind;
use crate::numerics::eig::herm_eig;
use crate::numerics::matrix::ComplexMatrix;
use crate::numerics::random::{haar_unitary, split_seed};
use crate::states::{diag_state, support_projector, validate_state, DensityMatrix, Projector, Spectrum};
use crate::tol;

/// A finite positive operator-valued measure: elements are Hermitian with
/// eigenvalues in [0, 1] and sum to the identity, within the stated
/// tolerances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Povm {
    pub elements: Vec<ComplexMatrix>,
    pub dim: usize,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>, dim: usize) -> Result<Self> {
        let povm = Self { elements, dim };
        povm.validate()?;
        Ok(povm)
    }

    pub fn validate(&self) -> Result<()> {
        if self.elements.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut sum = ComplexMatrix::zeros(self.dim);
        for (k, element) in self.elements.iter().enumerate() {
            if element.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    left: element.dim(),
                    right: self.dim,
                });
            }
            let residual = element.hermiticity_residual();
            if residual > tol::HERMITICITY {
                return Err(Error::NotHermitian { residual });
            }
            let (values, _) = herm_eig(element, tol::HERMITICITY)?;
            let min = values.first().copied().unwrap_or(0.0);
            let max = values.last().copied().unwrap_or(0.0);
            if min < -tol::PSD || max > 1.0 + tol::PSD {
                return Err(Error::InvalidPovm {
                    reason: format!(
                        "element {} has eigenvalues in [{:.3e}, {:.3e}], outside [0, 1]",
                        k, min, max
                    ),
                });
            }
            sum = sum.add(element)?;
        }
        let completeness = sum.sub(&ComplexMatrix::identity(self.dim))?.max_abs();
        if completeness > tol::POVM_COMPLETENESS {
            return Err(Error::InvalidPovm {
                reason: format!("elements sum to identity only within {:.3e}", completeness),
            });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Outcome of a deterministic-discriminability test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminationReport {
    pub discriminable: bool,
    pub rank_sum: usize,
    pub dim: usize,
    pub max_pairwise_overlap: f64,
    pub povm: Option<Povm>,
}

impl DiscriminationReport {
    /// A discriminable verdict must respect the rank bound sum rank <= dim
    /// and the overlap threshold it was issued under.
    pub fn validate(&self, overlap_tol: f64) -> Result<()> {
        if self.discriminable {
            if self.rank_sum > self.dim {
                return Err(Error::ReportInvariantViolated {
                    detail: format!(
                        "discriminable but rank sum {} exceeds dimension {}",
                        self.rank_sum, self.dim
                    ),
                });
            }
            if self.max_pairwise_overlap > overlap_tol {
                return Err(Error::ReportInvariantViolated {
                    detail: format!(
                        "discriminable but overlap {:.3e} exceeds tolerance {:.3e}",
                        self.max_pairwise_overlap, overlap_tol
                    ),
                });
            }
        }
        Ok(())
    }
}

fn support_projectors(states: &[DensityMatrix]) -> Result<(usize, Vec<Projector>)> {
    let first = states.first().ok_or(Error::EmptySet)?;
    let dim = first.dim();
    let mut projectors = Vec::with_capacity(states.len());
    for state in states {
        if state.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: state.dim(),
            });
        }
        projectors.push(support_projector(state, tol::RANK)?);
    }
    Ok((dim, projectors))
}

/// Decide whether a set of states can be discriminated deterministically:
/// true iff every pairwise support overlap Tr(P_i P_j) stays below
/// `overlap_tol`. A witnessing POVM is attached when the answer is yes.
pub fn can_discriminate(
    states: &[DensityMatrix],
    overlap_tol: f64,
) -> Result<DiscriminationReport> {
    let (dim, projectors) = support_projectors(states)?;
    let mut max_overlap = 0.0_f64;
    for i in 0..projectors.len() {
        for j in (i + 1)..projectors.len() {
            max_overlap = max_overlap.max(projectors[i].overlap(&projectors[j])?);
        }
    }
    let discriminable = max_overlap <= overlap_tol;
    let rank_sum = projectors.iter().map(Projector::rank).sum();
    let povm = if discriminable {
        Some(povm_from_projectors(dim, &projectors)?)
    } else {
        None
    };
    let report = DiscriminationReport {
        discriminable,
        rank_sum,
        dim,
        max_pairwise_overlap: max_overlap,
        povm,
    };
    report.validate(overlap_tol)?;
    Ok(report)
}

/// The witnessing POVM {P_1, .., P_K, 1 - sum P_k}: each conclusive element
/// is the support projector of its state (the free off-support block is set
/// to zero) and the remainder of the space is assigned to the inconclusive
/// element, which is kept even when it vanishes.
pub fn build_discrimination_povm(states: &[DensityMatrix]) -> Result<Povm> {
    let report = can_discriminate(states, tol::OVERLAP)?;
    report.povm.ok_or(Error::NotDiscriminable)
}

fn povm_from_projectors(dim: usize, projectors: &[Projector]) -> Result<Povm> {
    let mut elements: Vec<ComplexMatrix> =
        projectors.iter().map(|p| p.matrix().clone()).collect();
    let mut residual = ComplexMatrix::identity(dim);
    for p in projectors {
        residual = residual.sub(p.matrix())?;
    }
    elements.push(residual);
    Povm::new(elements, dim)
}

/// Largest subset of states that is deterministically discriminable: the
/// maximum clique of the graph joining pairs with support overlap at most
/// `overlap_tol`. Exact branch-and-bound, ties broken towards the
/// lexicographically smallest index set.
pub fn max_distinguishable_subset(
    states: &[DensityMatrix],
    overlap_tol: f64,
) -> Result<(usize, Vec<usize>)> {
    if states.len() > tol::CLIQUE_CAP {
        return Err(Error::SetTooLarge {
            size: states.len(),
            cap: tol::CLIQUE_CAP,
        });
    }
    let (_, projectors) = support_projectors(states)?;
    let n = states.len();
    let mut adjacency = vec![0u32; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if projectors[i].overlap(&projectors[j])? <= overlap_tol {
                adjacency[i] |= 1 << j;
                adjacency[j] |= 1 << i;
            }
        }
    }
    let clique = max_clique_lex(&adjacency);
    Ok((clique.len(), clique))
}

/// Depth-first search over cliques in ascending vertex order with a simple
/// counting bound; with strict improvement only, the first maximum clique
/// encountered is the lexicographically smallest one.
fn max_clique_lex(adjacency: &[u32]) -> Vec<usize> {
    fn extend(
        adjacency: &[u32],
        current: &mut Vec<usize>,
        candidates: u32,
        best: &mut Vec<usize>,
    ) {
        if current.len() + candidates.count_ones() as usize <= best.len() {
            return;
        }
        if candidates == 0 {
            if current.len() > best.len() {
                *best = current.clone();
            }
            return;
        }
        let mut rest = candidates;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if current.len() + 1 + rest.count_ones() as usize <= best.len() {
                break;
            }
            current.push(v);
            let above = u32::MAX.checked_shl(v as u32 + 1).unwrap_or(0);
            extend(adjacency, current, candidates & adjacency[v] & above, best);
            current.pop();
        }
    }

    let n = adjacency.len();
    debug_assert!(n <= tol::CLIQUE_CAP);
    let mut best = Vec::new();
    let mut current = Vec::new();
    let all = (1u32 << n) - 1;
    extend(adjacency, &mut current, all, &mut best);
    best
}

/// True iff every pairwise distance equals the metric's diameter within
/// `tolerance`, i.e. the states span a maximal simplex. Only the monotone
/// metrics are admitted: maximal Hilbert-Schmidt distance does not
/// characterise orthogonal supports.
pub fn simplex_side_check(
    states: &[DensityMatrix],
    metric: MetricKind,
    tolerance: f64,
) -> Result<bool> {
    if !metric.is_monotone() {
        return Err(Error::UnsupportedMetric { metric });
    }
    if states.len() < 2 {
        return Err(Error::EmptySet);
    }
    let dim = states[0].dim();
    for s in states {
        if s.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: s.dim(),
            });
        }
    }
    let diameter = metric.diameter();
    for i in 0..states.len() {
        for j in (i + 1)..states.len() {
            let d = metric.distance(&states[i], &states[j])?;
            if (d - diameter).abs() > tolerance {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Side length, in Bures distance, of the simplex spanned by a SIC-POVM in
/// dimension `dim`: sqrt(2 - 2/sqrt(dim + 1)). Strictly below the maximal
/// side sqrt(2) for every finite dimension.
pub fn sic_simplex_side(dim: usize) -> Result<f64> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim });
    }
    Ok((2.0 - 2.0 / ((dim as f64) + 1.0).sqrt()).sqrt())
}

/// Falsification harness for the reduction to diagonal states: the number
/// of deterministically discriminable states among diag(p_1), .., diag(p_K)
/// must never be beaten by rotating each spectrum with its own random
/// unitary. Returns true iff no rotated ensemble wins in any trial; a
/// `false` outcome signals an implementation bug, not new physics.
pub fn diagonal_reduction_check(
    spectra: &[Spectrum],
    overlap_tol: f64,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    if spectra.is_empty() {
        return Err(Error::EmptySet);
    }
    if spectra.len() > tol::CLIQUE_CAP {
        return Err(Error::SetTooLarge {
            size: spectra.len(),
            cap: tol::CLIQUE_CAP,
        });
    }
    let dim = spectra[0].dim();
    let diagonal: Vec<DensityMatrix> = spectra.iter().map(diag_state).collect();
    let (diag_count, _) = max_distinguishable_subset(&diagonal, overlap_tol)?;

    for trial in 0..trials {
        let mut rotated = Vec::with_capacity(spectra.len());
        for (i, p) in spectra.iter().enumerate() {
            let u = haar_unitary(dim, split_seed(seed, (trial * spectra.len() + i) as u64));
            let m = diag_state(p).matrix().conjugate_by(&u)?;
            rotated.push(validate_state(&m)?);
        }
        let (rot_count, _) = max_distinguishable_subset(&rotated, overlap_tol)?;
        if rot_count > diag_count {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::random::{random_density, random_orthogonal_supports};

    fn diag(values: &[f64]) -> DensityMatrix {
        validate_state(&ComplexMatrix::diag_real(values)).unwrap()
    }

    #[test]
    fn orthogonal_pair_is_discriminable() {
        let states = [diag(&[1.0, 0.0, 0.0]), diag(&[0.0, 0.5, 0.5])];
        let report = can_discriminate(&states, tol::OVERLAP).unwrap();
        assert!(report.discriminable);
        assert_eq!(report.rank_sum, 3);
        assert!(report.max_pairwise_overlap <= 1e-10);
        let povm = report.povm.unwrap();
        assert_eq!(povm.len(), 3);
        // conclusive elements answer with certainty
        for (k, state) in states.iter().enumerate() {
            let p = povm.elements[k].mul(state.matrix()).unwrap().trace().re;
            assert!((p - 1.0).abs() <= 1e-8);
        }
        // inconclusive element vanishes: ranks fill the space
        assert!(povm.elements[2].max_abs() <= 1e-8);
    }

    #[test]
    fn duplicates_and_full_rank_fail() {
        let rho = diag(&[0.5, 0.5, 0.0]);
        let report = can_discriminate(&[rho.clone(), rho], tol::OVERLAP).unwrap();
        assert!(!report.discriminable);
        assert!(report.povm.is_none());

        let r1 = validate_state(&random_density(3, 3, 1)).unwrap();
        let r2 = validate_state(&random_density(3, 3, 2)).unwrap();
        let report = can_discriminate(&[r1, r2], tol::OVERLAP).unwrap();
        assert!(!report.discriminable);
        assert_eq!(report.rank_sum, 6);
    }

    #[test]
    fn empty_set_is_rejected() {
        assert!(matches!(
            can_discriminate(&[], tol::OVERLAP),
            Err(Error::EmptySet)
        ));
    }

    #[test]
    fn single_pure_state_povm_completes_the_basis() {
        let states = [diag(&[1.0, 0.0])];
        let povm = build_discrimination_povm(&states).unwrap();
        assert_eq!(povm.len(), 2);
        let expected0 = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let expected1 = ComplexMatrix::diag_real(&[0.0, 1.0]);
        assert!(povm.elements[0].sub(&expected0).unwrap().max_abs() <= 1e-10);
        assert!(povm.elements[1].sub(&expected1).unwrap().max_abs() <= 1e-10);
    }

    #[test]
    fn povm_on_random_orthogonal_supports() {
        for seed in 0..10u64 {
            let matrices = random_orthogonal_supports(6, &[2, 2, 1], seed).unwrap();
            let states: Vec<DensityMatrix> =
                matrices.iter().map(|m| validate_state(m).unwrap()).collect();
            let povm = build_discrimination_povm(&states).unwrap();
            assert_eq!(povm.len(), 4);
            povm.validate().unwrap();
            for (k, state) in states.iter().enumerate() {
                let p = povm.elements[k].mul(state.matrix()).unwrap().trace().re;
                assert!((p - 1.0).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn build_rejects_overlapping_states() {
        let r1 = validate_state(&random_density(3, 2, 5)).unwrap();
        let r2 = validate_state(&random_density(3, 2, 6)).unwrap();
        assert!(matches!(
            build_discrimination_povm(&[r1, r2]),
            Err(Error::NotDiscriminable)
        ));
    }

    #[test]
    fn povm_validation_catches_bad_sets() {
        // missing residual element: does not sum to identity
        let p = ComplexMatrix::diag_real(&[1.0, 0.0]);
        assert!(matches!(
            Povm::new(vec![p.clone()], 2),
            Err(Error::InvalidPovm { .. })
        ));
        // eigenvalue above one
        let big = ComplexMatrix::diag_real(&[1.5, 0.5]);
        let compensate = ComplexMatrix::diag_real(&[-0.5, 0.5]);
        assert!(matches!(
            Povm::new(vec![big, compensate], 2),
            Err(Error::InvalidPovm { .. })
        ));
    }

    #[test]
    fn clique_examples() {
        // orthogonal basis states in dim 3: all three discriminable
        let basis = [
            diag(&[1.0, 0.0, 0.0]),
            diag(&[0.0, 1.0, 0.0]),
            diag(&[0.0, 0.0, 1.0]),
        ];
        let (size, indices) = max_distinguishable_subset(&basis, tol::OVERLAP).unwrap();
        assert_eq!(size, 3);
        assert_eq!(indices, vec![0, 1, 2]);

        // full-rank states: no orthogonal pair at all
        let full: Vec<DensityMatrix> = (0..4)
            .map(|k| validate_state(&random_density(3, 3, 50 + k)).unwrap())
            .collect();
        let (size, indices) = max_distinguishable_subset(&full, tol::OVERLAP).unwrap();
        assert_eq!(size, 1);
        assert_eq!(indices, vec![0]);

        // |0>, |1>, |+>: the two basis states win, lexicographically first
        let zero = diag(&[1.0, 0.0]);
        let one = diag(&[0.0, 1.0]);
        let plus = validate_state(
            &ComplexMatrix::pure_state(&[
                crate::numerics::matrix::C64::new(1.0, 0.0),
                crate::numerics::matrix::C64::new(1.0, 0.0),
            ])
            .unwrap(),
        )
        .unwrap();
        let (size, indices) =
            max_distinguishable_subset(&[zero, one, plus], tol::OVERLAP).unwrap();
        assert_eq!(size, 2);
        assert_eq!(indices, vec![0, 1]);
    }

    #[test]
    fn clique_cap_is_enforced() {
        let states: Vec<DensityMatrix> = (0..25)
            .map(|k| validate_state(&random_density(2, 1, k)).unwrap())
            .collect();
        assert!(matches!(
            max_distinguishable_subset(&states, tol::OVERLAP),
            Err(Error::SetTooLarge { size: 25, cap: 24 })
        ));
    }

    #[test]
    fn simplex_side_examples() {
        let basis = [
            diag(&[1.0, 0.0, 0.0]),
            diag(&[0.0, 1.0, 0.0]),
            diag(&[0.0, 0.0, 1.0]),
        ];
        assert!(simplex_side_check(&basis, MetricKind::Trace, 1e-8).unwrap());
        assert!(simplex_side_check(&basis, MetricKind::Bures, 1e-8).unwrap());

        let pair = [diag(&[1.0, 0.0, 0.0]), diag(&[0.0, 0.5, 0.5])];
        assert!(simplex_side_check(&pair, MetricKind::Trace, 1e-8).unwrap());

        let zero = diag(&[1.0, 0.0]);
        let plus = validate_state(
            &ComplexMatrix::pure_state(&[
                crate::numerics::matrix::C64::new(1.0, 0.0),
                crate::numerics::matrix::C64::new(1.0, 0.0),
            ])
            .unwrap(),
        )
        .unwrap();
        assert!(!simplex_side_check(&[zero.clone(), plus], MetricKind::Trace, 1e-8).unwrap());

        assert!(matches!(
            simplex_side_check(&[zero.clone(), zero], MetricKind::HilbertSchmidt, 1e-8),
            Err(Error::UnsupportedMetric { .. })
        ));
    }

    #[test]
    fn sic_side_lengths() {
        assert!((sic_simplex_side(3).unwrap() - 1.0).abs() <= 1e-12);
        let d2 = sic_simplex_side(2).unwrap();
        assert!((d2 - (2.0 - 2.0 / 3.0_f64.sqrt()).sqrt()).abs() <= 1e-12);
        let sqrt2 = 2.0_f64.sqrt();
        let mut previous = 0.0;
        for dim in 2..=64 {
            let side = sic_simplex_side(dim).unwrap();
            assert!(side < sqrt2);
            assert!(side > previous);
            previous = side;
        }
        assert!(matches!(
            sic_simplex_side(1),
            Err(Error::InvalidDimension { dim: 1 })
        ));
    }

    #[test]
    fn diagonal_reduction_small_cases() {
        let ortho = [
            Spectrum::new(vec![1.0, 0.0]).unwrap(),
            Spectrum::new(vec![0.0, 1.0]).unwrap(),
        ];
        assert!(diagonal_reduction_check(&ortho, tol::OVERLAP, 20, 3).unwrap());

        let mixed = [Spectrum::uniform(3), Spectrum::uniform(3), Spectrum::uniform(3)];
        assert!(diagonal_reduction_check(&mixed, tol::OVERLAP, 10, 4).unwrap());
    }
}
