//! Distances and fidelities on the space of density matrices, closed-form
//! extremal distances between unitary orbits, deterministic discrimination
//! of state sets, and brute-force verification ensembles for every bound
//! the library implements.

pub mod discrimination;
pub mod error;
pub mod json;
pub mod metrics;
pub mod numerics;
pub mod orbits;
pub mod states;
pub mod verify;

/// Default numerical tolerances and search caps, shared across modules.
pub mod tol {
    /// Max-norm tolerance on U U^dag - I for accepting a unitary.
    pub const UNITARITY: f64 = 1e-10;
    /// Max-norm tolerance on H - H^dag for accepting a Hermitian input.
    pub const HERMITICITY: f64 = 1e-10;
    /// Eigenvalues in [-PSD, 0) are treated as zero; below -PSD is an error.
    pub const PSD: f64 = 1e-9;
    /// Eigenvalues above RANK count towards the numerical rank.
    pub const RANK: f64 = 1e-10;
    /// Pairwise support overlap Tr(P_i P_j) below OVERLAP counts as disjoint.
    pub const OVERLAP: f64 = 1e-8;
    /// Spectrum entries below this floor are rejected; in [floor, 0) clamped.
    pub const SPECTRUM_FLOOR: f64 = -1e-12;
    /// Spectra must sum to one within this tolerance; also the state trace
    /// tolerance.
    pub const SPECTRUM_SUM: f64 = 1e-10;
    /// POVM elements must sum to the identity within this max-norm bound.
    pub const POVM_COMPLETENESS: f64 = 1e-8;
    /// Exhaustive permutation search is capped at 8! = 40320.
    pub const PERMUTATION_CAP: usize = 8;
    /// Exact max-clique search is capped at 24 vertices.
    pub const CLIQUE_CAP: usize = 24;
}

pub use discrimination::{
    build_discrimination_povm, can_discriminate, diagonal_reduction_check,
    max_distinguishable_subset, sic_simplex_side, simplex_side_check, DiscriminationReport, Povm,
};
pub use error::{Error, Result};
pub use metrics::{
    bhattacharyya, d_bures, d_bures_classical, d_hs, d_hs_classical, d_trace, d_trace_classical,
    fidelity, fuchs_vdg_check, orthogonal_supports, root_fidelity, MetricKind,
};
pub use numerics::{
    abs_of, all_permutations, haar_unitary, herm_eig, matrix_power_psd, matrix_sqrt_psd,
    random_channel_apply, random_density, random_ginibre, random_orthogonal_supports,
    rng_from_seed, singular_values, split_seed, trace_norm, unistochastic_from, C64,
    ComplexMatrix, Permutation, Unitary,
};
pub use orbits::{
    bures_orbit_bounds, eigen_difference_bounds, fidelity_orbit_bounds, horn_johnson_partial_sums,
    orbit_extremes, trace_orbit_bounds, trace_product_bounds, trace_product_bounds_hermitian,
    trace_unitary_max_check, von_neumann_bound, weyl_chamber_index, OrbitBoundsReport,
    TraceUnitaryMax,
};
pub use states::{
    diag_state, numerical_rank, sort_spectrum, support_projector, validate_state, DensityMatrix,
    Projector, SortDirection, Spectrum,
};
pub use verify::{run_verify, FailureWitness, PropertyOutcome, VerifyConfig, VerifySummary};
