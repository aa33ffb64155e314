//! Dense complex linear algebra, random sampling and combinatorial helpers
//! underpinning every other module. All operations are pure functions of
//! their inputs and safe to call from many threads.

pub mod eig;
pub mod matrix;
pub mod perm;
pub mod random;

pub use eig::{abs_of, herm_eig, matrix_power_psd, matrix_sqrt_psd, singular_values, trace_norm};
pub use matrix::{C64, ComplexMatrix, Unitary};
pub use perm::{all_permutations, unistochastic_from, Permutation};
pub use random::{
    haar_unitary, random_channel_apply, random_density, random_ginibre,
    random_orthogonal_supports, rng_from_seed, split_seed,
};
