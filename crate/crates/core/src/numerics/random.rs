use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numerics::matrix::{C64, ComplexMatrix, Unitary};
use crate::states::validate_state;

/// The one RNG used throughout the crate. Every stochastic operation takes
/// an explicit 64-bit seed so runs are bit-reproducible.
pub fn rng_from_seed(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Derive an independent child seed (SplitMix64 finalizer). Ensemble drivers
/// fan out over `split_seed(seed, i)` so samples can be replayed in isolation
/// and parallel partitions agree with serial runs.
pub fn split_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn standard_complex(rng: &mut ChaCha12Rng) -> C64 {
    // Standard complex normal: re and im each N(0, 1/2).
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re / 2.0_f64.sqrt(), im / 2.0_f64.sqrt())
}

/// Square matrix of iid standard complex Gaussians (Ginibre ensemble).
pub fn random_ginibre(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = rng_from_seed(seed);
    ComplexMatrix::new(DMatrix::from_fn(dim, dim, |_, _| standard_complex(&mut rng)))
        .expect("gaussian entries are finite")
}

/// Haar-distributed random unitary.
///
/// QR of a Ginibre matrix alone is not Haar; the R diagonal phases must be
/// absorbed into Q (Q -> Q diag(r_ii/|r_ii|)) to make the distribution
/// right-invariant.
pub fn haar_unitary(dim: usize, seed: u64) -> Unitary {
    let g = random_ginibre(dim, seed);
    let qr = g.into_raw().qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    Unitary::new(ComplexMatrix::new(q).expect("finite entries"))
        .expect("orthonormalized Ginibre is unitary")
}

/// Random density matrix of prescribed rank: G G^dag / Tr(G G^dag) with G
/// a dim x rank Ginibre block. Unit trace holds to ~1e-16; numerical rank
/// equals `rank` at threshold 1e-10 almost surely.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> ComplexMatrix {
    assert!(
        rank >= 1 && rank <= dim,
        "rank must satisfy 1 <= rank <= dim"
    );
    let mut rng = rng_from_seed(seed);
    let g = DMatrix::from_fn(dim, rank, |_, _| standard_complex(&mut rng));
    let mut m = &g * g.adjoint();
    let trace: f64 = m.diagonal().iter().map(|z| z.re).sum();
    m /= C64::new(trace, 0.0);
    ComplexMatrix::new(m).expect("finite entries")
}

/// Push a state through a random channel: embed via a Haar isometry into a
/// dim x env_dim composite space and trace out the environment. env_dim = 1
/// reduces to a Haar unitary conjugation. Same seed, same channel.
pub fn random_channel_apply(
    rho: &ComplexMatrix,
    env_dim: usize,
    seed: u64,
) -> Result<ComplexMatrix> {
    let state = validate_state(rho).map_err(|e| Error::InvalidState {
        reason: e.to_string(),
    })?;
    let dim = state.dim();
    assert!(env_dim >= 1, "environment dimension must be positive");

    let full = dim * env_dim;
    let u = haar_unitary(full, seed);
    // Isometry V = first `dim` columns of U; rows indexed (i, e) -> i*env_dim + e.
    let um = u.matrix().raw();
    let v = um.columns(0, dim).into_owned();
    let big = &v * rho.raw() * v.adjoint();

    let out = DMatrix::from_fn(dim, dim, |i, j| {
        (0..env_dim)
            .map(|e| big[(i * env_dim + e, j * env_dim + e)])
            .sum()
    });
    ComplexMatrix::new(out)
}

/// A tuple of states with pairwise exactly orthogonal supports: the columns
/// of one Haar unitary are split into one block per requested rank and each
/// state is a random rank-`ranks[k]` density on its block.
pub fn random_orthogonal_supports(
    dim: usize,
    ranks: &[usize],
    seed: u64,
) -> Result<Vec<ComplexMatrix>> {
    let total: usize = ranks.iter().sum();
    if total > dim || ranks.contains(&0) {
        return Err(Error::InvalidState {
            reason: format!("ranks {:?} do not fit in dimension {}", ranks, dim),
        });
    }
    let basis = haar_unitary(dim, seed);
    let bm = basis.matrix().raw();
    let mut out = Vec::with_capacity(ranks.len());
    let mut offset = 0;
    for (k, &rank) in ranks.iter().enumerate() {
        let block = bm.columns(offset, rank).into_owned();
        let mut rng = rng_from_seed(split_seed(seed, 1 + k as u64));
        let g = DMatrix::from_fn(rank, rank, |_, _| standard_complex(&mut rng));
        let mut m = &block * &g * g.adjoint() * block.adjoint();
        let trace: f64 = m.diagonal().iter().map(|z| z.re).sum();
        m /= C64::new(trace, 0.0);
        out.push(ComplexMatrix::new(m)?);
        offset += rank;
    }
    Ok(out)
}
