use nalgebra::DMatrix;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerics::matrix::{C64, ComplexMatrix, Unitary};
use crate::tol;

/// A permutation of {0, .., dim-1}. `mapping[i]` is the source index moved
/// into slot i, i.e. applying to a vector v yields w with w[i] = v[mapping[i]].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.mapping.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let mapping = Vec::<usize>::deserialize(deserializer)?;
        Permutation::new(mapping).map_err(D::Error::custom)
    }
}

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &m in &mapping {
            if m >= n || seen[m] {
                return Err(Error::InvalidPermutation);
            }
            seen[m] = true;
        }
        Ok(Self { mapping })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mapping: (0..dim).collect(),
        }
    }

    pub fn reversal(dim: usize) -> Self {
        Self {
            mapping: (0..dim).rev().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.mapping.len()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn apply<T: Copy>(&self, values: &[T]) -> Vec<T> {
        assert_eq!(values.len(), self.dim());
        self.mapping.iter().map(|&m| values[m]).collect()
    }

    /// Permutation matrix P with P v = apply(v): P[i][mapping[i]] = 1.
    pub fn to_unitary(&self) -> Unitary {
        let n = self.dim();
        let m = ComplexMatrix::from_fn(n, |i, j| {
            if self.mapping[i] == j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .expect("finite entries");
        Unitary::new(m).expect("permutation matrices are unitary")
    }
}

/// All dim! permutations in lexicographic order of their mapping. Capped at
/// dim <= 8 (40320 permutations) to keep brute-force oracles fast.
pub fn all_permutations(dim: usize) -> Result<Vec<Permutation>> {
    if dim > tol::PERMUTATION_CAP {
        return Err(Error::DimensionTooLarge {
            dim,
            cap: tol::PERMUTATION_CAP,
        });
    }
    let mut current: Vec<usize> = (0..dim).collect();
    let mut out = Vec::new();
    loop {
        out.push(Permutation {
            mapping: current.clone(),
        });
        if !next_permutation(&mut current) {
            break;
        }
    }
    Ok(out)
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// B_ij = |U_ij|^2; unistochastic by construction, hence bistochastic.
pub fn unistochastic_from(u: &Unitary) -> DMatrix<f64> {
    let n = u.dim();
    DMatrix::from_fn(n, n, |i, j| u.matrix().entry(i, j).norm_sqr())
}
