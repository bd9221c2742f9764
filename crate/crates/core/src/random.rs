//! Seeded random ensembles.
//!
//! Every random draw in the crate comes from ChaCha8 (`rand_chacha`). A
//! work item keyed by `(seed, stream)` gets its own generator seeded with
//! `seed` and positioned on ChaCha stream `stream`, so results do not depend
//! on scheduling or thread count. Multi-level keys are packed with
//! [`stream_id`].

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{norm, Matrix};
use crate::model::{SensingMatrix, SparseSignal, SupportSet};
use crate::scalar::Real;

pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.9), one stream per (cell, trial)";

/// Columns whose pre-normalization norm falls below this are redrawn.
const MIN_COLUMN_NORM: f64 = 1e-8;

/// Packs a two-level key into a stream number.
pub fn stream_id(outer: u64, inner: u64) -> u64 {
    (outer << 32) | (inner & 0xffff_ffff)
}

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn standard_normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    let v: f64 = StandardNormal.sample(rng);
    T::lit(v)
}

/// `m x n` Gaussian matrix with every column scaled to unit norm.
pub fn gaussian_unit_columns<T: Real, R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize) -> Result<SensingMatrix<T>> {
    let mut columns = Vec::with_capacity(n);
    while columns.len() < n {
        let col: Vec<T> = (0..m).map(|_| standard_normal(rng)).collect();
        let c = norm(&col);
        if c < T::lit(MIN_COLUMN_NORM) {
            continue;
        }
        columns.push(col.into_iter().map(|v| v / c).collect::<Vec<T>>());
    }
    SensingMatrix::new(Matrix::from_columns(&columns)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignalModel {
    /// Standard normal nonzeros.
    Gaussian,
    /// Random signs.
    Rademacher,
    /// All nonzeros equal to 1.
    Ones,
}

impl std::str::FromStr for SignalModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Self::Gaussian),
            "rademacher" => Ok(Self::Rademacher),
            "ones" => Ok(Self::Ones),
            other => Err(Error::InvalidParameter(format!(
                "unknown signal model {other:?} (expected gaussian, rademacher or ones)"
            ))),
        }
    }
}

impl std::fmt::Display for SignalModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Gaussian => "gaussian",
            Self::Rademacher => "rademacher",
            Self::Ones => "ones",
        })
    }
}

/// Uniformly random support of size `k` in `{1, ..., n}`, increasing order.
pub fn random_support<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> SupportSet {
    let mut idx = sample(rng, n, k).into_vec();
    idx.sort_unstable();
    SupportSet::from_zero_based(idx)
}

/// Exactly `k`-sparse signal: uniform support, values from `model`.
/// Gaussian draws that land within the zero tolerance are redrawn.
pub fn random_sparse_signal<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    k: usize,
    model: SignalModel,
) -> Result<SparseSignal<T>> {
    if k > n {
        return Err(Error::InvalidParameter(format!("sparsity {k} exceeds length {n}")));
    }
    let support = random_support(rng, n, k);
    let zero = T::tolerances().zero;
    let coeffs: Vec<T> = (0..k)
        .map(|_| match model {
            SignalModel::Gaussian => loop {
                let v: T = standard_normal(rng);
                if v.abs() > zero {
                    break v;
                }
            },
            SignalModel::Rademacher => {
                if rng.random::<bool>() {
                    T::one()
                } else {
                    -T::one()
                }
            }
            SignalModel::Ones => T::one(),
        })
        .collect();
    SparseSignal::from_support(n, &support, &coeffs)
}
