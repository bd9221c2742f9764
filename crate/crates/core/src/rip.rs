//! Exact restricted isometry constants by exhaustive enumeration.
//!
//! `delta_K` is the largest deviation from 1 of any eigenvalue of any
//! `K x K` principal submatrix of the Gram matrix `A'A`. Subsets are walked
//! in lexicographic order in fixed-size blocks; blocks may be processed in
//! parallel and are merged by value, then by subset rank, so the witness is
//! the same whatever the thread count.

use std::collections::BTreeMap;
use std::sync::Mutex;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, next_combination, unrank};
use crate::error::{Error, Result};
use crate::linalg::{norm, norm_sq, Matrix, SymmetricEigen};
use crate::model::{RipEstimate, SensingMatrix, SparseSignal, SupportSet};
use crate::ols::project_complement;
use crate::scalar::Real;

pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

const BLOCK: u128 = 2048;

#[derive(Clone, Copy)]
struct Partial<T> {
    delta: T,
    rank: u128,
    lambda_min: T,
    lambda_max: T,
}

impl<T: Real> Partial<T> {
    fn merge(self, other: Self) -> Self {
        let (delta, rank) = if other.delta > self.delta || (other.delta == self.delta && other.rank < self.rank) {
            (other.delta, other.rank)
        } else {
            (self.delta, self.rank)
        };
        Partial {
            delta,
            rank,
            lambda_min: self.lambda_min.min(other.lambda_min),
            lambda_max: self.lambda_max.max(other.lambda_max),
        }
    }
}

pub fn exact_rip_constant<T: Real>(a: &SensingMatrix<T>, order: usize) -> Result<RipEstimate<T>> {
    exact_rip_constant_capped(a, order, DEFAULT_ENUMERATION_CAP)
}

pub fn exact_rip_constant_capped<T: Real>(a: &SensingMatrix<T>, order: usize, cap: u128) -> Result<RipEstimate<T>> {
    let n = a.cols();
    if order == 0 || order > n {
        return Err(Error::InvalidParameter(format!("RIP order {order} must lie in 1..={n}")));
    }
    let total = binomial(n, order);
    if total > cap {
        return Err(Error::EnumerationCap { subsets: total, cap });
    }
    let gram = a.matrix().gram();
    let blocks = total.div_ceil(BLOCK);
    let best = (0..blocks as u64)
        .into_par_iter()
        .map(|b| scan_block(&gram, order, b as u128 * BLOCK, ((b as u128 + 1) * BLOCK).min(total)))
        .reduce_with(Partial::merge)
        .expect("at least one subset");

    let one = T::one();
    let delta = best.delta;
    Ok(RipEstimate {
        order,
        delta,
        lambda_min: best.lambda_min,
        lambda_max: best.lambda_max,
        witness_subset: SupportSet::from_zero_based(unrank(n, order, best.rank)),
        subsets_enumerated: total as u64,
        rip_violated: delta >= one - T::tolerances().psd,
    })
}

fn scan_block<T: Real>(gram: &Matrix<T>, order: usize, start: u128, end: u128) -> Partial<T> {
    let n = gram.nrows();
    let mut subset = unrank(n, order, start);
    let mut acc: Option<Partial<T>> = None;
    for rank in start..end {
        let eig = SymmetricEigen::new(&gram.principal_submatrix(&subset));
        let (lo, hi) = (eig.min(), eig.max());
        let here = Partial {
            delta: (hi - T::one()).max(T::one() - lo),
            rank,
            lambda_min: lo,
            lambda_max: hi,
        };
        acc = Some(match acc {
            None => here,
            Some(p) => p.merge(here),
        });
        if rank + 1 < end {
            next_combination(&mut subset, n);
        }
    }
    acc.expect("non-empty block")
}

/// Unit vector on the witness subset whose image attains
/// `| ||Ax||^2 - 1 | = delta`.
pub fn witness_vector<T: Real>(a: &SensingMatrix<T>, estimate: &RipEstimate<T>) -> Result<SparseSignal<T>> {
    let sub = a.submatrix(&estimate.witness_subset)?;
    let eig = SymmetricEigen::new(&sub.gram());
    let upper = eig.max() - T::one();
    let lower = T::one() - eig.min();
    let col = if upper >= lower { eig.values.len() - 1 } else { 0 };
    SparseSignal::from_support(a.cols(), &estimate.witness_subset, eig.vectors.column(col))
}

/// Samples random unit vectors supported on random `order`-subsets and
/// returns the worst amount by which `||Ax||^2` leaves `[1 - delta, 1 + delta]`.
/// Non-positive means every sample was consistent with the estimate.
pub fn rip_definition_spot_check<T: Real>(
    a: &SensingMatrix<T>,
    estimate: &RipEstimate<T>,
    trials: usize,
    seed: u64,
) -> Result<T> {
    let n = a.cols();
    let order = estimate.order;
    if order == 0 || order > n {
        return Err(Error::InvalidParameter(format!("RIP order {order} must lie in 1..={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (T::one() - estimate.delta, T::one() + estimate.delta);
    let mut worst = T::neg_infinity();
    for _ in 0..trials {
        let idx = sample(&mut rng, n, order).into_vec();
        let mut coeffs: Vec<T> = (0..order)
            .map(|_| T::lit(StandardNormal.sample(&mut rng)))
            .collect();
        let c_norm = norm(&coeffs);
        if c_norm == T::zero() {
            continue;
        }
        for c in coeffs.iter_mut() {
            *c /= c_norm;
        }
        let sub = a.matrix().select_columns(&idx);
        let energy = norm_sq(&sub.mul_vec(&coeffs)?);
        worst = worst.max(energy - hi).max(lo - energy);
    }
    Ok(if trials == 0 { T::zero() } else { worst })
}

/// Lazily computed exact constants of one matrix, one entry per order.
pub struct RipCache<'a, T> {
    matrix: &'a SensingMatrix<T>,
    cap: u128,
    entries: Mutex<BTreeMap<usize, RipEstimate<T>>>,
}

impl<'a, T: Real> RipCache<'a, T> {
    pub fn new(matrix: &'a SensingMatrix<T>) -> Self {
        Self::with_cap(matrix, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(matrix: &'a SensingMatrix<T>, cap: u128) -> Self {
        Self {
            matrix,
            cap,
            entries: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn matrix(&self) -> &'a SensingMatrix<T> {
        self.matrix
    }

    pub fn get(&self, order: usize) -> Result<RipEstimate<T>> {
        if let Some(e) = self.entries.lock().expect("rip cache poisoned").get(&order) {
            return Ok(e.clone());
        }
        let est = exact_rip_constant_capped(self.matrix, order, self.cap)?;
        self.entries
            .lock()
            .expect("rip cache poisoned")
            .insert(order, est.clone());
        Ok(est)
    }
}

/// Both sides of the projected-matrix RIP sandwich
/// `(1 - d) ||x_{S\J}||^2 <= ||P_J^perp A x||^2 <= (1 + d) ||x_{S\J}||^2`
/// with `d = delta_{|S u J|}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SandwichSlack<T> {
    pub order: usize,
    pub delta: T,
    /// `||P_J^perp A x||^2`
    pub projected_energy: T,
    /// `||x_{S\J}||^2`
    pub remaining_energy: T,
    /// middle minus lower bound
    pub lower: T,
    /// upper bound minus middle
    pub upper: T,
}

impl<T: Real> SandwichSlack<T> {
    pub fn holds(&self) -> bool {
        let tol = -T::tolerances().inequality;
        self.lower >= tol && self.upper >= tol
    }
}

pub fn modified_rip_check<T: Real>(a: &SensingMatrix<T>, x: &SparseSignal<T>, j: &SupportSet) -> Result<SandwichSlack<T>> {
    modified_rip_check_cached(&RipCache::new(a), x, j)
}

pub fn modified_rip_check_cached<T: Real>(
    cache: &RipCache<'_, T>,
    x: &SparseSignal<T>,
    j: &SupportSet,
) -> Result<SandwichSlack<T>> {
    let a = cache.matrix();
    if x.len() != a.cols() {
        return Err(Error::Dimension(format!(
            "signal length {} does not match {} columns",
            x.len(),
            a.cols()
        )));
    }
    j.check_within(a.cols())?;
    let s = x.support();
    let order = s.union(j).len();
    let delta = if order == 0 {
        T::zero()
    } else {
        let est = cache.get(order)?;
        if est.rip_violated {
            return Err(Error::RipViolated {
                order,
                delta: est.delta.to_f64_lossy(),
            });
        }
        est.delta
    };
    let y = a.apply(x)?;
    let projected_energy = norm_sq(&project_complement(a, j, &y)?);
    let remaining_energy = norm_sq(&x.restrict(&s.difference(j))?);
    Ok(SandwichSlack {
        order,
        delta,
        projected_energy,
        remaining_energy,
        lower: projected_energy - (T::one() - delta) * remaining_energy,
        upper: (T::one() + delta) * remaining_energy - projected_energy,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityAudit<T> {
    /// `deltas[k - 1] = delta_k`
    pub deltas: Vec<T>,
    /// Orders `k` with `delta_k < delta_{k-1}` beyond round-off.
    pub violations: Vec<usize>,
}

impl<T> MonotonicityAudit<T> {
    pub fn is_monotone(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `delta_1, ..., delta_max_order`, with any decrease larger than `1e-12`
/// reported as a violation (it would indicate an oracle bug).
pub fn monotonicity_audit<T: Real>(a: &SensingMatrix<T>, max_order: usize) -> Result<MonotonicityAudit<T>> {
    let deltas = (1..=max_order)
        .map(|k| exact_rip_constant(a, k).map(|e| e.delta))
        .collect::<Result<Vec<_>>>()?;
    let tol = T::tolerances().psd;
    let violations = deltas
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] < w[0] - tol)
        .map(|(i, _)| i + 2)
        .collect();
    Ok(MonotonicityAudit { deltas, violations })
}
