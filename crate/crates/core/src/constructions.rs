//! Explicit matrices: the failing instances that show the recovery threshold
//! cannot be relaxed, the instance on which the off-support bound is tight,
//! and a factorizer turning a prescribed Gram matrix into a sensing matrix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SymmetricEigen};
use crate::model::{SensingMatrix, SparseSignal};
use crate::scalar::Real;

/// Symmetric, unit-diagonal, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramSpec<T> {
    entries: Matrix<T>,
    min_eigenvalue: T,
}

impl<T: Real> GramSpec<T> {
    pub fn new(entries: Matrix<T>) -> Result<Self> {
        let n = entries.nrows();
        if n == 0 || entries.ncols() != n {
            return Err(Error::InvalidGram(format!(
                "expected a non-empty square matrix, got {}x{}",
                n,
                entries.ncols()
            )));
        }
        if !entries.is_finite() {
            return Err(Error::InvalidGram("non-finite entry".into()));
        }
        let sym_tol = T::lit(1e-14).max(T::epsilon() * T::lit(10.0));
        for i in 0..n {
            if entries[(i, i)] != T::one() {
                return Err(Error::InvalidGram(format!(
                    "diagonal entry {} is {}, not 1",
                    i + 1,
                    entries[(i, i)]
                )));
            }
            for j in i + 1..n {
                if (entries[(i, j)] - entries[(j, i)]).abs() > sym_tol {
                    return Err(Error::InvalidGram(format!("not symmetric at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        let min_eigenvalue = SymmetricEigen::new(&entries).min();
        if min_eigenvalue < -T::tolerances().psd {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min_eigenvalue.to_f64_lossy(),
            });
        }
        Ok(Self { entries, min_eigenvalue })
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Matrix<T> {
        &self.entries
    }

    pub fn min_eigenvalue(&self) -> T {
        self.min_eigenvalue
    }
}

/// Factor `A` with `A'A = G`: `A = diag(sqrt(lambda)) U'` restricted to the
/// eigenvalues above the semidefiniteness tolerance, largest first. The
/// factor is unique only up to a left orthogonal transform, so compare
/// Gram-level quantities rather than raw entries.
pub fn gram_to_matrix<T: Real>(g: &GramSpec<T>) -> Result<SensingMatrix<T>> {
    let eig = SymmetricEigen::new(g.entries());
    let n = g.size();
    let cutoff = T::tolerances().psd * T::one().max(eig.max());
    let kept: Vec<usize> = (0..n).rev().filter(|&i| eig.values[i] > cutoff).collect();
    let a = Matrix::from_fn(kept.len(), n, |r, c| {
        let i = kept[r];
        eig.values[i].sqrt() * eig.vectors[(c, i)]
    });
    let a = SensingMatrix::new(a)?;
    a.ensure_valid()?;
    Ok(a)
}

/// Recovery threshold: `1/sqrt(K)` for `K = 1` and `K >= 4`,
/// `1/sqrt(K + 1/4)` for `K = 2`, `1/sqrt(K + 1/16)` for `K = 3`.
pub fn compute_ck<T: Real>(k: usize) -> Result<T> {
    let kf = T::from_count(k);
    let shifted = match k {
        0 => return Err(Error::InvalidParameter("sparsity must be positive".into())),
        2 => kf + T::lit(0.25),
        3 => kf + T::lit(0.0625),
        _ => kf,
    };
    Ok(shifted.sqrt().recip())
}

/// The earlier sufficient threshold `1/sqrt(K + 1)`, kept for comparison.
pub fn prior_threshold<T: Real>(k: usize) -> T {
    (T::from_count(k) + T::one()).sqrt().recip()
}

fn check_delta<T: Real>(delta: T) -> Result<()> {
    if !(delta > T::zero() && delta < T::one()) {
        return Err(Error::InvalidParameter(format!("delta* = {delta} must lie in (0, 1)")));
    }
    Ok(())
}

/// Gram matrix of the failing instance for sparsity `k` (size `k + 1`).
///
/// * `k = 2`: first row `d/2`, remaining off-diagonal `-d/2`.
/// * `k = 3`: first row `d/2`, remaining off-diagonals `-d/8`.
/// * `k >= 4`: first row `d/sqrt(k)`, identity elsewhere.
pub fn counterexample_gram<T: Real>(k: usize, delta: T) -> Result<GramSpec<T>> {
    check_delta(delta)?;
    let half = delta / T::lit(2.0);
    let (first, inner) = match k {
        0 | 1 => {
            return Err(Error::InvalidParameter(
                "no failing instance exists for K = 1: the threshold interval [C_1, 1) is empty".into(),
            ))
        }
        2 => (half, -half),
        3 => (half, -delta / T::lit(8.0)),
        _ => (delta / T::from_count(k).sqrt(), T::zero()),
    };
    let g = Matrix::from_fn(k + 1, k + 1, |i, j| match (i, j) {
        _ if i == j => T::one(),
        (0, _) | (_, 0) => first,
        _ => inner,
    });
    GramSpec::new(g)
}

/// Sensing matrix and `k`-sparse signal `[0; 1_k]` on which OLS picks the
/// off-support column 1 first whenever `delta >= C_K`. The matrix has
/// `delta_{k+1} = delta`.
pub fn counterexample<T: Real>(k: usize, delta: T) -> Result<(SensingMatrix<T>, SparseSignal<T>)> {
    let g = counterexample_gram(k, delta)?;
    let a = gram_to_matrix(&g)?;
    Ok((a, ones_after_first(k)?))
}

fn ones_after_first<T: Real>(k: usize) -> Result<SparseSignal<T>> {
    let mut v = vec![T::one(); k + 1];
    v[0] = T::zero();
    SparseSignal::from_values(v)
}

/// `A = [sqrt((K-1)/K), 0; (1/K) 1_K, I_K]` with `x = [0; 1_K]`, on which
/// the off-support bound holds with equality at the first iteration and
/// `delta_{K+1} = 1/sqrt(K)`.
pub fn tightness_example<T: Real>(k: usize) -> Result<(SensingMatrix<T>, SparseSignal<T>)> {
    if k == 0 {
        return Err(Error::InvalidParameter("sparsity must be positive".into()));
    }
    let kf = T::from_count(k);
    let corner = ((kf - T::one()) / kf).sqrt();
    let m = Matrix::from_fn(k + 1, k + 1, |i, j| match (i, j) {
        (0, 0) => corner,
        (0, _) => T::zero(),
        (_, 0) => kf.recip(),
        _ if i == j => T::one(),
        _ => T::zero(),
    });
    Ok((SensingMatrix::new(m)?, ones_after_first(k)?))
}
