//! Shared data types: sensing matrices, sparse signals, index sets and the
//! records produced by the solver and the RIP oracle.
//!
//! Every index that crosses a public boundary is one-based, so the ground
//! set of column indices is `{1, ..., n}`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{norm, Matrix};
use crate::scalar::Real;

/// Ordered set of distinct one-based column indices. Insertion order is
/// kept, so a support built by a greedy solver records selection order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SupportSet {
    indices: Vec<usize>,
}

impl SupportSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(indices: Vec<usize>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &i in &indices {
            if i == 0 {
                return Err(Error::InvalidSupport("indices are one-based; got 0".into()));
            }
            if !seen.insert(i) {
                return Err(Error::InvalidSupport(format!("duplicate index {i}")));
            }
        }
        Ok(Self { indices })
    }

    /// Builds from zero-based positions.
    pub(crate) fn from_zero_based(positions: impl IntoIterator<Item = usize>) -> Self {
        Self {
            indices: positions.into_iter().map(|p| p + 1).collect(),
        }
    }

    /// All of `{1, ..., n}` in increasing order.
    pub fn full(n: usize) -> Self {
        Self {
            indices: (1..=n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.contains(&index)
    }

    pub(crate) fn zero_based(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i - 1).collect()
    }

    /// Appends `index`; fails on duplicates or zero.
    pub fn insert(&mut self, index: usize) -> Result<()> {
        if index == 0 {
            return Err(Error::InvalidSupport("indices are one-based; got 0".into()));
        }
        if self.contains(index) {
            return Err(Error::InvalidSupport(format!("duplicate index {index}")));
        }
        self.indices.push(index);
        Ok(())
    }

    pub fn with(&self, index: usize) -> Result<Self> {
        let mut s = self.clone();
        s.insert(index)?;
        Ok(s)
    }

    /// Fails unless every index lies in `1..=n`.
    pub fn check_within(&self, n: usize) -> Result<()> {
        match self.indices.iter().find(|&&i| i > n) {
            Some(&index) => Err(Error::IndexOutOfRange { index, len: n }),
            None => Ok(()),
        }
    }

    /// `self \ other`, in `self`'s order.
    pub fn difference(&self, other: &SupportSet) -> Self {
        Self {
            indices: self
                .indices
                .iter()
                .copied()
                .filter(|i| !other.contains(*i))
                .collect(),
        }
    }

    pub fn intersection(&self, other: &SupportSet) -> Self {
        Self {
            indices: self
                .indices
                .iter()
                .copied()
                .filter(|i| other.contains(*i))
                .collect(),
        }
    }

    /// `self` followed by the members of `other` not already present.
    pub fn union(&self, other: &SupportSet) -> Self {
        let mut indices = self.indices.clone();
        indices.extend(other.indices.iter().copied().filter(|i| !self.contains(*i)));
        Self { indices }
    }

    pub fn is_subset_of(&self, other: &SupportSet) -> bool {
        self.indices.iter().all(|i| other.contains(*i))
    }

    /// Set equality, ignoring order.
    pub fn same_elements(&self, other: &SupportSet) -> bool {
        self.len() == other.len() && self.is_subset_of(other)
    }

    pub fn sorted(&self) -> Self {
        let mut indices = self.indices.clone();
        indices.sort_unstable();
        Self { indices }
    }
}

impl std::fmt::Display for SupportSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Length-`n` real vector together with its support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseSignal<T> {
    values: Vec<T>,
    support: SupportSet,
}

impl<T: Real> SparseSignal<T> {
    /// The support is every index whose entry exceeds the zero tolerance.
    pub fn from_values(values: Vec<T>) -> Result<Self> {
        if let Some(p) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: p + 1, col: 1 });
        }
        let zero = T::tolerances().zero;
        let support =
            SupportSet::from_zero_based(values.iter().enumerate().filter(|(_, v)| v.abs() > zero).map(|(i, _)| i));
        Ok(Self { values, support })
    }

    /// Places `coefficients` on `support` (in its order) in a length-`n` vector.
    /// Entries that round to zero drop out of the support.
    pub fn from_support(n: usize, support: &SupportSet, coefficients: &[T]) -> Result<Self> {
        support.check_within(n)?;
        if support.len() != coefficients.len() {
            return Err(Error::Dimension(format!(
                "support has {} indices but {} coefficients were given",
                support.len(),
                coefficients.len()
            )));
        }
        let mut values = vec![T::zero(); n];
        for (&i, &c) in support.indices().iter().zip(coefficients) {
            values[i - 1] = c;
        }
        Self::from_values(values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Support in increasing index order.
    pub fn support(&self) -> &SupportSet {
        &self.support
    }

    pub fn sparsity(&self) -> usize {
        self.support.len()
    }

    /// Entries at the indices of `j`, in `j`'s order.
    pub fn restrict(&self, j: &SupportSet) -> Result<Vec<T>> {
        j.check_within(self.len())?;
        Ok(j.indices().iter().map(|&i| self.values[i - 1]).collect())
    }

    pub fn norm(&self) -> T {
        norm(&self.values)
    }
}

/// Column-norm problem found by [`SensingMatrix::validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnNormViolation {
    /// One-based column index.
    pub column: usize,
    pub norm: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<ColumnNormViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_valid() {
            return write!(f, "all columns have unit norm");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("column {} has norm {}", v.column, v.norm))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// The measurement operator. Entries are finite and the shape is non-empty;
/// unit column norms are checked by [`SensingMatrix::validate`] rather than
/// enforced, so off-norm inputs can still be inspected and reported.
#[derive(Debug, Clone, PartialEq)]
pub struct SensingMatrix<T> {
    matrix: Matrix<T>,
    column_norm_tolerance: T,
}

impl<T: Real> SensingMatrix<T> {
    pub fn new(matrix: Matrix<T>) -> Result<Self> {
        if matrix.nrows() == 0 || matrix.ncols() == 0 {
            return Err(Error::Dimension(format!(
                "sensing matrix must be at least 1x1, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if let Some((row, col)) = matrix.first_non_finite() {
            return Err(Error::NonFinite {
                row: row + 1,
                col: col + 1,
            });
        }
        Ok(Self {
            matrix,
            column_norm_tolerance: T::tolerances().column_norm,
        })
    }

    /// Builds the matrix and rejects it unless every column has unit norm.
    pub fn new_validated(matrix: Matrix<T>) -> Result<Self> {
        let a = Self::new(matrix)?;
        a.ensure_valid()?;
        Ok(a)
    }

    pub fn with_column_norm_tolerance(mut self, tol: T) -> Self {
        self.column_norm_tolerance = tol;
        self
    }

    pub fn column_norm_tolerance(&self) -> T {
        self.column_norm_tolerance
    }

    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    /// Column `i`, one-based.
    pub fn column(&self, i: usize) -> &[T] {
        self.matrix.column(i - 1)
    }

    /// `A_J`, columns in `j`'s order.
    pub fn submatrix(&self, j: &SupportSet) -> Result<Matrix<T>> {
        j.check_within(self.cols())?;
        Ok(self.matrix.select_columns(&j.zero_based()))
    }

    pub fn apply(&self, x: &SparseSignal<T>) -> Result<Vec<T>> {
        self.matrix.mul_vec(x.values())
    }

    pub fn validate(&self) -> ValidationReport {
        let violations = self
            .matrix
            .column_norms()
            .into_iter()
            .enumerate()
            .filter(|(_, nrm)| (*nrm - T::one()).abs() > self.column_norm_tolerance)
            .map(|(j, nrm)| ColumnNormViolation {
                column: j + 1,
                norm: nrm.to_f64_lossy(),
            })
            .collect();
        ValidationReport { violations }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidMatrix(report.to_string()))
        }
    }
}

/// One Identify/Augment/Estimate/Update pass of the solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord<T> {
    /// One-based iteration counter.
    pub k: usize,
    /// Selection criterion per column (index `i - 1` holds column `i`);
    /// `None` for columns already in the support.
    pub scores: Vec<Option<T>>,
    pub chosen_index: usize,
    pub residual_norm: T,
    pub estimated_support: SupportSet,
    /// Set when the incoming residual was already zero, so every score tied.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionRule {
    /// Minimize the residual after projecting onto the augmented support.
    Projection,
    /// Maximize `|<r, a_j>| / ||P_perp a_j||`.
    Ratio,
}

impl std::str::FromStr for SelectionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "projection" => Ok(Self::Projection),
            "ratio" => Ok(Self::Ratio),
            other => Err(Error::InvalidParameter(format!(
                "unknown selection rule {other:?} (expected projection or ratio)"
            ))),
        }
    }
}

impl std::fmt::Display for SelectionRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Projection => "projection",
            Self::Ratio => "ratio",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsTrace<T> {
    pub rule: SelectionRule,
    pub iterations: Vec<IterationRecord<T>>,
    pub final_estimate: SparseSignal<T>,
}

impl<T: Real> OlsTrace<T> {
    /// Final estimated support in selection order.
    pub fn support(&self) -> SupportSet {
        self.iterations
            .last()
            .map(|it| it.estimated_support.clone())
            .unwrap_or_default()
    }

    pub fn chosen_indices(&self) -> Vec<usize> {
        self.iterations.iter().map(|it| it.chosen_index).collect()
    }

    /// Checks the trace invariants: residual norms never increase, the
    /// support grows by one per step, and each pick is new.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let slack = T::tolerances().inequality;
        let mut prev_support = SupportSet::empty();
        let mut prev_norm: Option<T> = None;
        for it in &self.iterations {
            if it.estimated_support.len() != it.k {
                return Err(format!("support at step {} has {} elements", it.k, it.estimated_support.len()));
            }
            if prev_support.contains(it.chosen_index) {
                return Err(format!("index {} chosen twice", it.chosen_index));
            }
            if let Some(p) = prev_norm {
                if it.residual_norm > p + slack * (T::one() + p) {
                    return Err(format!("residual norm increased at step {}", it.k));
                }
            }
            prev_norm = Some(it.residual_norm);
            prev_support = it.estimated_support.clone();
        }
        Ok(())
    }
}

/// Exact RIP constant of a given order with its certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RipEstimate<T> {
    pub order: usize,
    /// `max(lambda_max - 1, 1 - lambda_min)`; reported even when >= 1.
    pub delta: T,
    /// Smallest eigenvalue over every `order`-column Gram submatrix.
    pub lambda_min: T,
    /// Largest eigenvalue over every `order`-column Gram submatrix.
    pub lambda_max: T,
    /// Lexicographically first subset attaining `delta`.
    pub witness_subset: SupportSet,
    pub subsets_enumerated: u64,
    /// `delta` has reached 1: no RIP of this order.
    pub rip_violated: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restriction_follows_index_order() {
        let x = SparseSignal::from_values(vec![5.0, 0.0, 7.0]).unwrap();
        assert_eq!(x.restrict(&SupportSet::new(vec![3, 1]).unwrap()).unwrap(), vec![7.0, 5.0]);
        assert!(x.restrict(&SupportSet::empty()).unwrap().is_empty());
        let y = SparseSignal::from_values(vec![0.0, 1.0, 1.0]).unwrap();
        assert_eq!(y.restrict(&SupportSet::new(vec![2, 3]).unwrap()).unwrap(), vec![1.0, 1.0]);
        assert!(matches!(
            y.restrict(&SupportSet::new(vec![4]).unwrap()),
            Err(Error::IndexOutOfRange { index: 4, len: 3 })
        ));
    }

    #[test]
    fn support_uses_zero_threshold() {
        let x = SparseSignal::from_values(vec![1e-13, -2.0, 0.0, 1e-11]).unwrap();
        assert_eq!(x.support().indices(), &[2, 4]);
        let nz = x.restrict(x.support()).unwrap();
        assert_eq!(nz, vec![-2.0, 1e-11]);
    }

    #[test]
    fn support_set_rejects_bad_input() {
        assert!(SupportSet::new(vec![1, 2, 1]).is_err());
        assert!(SupportSet::new(vec![0]).is_err());
        let s = SupportSet::new(vec![4, 2]).unwrap();
        assert!(s.check_within(3).is_err());
        assert_eq!(s.to_string(), "{4, 2}");
    }

    #[test]
    fn identity_validates() {
        let a = SensingMatrix::new(Matrix::<f64>::identity(3)).unwrap();
        assert!(a.validate().is_valid());
    }

    #[test]
    fn scaled_column_reported() {
        let mut m = Matrix::<f64>::identity(3);
        m[(1, 1)] = 2.0;
        let a = SensingMatrix::new(m).unwrap();
        let report = a.validate();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].column, 2);
        assert_eq!(report.violations[0].norm, 2.0);
        assert!(a.ensure_valid().is_err());
    }

    #[test]
    fn non_finite_is_hard_error() {
        let mut m = Matrix::<f64>::identity(2);
        m[(0, 1)] = f64::INFINITY;
        assert!(matches!(SensingMatrix::new(m), Err(Error::NonFinite { row: 1, col: 2 })));
    }

    #[test]
    fn tightness_first_column_is_unit() {
        // K = 3: (K-1)/K + K * (1/K)^2 = 2/3 + 1/3 = 1.
        let k = 3.0f64;
        let mut m = Matrix::zeros(4, 4);
        m[(0, 0)] = ((k - 1.0) / k).sqrt();
        for i in 1..4 {
            m[(i, 0)] = 1.0 / k;
            m[(i, i)] = 1.0;
        }
        let a = SensingMatrix::new(m).unwrap();
        assert!(a.validate().is_valid());
    }

    #[test]
    fn difference_cardinality_exhaustive() {
        // |S \ J| = |S| - |S n J| over every pair of subsets of {1..8}.
        let ground = 8usize;
        let subset = |mask: u32| SupportSet::from_zero_based((0..ground).filter(|b| mask >> b & 1 == 1));
        for s_mask in 0u32..(1 << ground) {
            let s = subset(s_mask);
            for j_mask in 0u32..(1 << ground) {
                let j = subset(j_mask);
                assert_eq!(s.difference(&j).len(), s.len() - s.intersection(&j).len());
            }
        }
    }
}
