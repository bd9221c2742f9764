//! Orthogonal least squares.
//!
//! Each iteration adds the column that minimizes the residual left after
//! projecting `y` onto the enlarged support, then refits every selected
//! coefficient by least squares. Two interchangeable identification rules
//! are provided: the literal projection-residual rule and the equivalent
//! correlation ratio `|<r, a_j>| / ||P_perp a_j||`. Ties go to the smallest
//! index among candidates whose scores agree within the tie tolerance.

use crate::error::{Error, Result};
use crate::linalg::{check_full_column_rank, dot, norm, norm_sq, Matrix, Qr};
use crate::model::{IterationRecord, OlsTrace, SelectionRule, SensingMatrix, SparseSignal, SupportSet};
use crate::scalar::{scores_tie, Real};

/// Outcome of one identification step.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection<T> {
    /// One-based.
    pub chosen: usize,
    /// Indexed by column (`i - 1`); `None` for already-selected columns.
    pub scores: Vec<Option<T>>,
}

/// Orthogonal projector onto the complement of `span(A_J)`, factored once.
pub(crate) struct ComplementProjector<T> {
    qr: Option<Qr<T>>,
}

impl<T: Real> ComplementProjector<T> {
    pub(crate) fn new(a: &SensingMatrix<T>, j: &SupportSet) -> Result<Self> {
        if j.is_empty() {
            return Ok(Self { qr: None });
        }
        let sub = a.submatrix(j)?;
        ensure_rank(&sub, j)?;
        Ok(Self {
            qr: Some(Qr::new(&sub)?),
        })
    }

    pub(crate) fn apply(&self, v: &[T]) -> Result<Vec<T>> {
        match &self.qr {
            None => Ok(v.to_vec()),
            Some(qr) => qr.project_complement(v),
        }
    }
}

fn ensure_rank<T: Real>(sub: &Matrix<T>, j: &SupportSet) -> Result<()> {
    check_full_column_rank(sub).map_err(|pos| Error::RankDeficient {
        columns: j.indices().to_vec(),
        dependent: j.indices()[pos.min(j.len() - 1)],
    })
}

fn check_measurement<T: Real>(a: &SensingMatrix<T>, v: &[T]) -> Result<()> {
    if v.len() != a.rows() {
        return Err(Error::Dimension(format!(
            "vector has length {} but the matrix has {} rows",
            v.len(),
            a.rows()
        )));
    }
    Ok(())
}

/// `P_J^perp v`: `v` minus its orthogonal projection onto `span(A_J)`.
pub fn project_complement<T: Real>(a: &SensingMatrix<T>, j: &SupportSet, v: &[T]) -> Result<Vec<T>> {
    check_measurement(a, v)?;
    ComplementProjector::new(a, j)?.apply(v)
}

fn candidates<T: Real>(a: &SensingMatrix<T>, s_prev: &SupportSet) -> Result<Vec<usize>> {
    s_prev.check_within(a.cols())?;
    let c: Vec<usize> = (1..=a.cols()).filter(|i| !s_prev.contains(*i)).collect();
    if c.is_empty() {
        return Err(Error::InvalidParameter("no unselected columns remain".into()));
    }
    Ok(c)
}

/// Smallest candidate whose score ties the best one.
fn pick<T: Real>(scores: &[Option<T>], minimize: bool) -> usize {
    let best = scores
        .iter()
        .flatten()
        .copied()
        .reduce(|a, b| if minimize { a.min(b) } else { a.max(b) })
        .expect("at least one candidate");
    scores
        .iter()
        .position(|s| matches!(s, Some(v) if scores_tie(*v, best)))
        .expect("best score present")
        + 1
}

/// Picks the candidate minimizing `||P_perp_{S_prev + i} y||^2`, each
/// candidate projection computed from its own QR factorization. A candidate
/// that would make the columns dependent is scored with the current residual.
pub fn identify_projection<T: Real>(a: &SensingMatrix<T>, y: &[T], s_prev: &SupportSet) -> Result<Selection<T>> {
    check_measurement(a, y)?;
    let cand = candidates(a, s_prev)?;
    let current = norm_sq(&project_complement(a, s_prev, y)?);
    let mut scores = vec![None; a.cols()];
    for i in cand {
        let j = s_prev.with(i)?;
        let score = match project_complement(a, &j, y) {
            Ok(p) => norm_sq(&p),
            Err(Error::RankDeficient { .. }) => current,
            Err(e) => return Err(e),
        };
        scores[i - 1] = Some(score);
    }
    Ok(Selection {
        chosen: pick(&scores, true),
        scores,
    })
}

/// Picks the candidate maximizing `|<r_prev, a_j>| / ||P_perp_{S_prev} a_j||`.
/// Columns with a vanishing projected norm score 0.
pub fn identify_ratio<T: Real>(a: &SensingMatrix<T>, r_prev: &[T], s_prev: &SupportSet) -> Result<Selection<T>> {
    check_measurement(a, r_prev)?;
    let cand = candidates(a, s_prev)?;
    let proj = ComplementProjector::new(a, s_prev)?;
    let floor = T::tolerances().rank;
    let mut scores = vec![None; a.cols()];
    for j in cand {
        let col = a.column(j);
        let denom = norm(&proj.apply(col)?);
        let score = if denom <= floor {
            T::zero()
        } else {
            dot(r_prev, col).abs() / denom
        };
        scores[j - 1] = Some(score);
    }
    Ok(Selection {
        chosen: pick(&scores, false),
        scores,
    })
}

/// Least-squares fit of `y` on the columns in `s`; the returned signal is
/// supported inside `s`.
pub fn least_squares_on_support<T: Real>(a: &SensingMatrix<T>, y: &[T], s: &SupportSet) -> Result<SparseSignal<T>> {
    check_measurement(a, y)?;
    if s.is_empty() {
        return SparseSignal::from_values(vec![T::zero(); a.cols()]);
    }
    let sub = a.submatrix(s)?;
    ensure_rank(&sub, s)?;
    let coeffs = Qr::new(&sub)?.solve_least_squares(y)?;
    SparseSignal::from_support(a.cols(), s, &coeffs)
}

/// Runs exactly `k` iterations of OLS on `y`.
///
/// Once the residual vanishes every remaining score ties, so the smallest
/// unselected index is taken, the estimate is kept and the step is flagged
/// degenerate.
pub fn run_ols<T: Real>(a: &SensingMatrix<T>, y: &[T], k: usize, rule: SelectionRule) -> Result<OlsTrace<T>> {
    check_measurement(a, y)?;
    if k == 0 || k > a.rows().min(a.cols()) {
        return Err(Error::InvalidParameter(format!(
            "sparsity {k} must lie in 1..={}",
            a.rows().min(a.cols())
        )));
    }
    a.ensure_valid()?;

    let zero_floor = T::tolerances().residual_zero * T::one().max(norm(y));
    let mut support = SupportSet::empty();
    let mut estimate = SparseSignal::from_values(vec![T::zero(); a.cols()])?;
    let mut residual = y.to_vec();
    let mut iterations = Vec::with_capacity(k);

    for step in 1..=k {
        let degenerate = norm(&residual) <= zero_floor;
        let selection = if degenerate {
            let scores: Vec<Option<T>> = (1..=a.cols())
                .map(|i| if support.contains(i) { None } else { Some(T::zero()) })
                .collect();
            Selection {
                chosen: pick(&scores, false),
                scores,
            }
        } else {
            match rule {
                SelectionRule::Projection => identify_projection(a, y, &support)?,
                SelectionRule::Ratio => identify_ratio(a, &residual, &support)?,
            }
        };
        support.insert(selection.chosen)?;
        if !degenerate {
            estimate = least_squares_on_support(a, y, &support)?;
            let fit = a.apply(&estimate)?;
            residual = y.iter().zip(&fit).map(|(&yi, &fi)| yi - fi).collect();
        }
        iterations.push(IterationRecord {
            k: step,
            scores: selection.scores,
            chosen_index: selection.chosen,
            residual_norm: norm(&residual),
            estimated_support: support.clone(),
            degenerate,
        });
    }

    Ok(OlsTrace {
        rule,
        iterations,
        final_estimate: estimate,
    })
}

/// True when the trace ends on `supp(x)` and the coefficients match to
/// within `1e-8 ||x||` (scaled for lower precisions).
pub fn recovered_exactly<T: Real>(trace: &OlsTrace<T>, x: &SparseSignal<T>) -> bool {
    if !trace.support().same_elements(x.support()) {
        return false;
    }
    let err = norm(&crate::linalg::sub(trace.final_estimate.values(), x.values()));
    err <= T::tolerances().inequality * T::lit(10.0) * x.norm()
}
