//! Numerical instantiation of the recovery analysis.
//!
//! Every check works from the exact RIP constant (never a sampled estimate)
//! and compares a measured quantity against its bound, returning both so
//! callers can see the margin. Hypothesis failures are reported as flags on
//! the outcome rather than silently skipped.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, next_combination};
use crate::constructions::compute_ck;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm, norm_sq};
use crate::model::{SelectionRule, SensingMatrix, SparseSignal, SupportSet};
use crate::ols::{identify_ratio, recovered_exactly, run_ols, ComplementProjector};
use crate::random::{random_sparse_signal, random_support, stream_id, stream_rng, SignalModel};
use crate::model::RipEstimate;
use crate::rip::RipCache;
use crate::scalar::{scores_tie, Real};

/// Residual and ratio scores at a partial support.
struct ResidualState<T> {
    residual: Vec<T>,
    /// `|<r, a_j>| / ||P_perp a_j||` per column, `None` for columns in `S_k`.
    ratios: Vec<Option<T>>,
    /// `|<r, a_j>|` per column.
    correlations: Vec<T>,
    chosen: usize,
}

impl<T: Real> ResidualState<T> {
    fn new(a: &SensingMatrix<T>, x: &SparseSignal<T>, s_k: &SupportSet) -> Result<Self> {
        let y = a.apply(x)?;
        let residual = ComplementProjector::new(a, s_k)?.apply(&y)?;
        let selection = identify_ratio(a, &residual, s_k)?;
        let correlations = (1..=a.cols()).map(|j| dot(&residual, a.column(j)).abs()).collect();
        Ok(Self {
            residual,
            ratios: selection.scores,
            correlations,
            chosen: selection.chosen,
        })
    }

    fn max_ratio_over(&self, idx: impl Iterator<Item = usize>) -> T {
        idx.filter_map(|j| self.ratios[j - 1]).fold(T::zero(), T::max)
    }

    fn residual_energy(&self) -> T {
        norm_sq(&self.residual)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionMargin<T> {
    /// Best ratio over `S \ S_k`.
    pub lhs: T,
    /// Best ratio over `Omega \ (S u S_k)`; 0 when that set is empty.
    pub rhs: T,
    pub tie: bool,
    /// Index the solver would select next.
    pub chosen: usize,
    pub correct: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck<T> {
    pub measured: T,
    pub bound: T,
    pub delta: T,
    /// The statement's RIP hypothesis holds for this matrix.
    pub in_hypothesis: bool,
    /// The inequality holds within tolerance (vacuously when out of hypothesis).
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Remark2Report<T> {
    pub delta: T,
    pub in_hypothesis: bool,
    /// `max_{j not in S} |<r, a_j>|`
    pub measured: T,
    /// `max_{j not in S} |<r, a_j>| / ||P_perp a_j||`
    pub ratio_max: T,
    /// `delta ||r||^2 / ||x_{S \ S_k}||`
    pub lemma_bound: T,
    /// `||r||^2 / (2 ||x_{S \ S_k}||)`
    pub new_bound: T,
    /// `||r||^2 / (sqrt(3) ||x_{S \ S_k}||)`
    pub old_bound: T,
    /// `old_bound / new_bound`, equal to `2/sqrt(3)`.
    pub factor: T,
    /// `measured <= ratio_max <= lemma_bound <= new_bound <= old_bound`.
    pub chain_holds: bool,
    /// The weaker-condition comparison is only claimed for `K >= 4` with
    /// `delta < 1/sqrt(K)`; outside that it is evaluated but labelled.
    pub weak_condition_in_scope: bool,
    /// `||r||^2 / (sqrt(|S \ S_k|) ||x_{S \ S_k}||)`
    pub weak_condition_bound: T,
    pub weak_condition_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RecoveryFailure {
    pub label: String,
    pub rule: SelectionRule,
    pub support: Vec<usize>,
    pub selected: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryReport<T> {
    pub sparsity: usize,
    pub delta: T,
    pub threshold: T,
    pub runs: usize,
    /// Sorted.
    pub failures: Vec<RecoveryFailure>,
}

impl<T> RecoveryReport<T> {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceCheck<T> {
    pub max_off_diagonal: T,
    pub delta2: T,
    pub holds: bool,
}

/// Per-step comparison of the correct-selection condition with the
/// solver's actual choice along one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathAudit {
    pub recovered: bool,
    /// `margin.correct` at each step reached with a correct partial support.
    pub margins_correct: Vec<bool>,
    /// Whether the solver's pick at those steps landed in the support.
    pub picks_correct: Vec<bool>,
}

impl PathAudit {
    pub fn consistent(&self) -> bool {
        self.margins_correct == self.picks_correct
            && self.recovered == self.picks_correct.iter().all(|&c| c)
    }
}

pub struct GuaranteeChecker<'a, T> {
    cache: RipCache<'a, T>,
}

impl<'a, T: Real> GuaranteeChecker<'a, T> {
    pub fn new(a: &'a SensingMatrix<T>) -> Self {
        Self { cache: RipCache::new(a) }
    }

    pub fn matrix(&self) -> &'a SensingMatrix<T> {
        self.cache.matrix()
    }

    pub fn rip(&self, order: usize) -> Result<RipEstimate<T>> {
        self.cache.get(order)
    }

    fn check_signal(&self, x: &SparseSignal<T>) -> Result<()> {
        if x.len() != self.matrix().cols() {
            return Err(Error::Dimension(format!(
                "signal length {} does not match {} columns",
                x.len(),
                self.matrix().cols()
            )));
        }
        Ok(())
    }

    fn check_partial(&self, x: &SparseSignal<T>, s_k: &SupportSet, strict: bool) -> Result<()> {
        self.check_signal(x)?;
        s_k.check_within(x.len())?;
        if !s_k.is_subset_of(x.support()) {
            return Err(Error::InvalidParameter(format!(
                "partial support {s_k} is not contained in supp(x) = {}",
                x.support()
            )));
        }
        if strict && s_k.len() == x.sparsity() {
            return Err(Error::InvalidParameter(format!(
                "partial support {s_k} must be a proper subset of supp(x)"
            )));
        }
        Ok(())
    }

    /// `delta_{K+1}` for `K = |supp(x)|`.
    fn delta_next(&self, x: &SparseSignal<T>) -> Result<T> {
        Ok(self.rip(x.sparsity() + 1)?.delta)
    }

    /// Both sides of the correct-selection condition at `S_k`. Ties are
    /// settled exactly as the solver settles them.
    pub fn selection_margin(&self, x: &SparseSignal<T>, s_k: &SupportSet) -> Result<SelectionMargin<T>> {
        self.check_partial(x, s_k, true)?;
        let st = ResidualState::new(self.matrix(), x, s_k)?;
        let s = x.support();
        let lhs = st.max_ratio_over(s.difference(s_k).indices().iter().copied());
        let rhs = st.max_ratio_over((1..=x.len()).filter(|j| !s.contains(*j)));
        let tie = scores_tie(lhs, rhs);
        let correct = if tie { s.contains(st.chosen) } else { lhs > rhs };
        Ok(SelectionMargin {
            lhs,
            rhs,
            tie,
            chosen: st.chosen,
            correct,
        })
    }

    /// Off-support ratio maximum against `delta_{K+1} ||r||^2 / ||x_{S\S_k}||`,
    /// claimed when `delta_{K+1} <= 1/2`.
    pub fn lemma4_bound(&self, x: &SparseSignal<T>, s_k: &SupportSet) -> Result<BoundCheck<T>> {
        self.check_partial(x, s_k, true)?;
        let delta = self.delta_next(x)?;
        let st = ResidualState::new(self.matrix(), x, s_k)?;
        let s = x.support();
        let measured = st.max_ratio_over((1..=x.len()).filter(|j| !s.contains(*j)));
        let remaining = norm(&x.restrict(&s.difference(s_k))?);
        let bound = delta * st.residual_energy() / remaining;
        let in_hypothesis = within_half(delta);
        let holds = !in_hypothesis || measured <= bound + T::tolerances().inequality;
        Ok(BoundCheck {
            measured,
            bound,
            delta,
            in_hypothesis,
            holds,
        })
    }

    /// In-support ratio maximum against `||r||^2 / (sqrt(K - k) ||x_{S\S_k}||)`.
    /// Holds unconditionally.
    pub fn support_side_lower_bound(&self, x: &SparseSignal<T>, s_k: &SupportSet) -> Result<BoundCheck<T>> {
        self.check_partial(x, s_k, true)?;
        let st = ResidualState::new(self.matrix(), x, s_k)?;
        let rest = x.support().difference(s_k);
        let measured = st.max_ratio_over(rest.indices().iter().copied());
        let remaining = norm(&x.restrict(&rest)?);
        let bound = st.residual_energy() / (T::from_count(rest.len()).sqrt() * remaining);
        Ok(BoundCheck {
            measured,
            bound,
            delta: T::zero(),
            in_hypothesis: true,
            holds: measured >= bound - T::tolerances().inequality,
        })
    }

    pub fn remark2_comparisons(&self, x: &SparseSignal<T>, s_k: &SupportSet) -> Result<Remark2Report<T>> {
        self.check_partial(x, s_k, true)?;
        let delta = self.delta_next(x)?;
        let st = ResidualState::new(self.matrix(), x, s_k)?;
        let s = x.support();
        let off: Vec<usize> = (1..=x.len()).filter(|j| !s.contains(*j)).collect();
        let measured = off.iter().map(|&j| st.correlations[j - 1]).fold(T::zero(), T::max);
        let ratio_max = st.max_ratio_over(off.iter().copied());
        let rest = s.difference(s_k);
        let remaining = norm(&x.restrict(&rest)?);
        let energy = st.residual_energy();
        let lemma_bound = delta * energy / remaining;
        let new_bound = energy / (T::lit(2.0) * remaining);
        let old_bound = energy / (T::lit(3.0).sqrt() * remaining);
        let tol = T::tolerances().inequality;
        let in_hypothesis = within_half(delta);
        let chain_holds = measured <= ratio_max + tol
            && ratio_max <= lemma_bound + tol
            && lemma_bound <= new_bound + tol
            && new_bound <= old_bound;
        let k = x.sparsity();
        let weak_condition_bound = energy / (T::from_count(rest.len()).sqrt() * remaining);
        Ok(Remark2Report {
            delta,
            in_hypothesis,
            measured,
            ratio_max,
            lemma_bound,
            new_bound,
            old_bound,
            factor: old_bound / new_bound,
            chain_holds,
            weak_condition_in_scope: k >= 4 && delta < T::from_count(k).sqrt().recip(),
            weak_condition_bound,
            weak_condition_holds: ratio_max <= weak_condition_bound + tol,
        })
    }

    /// Walks one OLS run and compares, at each step reached with a correct
    /// partial support, the selection condition with the actual pick.
    pub fn selection_path_audit(&self, x: &SparseSignal<T>, rule: SelectionRule) -> Result<PathAudit> {
        self.check_signal(x)?;
        let a = self.matrix();
        let y = a.apply(x)?;
        let trace = run_ols(a, &y, x.sparsity(), rule)?;
        let s = x.support();
        let mut margins_correct = Vec::new();
        let mut picks_correct = Vec::new();
        let mut partial = SupportSet::empty();
        for it in &trace.iterations {
            margins_correct.push(self.selection_margin(x, &partial)?.correct);
            let ok = s.contains(it.chosen_index);
            picks_correct.push(ok);
            if !ok {
                break;
            }
            partial = it.estimated_support.clone();
        }
        Ok(PathAudit {
            recovered: recovered_exactly(&trace, x),
            margins_correct,
            picks_correct,
        })
    }

    /// Off-diagonal Gram entries never exceed `delta_2` in magnitude.
    pub fn coherence_check(&self) -> Result<CoherenceCheck<T>> {
        let g = self.matrix().matrix().gram();
        let n = g.nrows();
        let mut max_off = T::zero();
        for i in 0..n {
            for j in i + 1..n {
                max_off = max_off.max(g[(i, j)].abs());
            }
        }
        let delta2 = if n >= 2 { self.rip(2)?.delta } else { T::zero() };
        Ok(CoherenceCheck {
            max_off_diagonal: max_off,
            delta2,
            holds: max_off <= delta2 + T::tolerances().psd,
        })
    }

    fn hypothesis(&self, k: usize) -> Result<(T, T)> {
        let n = self.matrix().cols();
        if k == 0 || k + 1 > n {
            return Err(Error::InvalidParameter(format!("sparsity {k} needs 1 <= K < n = {n}")));
        }
        Ok((self.rip(k + 1)?.delta, compute_ck(k)?))
    }

    /// Runs OLS (both rules) on `trials` random `k`-sparse signals, even
    /// trials Gaussian and odd ones Rademacher, plus four structured signals
    /// on random supports: all ones, alternating signs, geometric decay
    /// `2^-i`, and alternating geometric decay. Fails up front unless
    /// `delta_{k+1} < C_k`.
    pub fn theorem1_verify(&self, trials: usize, k: usize, seed: u64) -> Result<RecoveryReport<T>> {
        let (delta, threshold) = self.hypothesis(k)?;
        if delta >= threshold {
            return Err(Error::HypothesisNotMet {
                order: k + 1,
                delta: delta.to_f64_lossy(),
                threshold: threshold.to_f64_lossy(),
            });
        }
        let n = self.matrix().cols();
        let mut jobs: Vec<(String, SparseSignal<T>)> = Vec::with_capacity(trials + 4);
        for t in 0..trials {
            let mut rng = stream_rng(seed, stream_id(0, t as u64));
            let model = if t % 2 == 0 {
                SignalModel::Gaussian
            } else {
                SignalModel::Rademacher
            };
            jobs.push((format!("{model}#{t}"), random_sparse_signal(&mut rng, n, k, model)?));
        }
        for (p, name) in ["ones", "alternating", "geometric", "alternating-geometric"].iter().enumerate() {
            let mut rng = stream_rng(seed, stream_id(1, p as u64));
            let support = random_support(&mut rng, n, k);
            let coeffs: Vec<T> = (0..k)
                .map(|i| {
                    let sign = if p % 2 == 1 && i % 2 == 1 { -T::one() } else { T::one() };
                    let mag = if p >= 2 { T::lit(0.5).powi(i as i32) } else { T::one() };
                    sign * mag
                })
                .collect();
            jobs.push((name.to_string(), SparseSignal::from_support(n, &support, &coeffs)?));
        }
        self.recovery_report(k, delta, threshold, jobs)
    }

    /// Every `k`-subset with every sign pattern of unit magnitudes.
    pub fn exhaustive_recovery(&self, k: usize) -> Result<RecoveryReport<T>> {
        let (delta, threshold) = self.hypothesis(k)?;
        let n = self.matrix().cols();
        let total = binomial(n, k) << k;
        if total > crate::rip::DEFAULT_ENUMERATION_CAP {
            return Err(Error::EnumerationCap {
                subsets: total,
                cap: crate::rip::DEFAULT_ENUMERATION_CAP,
            });
        }
        let mut jobs = Vec::new();
        let mut subset: Vec<usize> = (0..k).collect();
        loop {
            let support = SupportSet::new(subset.iter().map(|i| i + 1).collect())?;
            for signs in 0u32..(1 << k) {
                let coeffs: Vec<T> = (0..k)
                    .map(|i| if signs >> i & 1 == 1 { -T::one() } else { T::one() })
                    .collect();
                jobs.push((format!("signs{signs:0k$b}"), SparseSignal::from_support(n, &support, &coeffs)?));
            }
            if !next_combination(&mut subset, n) {
                break;
            }
        }
        self.recovery_report(k, delta, threshold, jobs)
    }

    fn recovery_report(
        &self,
        k: usize,
        delta: T,
        threshold: T,
        jobs: Vec<(String, SparseSignal<T>)>,
    ) -> Result<RecoveryReport<T>> {
        let a = self.matrix();
        let outcomes = jobs
            .par_iter()
            .map(|(label, x)| -> Result<Vec<RecoveryFailure>> {
                let y = a.apply(x)?;
                let mut fails = Vec::new();
                for rule in [SelectionRule::Projection, SelectionRule::Ratio] {
                    let trace = run_ols(a, &y, k, rule)?;
                    if !recovered_exactly(&trace, x) {
                        fails.push(RecoveryFailure {
                            label: label.clone(),
                            rule,
                            support: x.support().indices().to_vec(),
                            selected: trace.chosen_indices(),
                        });
                    }
                }
                Ok(fails)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut failures: Vec<RecoveryFailure> = outcomes.into_iter().flatten().collect();
        failures.sort();
        Ok(RecoveryReport {
            sparsity: k,
            delta,
            threshold,
            runs: jobs.len() * 2,
            failures,
        })
    }
}

/// `delta <= 1/2`, allowing eigenvalue round-off at equality.
fn within_half<T: Real>(delta: T) -> bool {
    delta <= T::lit(0.5) + T::tolerances().psd
}

/// All subsets of `s` of size below `|s|`, smallest first.
pub fn proper_subsets(s: &SupportSet) -> Vec<SupportSet> {
    let idx = s.indices();
    let k = idx.len();
    let mut out: Vec<SupportSet> = (0u32..(1 << k))
        .filter(|mask| (mask.count_ones() as usize) < k)
        .map(|mask| SupportSet::new((0..k).filter(|b| mask >> b & 1 == 1).map(|b| idx[b]).collect()).expect("subset of a valid set"))
        .collect();
    out.sort_by_key(|sub| (sub.len(), sub.indices().to_vec()));
    out
}

/// Matrix-level suites run by `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lemma4,
    Eq7,
    Remark2,
    Theorem1,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lemma4" | "off-support" => Self::Lemma4,
            "eq7" | "selection" => Self::Eq7,
            "remark2" | "comparison" => Self::Remark2,
            "theorem1" | "recovery" => Self::Theorem1,
            "all" => Self::All,
            other => return Err(Error::InvalidParameter(format!("unknown suite {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub signal: usize,
    pub partial_support: Vec<usize>,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    /// False when the suite's hypothesis does not hold for this matrix; its
    /// records are then informational.
    pub in_hypothesis: bool,
    pub note: Option<String>,
    pub checks: usize,
    pub failures: usize,
    pub pass: bool,
    pub records: Vec<CheckRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub rows: usize,
    pub cols: usize,
    pub sparsity: usize,
    pub delta: f64,
    pub threshold: f64,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.suites.iter().all(|s| s.pass)
    }
}

impl<T: Real> GuaranteeChecker<'_, T> {
    /// Runs `suite` over `trials` seeded random `k`-sparse signals at every
    /// proper partial support of each.
    pub fn run_suites(&self, suite: Suite, k: usize, trials: usize, seed: u64) -> Result<VerifyReport> {
        let (delta, threshold) = self.hypothesis(k)?;
        let a = self.matrix();
        let signals = (0..trials)
            .map(|t| {
                let model = if t % 2 == 0 {
                    SignalModel::Gaussian
                } else {
                    SignalModel::Rademacher
                };
                random_sparse_signal(&mut stream_rng(seed, stream_id(2, t as u64)), a.cols(), k, model)
            })
            .collect::<Result<Vec<SparseSignal<T>>>>()?;
        let wanted = |s: Suite| suite == Suite::All || suite == s;
        let mut suites = Vec::new();

        if wanted(Suite::Lemma4) {
            let in_hyp = within_half(delta);
            let records = self.sweep(&signals, |x, s_k| {
                let b = self.lemma4_bound(x, s_k)?;
                Ok((b.measured, b.bound, b.measured <= b.bound + T::tolerances().inequality))
            })?;
            suites.push(suite_report("lemma4", in_hyp, (!in_hyp).then(|| "delta_{K+1} > 1/2: no claim is made".to_string()), records));
        }
        if wanted(Suite::Eq7) {
            let in_hyp = delta < threshold;
            let records = self.sweep(&signals, |x, s_k| {
                let m = self.selection_margin(x, s_k)?;
                Ok((m.lhs, m.rhs, m.correct))
            })?;
            suites.push(suite_report("eq7", in_hyp, (!in_hyp).then(|| "delta_{K+1} >= C_K: correct selection is not guaranteed".to_string()), records));
        }
        if wanted(Suite::Remark2) {
            let in_hyp = within_half(delta);
            let note = if !in_hyp {
                Some("delta_{K+1} > 1/2: no claim is made".to_string())
            } else if k < 4 {
                Some("K < 4: the weaker-condition comparison is outside its stated scope".to_string())
            } else {
                None
            };
            let records = self.sweep(&signals, |x, s_k| {
                let r = self.remark2_comparisons(x, s_k)?;
                let factor_ok = (r.factor - T::lit(2.0) / T::lit(3.0).sqrt()).abs() <= T::lit(1e-12).max(T::epsilon() * T::lit(8.0));
                Ok((r.measured, r.new_bound, r.chain_holds && factor_ok))
            })?;
            suites.push(suite_report("remark2", in_hyp, note, records));
        }
        if wanted(Suite::Theorem1) {
            let in_hyp = delta < threshold;
            let report = if in_hyp {
                let r = self.theorem1_verify(trials, k, seed)?;
                let records = r
                    .failures
                    .iter()
                    .map(|f| CheckRecord {
                        signal: 0,
                        partial_support: f.support.clone(),
                        measured: 0.0,
                        bound: 0.0,
                        pass: false,
                    })
                    .collect::<Vec<_>>();
                SuiteReport {
                    suite: "theorem1".into(),
                    in_hypothesis: true,
                    note: None,
                    checks: r.runs,
                    failures: r.failures.len(),
                    pass: r.passed(),
                    records,
                }
            } else {
                SuiteReport {
                    suite: "theorem1".into(),
                    in_hypothesis: false,
                    note: Some(format!(
                        "delta_{} = {} is not below C_{} = {}; run a phase experiment instead",
                        k + 1,
                        delta,
                        k,
                        threshold
                    )),
                    checks: 0,
                    failures: 0,
                    pass: true,
                    records: Vec::new(),
                }
            };
            suites.push(report);
        }

        Ok(VerifyReport {
            rows: a.rows(),
            cols: a.cols(),
            sparsity: k,
            delta: delta.to_f64_lossy(),
            threshold: threshold.to_f64_lossy(),
            suites,
        })
    }

    fn sweep(
        &self,
        signals: &[SparseSignal<T>],
        check: impl Fn(&SparseSignal<T>, &SupportSet) -> Result<(T, T, bool)> + Sync,
    ) -> Result<Vec<CheckRecord>> {
        let per_signal = signals
            .par_iter()
            .enumerate()
            .map(|(t, x)| {
                proper_subsets(x.support())
                    .into_iter()
                    .map(|s_k| {
                        let (measured, bound, pass) = check(x, &s_k)?;
                        Ok(CheckRecord {
                            signal: t,
                            partial_support: s_k.indices().to_vec(),
                            measured: measured.to_f64_lossy(),
                            bound: bound.to_f64_lossy(),
                            pass,
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(per_signal.into_iter().flatten().collect())
    }
}

fn suite_report(name: &str, in_hypothesis: bool, note: Option<String>, records: Vec<CheckRecord>) -> SuiteReport {
    let failures = records.iter().filter(|r| !r.pass).count();
    SuiteReport {
        suite: name.into(),
        in_hypothesis,
        note,
        checks: records.len(),
        failures,
        pass: !in_hypothesis || failures == 0,
        records,
    }
}
