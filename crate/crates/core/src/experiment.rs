//! Monte-Carlo phase experiments and deterministic boundary sweeps.
//!
//! Work items are keyed by `(cell, trial)` and each draws from its own
//! random stream (see [`crate::random`]); results are gathered back by key,
//! so the CSV is byte-identical for a fixed seed at any thread count.

use std::fmt::Write as _;
use std::fs::File;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial;
use crate::constructions::counterexample;
use crate::error::{Error, Result};
use crate::model::SelectionRule;
use crate::ols::run_ols;
use crate::random::{gaussian_unit_columns, random_sparse_signal, stream_id, stream_rng, SignalModel};
use crate::rip::exact_rip_constant;
use crate::scalar::Real;

/// Exact `delta_{K+1}` is averaged per cell only when this many subsets or
/// fewer need enumerating.
pub const MEAN_DELTA_SUBSET_LIMIT: u128 = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub m_range: Vec<usize>,
    pub n: usize,
    pub k_range: Vec<usize>,
    pub trials_per_cell: usize,
    pub signal_model: SignalModel,
    pub rule: SelectionRule,
    pub rng_seed: u64,
    pub output_path: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.trials_per_cell == 0 {
            return bad("trials per cell must be at least 1".into());
        }
        if self.m_range.is_empty() || self.k_range.is_empty() {
            return bad("m and K ranges must be non-empty".into());
        }
        if self.k_range.contains(&0) {
            return bad("K = 0 is not a valid sparsity".into());
        }
        if self.m_range.contains(&0) {
            return bad("m = 0 is not a valid measurement count".into());
        }
        let max_k = *self.k_range.iter().max().expect("non-empty");
        let min_m = *self.m_range.iter().min().expect("non-empty");
        if max_k > min_m {
            return bad(format!("every K must be <= every m (K = {max_k}, m = {min_m})"));
        }
        if self.n < max_k + 1 {
            return bad(format!("n = {} must be at least max K + 1 = {}", self.n, max_k + 1));
        }
        Ok(())
    }

    fn cells(&self) -> Vec<(usize, usize)> {
        self.m_range
            .iter()
            .flat_map(|&m| self.k_range.iter().map(move |&k| (m, k)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseCell {
    pub m: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub trials: usize,
    pub exact_recovery_count: usize,
    pub mean_delta: Option<f64>,
}

impl PhaseCell {
    pub fn rate(&self) -> f64 {
        self.exact_recovery_count as f64 / self.trials as f64
    }
}

fn open_output(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("cannot write {}: {e}", path.display()),
        ))
    })
}

/// Runs every `(m, K)` cell and, when `output_path` is set, writes the CSV.
/// The output file is opened before any computation starts.
pub fn run_phase_experiment<T: Real>(config: &ExperimentConfig) -> Result<Vec<PhaseCell>> {
    config.validate()?;
    let mut out = config.output_path.as_deref().map(open_output).transpose()?;
    let cells = config.cells();
    let n = config.n;
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..config.trials_per_cell).map(move |t| (c, t)))
        .collect();

    let outcomes = jobs
        .par_iter()
        .map(|&(c, t)| -> Result<(bool, Option<T>)> {
            let (m, k) = cells[c];
            let mut rng = stream_rng(config.rng_seed, stream_id(c as u64, t as u64));
            let a = gaussian_unit_columns::<T, _>(&mut rng, m, n)?;
            let x = random_sparse_signal::<T, _>(&mut rng, n, k, config.signal_model)?;
            let y = a.apply(&x)?;
            let trace = run_ols(&a, &y, k, config.rule)?;
            let success = trace.support().same_elements(x.support());
            let delta = if binomial(n, k + 1) <= MEAN_DELTA_SUBSET_LIMIT {
                Some(exact_rip_constant(&a, k + 1)?.delta)
            } else {
                None
            };
            Ok((success, delta))
        })
        .collect::<Result<Vec<_>>>()?;

    let per_cell = config.trials_per_cell;
    let result: Vec<PhaseCell> = cells
        .iter()
        .enumerate()
        .map(|(c, &(m, k))| {
            let chunk = &outcomes[c * per_cell..(c + 1) * per_cell];
            let successes = chunk.iter().filter(|(s, _)| *s).count();
            let mean_delta = chunk
                .iter()
                .map(|(_, d)| *d)
                .collect::<Option<Vec<T>>>()
                .map(|ds| ds.into_iter().fold(T::zero(), |acc, d| acc + d).to_f64_lossy() / per_cell as f64);
            PhaseCell {
                m,
                k,
                trials: per_cell,
                exact_recovery_count: successes,
                mean_delta,
            }
        })
        .collect();

    if let Some(f) = out.as_mut() {
        f.write_all(phase_csv(&result).as_bytes())?;
    }
    Ok(result)
}

/// `m,K,trials,successes,rate[,mean_delta]`. The `mean_delta` column is
/// present when at least one cell has it; cells without it leave it empty.
pub fn phase_csv(cells: &[PhaseCell]) -> String {
    let with_delta = cells.iter().any(|c| c.mean_delta.is_some());
    let mut s = String::from("m,K,trials,successes,rate");
    if with_delta {
        s.push_str(",mean_delta");
    }
    s.push('\n');
    for c in cells {
        write!(s, "{},{},{},{},{:.6}", c.m, c.k, c.trials, c.exact_recovery_count, c.rate()).expect("string write");
        if with_delta {
            s.push(',');
            if let Some(d) = c.mean_delta {
                write!(s, "{d:.6}").expect("string write");
            }
        }
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryRow {
    pub delta_star: f64,
    pub first_pick: usize,
    pub recovered: bool,
}

/// Builds the failing instance at every grid value and records OLS's first
/// pick and whether the support was recovered.
pub fn run_boundary_sweep<T: Real>(k: usize, delta_grid: &[f64], rule: SelectionRule) -> Result<Vec<BoundaryRow>> {
    if k < 2 {
        return Err(Error::InvalidParameter(
            "boundary sweeps need K >= 2; no failing instance exists for K = 1".into(),
        ));
    }
    if let Some(d) = delta_grid.iter().find(|d| !(**d > 0.0 && **d < 1.0)) {
        return Err(Error::InvalidParameter(format!("grid value {d} is outside (0, 1)")));
    }
    delta_grid
        .par_iter()
        .map(|&d| {
            let (a, x) = counterexample::<T>(k, T::lit(d))?;
            let y = a.apply(&x)?;
            let trace = run_ols(&a, &y, k, rule)?;
            Ok(BoundaryRow {
                delta_star: d,
                first_pick: trace.iterations[0].chosen_index,
                recovered: trace.support().same_elements(x.support()),
            })
        })
        .collect()
}

pub fn boundary_csv(rows: &[BoundaryRow]) -> String {
    let mut s = String::from("delta_star,first_pick,recovered\n");
    for r in rows {
        writeln!(s, "{},{},{}", r.delta_star, r.first_pick, r.recovered).expect("string write");
    }
    s
}
