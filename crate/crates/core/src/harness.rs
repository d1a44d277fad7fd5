//! Seeded Erdős–Rényi comparison of Laplacian- and incidence-constrained
//! saddle matrices, plus the file formats and command-line front end.

mod cli;
mod formats;

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flows::{rate_incidence, rate_laplacian, QuadraticCost};
use crate::graphs::{erdos_renyi_connected, Graph};
use crate::saddle::SaddleProblem;

pub use cli::cli_main;
pub use formats::{parse_game_file, parse_saddle_file, GameFile};

/// Environment variable that overrides the default master seed.
pub const SEED_ENV: &str = "SEMICONTRACT_SEED";

pub const DEFAULT_SEED: u64 = 42;

/// Two-sided 95% normal quantile used for the confidence half-width.
pub const Z_95: f64 = 1.96;

/// Slack allowed when comparing a trial's deflated abscissa with its
/// certified rate.
pub const CONSISTENCY_TOL: f64 = 1e-8;

/// Default master seed: [`SEED_ENV`] when set to an integer, otherwise
/// [`DEFAULT_SEED`].
pub fn default_seed() -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|e| Error::InvalidInput(format!("{SEED_ENV}={s:?}: {e}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub n_nodes: usize,
    pub edge_probabilities: Vec<f64>,
    pub trials_per_p: usize,
    pub tau: f64,
    /// `q_i` and `v_i` are drawn uniformly from `(lo, hi]`.
    pub value_range: (f64, f64),
    pub master_seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_nodes: 40,
            edge_probabilities: (1..=9).map(|k| k as f64 / 10.0).collect(),
            trials_per_p: 50,
            tau: 1e-3,
            value_range: (0.0, 10.0),
            master_seed: DEFAULT_SEED,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_nodes < 2 {
            return Err(Error::InvalidInput("need at least 2 nodes".into()));
        }
        if self.trials_per_p < 2 {
            return Err(Error::InvalidInput("need at least 2 trials per probability".into()));
        }
        if self.edge_probabilities.is_empty() {
            return Err(Error::InvalidInput("no edge probabilities given".into()));
        }
        if let Some(p) = self.edge_probabilities.iter().find(|&&p| !(p > 0.0 && p <= 1.0)) {
            return Err(Error::InvalidInput(format!("edge probability {p} outside (0, 1]")));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidInput(format!("tau must be positive, got {}", self.tau)));
        }
        let (lo, hi) = self.value_range;
        if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::InvalidInput(format!("value range ({lo}, {hi}] must satisfy 0 <= lo < hi")));
        }
        Ok(())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `trial` in probability bucket `p_index`.
pub fn child_seed(master: u64, p_index: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ p_index as u64) ^ trial as u64)
}

/// Stream of the per-trial RNG reserved for cost parameters; graph sampling
/// uses streams `0..MAX_SAMPLING_ATTEMPTS`.
const COST_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub p: f64,
    pub p_index: usize,
    pub trial: usize,
    pub edges: usize,
    pub abscissa_laplacian: f64,
    pub abscissa_incidence: f64,
    pub rate_laplacian: f64,
    pub rate_incidence: f64,
    /// Both abscissas lie at or below minus their certified rates.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub p: f64,
    pub mean_abscissa_laplacian: f64,
    pub ci_laplacian: f64,
    pub mean_abscissa_incidence: f64,
    pub ci_incidence: f64,
    pub trials: usize,
}

#[derive(Debug, Clone)]
pub struct Figure1Output {
    pub rows: Vec<ExperimentRow>,
    pub trials: Vec<TrialRecord>,
}

fn sample_costs(seed: u64, n: usize, (lo, hi): (f64, f64)) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(COST_STREAM);
    // u in [0, 1) maps to (lo, hi].
    let mut draw = || hi - (hi - lo) * rng.random::<f64>();
    let q = (0..n).map(|_| draw()).collect();
    let v = (0..n).map(|_| draw()).collect();
    (q, v)
}

/// One trial: connected G(n, p), random quadratic costs, and the deflated
/// abscissas of both constrained saddle matrices.
pub fn run_trial(cfg: &ExperimentConfig, p_index: usize, trial: usize) -> Result<TrialRecord> {
    let p = cfg.edge_probabilities[p_index];
    let seed = child_seed(cfg.master_seed, p_index, trial);
    let g = erdos_renyi_connected(cfg.n_nodes, p, seed)?;
    let (q, v) = sample_costs(seed, cfg.n_nodes, cfg.value_range);
    let hessian = DMatrix::from_diagonal(&DVector::from_iterator(q.len(), q.iter().map(|qi| 2.0 * qi)));
    let cost = QuadraticCost::scalar(q, v)?;

    let abscissa_laplacian = SaddleProblem::new(hessian.clone(), g.laplacian(), cfg.tau)?.deflated_abscissa()?;
    let abscissa_incidence =
        SaddleProblem::new(hessian, g.incidence().transpose(), cfg.tau)?.deflated_abscissa()?;
    let rate_l = rate_laplacian(&cost, &g, cfg.tau)?;
    let rate_i = rate_incidence(&cost, &g, cfg.tau)?;
    let within = |abscissa: f64, rate: f64| abscissa <= -rate + CONSISTENCY_TOL * rate.max(abscissa.abs()).max(1.0);

    Ok(TrialRecord {
        seed,
        p,
        p_index,
        trial,
        edges: g.edge_count(),
        abscissa_laplacian,
        abscissa_incidence,
        rate_laplacian: rate_l,
        rate_incidence: rate_i,
        consistent: within(abscissa_laplacian, rate_l) && within(abscissa_incidence, rate_i),
    })
}

/// Mean and `Z_95·s/√k` half-width, `s` the sample standard deviation.
fn mean_ci(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, Z_95 * (var / k).sqrt())
}

/// Runs every trial (in parallel, results in deterministic order) and
/// aggregates one row per edge probability, sorted by `p`.
pub fn run_figure1_detailed(cfg: &ExperimentConfig) -> Result<Figure1Output> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.edge_probabilities.len());
    let mut trials = Vec::with_capacity(cfg.edge_probabilities.len() * cfg.trials_per_p);
    for (p_index, &p) in cfg.edge_probabilities.iter().enumerate() {
        let records = (0..cfg.trials_per_p)
            .into_par_iter()
            .map(|t| run_trial(cfg, p_index, t))
            .collect::<Result<Vec<_>>>()?;
        let lap: Vec<f64> = records.iter().map(|r| r.abscissa_laplacian).collect();
        let inc: Vec<f64> = records.iter().map(|r| r.abscissa_incidence).collect();
        let (mean_l, ci_l) = mean_ci(&lap);
        let (mean_i, ci_i) = mean_ci(&inc);
        rows.push(ExperimentRow {
            p,
            mean_abscissa_laplacian: mean_l,
            ci_laplacian: ci_l,
            mean_abscissa_incidence: mean_i,
            ci_incidence: ci_i,
            trials: records.len(),
        });
        trials.extend(records);
    }
    rows.sort_by(|a, b| a.p.total_cmp(&b.p));
    Ok(Figure1Output { rows, trials })
}

pub fn run_figure1(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    Ok(run_figure1_detailed(cfg)?.rows)
}

pub const CSV_HEADER: &str = "p,mean_abscissa_laplacian,ci_laplacian,mean_abscissa_incidence,ci_incidence,trials";

pub fn write_rows_csv<W: Write>(rows: &[ExperimentRow], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.p, r.mean_abscissa_laplacian, r.ci_laplacian, r.mean_abscissa_incidence, r.ci_incidence, r.trials
        )?;
    }
    Ok(())
}

pub fn rows_to_csv(rows: &[ExperimentRow]) -> String {
    let mut buf = Vec::new();
    write_rows_csv(rows, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV is ASCII")
}

/// One JSON object per trial.
pub fn write_trial_log<W: Write>(trials: &[TrialRecord], mut out: W) -> Result<()> {
    for t in trials {
        serde_json::to_writer(&mut out, t)?;
        writeln!(out)?;
    }
    Ok(())
}

/// Builds a graph for CLI use: an edge-list file or a named family.
pub fn named_graph(family: &str, n: usize) -> Result<Graph> {
    match family {
        "complete" => Ok(Graph::complete(n)),
        "path" => Ok(Graph::path(n)),
        "cycle" => Graph::cycle(n),
        other => Err(Error::InvalidInput(format!(
            "unknown graph family {other:?} (expected complete, path or cycle)"
        ))),
    }
}
