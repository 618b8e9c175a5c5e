//! Monte-Carlo campaigns: logical error rates with a relative-precision
//! stopping rule, and thresholds from the crossing of two code distances.

mod config;
mod output;

pub use config::{CampaignConfig, IntervalMethod};
pub use output::{write_csv, write_jsonl, RateRow, CSV_HEADER};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoder::{build_matching_problem, decode};
use crate::error::{Error, Result};
use crate::lattice::{ModelConfig, RhgLattice};

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.5758293035489;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StoppingRule {
    pub rel_precision: f64,
    pub min_errors: u64,
    pub batch: u64,
    pub max_trials: u64,
    pub interval: IntervalMethod,
}

impl Default for StoppingRule {
    fn default() -> Self {
        Self {
            rel_precision: 0.1,
            min_errors: 100,
            batch: 1000,
            max_trials: 10_000_000,
            interval: IntervalMethod::Normal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub p_l: f64,
    /// Half-width of the 99% interval; for zero-failure runs the
    /// rule-of-three upper bound `3 / trials`.
    pub delta: f64,
    pub trials: u64,
    pub errors: u64,
    pub decode_failures: u64,
    pub converged: bool,
    pub zero_failure: bool,
}

impl RateEstimate {
    pub fn from_counts(errors: u64, trials: u64, interval: IntervalMethod) -> Self {
        let n = trials as f64;
        let p = errors as f64 / n;
        let (p_l, delta) = if errors == 0 {
            (0.0, 3.0 / n)
        } else {
            match interval {
                IntervalMethod::Normal => (p, Z_99 * (p * (1.0 - p) / n).sqrt()),
                IntervalMethod::Wilson => {
                    let z2 = Z_99 * Z_99;
                    let denom = 1.0 + z2 / n;
                    let centre = (p + z2 / (2.0 * n)) / denom;
                    let half = Z_99 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
                    (centre, half)
                }
            }
        };
        Self {
            p_l,
            delta,
            trials,
            errors,
            decode_failures: 0,
            converged: false,
            zero_failure: errors == 0,
        }
    }

    pub fn upper(&self) -> f64 {
        self.p_l + self.delta
    }

    pub fn lower(&self) -> f64 {
        self.p_l - self.delta
    }
}

/// Per-trial random stream: one master seed, one ChaCha stream per trial
/// index, so batching and thread count never change the result.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Outcome of a single trial: `(logical error, decode failure)`.
pub fn run_decoded_trial(lattice: &RhgLattice, cfg: &ModelConfig, sampler: &crate::bsm_model::FusionSampler, seed: u64, trial: u64) -> (bool, bool) {
    let mut rng = trial_rng(seed, trial);
    let t = lattice.run_trial(cfg, sampler, &mut rng);
    if t.syndrome.is_empty() && t.records.iter().all(|r| !r.error) {
        return (false, false);
    }
    let problem = build_matching_problem(lattice, &t.syndrome, &t.records);
    match decode(&problem) {
        Ok(c) => (lattice.judge_logical_error(&t.error_bits(), &c.qubits), false),
        Err(_) => (true, true),
    }
}

/// Runs batches of decoded trials until the interval half-width drops to
/// `rel_precision * p_L` with at least `min_errors` logical errors, or the
/// trial cap is hit.
pub fn estimate_logical_error(cfg: &ModelConfig, rule: &StoppingRule, seed: u64) -> Result<RateEstimate> {
    let cfg = cfg.validated()?;
    if rule.batch == 0 || rule.max_trials == 0 {
        return Err(Error::Config("batch and max_trials must be positive".into()));
    }
    let lattice = RhgLattice::for_distance(cfg.d);
    let sampler = cfg.sampler()?;
    let noiseless = cfg.eta == 0.0 && sampler.is_ideal();
    let (mut trials, mut errors, mut failures) = (0u64, 0u64, 0u64);
    loop {
        let end = (trials + rule.batch).min(rule.max_trials);
        let (e, f) = (trials..end)
            .into_par_iter()
            .map(|i| {
                let (err, fail) = run_decoded_trial(&lattice, &cfg, &sampler, seed, i);
                (err as u64, fail as u64)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        errors += e;
        failures += f;
        trials = end;
        let mut est = RateEstimate::from_counts(errors, trials, rule.interval);
        est.decode_failures = failures;
        let precise = errors >= rule.min_errors && est.delta <= rule.rel_precision * est.p_l;
        if precise || noiseless || trials >= rule.max_trials {
            est.converged = precise || noiseless;
            return Ok(est);
        }
    }
}

/// Derives the master seed for one (distance, grid index) point.
pub fn point_seed(seed: u64, d: usize, index: usize) -> u64 {
    seed ^ ((d as u64) << 48) ^ ((index as u64) << 32)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub eta_th: f64,
    pub d_pair: (usize, usize),
    pub small: Vec<RateEstimate>,
    pub large: Vec<RateEstimate>,
}

/// Largest grid point where the larger distance is below the smaller one
/// with non-overlapping intervals.
pub fn crossing_point(grid: &[f64], small: &[RateEstimate], large: &[RateEstimate]) -> Result<f64> {
    grid.iter()
        .zip(small.iter().zip(large))
        .filter(|(_, (s, l))| l.upper() < s.lower())
        .map(|(&eta, _)| eta)
        .fold(None, |best: Option<f64>, eta| Some(best.map_or(eta, |b| b.max(eta))))
        .ok_or_else(|| Error::NoThreshold("no grid point separates the two distances".into()))
}

pub fn find_threshold(cfg: &ModelConfig, d_small: usize, d_large: usize, eta_grid: &[f64], rule: &StoppingRule, seed: u64) -> Result<ThresholdResult> {
    if d_small >= d_large {
        return Err(Error::Config(format!("distance pair ({d_small}, {d_large}) must be increasing")));
    }
    if eta_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Config("eta grid must be sorted ascending".into()));
    }
    let run = |d: usize| -> Result<Vec<RateEstimate>> {
        eta_grid
            .iter()
            .enumerate()
            .map(|(i, &eta)| estimate_logical_error(&cfg.with_distance(d).with_eta(eta), rule, point_seed(seed, d, i)))
            .collect()
    };
    let small = run(d_small)?;
    let large = run(d_large)?;
    let eta_th = crossing_point(eta_grid, &small, &large)?;
    Ok(ThresholdResult {
        eta_th,
        d_pair: (d_small, d_large),
        small,
        large,
    })
}
