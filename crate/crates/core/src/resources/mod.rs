//! Expected 3-GHZ state counts per microcluster and per star cluster.

pub mod merging;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bsm_model::{lattice_event_probs, DetectorModel, EncodingParams, LossParams};
use crate::error::{check_probability, Error, Result};
use crate::graph_states::{decompose_components, microcluster_graph, unencoded_microcluster_graph, ComponentSet, HConfig, MicroclusterKind};
use crate::lattice::ModelConfig;

/// Expected cost of fusing two independently prepared states of costs `n1`
/// and `n2`: `2 (n1 + n2) / (1 - eta)^2`.
pub fn fusion_sum(n1: f64, n2: f64, eta: f64) -> Result<f64> {
    check_probability("eta", eta)?;
    if eta >= 1.0 {
        return Err(Error::InfiniteCost);
    }
    Ok(2.0 * (n1 + n2) / ((1.0 - eta) * (1.0 - eta)))
}

pub const FIRST_BATCH: usize = 1200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostEstimate {
    pub cost: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostQuery {
    pub kind: MicroclusterKind,
    pub config: HConfig,
    /// `None` for single-photon qubits.
    pub params: Option<EncodingParams>,
    pub eta: f64,
}

impl CostQuery {
    pub fn components(&self) -> ComponentSet {
        let g = match self.params {
            Some(p) => microcluster_graph(self.kind, self.config, p),
            None => unencoded_microcluster_graph(),
        };
        decompose_components(&g)
    }
}

/// Minimum sampled assembly cost. Samples come in batches of 1200, then
/// 1200, 2400, 4800, ...; sampling stops once a new batch fails to lower
/// the minimum (the first check compares the first 600 samples with all
/// 1200).
pub fn estimate_microcluster_cost(q: &CostQuery, seed: u64) -> Result<CostEstimate> {
    let set = q.components();
    let sample = |i: u64| -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i);
        merging::sample_cost(&set, q.eta, &mut rng)
    };
    let batch_min = |from: usize, to: usize| -> Result<f64> {
        (from..to)
            .into_par_iter()
            .map(|i| sample(i as u64))
            .try_reduce(|| f64::INFINITY, |a, b| Ok(a.min(b)))
    };
    let first = batch_min(0, FIRST_BATCH / 2)?;
    let mut best = first.min(batch_min(FIRST_BATCH / 2, FIRST_BATCH)?);
    let mut prev = first;
    let mut total = FIRST_BATCH;
    let mut next = FIRST_BATCH;
    while best < prev {
        prev = best;
        best = best.min(batch_min(total, total + next)?);
        total += next;
        next = total;
    }
    Ok(CostEstimate { cost: best, samples: total })
}

/// Step-1 fusion success probability that enters the post-selected cost.
pub fn step1_success_probability(cfg: &ModelConfig) -> Result<f64> {
    let loss = LossParams::new(cfg.eta)?;
    match cfg.enc_params {
        Some(params) if cfg.encoding => match cfg.detector() {
            DetectorModel::PnrdTwo => Ok(lattice_event_probs(params, DetectorModel::PnrdTwo, loss)?.success),
            DetectorModel::OnOff => Err(Error::Unsupported(
                "step-1 success probability with on-off detectors is undefined; post-selection cost unavailable".into(),
            )),
        },
        _ => Ok((1.0 - cfg.p_fail) * loss.x()),
    }
}

/// Star-cluster cost from the central and side microcluster costs.
pub fn combine_star_cost(n_central: f64, n_side: f64, pssl: bool, p_step1: f64) -> Result<f64> {
    if !pssl {
        return Ok(n_central + 2.0 * n_side);
    }
    if p_step1 <= 0.0 {
        return Err(Error::InfiniteCost);
    }
    Ok(((n_central + n_side) / p_step1 + n_side) / p_step1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarCost {
    pub central: CostEstimate,
    pub side: CostEstimate,
    pub p_step1: Option<f64>,
    pub star: f64,
}

pub fn star_cluster_cost(cfg: &ModelConfig, seed: u64) -> Result<StarCost> {
    let config = if cfg.hic { HConfig::Hic } else { HConfig::His };
    let params = cfg.enc_params.filter(|_| cfg.encoding);
    let p_step1 = if cfg.pssl { Some(step1_success_probability(cfg)?) } else { None };
    let query = |kind| CostQuery {
        kind,
        config,
        params,
        eta: cfg.eta,
    };
    let central = estimate_microcluster_cost(&query(MicroclusterKind::Central), seed)?;
    let side = estimate_microcluster_cost(&query(MicroclusterKind::Side), seed.wrapping_add(1))?;
    let star = combine_star_cost(central.cost, side.cost, cfg.pssl, p_step1.unwrap_or(1.0))?;
    Ok(StarCost {
        central,
        side,
        p_step1,
        star,
    })
}

pub const RESOURCE_CSV_HEADER: &str = "n,m,j,config,detector,pssl,eta,p_fail,n_central,n_side,p_succ_step1,n_ghz_star,samples_central,samples_side";

pub fn resource_csv_line(cfg: &ModelConfig, cost: &StarCost) -> String {
    let p = cfg.enc_params.filter(|_| cfg.encoding);
    let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        opt(p.map(|p| p.n())),
        opt(p.map(|p| p.m())),
        opt(p.map(|p| p.j())),
        if cfg.hic { "hic" } else { "his" },
        if cfg.pnrd { "pnrd" } else { "onoff" },
        cfg.pssl,
        cfg.eta,
        cfg.p_fail,
        cost.central.cost,
        cost.side.cost,
        cost.p_step1.map(|p| p.to_string()).unwrap_or_default(),
        cost.star,
        cost.central.samples,
        cost.side.samples
    )
}
