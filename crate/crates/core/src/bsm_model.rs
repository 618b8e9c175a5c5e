//! Error model of Bell-state measurements on parity-state encoded qubits.
//!
//! A lattice-level BSM on the `(n, m)` parity code is carried out as `n`
//! block-level BSMs, each of which is `m` physical BSMs. This module gives
//! the closed-form event tables at block and lattice level, the heralded
//! sign/letter error probabilities attached to each event, and samplers that
//! turn them into a [`FusionErrorProfile`] for one fusion.
//!
//! The unencoded scheme (single-photon qubits with boosted fusions) is also
//! covered by [`sample_unencoded_fusion`].

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};

/// Largest block count accepted by the exact letter-vote summation.
pub const MAX_VOTE_BLOCKS: usize = 12;

/// `(n, m)` parity code plus the cap `j` on consecutive `B_psi` attempts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EncodingParams {
    n: usize,
    m: usize,
    j: usize,
}

impl EncodingParams {
    pub fn new(n: usize, m: usize, j: usize) -> Result<Self> {
        let reason = if n == 0 {
            Some("n must be at least 1")
        } else if m == 0 {
            Some("m must be at least 1")
        } else if j >= m {
            Some("j must not exceed m - 1")
        } else {
            None
        };
        match reason {
            Some(reason) => Err(Error::InvalidEncoding { n, m, j, reason }),
            None => Ok(Self { n, m, j }),
        }
    }

    /// Number of blocks per lattice-level qubit.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Photons per block.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Maximum number of consecutive `B_psi` attempts in a block BSM.
    pub fn j(&self) -> usize {
        self.j
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DetectorModel {
    /// Photon-number-resolving detectors that count up to two photons, so a
    /// loss is told apart from a failure.
    PnrdTwo,
    /// Click/no-click detectors; a loss looks like a failure.
    OnOff,
}

/// Uniform per-photon loss rate `eta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossParams {
    eta: f64,
}

impl LossParams {
    pub fn new(eta: f64) -> Result<Self> {
        check_probability("eta", eta).map(|eta| Self { eta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Probability that neither photon of a physical BSM is lost.
    pub fn x(&self) -> f64 {
        (1.0 - self.eta) * (1.0 - self.eta)
    }
}

/// Outcome class of one block-level BSM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BlockEvent {
    /// Sign and letter identified (PNRD detectors).
    Success,
    /// No photon of the letter-revealing stage failed after `r` failed
    /// `B_psi` attempts (on-off detectors).
    SuccessAfter(usize),
    /// Neither sign nor letter identified with certainty.
    Failure,
    /// Sign identified, letter lost.
    SignOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockEventRow {
    pub event: BlockEvent,
    pub probability: f64,
    pub q_sign: f64,
    pub q_lett: f64,
}

/// Every block-level event with its total probability and conditional
/// sign/letter error rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockEventTable {
    pub detector: DetectorModel,
    pub rows: Vec<BlockEventRow>,
}

impl BlockEventTable {
    pub fn row(&self, event: BlockEvent) -> Option<&BlockEventRow> {
        self.rows.iter().find(|r| r.event == event)
    }

    pub fn total_probability(&self) -> f64 {
        self.rows.iter().map(|r| r.probability).sum()
    }

    /// Index of a row drawn according to the row probabilities.
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (i, row) in self.rows.iter().enumerate() {
            acc += row.probability;
            if u < acc {
                return i;
            }
        }
        self.rows.len() - 1
    }
}

/// Heralded error probabilities of one fusion plus the realised error bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FusionErrorProfile {
    pub q_sign: f64,
    pub q_lett: f64,
    pub sign_error: bool,
    pub lett_error: bool,
}

impl FusionErrorProfile {
    pub const IDEAL: FusionErrorProfile = FusionErrorProfile {
        q_sign: 0.0,
        q_lett: 0.0,
        sign_error: false,
        lett_error: false,
    };

    /// Draws the error bits for the given heralded probabilities.
    pub fn draw<R: Rng + ?Sized>(q_sign: f64, q_lett: f64, rng: &mut R) -> Self {
        let sign_error = q_sign > 0.0 && rng.gen::<f64>() < q_sign;
        let lett_error = q_lett > 0.0 && rng.gen::<f64>() < q_lett;
        Self {
            q_sign,
            q_lett,
            sign_error,
            lett_error,
        }
    }
}

/// Lattice-level event probabilities with PNRD detectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeEventProbs {
    /// At least one block succeeded and none failed: error profile (0, 0).
    pub success: f64,
    /// Letter known, sign lost: (1/2, 0).
    pub letter_only: f64,
    /// Sign known, letter lost: (0, 1/2).
    pub sign_only: f64,
    /// Both lost: (1/2, 1/2).
    pub failure: f64,
}

impl LatticeEventProbs {
    /// `(probability, q_sign, q_lett)` for the four events, in declaration order.
    pub fn events(&self) -> [(f64, f64, f64); 4] {
        [
            (self.success, 0.0, 0.0),
            (self.letter_only, 0.5, 0.0),
            (self.sign_only, 0.0, 0.5),
            (self.failure, 0.5, 0.5),
        ]
    }
}

fn pnrd_block_probs(params: EncodingParams, x: f64) -> (f64, f64, f64) {
    let m = params.m as i32;
    let j = params.j as i32;
    let p_s = (1.0 - 0.5f64.powi(j + 1)) * x.powi(m);
    let p_f: f64 = (0..=j)
        .map(|l| (x / 2.0).powi(l) * (1.0 - x).powi(m - l))
        .sum();
    let p_sd = 1.0 - p_s - p_f;
    (p_s, p_f, p_sd.max(0.0))
}

pub fn block_event_table(
    params: EncodingParams,
    det: DetectorModel,
    loss: LossParams,
) -> BlockEventTable {
    let x = loss.x();
    let m = params.m as i32;
    let j = params.j as i32;
    let rows = match det {
        DetectorModel::PnrdTwo => {
            let (p_s, p_f, p_sd) = pnrd_block_probs(params, x);
            vec![
                BlockEventRow {
                    event: BlockEvent::Success,
                    probability: p_s,
                    q_sign: 0.0,
                    q_lett: 0.0,
                },
                BlockEventRow {
                    event: BlockEvent::Failure,
                    probability: p_f,
                    q_sign: 0.5,
                    q_lett: 0.5,
                },
                BlockEventRow {
                    event: BlockEvent::SignOnly,
                    probability: p_sd,
                    q_sign: 0.0,
                    q_lett: 0.5,
                },
            ]
        }
        DetectorModel::OnOff => {
            let mut rows = Vec::with_capacity(params.j + 3);
            let mut total = 0.0;
            for r in 0..=j {
                let p = (1.0 - x / 2.0).powi(r) * x.powi(m - r) / 2.0;
                // x / (2 - x) is well defined since x <= 1.
                let q_lett = 0.5 - (x / (2.0 - x)).powi(r) / 2.0;
                total += p;
                rows.push(BlockEventRow {
                    event: BlockEvent::SuccessAfter(r as usize),
                    probability: p,
                    q_sign: 0.0,
                    q_lett,
                });
            }
            let lost = (1.0 - x).powi(m - j);
            let p_fail = (1.0 - x / 2.0).powi(j) * (1.0 + lost) / 2.0;
            total += p_fail;
            rows.push(BlockEventRow {
                event: BlockEvent::Failure,
                probability: p_fail,
                q_sign: lost / (1.0 + lost),
                q_lett: 0.5,
            });
            rows.push(BlockEventRow {
                event: BlockEvent::SignOnly,
                probability: (1.0 - total).max(0.0),
                q_sign: 0.0,
                q_lett: 0.5,
            });
            rows
        }
    };
    BlockEventTable {
        detector: det,
        rows,
    }
}

pub fn lattice_event_probs(
    params: EncodingParams,
    det: DetectorModel,
    loss: LossParams,
) -> Result<LatticeEventProbs> {
    if det != DetectorModel::PnrdTwo {
        return Err(Error::Usage(
            "lattice-level event probabilities are closed-form only for PNRD detectors".into(),
        ));
    }
    let (p_s, p_f, p_sd) = pnrd_block_probs(params, loss.x());
    let n = params.n as i32;
    let none_failed = (1.0 - p_f).powi(n);
    let none_succeeded = (1.0 - p_s).powi(n);
    let all_sign_only = p_sd.powi(n);
    let success = none_failed - all_sign_only;
    let failure = none_succeeded - all_sign_only;
    let letter_only = 1.0 - none_failed - none_succeeded + all_sign_only;
    Ok(LatticeEventProbs {
        success: success.max(0.0),
        letter_only: letter_only.max(0.0),
        sign_only: all_sign_only,
        failure: failure.max(0.0),
    })
}

/// Probability that the parity of `n_failed_blocks` independent block signs,
/// each wrong with probability `q_sign_failed`, is wrong.
pub fn lattice_sign_error_prob(n_failed_blocks: usize, q_sign_failed: f64) -> f64 {
    0.5 - 0.5 * (1.0 - 2.0 * q_sign_failed).powi(n_failed_blocks as i32)
}

/// Error probability of the weighted majority vote over block letters with
/// individual error rates `block_qs` (each in `[0, 1/2]`).
///
/// A block with `q = 0` is authoritative and makes the vote error-free. Exact
/// ties count as a fair coin.
pub fn lattice_letter_error_prob(block_qs: &[f64]) -> Result<f64> {
    if block_qs.is_empty() {
        return Err(Error::Usage("letter vote needs at least one block".into()));
    }
    if block_qs.len() > MAX_VOTE_BLOCKS {
        return Err(Error::TooManyBlocks(block_qs.len(), MAX_VOTE_BLOCKS));
    }
    for &q in block_qs {
        if !(0.0..=0.5).contains(&q) {
            return Err(Error::OutOfRange {
                name: "block letter error rate",
                value: q,
            });
        }
    }
    if block_qs.contains(&0.0) {
        return Ok(0.0);
    }
    let weights: Vec<f64> = block_qs.iter().map(|&q| ((1.0 - q) / q).ln()).collect();
    let scale: f64 = weights.iter().sum::<f64>().max(f64::MIN_POSITIVE);
    let n = block_qs.len();
    let mut acc = 0.0;
    for pattern in 0u32..(1u32 << n) {
        let mut prob = 1.0;
        let mut vote = 0.0;
        for (i, (&q, &w)) in block_qs.iter().zip(&weights).enumerate() {
            if pattern >> i & 1 == 1 {
                prob *= q;
                vote += w;
            } else {
                prob *= 1.0 - q;
                vote -= w;
            }
        }
        if vote.abs() > 1e-12 * scale {
            acc += prob * vote.signum();
        }
    }
    Ok((0.5 + 0.5 * acc).clamp(0.0, 0.5))
}

/// Precomputed per-fusion sampler for one scheme; cheap to share across
/// threads.
#[derive(Debug, Clone)]
pub enum FusionSampler {
    Unencoded {
        p_fail: f64,
        x: f64,
    },
    Pnrd {
        probs: LatticeEventProbs,
    },
    OnOff {
        n: usize,
        table: BlockEventTable,
        /// Lattice-level `(q_sign, q_lett)` keyed by the sorted row indices
        /// of the `n` block events.
        lookup: HashMap<Vec<u8>, (f64, f64)>,
    },
}

impl FusionSampler {
    pub fn unencoded(p_fail: f64, loss: LossParams) -> Result<Self> {
        check_probability("p_fail", p_fail)?;
        Ok(FusionSampler::Unencoded {
            p_fail,
            x: loss.x(),
        })
    }

    pub fn encoded(params: EncodingParams, det: DetectorModel, loss: LossParams) -> Result<Self> {
        match det {
            DetectorModel::PnrdTwo => Ok(FusionSampler::Pnrd {
                probs: lattice_event_probs(params, det, loss)?,
            }),
            DetectorModel::OnOff => {
                if params.n > MAX_VOTE_BLOCKS {
                    return Err(Error::TooManyBlocks(params.n, MAX_VOTE_BLOCKS));
                }
                let table = block_event_table(params, det, loss);
                let mut lookup = HashMap::new();
                let mut combo = vec![0u8; params.n];
                fill_multisets(&table, &mut combo, 0, 0, &mut lookup)?;
                Ok(FusionSampler::OnOff {
                    n: params.n,
                    table,
                    lookup,
                })
            }
        }
    }

    /// True when every sampled profile is error-free.
    pub fn is_ideal(&self) -> bool {
        match self {
            FusionSampler::Unencoded { p_fail, x } => *p_fail == 0.0 && *x == 1.0,
            FusionSampler::Pnrd { probs } => probs.success == 1.0,
            FusionSampler::OnOff { lookup, .. } => lookup.values().all(|&(s, l)| s == 0.0 && l == 0.0),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> FusionErrorProfile {
        match self {
            FusionSampler::Unencoded { p_fail, x } => {
                let u: f64 = rng.gen();
                let (q_sign, q_lett) = if u < (1.0 - p_fail) * x {
                    (0.0, 0.0)
                } else if u < *x {
                    (0.5, 0.0)
                } else {
                    (0.5, 0.5)
                };
                FusionErrorProfile::draw(q_sign, q_lett, rng)
            }
            FusionSampler::Pnrd { probs } => {
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                let events = probs.events();
                let mut chosen = events[3];
                for ev in events {
                    acc += ev.0;
                    if u < acc {
                        chosen = ev;
                        break;
                    }
                }
                FusionErrorProfile::draw(chosen.1, chosen.2, rng)
            }
            FusionSampler::OnOff { n, table, lookup } => {
                let mut key: Vec<u8> = (0..*n).map(|_| table.sample_index(rng) as u8).collect();
                key.sort_unstable();
                let (q_sign, q_lett) = lookup[&key];
                FusionErrorProfile::draw(q_sign, q_lett, rng)
            }
        }
    }
}

fn fill_multisets(
    table: &BlockEventTable,
    combo: &mut Vec<u8>,
    pos: usize,
    start: usize,
    out: &mut HashMap<Vec<u8>, (f64, f64)>,
) -> Result<()> {
    if pos == combo.len() {
        out.insert(combo.clone(), combine_block_events(table, combo)?);
        return Ok(());
    }
    for idx in start..table.rows.len() {
        combo[pos] = idx as u8;
        fill_multisets(table, combo, pos + 1, idx, out)?;
    }
    Ok(())
}

/// Lattice-level `(q_sign, q_lett)` for a tuple of on-off block events given
/// by row index into `table`.
pub fn combine_block_events(table: &BlockEventTable, rows: &[u8]) -> Result<(f64, f64)> {
    let failed = rows
        .iter()
        .filter(|&&i| table.rows[i as usize].event == BlockEvent::Failure)
        .count();
    let q_fail = table
        .row(BlockEvent::Failure)
        .map(|r| r.q_sign)
        .unwrap_or(0.0);
    let qs: Vec<f64> = rows.iter().map(|&i| table.rows[i as usize].q_lett).collect();
    Ok((
        lattice_sign_error_prob(failed, q_fail),
        lattice_letter_error_prob(&qs)?,
    ))
}

/// Samples the heralded error profile of one lattice-level fusion.
///
/// Builds a [`FusionSampler`] on every call; use the sampler directly in
/// hot loops.
pub fn sample_lattice_fusion<R: Rng + ?Sized>(
    params: EncodingParams,
    det: DetectorModel,
    loss: LossParams,
    rng: &mut R,
) -> Result<FusionErrorProfile> {
    Ok(FusionSampler::encoded(params, det, loss)?.sample(rng))
}

/// Samples one fusion of the unencoded scheme: success, heralded failure
/// (sign lost) or detected loss (both lost).
pub fn sample_unencoded_fusion<R: Rng + ?Sized>(
    p_fail: f64,
    loss: LossParams,
    rng: &mut R,
) -> Result<FusionErrorProfile> {
    Ok(FusionSampler::unencoded(p_fail, loss)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn encoding_params_validation() {
        assert!(EncodingParams::new(1, 1, 0).is_ok());
        assert!(EncodingParams::new(0, 2, 0).is_err());
        assert!(EncodingParams::new(2, 0, 0).is_err());
        assert!(EncodingParams::new(2, 2, 2).is_err());
        assert!(LossParams::new(1.5).is_err());
        assert!(LossParams::new(-0.1).is_err());
        assert!(LossParams::new(f64::NAN).is_err());
    }

    #[test]
    fn onoff_lossless_first_row() {
        let t = block_event_table(
            EncodingParams::new(1, 3, 1).unwrap(),
            DetectorModel::OnOff,
            LossParams::new(0.0).unwrap(),
        );
        let s0 = t.row(BlockEvent::SuccessAfter(0)).unwrap();
        assert!(close(s0.probability, 0.5));
        assert!(close(s0.q_lett, 0.0));
    }

    #[test]
    fn onoff_lossless_failure_row() {
        for m in 1..=5 {
            for j in 0..m {
                let t = block_event_table(
                    EncodingParams::new(1, m, j).unwrap(),
                    DetectorModel::OnOff,
                    LossParams::new(0.0).unwrap(),
                );
                let f = t.row(BlockEvent::Failure).unwrap();
                assert!(close(f.q_sign, 0.0));
                assert!(close(f.probability, 0.5f64.powi(j as i32 + 1)));
                assert!(close(t.total_probability(), 1.0));
            }
        }
    }

    #[test]
    fn lattice_events_single_block() {
        for j in 0..3 {
            let params = EncodingParams::new(1, 3, j).unwrap();
            let loss = LossParams::new(0.0).unwrap();
            let t = block_event_table(params, DetectorModel::PnrdTwo, loss);
            let p = lattice_event_probs(params, DetectorModel::PnrdTwo, loss).unwrap();
            let p_f = t.row(BlockEvent::Failure).unwrap().probability;
            let p_sd = t.row(BlockEvent::SignOnly).unwrap().probability;
            assert!(close(p.sign_only, p_sd));
            assert!(close(p.failure, p_f));
            assert!(close(p.success, 1.0 - p_f - p_sd));
            assert!(close(p.letter_only, 0.0));
        }
    }

    #[test]
    fn lattice_events_two_by_two() {
        let params = EncodingParams::new(2, 2, 1).unwrap();
        let loss = LossParams::new(0.0).unwrap();
        let t = block_event_table(params, DetectorModel::PnrdTwo, loss);
        assert!(close(t.row(BlockEvent::Success).unwrap().probability, 0.75));
        assert!(close(t.row(BlockEvent::Failure).unwrap().probability, 0.0));
        assert!(close(t.row(BlockEvent::SignOnly).unwrap().probability, 0.25));
        let p = lattice_event_probs(params, DetectorModel::PnrdTwo, loss).unwrap();
        assert!(close(p.success, 15.0 / 16.0));
    }

    #[test]
    fn lattice_events_reject_onoff() {
        let params = EncodingParams::new(2, 2, 1).unwrap();
        let loss = LossParams::new(0.1).unwrap();
        assert!(matches!(
            lattice_event_probs(params, DetectorModel::OnOff, loss),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn lattice_events_partition() {
        for n in 1..=5 {
            for m in 1..=5 {
                for j in 0..m {
                    for &eta in &[0.0, 0.01, 0.05, 0.2, 0.5, 1.0] {
                        let params = EncodingParams::new(n, m, j).unwrap();
                        let p = lattice_event_probs(
                            params,
                            DetectorModel::PnrdTwo,
                            LossParams::new(eta).unwrap(),
                        )
                        .unwrap();
                        let sum = p.success + p.letter_only + p.sign_only + p.failure;
                        assert!(close(sum, 1.0), "{n} {m} {j} {eta}: {sum}");
                        for (prob, _, _) in p.events() {
                            assert!((0.0..=1.0).contains(&prob));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn sign_error_prob() {
        assert_eq!(lattice_sign_error_prob(0, 0.3), 0.0);
        assert!(close(lattice_sign_error_prob(1, 0.5), 0.5));
        assert!(close(lattice_sign_error_prob(4, 0.5), 0.5));
        assert!(close(lattice_sign_error_prob(2, 0.1), 2.0 * 0.1 * 0.9));
    }

    #[test]
    fn letter_error_prob_edge_cases() {
        assert!(close(lattice_letter_error_prob(&[0.2]).unwrap(), 0.2));
        assert!(close(lattice_letter_error_prob(&[0.5; 4]).unwrap(), 0.5));
        assert_eq!(lattice_letter_error_prob(&[0.5, 0.0, 0.3]).unwrap(), 0.0);
        assert!(matches!(lattice_letter_error_prob(&[]), Err(Error::Usage(_))));
        assert!(matches!(
            lattice_letter_error_prob(&[0.1; 13]),
            Err(Error::TooManyBlocks(13, 12))
        ));
    }

    #[test]
    fn letter_error_prob_three_voters_direct_sum() {
        // Direct enumeration: the vote is wrong when the likelihood of the
        // flipped letter beats the true one.
        let qs = [0.1, 0.2, 0.4];
        let mut expected = 0.0;
        for pattern in 0..8u32 {
            let mut p = 1.0;
            let mut like_true = 1.0;
            let mut like_flip = 1.0;
            for (i, &q) in qs.iter().enumerate() {
                let wrong = pattern >> i & 1 == 1;
                p *= if wrong { q } else { 1.0 - q };
                like_true *= if wrong { q } else { 1.0 - q };
                like_flip *= if wrong { 1.0 - q } else { q };
            }
            if like_flip > like_true {
                expected += p;
            } else if like_flip == like_true {
                expected += p / 2.0;
            }
        }
        let got = lattice_letter_error_prob(&qs).unwrap();
        assert!(close(got, expected), "{got} vs {expected}");
        // 0.1 outvotes the other two together: error iff block 1 errs.
        assert!(close(got, 0.1));
    }

    #[test]
    fn unencoded_sampling_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let loss = LossParams::new(0.0).unwrap();
        for _ in 0..1000 {
            let p = sample_unencoded_fusion(0.0, loss, &mut rng).unwrap();
            assert_eq!(p, FusionErrorProfile::IDEAL);
            let p = sample_unencoded_fusion(1.0, loss, &mut rng).unwrap();
            assert_eq!((p.q_sign, p.q_lett), (0.5, 0.0));
            assert!(!p.lett_error);
        }
    }

    #[test]
    fn onoff_all_failed_blocks_lose_letter() {
        let params = EncodingParams::new(3, 2, 1).unwrap();
        let table = block_event_table(params, DetectorModel::OnOff, LossParams::new(0.1).unwrap());
        let f = table
            .rows
            .iter()
            .position(|r| r.event == BlockEvent::Failure)
            .unwrap() as u8;
        let (q_sign, q_lett) = combine_block_events(&table, &[f, f, f]).unwrap();
        assert!(close(q_lett, 0.5));
        assert!(close(q_sign, lattice_sign_error_prob(3, table.rows[f as usize].q_sign)));
    }

    #[test]
    fn pnrd_lossless_success_is_ideal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let params = EncodingParams::new(2, 2, 1).unwrap();
        let sampler =
            FusionSampler::encoded(params, DetectorModel::PnrdTwo, LossParams::new(0.0).unwrap())
                .unwrap();
        for _ in 0..1000 {
            let p = sampler.sample(&mut rng);
            if p.q_sign == 0.0 && p.q_lett == 0.0 {
                assert!(!p.sign_error && !p.lett_error);
            }
            assert!(p.q_sign <= 0.5 && p.q_lett <= 0.5);
        }
    }
}
