//! Brute-force reference for the BSM error model.
//!
//! Every block-level outcome is enumerated from the physical BSM rules, its
//! likelihood under each block Bell state is averaged over the decomposition
//! terms of that state, and sign/letter error rates follow from the
//! posterior. Lattice-level statistics are then built from the per-block
//! joint distribution of (event, sign error, letter error). Nothing here
//! calls into the closed forms of [`crate::bsm_model`].

use std::collections::BTreeMap;

use crate::bsm_model::{BlockEvent, BlockEventRow, BlockEventTable, DetectorModel, EncodingParams, LossParams};

const TIE_TOL: f64 = 1e-12;

// Outcome codes of one physical BSM, stored in the outcome key.
const FAIL: u8 = 0;
const LOSS: u8 = 1;
const SUCC_PHI: u8 = 2;
const SUCC_PSI: u8 = 3;
const SIGN_MARK: u8 = 10;

/// A block Bell state: `letter` 0 for phi, 1 for psi; `sign` 0 for +, 1 for -.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bell {
    pub letter: u8,
    pub sign: u8,
}

impl Bell {
    pub const ALL: [Bell; 4] = [
        Bell { letter: 0, sign: 0 },
        Bell { letter: 0, sign: 1 },
        Bell { letter: 1, sign: 0 },
        Bell { letter: 1, sign: 1 },
    ];

    fn index(self) -> usize {
        (self.letter * 2 + self.sign) as usize
    }
}

/// One block-level outcome with its likelihood under each block Bell state.
#[derive(Debug, Clone)]
pub struct BlockOutcome {
    pub key: Vec<u8>,
    pub likelihood: [f64; 4],
    pub event: BlockEvent,
    /// Bell states of maximal posterior; the result is drawn uniformly.
    pub results: Vec<Bell>,
    pub q_sign: f64,
    pub q_lett: f64,
}

struct Walker {
    det: DetectorModel,
    x: f64,
    m: usize,
    j: usize,
}

impl Walker {
    fn physical_loss_code(&self) -> u8 {
        match self.det {
            DetectorModel::PnrdTwo => LOSS,
            DetectorModel::OnOff => FAIL,
        }
    }

    /// Letter-revealing stage on pair `i` after `fails` consecutive failures.
    fn psi_stage(
        &self,
        letters: &[u8],
        sign: u8,
        i: usize,
        fails: usize,
        key: &mut Vec<u8>,
        prob: f64,
        out: &mut BTreeMap<Vec<u8>, f64>,
    ) {
        if fails == self.j {
            self.random_sign(letters, sign, i, key, prob, out);
            return;
        }
        let lost = self.physical_loss_code();
        // Photon pair survived.
        if letters[i] == 1 {
            key.push(SUCC_PSI);
            key.push(SIGN_MARK + sign);
            self.sign_stage(letters, sign, sign, i + 1, key, prob * self.x, out);
            key.pop();
            key.pop();
        } else {
            key.push(FAIL);
            self.psi_stage(letters, sign, i + 1, fails + 1, key, prob * self.x, out);
            key.pop();
        }
        // Photon lost.
        if self.x < 1.0 {
            key.push(lost);
            if lost == LOSS {
                self.random_sign(letters, sign, i + 1, key, prob * (1.0 - self.x), out);
            } else {
                self.psi_stage(letters, sign, i + 1, fails + 1, key, prob * (1.0 - self.x), out);
            }
            key.pop();
        }
    }

    fn random_sign(
        &self,
        letters: &[u8],
        sign: u8,
        i: usize,
        key: &mut Vec<u8>,
        prob: f64,
        out: &mut BTreeMap<Vec<u8>, f64>,
    ) {
        for s in 0..2 {
            key.push(SIGN_MARK + s);
            self.sign_stage(letters, sign, s, i, key, prob / 2.0, out);
            key.pop();
        }
    }

    /// `B_s` on the remaining pairs.
    #[allow(clippy::too_many_arguments)]
    fn sign_stage(
        &self,
        letters: &[u8],
        sign: u8,
        s: u8,
        i: usize,
        key: &mut Vec<u8>,
        prob: f64,
        out: &mut BTreeMap<Vec<u8>, f64>,
    ) {
        if prob == 0.0 {
            return;
        }
        if i == self.m {
            *out.entry(key.clone()).or_insert(0.0) += prob;
            return;
        }
        let survived = if sign == s {
            SUCC_PHI + letters[i]
        } else {
            FAIL
        };
        key.push(survived);
        self.sign_stage(letters, sign, s, i + 1, key, prob * self.x, out);
        key.pop();
        if self.x < 1.0 {
            key.push(self.physical_loss_code());
            self.sign_stage(letters, sign, s, i + 1, key, prob * (1.0 - self.x), out);
            key.pop();
        }
    }
}

/// Decomposition terms of a block Bell state: physical letter patterns with
/// the parity of `letter`; every physical sign equals the block sign.
fn decomposition_terms(m: usize, letter: u8) -> Vec<Vec<u8>> {
    (0u32..1 << m)
        .filter(|p| (p.count_ones() % 2) as u8 == letter)
        .map(|p| (0..m).map(|i| (p >> i & 1) as u8).collect())
        .collect()
}

fn classify(key: &[u8], det: DetectorModel, m: usize, j: usize) -> BlockEvent {
    let split = key.iter().position(|&c| c >= SIGN_MARK).expect("sign marker");
    let psi_part = &key[..split];
    let sign_part = &key[split + 1..];
    let psi_success = psi_part.last() == Some(&SUCC_PSI);
    match det {
        DetectorModel::OnOff => {
            let r = psi_part.iter().filter(|&&c| c == FAIL).count();
            let n_fail = sign_part.iter().filter(|&&c| c == FAIL).count();
            if n_fail == 0 {
                BlockEvent::SuccessAfter(r)
            } else if r == j && !psi_success && n_fail == m - j {
                BlockEvent::Failure
            } else {
                BlockEvent::SignOnly
            }
        }
        DetectorModel::PnrdTwo => {
            let any_loss = key.contains(&LOSS);
            let all_sign_succeed = sign_part.iter().all(|&c| c == SUCC_PHI || c == SUCC_PSI);
            let all_sign_lost = sign_part.iter().all(|&c| c == LOSS);
            if !any_loss && all_sign_succeed {
                BlockEvent::Success
            } else if !psi_success && all_sign_lost {
                BlockEvent::Failure
            } else {
                BlockEvent::SignOnly
            }
        }
    }
}

/// Enumerates every outcome of a block-level BSM.
pub fn enumerate_block_outcomes(
    params: EncodingParams,
    det: DetectorModel,
    loss: LossParams,
) -> Vec<BlockOutcome> {
    let walker = Walker {
        det,
        x: loss.x(),
        m: params.m(),
        j: params.j(),
    };
    let mut likelihoods: BTreeMap<Vec<u8>, [f64; 4]> = BTreeMap::new();
    for bell in Bell::ALL {
        let terms = decomposition_terms(params.m(), bell.letter);
        let weight = 1.0 / terms.len() as f64;
        for letters in &terms {
            let mut out = BTreeMap::new();
            walker.psi_stage(letters, bell.sign, 0, 0, &mut Vec::new(), weight, &mut out);
            for (key, p) in out {
                likelihoods.entry(key).or_insert([0.0; 4])[bell.index()] += p;
            }
        }
    }
    likelihoods
        .into_iter()
        .map(|(key, likelihood)| {
            let event = classify(&key, det, params.m(), params.j());
            let (results, q_sign, q_lett) = posterior_errors(&likelihood);
            BlockOutcome {
                key,
                likelihood,
                event,
                results,
                q_sign,
                q_lett,
            }
        })
        .collect()
}

fn posterior_errors(likelihood: &[f64; 4]) -> (Vec<Bell>, f64, f64) {
    let total: f64 = likelihood.iter().sum();
    let best = likelihood.iter().cloned().fold(f64::MIN, f64::max);
    let results: Vec<Bell> = Bell::ALL
        .into_iter()
        .filter(|b| likelihood[b.index()] >= best - TIE_TOL * best)
        .collect();
    let post = |b: Bell| likelihood[b.index()] / total;
    let mut q_sign = 0.0;
    let mut q_lett = 0.0;
    for &b in &results {
        let sign_flip = Bell { sign: 1 - b.sign, ..b };
        let lett_flip = Bell { letter: 1 - b.letter, ..b };
        let both = Bell {
            letter: 1 - b.letter,
            sign: 1 - b.sign,
        };
        q_sign += post(sign_flip) + post(both);
        q_lett += post(lett_flip) + post(both);
    }
    let k = results.len() as f64;
    (results, q_sign / k, q_lett / k)
}

/// Block event table aggregated from the enumeration, plus the largest
/// deviation of any single outcome's error rates from its event average.
pub fn block_table_by_enumeration(
    params: EncodingParams,
    det: DetectorModel,
    loss: LossParams,
) -> (BlockEventTable, f64) {
    let outcomes = enumerate_block_outcomes(params, det, loss);
    let mut agg: BTreeMap<BlockEvent, (f64, f64, f64)> = BTreeMap::new();
    for o in &outcomes {
        let p = o.likelihood.iter().sum::<f64>() / 4.0;
        let e = agg.entry(o.event).or_insert((0.0, 0.0, 0.0));
        e.0 += p;
        e.1 += p * o.q_sign;
        e.2 += p * o.q_lett;
    }
    let mut spread: f64 = 0.0;
    for o in &outcomes {
        let (p, s, l) = agg[&o.event];
        if o.likelihood.iter().sum::<f64>() > 0.0 {
            spread = spread.max((o.q_sign - s / p).abs()).max((o.q_lett - l / p).abs());
        }
    }
    let rows = agg
        .into_iter()
        .map(|(event, (p, s, l))| BlockEventRow {
            event,
            probability: p,
            q_sign: if p > 0.0 { s / p } else { 0.0 },
            q_lett: if p > 0.0 { l / p } else { 0.5 },
        })
        .collect();
    (BlockEventTable { detector: det, rows }, spread)
}

/// Lattice-level statistics of one ordered tuple of block events.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TupleStats {
    pub probability: f64,
    pub q_sign: f64,
    pub q_lett: f64,
}

/// Joint distribution of (event, sign error, letter error) of the block
/// result given the true block Bell state.
type BlockJoint = BTreeMap<(BlockEvent, u8, u8), f64>;

fn block_joint(outcomes: &[BlockOutcome], truth: Bell) -> BlockJoint {
    let mut joint = BlockJoint::new();
    for o in outcomes {
        let p = o.likelihood[truth.index()];
        if p == 0.0 {
            continue;
        }
        let share = p / o.results.len() as f64;
        for r in &o.results {
            let se = (r.sign != truth.sign) as u8;
            let le = (r.letter != truth.letter) as u8;
            *joint.entry((o.event, se, le)).or_insert(0.0) += share;
        }
    }
    joint
}

/// Enumerates the lattice-level BSM and returns statistics per ordered tuple
/// of block events.
///
/// The lattice sign is the parity of the block result signs; the lattice
/// letter is a vote of block result letters weighted by
/// `log((1 - q) / q)` with the per-event `q` found by enumeration (a block
/// with `q = 0` decides alone, exact ties are a fair coin).
pub fn lattice_by_enumeration(
    params: EncodingParams,
    det: DetectorModel,
    loss: LossParams,
) -> BTreeMap<Vec<BlockEvent>, TupleStats> {
    let n = params.n();
    let outcomes = enumerate_block_outcomes(params, det, loss);
    let (table, _) = block_table_by_enumeration(params, det, loss);
    let q_lett: BTreeMap<BlockEvent, f64> = table.rows.iter().map(|r| (r.event, r.q_lett)).collect();
    let joints: Vec<BlockJoint> = Bell::ALL.iter().map(|&b| block_joint(&outcomes, b)).collect();

    let mut acc: BTreeMap<Vec<BlockEvent>, (f64, f64, f64)> = BTreeMap::new();
    for lattice_letter in 0..2u8 {
        for lattice_sign in 0..2u8 {
            let terms: Vec<u32> = (0u32..1 << n)
                .filter(|p| (p.count_ones() % 2) as u8 == lattice_sign)
                .collect();
            let weight = 0.25 / terms.len() as f64;
            for pattern in terms {
                let blocks: Vec<Vec<(&(BlockEvent, u8, u8), f64)>> = (0..n)
                    .map(|k| {
                        let truth = Bell {
                            letter: lattice_letter,
                            sign: (pattern >> k & 1) as u8,
                        };
                        joints[truth.index()].iter().map(|(key, &p)| (key, p)).collect()
                    })
                    .collect();
                let mut idx = vec![0usize; n];
                loop {
                    let mut prob = weight;
                    let mut events = Vec::with_capacity(n);
                    let mut sign_err = 0u8;
                    let mut authoritative = None;
                    let mut vote = 0.0;
                    let mut scale = 0.0;
                    for k in 0..n {
                        let (&(event, se, le), p) = blocks[k][idx[k]];
                        prob *= p;
                        events.push(event);
                        sign_err ^= se;
                        let q = q_lett[&event];
                        if q == 0.0 {
                            authoritative.get_or_insert(le);
                        } else {
                            let w = ((1.0 - q) / q).ln();
                            vote += if le == 1 { w } else { -w };
                            scale += w;
                        }
                    }
                    let lett_err = match authoritative {
                        Some(le) => le as f64,
                        None if vote > TIE_TOL * scale.max(1.0) => 1.0,
                        None if vote < -TIE_TOL * scale.max(1.0) => 0.0,
                        None => 0.5,
                    };
                    let e = acc.entry(events).or_insert((0.0, 0.0, 0.0));
                    e.0 += prob;
                    e.1 += prob * sign_err as f64;
                    e.2 += prob * lett_err;

                    let mut k = 0;
                    loop {
                        if k == n {
                            break;
                        }
                        idx[k] += 1;
                        if idx[k] < blocks[k].len() {
                            break;
                        }
                        idx[k] = 0;
                        k += 1;
                    }
                    if k == n {
                        break;
                    }
                }
            }
        }
    }
    acc.into_iter()
        .map(|(events, (p, s, l))| {
            (
                events,
                TupleStats {
                    probability: p,
                    q_sign: if p > 0.0 { s / p } else { 0.0 },
                    q_lett: if p > 0.0 { l / p } else { 0.0 },
                },
            )
        })
        .collect()
}

/// Largest absolute mismatch between the closed-form model and the
/// enumeration for one parameter point (block table, and lattice events
/// for both detector models).
pub fn max_model_mismatch(params: EncodingParams, det: DetectorModel, loss: LossParams) -> f64 {
    use crate::bsm_model::{block_event_table, combine_block_events, lattice_event_probs};

    let analytic = block_event_table(params, det, loss);
    let (brute, spread) = block_table_by_enumeration(params, det, loss);
    let mut worst = spread;
    for row in &analytic.rows {
        match brute.row(row.event) {
            Some(b) => {
                worst = worst.max((row.probability - b.probability).abs());
                if b.probability > 0.0 {
                    worst = worst
                        .max((row.q_sign - b.q_sign).abs())
                        .max((row.q_lett - b.q_lett).abs());
                }
            }
            None => worst = worst.max(row.probability),
        }
    }
    for b in &brute.rows {
        if analytic.row(b.event).is_none() {
            worst = worst.max(b.probability);
        }
    }

    let tuples = lattice_by_enumeration(params, det, loss);
    match det {
        DetectorModel::PnrdTwo => {
            let closed = lattice_event_probs(params, det, loss).expect("pnrd");
            let mut agg = [(0.0, 0.0, 0.0); 4];
            for (events, st) in &tuples {
                let n_s = events.iter().filter(|e| **e == BlockEvent::Success).count();
                let n_f = events.iter().filter(|e| **e == BlockEvent::Failure).count();
                let slot = match (n_s >= 1, n_f >= 1) {
                    (true, false) => 0,
                    (true, true) => 1,
                    (false, false) => 2,
                    (false, true) => 3,
                };
                agg[slot].0 += st.probability;
                agg[slot].1 += st.probability * st.q_sign;
                agg[slot].2 += st.probability * st.q_lett;
            }
            for ((p, qs, ql), (cp, cqs, cql)) in agg.iter().zip(closed.events()) {
                worst = worst.max((p - cp).abs());
                if *p > 1e-9 {
                    worst = worst.max((qs / p - cqs).abs()).max((ql / p - cql).abs());
                }
            }
        }
        DetectorModel::OnOff => {
            for (events, st) in &tuples {
                let rows: Vec<u8> = events
                    .iter()
                    .map(|e| analytic.rows.iter().position(|r| r.event == *e).expect("event") as u8)
                    .collect();
                let expected: f64 = rows.iter().map(|&i| analytic.rows[i as usize].probability).product();
                worst = worst.max((st.probability - expected).abs());
                if st.probability > 1e-9 {
                    let (qs, ql) = combine_block_events(&analytic, &rows).expect("n within cap");
                    worst = worst.max((st.q_sign - qs).abs()).max((st.q_lett - ql).abs());
                }
            }
        }
    }
    worst
}
