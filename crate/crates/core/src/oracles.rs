//! Brute-force cross-checks shared by the `selftest` command and the test
//! suite.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bsm_model::{DetectorModel, EncodingParams, LossParams};
use crate::bsm_oracle::max_model_mismatch;
use crate::decoder::{brute_force_weight, decode, MatchingProblem};
use crate::error::Result;
use crate::graph_states::PhysGraph;
use crate::lattice::RhgLattice;
use crate::stabilizer::{Pauli, Tableau};

pub const BSM_GRID_ETAS: [f64; 3] = [0.0, 0.05, 0.2];

/// Largest gap between the closed-form BSM tables and exhaustive
/// enumeration over `n, m <= 3`, `j < m` and both detector models.
pub fn bsm_grid_mismatch() -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 1..=3 {
        for m in 1..=3 {
            for j in 0..m {
                let params = EncodingParams::new(n, m, j)?;
                for &eta in &BSM_GRID_ETAS {
                    for det in [DetectorModel::PnrdTwo, DetectorModel::OnOff] {
                        worst = worst.max(max_model_mismatch(params, det, LossParams::new(eta)?));
                    }
                }
            }
        }
    }
    Ok(worst)
}

/// Whether `a` and `b` satisfy the marginal lemma's hypotheses: closed
/// neighbourhoods disjoint and both open neighbourhoods non-empty.
pub fn lemma_applies(g: &PhysGraph, a: usize, b: usize) -> bool {
    let (na, nb) = (g.neighbors(a), g.neighbors(b));
    !na.is_empty() && !nb.is_empty() && a != b && !na.contains(&b) && !nb.contains(&a) && na.is_disjoint(nb)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub graphs: usize,
    pub pairs: usize,
    pub violations: usize,
}

pub fn marginal_lemma(graphs: usize, max_vertices: usize, seed: u64) -> Result<LemmaReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = LemmaReport {
        graphs,
        pairs: 0,
        violations: 0,
    };
    for _ in 0..graphs {
        let n = rng.gen_range(4..=max_vertices);
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|_| rng.gen_bool(0.35))
            .collect();
        let g = PhysGraph::from_edges(n, &edges)?;
        let t = Tableau::from_graph(&g)?;
        for a in 0..n {
            for b in a + 1..n {
                if lemma_applies(&g, a, b) {
                    report.pairs += 1;
                    if !t.marginal_is_maximally_mixed(a, b) {
                        report.violations += 1;
                    }
                }
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FailedFusionReport {
    pub shots: usize,
    /// Fraction of +1 outcomes for the sign stabilizer when the unheralded
    /// sign bit is guessed at random.
    pub guessed_sign_plus: f64,
    /// Shots where the sign stabilizer equalled the hidden sign outcome.
    pub sign_tracks_hidden_outcome: usize,
    /// Shots where both letter-corrected stabilizers gave +1.
    pub letter_deterministic: usize,
}

/// Fuses qubit 0 of the path `1-0` with the centre `0'` of `1'-0'-2'`
/// (Hadamard on 0, then a Bell measurement), then checks the merged
/// state's stabilizers against the measured or guessed outcome signs.
pub fn failed_fusion_equivalence(shots: usize, seed: u64) -> FailedFusionReport {
    // Qubits: 0 = 1, 1 = 0, 2 = 0', 3 = 1', 4 = 2'.
    let base = Tableau::graph_state(5, &[(0, 1), (2, 3), (2, 4)]).expect("five qubits");
    let sign_op = Pauli::new(1 << 2, 1 << 1, false);
    let lett_op = Pauli::new(1 << 1, 1 << 2, false);
    let sign_stab = Pauli::new(1 << 0, (1 << 3) | (1 << 4), false);
    let lett_stabs = [Pauli::new(1 << 3, 1 << 0, false), Pauli::new(1 << 4, 1 << 0, false)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut plus, mut tracks, mut letter) = (0usize, 0usize, 0usize);
    for _ in 0..shots {
        let mut t = base.clone();
        let m_lett = t.measure_pauli(&lett_op, &mut rng);
        let m_sign = t.measure_pauli(&sign_op, &mut rng);
        let guess: i8 = *[-1i8, 1].choose(&mut rng).expect("non-empty");
        let mut op = sign_stab;
        if guess < 0 {
            op = op.negate();
        }
        let observed = t.measure_pauli(&op, &mut rng);
        plus += (observed == 1) as usize;
        tracks += (observed * guess == m_sign) as usize;
        let ok = lett_stabs.iter().all(|s| {
            let op = if m_lett < 0 { s.negate() } else { *s };
            t.measure_pauli(&op, &mut rng) == 1
        });
        letter += ok as usize;
    }
    FailedFusionReport {
        shots,
        guessed_sign_plus: plus as f64 / shots as f64,
        sign_tracks_hidden_outcome: tracks,
        letter_deterministic: letter,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecoderReport {
    pub instances: usize,
    pub mismatches: usize,
    pub max_gap: f64,
}

/// Blossom decoding against exhaustive pairing on a 2x2x2-cell lattice with
/// random weights and up to `max_defects` defects.
pub fn decoder_optimality(instances: usize, max_defects: usize, seed: u64) -> Result<DecoderReport> {
    let lattice = RhgLattice::with_cells(2, 2, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = DecoderReport {
        instances,
        mismatches: 0,
        max_gap: 0.0,
    };
    for _ in 0..instances {
        let weights = lattice
            .qubits()
            .iter()
            .map(|q| (q.primal && !q.t_boundary).then(|| rng.gen_range(0.0..5.0)))
            .collect();
        let mut cells: Vec<usize> = (0..lattice.num_cells()).collect();
        cells.shuffle(&mut rng);
        cells.truncate(rng.gen_range(1..=max_defects.min(cells.len())));
        cells.sort_unstable();
        let p = MatchingProblem::new(&lattice, cells, weights);
        let got = decode(&p)?.weight;
        let best = brute_force_weight(&p).unwrap_or(f64::INFINITY);
        let gap = (got - best).abs();
        report.max_gap = report.max_gap.max(gap);
        if gap > 1e-6 {
            report.mismatches += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma_hypotheses() {
        let pair = PhysGraph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(!lemma_applies(&pair, 0, 1));
        assert!(!Tableau::from_graph(&pair).unwrap().marginal_is_maximally_mixed(0, 1));
        // The two fusion qubits before fusing.
        let fig = PhysGraph::from_edges(5, &[(0, 1), (2, 3), (2, 4)]).unwrap();
        assert!(lemma_applies(&fig, 1, 2));
        assert!(Tableau::from_graph(&fig).unwrap().marginal_is_maximally_mixed(1, 2));
    }

    #[test]
    fn failed_fusion_small_run() {
        let r = failed_fusion_equivalence(400, 1);
        assert_eq!(r.sign_tracks_hidden_outcome, 400);
        assert_eq!(r.letter_deterministic, 400);
        assert!((r.guessed_sign_plus - 0.5).abs() < 0.1);
    }
}
