use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rhg_fusion::decoder::*;
use rhg_fusion::lattice::*;

fn random_instance(l: &RhgLattice, rng: &mut ChaCha8Rng, max_defects: usize) -> MatchingProblem {
    let weights = l
        .qubits()
        .iter()
        .map(|q| (q.primal && !q.t_boundary).then(|| rng.gen_range(0.0..5.0)))
        .collect();
    let mut cells: Vec<usize> = (0..l.num_cells()).collect();
    cells.shuffle(rng);
    cells.truncate(rng.gen_range(1..=max_defects));
    cells.sort();
    MatchingProblem::new(l, cells, weights)
}

fn correction_syndrome(l: &RhgLattice, c: &Correction) -> Vec<usize> {
    l.syndrome_of(|q| c.qubits.binary_search(&q).is_ok()).violated_cells
}

#[test]
fn empty_syndrome_decodes_to_nothing() {
    let l = RhgLattice::for_distance(3);
    let p = MatchingProblem::new(&l, vec![], vec![Some(1.0); l.num_qubits()]);
    assert_eq!(decode(&p).unwrap(), Correction::default());
}

#[test]
fn adjacent_defects_join_through_shared_face() {
    let l = RhgLattice::for_distance(5);
    let face = l.qubit_at([3, 3, 10]).unwrap();
    let cells = l.qubit(face).cells.clone();
    let mut weights: Vec<Option<f64>> = l.qubits().iter().map(|q| q.primal.then_some(1.0)).collect();
    for (i, q) in l.qubits().iter().enumerate() {
        if q.t_boundary {
            weights[i] = None;
        }
    }
    let mut defects = cells.clone();
    defects.sort();
    let c = decode(&MatchingProblem::new(&l, defects, weights)).unwrap();
    assert_eq!(c.qubits, vec![face]);
    assert_eq!(c.weight, 1.0);
}

#[test]
fn matches_exhaustive_pairing_on_toy_lattice() {
    let l = RhgLattice::with_cells(2, 2, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let p = random_instance(&l, &mut rng, 8);
        let c = decode(&p).unwrap();
        let brute = brute_force_weight(&p).unwrap();
        assert!((c.weight - brute).abs() < 1e-6, "{} vs {}", c.weight, brute);
        assert_eq!(correction_syndrome(&l, &c), p.defects);
    }
}

#[test]
fn correction_clears_trial_syndromes() {
    let l = RhgLattice::for_distance(5);
    let cfg = ModelConfig::unencoded(5, 0.02, 0.05, false).validated().unwrap();
    let sampler = cfg.sampler().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let t = l.run_trial(&cfg, &sampler, &mut rng);
        let p = build_matching_problem(&l, &t.syndrome, &t.records);
        let c = decode(&p).unwrap();
        assert_eq!(correction_syndrome(&l, &c), t.syndrome.violated_cells);
        assert!(c.qubits.iter().all(|&q| t.records[q].q_err > 0.0));
    }
}

#[test]
fn erasure_only_trials_use_unit_weights() {
    let l = RhgLattice::for_distance(3);
    let mut records = vec![QubitRecord::default(); l.num_qubits()];
    let q = l.qubit_at([1, 1, 10]).unwrap();
    records[q].deposit(0.5, true);
    let s = l.syndrome_of(|i| records[i].error);
    let p = build_matching_problem(&l, &s, &records);
    assert_eq!(p.weights[q], Some(1.0));
    assert_eq!(p.weights.iter().flatten().count(), 1);

    let other = l.qubit_at([3, 1, 10]).unwrap();
    records[other].deposit(0.1, false);
    let p = build_matching_problem(&l, &s, &records);
    assert_eq!(p.weights[q], Some(0.0));
    assert!((p.weights[other].unwrap() - 9f64.ln()).abs() < 1e-12);
}

#[test]
fn lowering_a_weight_never_raises_the_total() {
    let l = RhgLattice::with_cells(2, 2, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..100 {
        let mut p = random_instance(&l, &mut rng, 6);
        let before = decode(&p).unwrap().weight;
        let candidates: Vec<usize> = (0..p.weights.len()).filter(|&i| p.weights[i].is_some()).collect();
        let q = *candidates.choose(&mut rng).unwrap();
        let w = p.weights[q].unwrap();
        p.weights[q] = Some(w * rng.gen::<f64>());
        let p = MatchingProblem::new(&l, p.defects.clone(), p.weights.clone());
        assert!(decode(&p).unwrap().weight <= before + 1e-9);
    }
}

#[test]
fn isolated_defect_is_a_decode_failure() {
    let l = RhgLattice::for_distance(3);
    let p = MatchingProblem::new(&l, vec![5], vec![None; l.num_qubits()]);
    assert!(matches!(decode(&p), Err(rhg_fusion::Error::DecodeFailure(_))));
}

#[test]
fn decoding_is_deterministic() {
    let l = RhgLattice::with_cells(2, 2, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let weights: Vec<Option<f64>> = l.qubits().iter().map(|q| q.primal.then_some(1.0)).collect();
    for _ in 0..20 {
        let mut cells: Vec<usize> = (0..l.num_cells()).collect();
        cells.shuffle(&mut rng);
        cells.truncate(4);
        cells.sort();
        let p = MatchingProblem::new(&l, cells, weights.clone());
        assert_eq!(decode(&p).unwrap(), decode(&p).unwrap());
    }
}
