//! End-to-end acceptance checks. Each test prints one PASS/FAIL line.
//! Run with `cargo test --test acceptance -- --nocapture` to see them.

use rhg_fusion::bsm_model::{block_event_table, BlockEvent, DetectorModel, EncodingParams, LossParams};
use rhg_fusion::campaign::{estimate_logical_error, find_threshold, write_csv, RateRow, StoppingRule};
use rhg_fusion::lattice::ModelConfig;
use rhg_fusion::resources::star_cluster_cost;
use rhg_fusion::{oracles, theory};

/// Fixed before any run; never tuned.
const SEED: u64 = 20261016;

fn report(id: u32, name: &str, pass: bool, detail: String) {
    println!("criterion {id} [{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
}

#[test]
fn c1_bsm_tables_match_enumeration() {
    let gap = oracles::bsm_grid_mismatch().unwrap();
    let pass = gap <= 1e-12;
    report(1, "bsm tables vs enumeration", pass, format!("max gap {gap:e}"));
    assert!(pass);
}

#[test]
fn c2_onoff_table_spot_values() {
    // eta = 0.1: x = 0.81, x / (2 - x) = 81/119.
    // q_lett(S_0) = 0, q_lett(S_1) = 1/2 - 81/238 = 19/119.
    // p_F = (1 - 0.405) * (1 + 0.19^2) / 2 = 0.595 * 1.0361 / 2.
    let table = block_event_table(EncodingParams::new(1, 3, 1).unwrap(), DetectorModel::OnOff, LossParams::new(0.1).unwrap());
    let got = [
        table.row(BlockEvent::SuccessAfter(0)).unwrap().q_lett,
        table.row(BlockEvent::SuccessAfter(1)).unwrap().q_lett,
        table.row(BlockEvent::Failure).unwrap().probability,
    ];
    let want = [0.0, 19.0 / 119.0, 0.30823975];
    let gap = got.iter().zip(want).map(|(g, w)| (g - w).abs()).fold(0.0, f64::max);
    let pass = gap <= 1e-12;
    report(2, "on-off table at m=3, j=1, eta=0.1", pass, format!("{got:?} vs {want:?}"));
    assert!(pass);
}

#[test]
fn c3_percolation_threshold() {
    let p_max = theory::max_tolerable_p_fail(0.0, true).unwrap();
    let eta_th = theory::solve_threshold(0.0, false).unwrap();
    let pass = (p_max - 0.1334).abs() <= 0.005 && (eta_th - 0.0135).abs() <= 5e-4;
    report(3, "percolation threshold", pass, format!("max p_fail {p_max:.4}, eta_th {eta_th:.5}"));
    assert!(pass);
}

#[test]
fn c4_unencoded_star_costs() {
    let plain = star_cluster_cost(&ModelConfig::unencoded(3, 0.0, 0.5, false), SEED).unwrap().star;
    let mut pass = plain == 3.0;
    let mut detail = format!("no post-selection {plain}");
    for eta in [0.0, 0.02, 0.1] {
        let x = (1.0 - eta) * (1.0 - eta);
        let want = 2.0 * (4.0 + x) / (x * x);
        let got = star_cluster_cost(&ModelConfig::unencoded(3, eta, 0.5, true), SEED).unwrap().star;
        pass &= (got - want).abs() <= 1e-12 * want;
        detail += &format!(", eta={eta}: {got} (want {want})");
    }
    pass &= star_cluster_cost(&ModelConfig::unencoded(3, 0.0, 0.5, true), SEED).unwrap().star == 10.0;
    report(4, "unencoded star costs", pass, detail);
    assert!(pass);
}

#[test]
fn c5_stabilizer_lemma_and_failed_fusion() {
    let lemma = oracles::marginal_lemma(200, 8, SEED).unwrap();
    let fusion = oracles::failed_fusion_equivalence(10_000, SEED);
    let sigma = (0.25 / fusion.shots as f64).sqrt();
    let pass = lemma.violations == 0
        && lemma.pairs > 0
        && (fusion.guessed_sign_plus - 0.5).abs() <= 3.0 * sigma
        && fusion.sign_tracks_hidden_outcome == fusion.shots
        && fusion.letter_deterministic == fusion.shots;
    report(
        5,
        "maximally mixed marginals and failed fusion",
        pass,
        format!(
            "{} pairs / {} violations; sign +1 fraction {:.4} (3 sigma = {:.4}); letter deterministic {}/{}",
            lemma.pairs, lemma.violations, fusion.guessed_sign_plus, 3.0 * sigma, fusion.letter_deterministic, fusion.shots
        ),
    );
    assert!(pass);
}

#[test]
fn c6_decoder_optimality() {
    let r = oracles::decoder_optimality(500, 8, SEED).unwrap();
    let pass = r.mismatches == 0;
    report(6, "decoder vs exhaustive pairing", pass, format!("{} instances, {} mismatches, max gap {:e}", r.instances, r.mismatches, r.max_gap));
    assert!(pass);
}

#[test]
fn c7_unencoded_distance_ordering() {
    let eta_theory = theory::solve_threshold(0.05, true).unwrap();
    let rule = StoppingRule::default();
    let rate = |d, eta| estimate_logical_error(&ModelConfig::unencoded(d, eta, 0.05, true), &rule, SEED).unwrap();
    let (lo3, lo5) = (rate(3, eta_theory / 2.0), rate(5, eta_theory / 2.0));
    let (hi3, hi5) = (rate(3, 3.0 * eta_theory), rate(5, 3.0 * eta_theory));
    let below = lo5.upper() < lo3.lower();
    let above = hi5.p_l > hi3.p_l;
    report(
        7,
        "distance ordering around the unencoded threshold",
        below && above,
        format!(
            "eta/2: d3 {:.4}+-{:.4}, d5 {:.4}+-{:.4} ({}); 3 eta: d3 {:.4}+-{:.4}, d5 {:.4}+-{:.4} ({})",
            lo3.p_l,
            lo3.delta,
            lo5.p_l,
            lo5.delta,
            if below { "separated" } else { "not separated" },
            hi3.p_l,
            hi3.delta,
            hi5.p_l,
            hi5.delta,
            if above { "d5 above" } else { "d5 not above" }
        ),
    );
    assert!(below, "below-threshold separation failed");
    assert!(above, "d5 not above d3 at three times the threshold");
}

#[test]
fn c8_encoded_crossing() {
    let cfg = ModelConfig::encoded(EncodingParams::new(2, 2, 1).unwrap(), DetectorModel::PnrdTwo, true, true, 3, 0.0);
    let grid = [0.0025, 0.005, 0.0075, 0.01, 0.015, 0.02, 0.03, 0.05];
    let r = find_threshold(&cfg, 3, 5, &grid, &StoppingRule::default(), SEED);
    let (pass, detail) = match &r {
        Ok(t) => {
            let crossed = grid
                .iter()
                .zip(t.small.iter().zip(&t.large))
                .any(|(&eta, (s, l))| eta > t.eta_th && l.lower() > s.upper());
            (t.eta_th > 0.0 && t.eta_th < 0.1 && crossed, format!("eta_th {} (d5 above d3 beyond it: {crossed})", t.eta_th))
        }
        Err(e) => (false, e.to_string()),
    };
    report(8, "encoded (2,2,1) crossing", pass, detail);
    assert!(pass);
}

#[test]
fn c9_rerun_is_byte_identical() {
    // The second point is deep in the erasure-dominated regime, where many
    // matchings tie.
    let cfgs = [ModelConfig::unencoded(3, 0.02, 0.05, true), ModelConfig::unencoded(5, 0.06, 0.05, true)];
    let rule = StoppingRule::default();
    let csv = || {
        let mut buf = Vec::new();
        let rows: Vec<RateRow> = cfgs
            .iter()
            .map(|cfg| RateRow::new(cfg, SEED, rule.interval, estimate_logical_error(cfg, &rule, SEED).unwrap()))
            .collect();
        write_csv(&mut buf, &rows).unwrap();
        buf
    };
    let (a, b) = (csv(), csv());
    let pass = a == b && !a.is_empty();
    report(9, "byte-identical rerun", pass, format!("{} bytes", a.len()));
    assert!(pass);
}
