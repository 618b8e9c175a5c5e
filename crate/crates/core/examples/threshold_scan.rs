//! Locates the loss threshold of the (2, 2, 1) encoding from the point where
//! distance 5 stops beating distance 3.
use rhg_fusion::bsm_model::{DetectorModel, EncodingParams};
use rhg_fusion::campaign::{find_threshold, StoppingRule};
use rhg_fusion::lattice::ModelConfig;

fn main() -> rhg_fusion::Result<()> {
    let cfg = ModelConfig::encoded(EncodingParams::new(2, 2, 1)?, DetectorModel::PnrdTwo, true, true, 3, 0.0);
    let grid = [0.0025, 0.005, 0.01, 0.015, 0.02, 0.03];
    let r = find_threshold(&cfg, 3, 5, &grid, &StoppingRule::default(), 7)?;
    println!("{:>8} {:>18} {:>18}", "eta", "p_L(d=3)", "p_L(d=5)");
    for (eta, (s, l)) in grid.iter().zip(r.small.iter().zip(&r.large)) {
        println!("{eta:>8} {:>9.4} +-{:<7.4} {:>9.4} +-{:<7.4}", s.p_l, s.delta, l.p_l, l.delta);
    }
    println!("largest separated loss rate: {}", r.eta_th);
    Ok(())
}
