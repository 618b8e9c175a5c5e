//! Monte-Carlo logical error rate of the unencoded scheme at two distances.
//! Pass a loss rate as the first argument (default 0.01).
use rhg_fusion::campaign::{estimate_logical_error, StoppingRule};
use rhg_fusion::lattice::ModelConfig;

fn main() -> rhg_fusion::Result<()> {
    let eta: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.01);
    let rule = StoppingRule {
        max_trials: 50_000,
        ..StoppingRule::default()
    };
    for d in [3, 5] {
        let est = estimate_logical_error(&ModelConfig::unencoded(d, eta, 0.05, true), &rule, 42)?;
        println!(
            "d = {d}: p_L = {:.5} +- {:.5} ({} errors / {} trials{})",
            est.p_l,
            est.delta,
            est.errors,
            est.trials,
            if est.converged { "" } else { ", capped" }
        );
    }
    Ok(())
}
