//! Loss thresholds predicted by bond percolation on the diamond sublattice,
//! for growing fusion failure rates.
use rhg_fusion::theory::{max_tolerable_p_fail, p_intact, solve_threshold, P_PERCOLATION};

fn main() -> rhg_fusion::Result<()> {
    println!("percolation point {P_PERCOLATION}");
    println!("{:>8} {:>14} {:>14}", "p_fail", "eta_th (PS)", "eta_th (no PS)");
    for i in 0..=14 {
        let p = i as f64 * 0.01;
        let show = |pssl| solve_threshold(p, pssl).map(|e| format!("{e:.5}")).unwrap_or_else(|_| "-".into());
        println!("{p:>8.2} {:>14} {:>14}", show(true), show(false));
    }
    println!("largest tolerable p_fail without loss: {:.4} (PS), {:.4} (no PS)", max_tolerable_p_fail(0.0, true)?, max_tolerable_p_fail(0.0, false)?);
    println!("intact probability at eta = 0.01, p_fail = 0.05 with PS: {:.4}", p_intact(0.01, 0.05, true)?);
    Ok(())
}
