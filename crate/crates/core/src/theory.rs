//! Loss-threshold estimate for the unencoded scheme from bond percolation
//! on the cubic lattice.

use crate::error::{check_probability, Error, Result};

/// Bond percolation threshold of the simple cubic lattice.
pub const P_PERCOLATION: f64 = 0.249;

const BISECTION_TOL: f64 = 1e-10;

/// Probability that a lattice bond survives: every fusion and photon that
/// the bond depends on must succeed.
pub fn p_intact(eta: f64, p_fail: f64, pssl: bool) -> Result<f64> {
    check_probability("eta", eta)?;
    check_probability("p_fail", p_fail)?;
    let (fusions, photons) = if pssl { (2, 9) } else { (4, 21) };
    Ok((1.0 - p_fail).powi(fusions) * (1.0 - eta).powi(photons))
}

/// Largest loss rate at which bonds still percolate, found by bisection.
pub fn solve_threshold(p_fail: f64, pssl: bool) -> Result<f64> {
    let target = 1.0 - P_PERCOLATION;
    if p_intact(0.0, p_fail, pssl)? < target {
        return Err(Error::NoThreshold(format!(
            "p_fail = {p_fail} leaves fewer than {target} intact bonds even without loss"
        )));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if p_intact(mid, p_fail, pssl)? >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Largest fusion failure rate that percolates at the given loss rate.
pub fn max_tolerable_p_fail(eta: f64, pssl: bool) -> Result<f64> {
    let target = 1.0 - P_PERCOLATION;
    if p_intact(eta, 0.0, pssl)? < target {
        return Err(Error::NoThreshold(format!("eta = {eta} is above threshold even with ideal fusions")));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if p_intact(eta, mid, pssl)? >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intact_values() {
        assert_eq!(p_intact(0.0, 0.0, false).unwrap(), 1.0);
        assert!((p_intact(0.0, 0.1, true).unwrap() - 0.81).abs() < 1e-12);
        assert!((p_intact(0.01, 0.0, false).unwrap() - 0.99f64.powi(21)).abs() < 1e-12);
        assert!(p_intact(1.2, 0.0, false).is_err());
    }

    #[test]
    fn thresholds() {
        let eta = solve_threshold(0.0, false).unwrap();
        assert!((eta - (1.0 - 0.751f64.powf(1.0 / 21.0))).abs() < 1e-9);
        assert!((p_intact(eta, 0.0, false).unwrap() - 0.751).abs() < 1e-9);
        let pf = max_tolerable_p_fail(0.0, true).unwrap();
        assert!((pf - (1.0 - 0.751f64.sqrt())).abs() < 1e-9);
        assert!(matches!(solve_threshold(0.2, true), Err(Error::NoThreshold(_))));
    }
}
