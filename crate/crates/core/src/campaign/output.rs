use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{IntervalMethod, RateEstimate};
use crate::error::Result;
use crate::lattice::ModelConfig;

pub const BUILD_ID: &str = env!("RHG_FUSION_BUILD_ID");

/// Column order of the rate CSV.
pub const CSV_HEADER: &str = "build_id,encoding,pssl,hic,pnrd,n,m,j,d,eta,p_fail,seed,interval,trials,errors,decode_failures,p_l,delta_p_l,converged,zero_failure";

/// One estimated point with the full configuration echoed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub build_id: String,
    pub encoding: bool,
    pub pssl: bool,
    pub hic: bool,
    pub pnrd: bool,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub j: Option<usize>,
    pub d: usize,
    pub eta: f64,
    pub p_fail: f64,
    pub seed: u64,
    pub interval: IntervalMethod,
    #[serde(flatten)]
    pub estimate: RateEstimate,
}

impl RateRow {
    pub fn new(cfg: &ModelConfig, seed: u64, interval: IntervalMethod, estimate: RateEstimate) -> Self {
        let p = cfg.enc_params.filter(|_| cfg.encoding);
        Self {
            build_id: BUILD_ID.to_string(),
            encoding: cfg.encoding,
            pssl: cfg.pssl,
            hic: cfg.hic,
            pnrd: cfg.pnrd,
            n: p.map(|p| p.n()),
            m: p.map(|p| p.m()),
            j: p.map(|p| p.j()),
            d: cfg.d,
            eta: cfg.eta,
            p_fail: cfg.p_fail,
            seed,
            interval,
            estimate,
        }
    }

    pub fn csv_line(&self) -> String {
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        let e = &self.estimate;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.build_id,
            self.encoding,
            self.pssl,
            self.hic,
            self.pnrd,
            opt(self.n),
            opt(self.m),
            opt(self.j),
            self.d,
            self.eta,
            self.p_fail,
            self.seed,
            match self.interval {
                IntervalMethod::Normal => "normal",
                IntervalMethod::Wilson => "wilson",
            },
            e.trials,
            e.errors,
            e.decode_failures,
            e.p_l,
            e.delta,
            e.converged,
            e.zero_failure
        )
    }
}

pub fn write_csv<W: Write>(mut w: W, rows: &[RateRow]) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", r.csv_line())?;
    }
    Ok(())
}

pub fn write_jsonl<W: Write>(mut w: W, rows: &[RateRow]) -> Result<()> {
    for r in rows {
        let line = serde_json::to_string(r).map_err(|e| crate::Error::Io(e.to_string()))?;
        writeln!(w, "{line}")?;
    }
    Ok(())
}
