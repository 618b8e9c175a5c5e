use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rhg_fusion::campaign::{self, CampaignConfig, RateRow};
use rhg_fusion::resources::{resource_csv_line, star_cluster_cost, RESOURCE_CSV_HEADER};
use rhg_fusion::{oracles, theory, Result};

#[derive(Parser)]
#[command(name = "rhg-fusion", version, about = "Loss-tolerance simulations of fusion-built RHG lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the logical error rate at one loss rate.
    Simulate(SimArgs),
    /// Locate the loss threshold from the crossing of two code distances.
    Threshold(ThresholdArgs),
    /// Expected 3-GHZ states per star cluster.
    Resources(SimArgs),
    /// Percolation estimate of the loss threshold without encoding.
    Theory(TheoryArgs),
    /// Run the brute-force oracle suites.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

#[derive(Args)]
struct SimArgs {
    /// key = value campaign file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    encoding: bool,
    #[arg(long)]
    pssl: bool,
    #[arg(long, conflicts_with = "his")]
    hic: bool,
    #[arg(long)]
    his: bool,
    #[arg(long, conflicts_with = "onoff")]
    pnrd: bool,
    #[arg(long)]
    onoff: bool,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    pfail: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_trials: Option<u64>,
    #[arg(long)]
    min_errors: Option<u64>,
    /// Confidence interval: normal or wilson.
    #[arg(long)]
    interval: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct ThresholdArgs {
    #[command(flatten)]
    sim: SimArgs,
    /// Two code distances, e.g. 3,5.
    #[arg(long)]
    d_pair: Option<String>,
    /// Ascending loss rates, e.g. 0.005,0.01,0.015.
    #[arg(long)]
    eta_grid: Option<String>,
}

#[derive(Args)]
struct TheoryArgs {
    #[arg(long)]
    pssl: bool,
    /// Comma-separated fusion failure rates.
    #[arg(long, default_value = "0")]
    pfail: String,
}

impl SimArgs {
    fn campaign(&self) -> Result<CampaignConfig> {
        let mut cfg = match &self.config {
            Some(path) => CampaignConfig::load(path)?,
            None => CampaignConfig::default(),
        };
        let flags = [
            ("encoding", self.encoding, "true"),
            ("pssl", self.pssl, "true"),
            ("hic", self.hic, "true"),
            ("hic", self.his, "false"),
            ("pnrd", self.pnrd, "true"),
            ("pnrd", self.onoff, "false"),
        ];
        for (key, on, value) in flags {
            if on {
                cfg.set(key, value)?;
            }
        }
        let values = [
            ("n", self.n.map(|v| v.to_string())),
            ("m", self.m.map(|v| v.to_string())),
            ("j", self.j.map(|v| v.to_string())),
            ("d", self.d.map(|v| v.to_string())),
            ("eta", self.eta.map(|v| v.to_string())),
            ("p_fail", self.pfail.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("max_trials", self.max_trials.map(|v| v.to_string())),
            ("min_errors", self.min_errors.map(|v| v.to_string())),
            ("interval", self.interval.clone()),
        ];
        for (key, value) in values {
            if let Some(v) = value {
                cfg.set(key, &v)?;
            }
        }
        if let Some(out) = &self.out {
            cfg.out = Some(out.clone());
        }
        Ok(cfg)
    }
}

fn output(cfg: &CampaignConfig) -> Result<Box<dyn Write>> {
    Ok(match &cfg.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit(cfg: &CampaignConfig, format: Format, rows: &[RateRow]) -> Result<()> {
    let mut w = output(cfg)?;
    match format {
        Format::Csv => campaign::write_csv(&mut w, rows)?,
        Format::Jsonl => campaign::write_jsonl(&mut w, rows)?,
    }
    w.flush()?;
    Ok(())
}

fn simulate(args: &SimArgs) -> Result<()> {
    let cfg = args.campaign()?;
    let model = cfg.model()?;
    let est = campaign::estimate_logical_error(&model, &cfg.rule(), cfg.seed)?;
    emit(&cfg, args.format, &[RateRow::new(&model, cfg.seed, cfg.interval, est)])
}

fn threshold(args: &ThresholdArgs) -> Result<()> {
    let mut cfg = args.sim.campaign()?;
    if let Some(p) = &args.d_pair {
        cfg.set("d_pair", p)?;
    }
    if let Some(g) = &args.eta_grid {
        cfg.set("eta_grid", g)?;
    }
    let model = cfg.model()?;
    let result = campaign::find_threshold(&model, cfg.d_small, cfg.d_large, &cfg.eta_grid, &cfg.rule(), cfg.seed);
    let (rows, summary) = match result {
        Ok(r) => {
            let mut rows = Vec::new();
            for (d, ests) in [(cfg.d_small, &r.small), (cfg.d_large, &r.large)] {
                for (i, (&eta, est)) in cfg.eta_grid.iter().zip(ests.iter()).enumerate() {
                    let m = model.with_distance(d).with_eta(eta);
                    rows.push(RateRow::new(&m, campaign::point_seed(cfg.seed, d, i), cfg.interval, *est));
                }
            }
            (rows, format!("eta_th = {} (d = {}, {})", r.eta_th, r.d_pair.0, r.d_pair.1))
        }
        Err(e) => (Vec::new(), e.to_string()),
    };
    emit(&cfg, args.sim.format, &rows)?;
    eprintln!("{summary}");
    Ok(())
}

fn resources(args: &SimArgs) -> Result<()> {
    let cfg = args.campaign()?;
    let model = cfg.model()?;
    let cost = star_cluster_cost(&model, cfg.seed)?;
    let mut w = output(&cfg)?;
    writeln!(w, "{RESOURCE_CSV_HEADER}")?;
    writeln!(w, "{}", resource_csv_line(&model, &cost))?;
    w.flush()?;
    Ok(())
}

fn theory_cmd(args: &TheoryArgs) -> Result<()> {
    println!("p_fail,pssl,eta_th");
    for p in args.pfail.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let p_fail: f64 = p.parse().map_err(|_| rhg_fusion::Error::Usage(format!("bad p_fail '{p}'")))?;
        match theory::solve_threshold(p_fail, args.pssl) {
            Ok(eta) => println!("{p_fail},{},{eta}", args.pssl),
            Err(_) => println!("{p_fail},{},", args.pssl),
        }
    }
    Ok(())
}

fn selftest() -> Result<bool> {
    let mut ok = true;
    let mut report = |name: &str, pass: bool, detail: String| {
        ok &= pass;
        println!("[{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    };
    let bsm = oracles::bsm_grid_mismatch()?;
    report("bsm tables vs enumeration", bsm <= 1e-12, format!("max gap {bsm:e}"));
    let lemma = oracles::marginal_lemma(200, 8, 1)?;
    report(
        "maximally mixed marginals",
        lemma.violations == 0,
        format!("{} pairs, {} violations", lemma.pairs, lemma.violations),
    );
    let fusion = oracles::failed_fusion_equivalence(10_000, 2);
    let sigma = (0.25f64 / fusion.shots as f64).sqrt();
    report(
        "failed fusion equivalence",
        (fusion.guessed_sign_plus - 0.5).abs() <= 3.0 * sigma && fusion.letter_deterministic == fusion.shots,
        format!("sign +1 fraction {:.4}, letter deterministic {}/{}", fusion.guessed_sign_plus, fusion.letter_deterministic, fusion.shots),
    );
    let dec = oracles::decoder_optimality(500, 8, 3)?;
    report(
        "decoder vs exhaustive pairing",
        dec.mismatches == 0,
        format!("{} instances, max gap {:e}", dec.instances, dec.max_gap),
    );
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(a) => simulate(a).map(|_| true),
        Command::Threshold(a) => threshold(a).map(|_| true),
        Command::Resources(a) => resources(a).map(|_| true),
        Command::Theory(a) => theory_cmd(a).map(|_| true),
        Command::Selftest => selftest(),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
