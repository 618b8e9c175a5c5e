//! Expected number of 3-GHZ states per star cluster across encodings.
use rhg_fusion::bsm_model::{DetectorModel, EncodingParams};
use rhg_fusion::lattice::ModelConfig;
use rhg_fusion::resources::{resource_csv_line, star_cluster_cost, RESOURCE_CSV_HEADER};

fn main() -> rhg_fusion::Result<()> {
    println!("{RESOURCE_CSV_HEADER}");
    for pssl in [false, true] {
        let cfg = ModelConfig::unencoded(3, 0.01, 0.5, pssl);
        println!("{}", resource_csv_line(&cfg, &star_cluster_cost(&cfg, 1)?));
    }
    for (n, m, j) in [(1, 2, 1), (2, 2, 1), (2, 3, 1)] {
        for pssl in [false, true] {
            let cfg = ModelConfig::encoded(EncodingParams::new(n, m, j)?, DetectorModel::PnrdTwo, true, pssl, 3, 0.01);
            println!("{}", resource_csv_line(&cfg, &star_cluster_cost(&cfg, 1)?));
        }
    }
    Ok(())
}
