//! Builds the photonic graph of an encoded microcluster and splits it into
//! components that can be grown from 3-GHZ states.
use rhg_fusion::bsm_model::EncodingParams;
use rhg_fusion::graph_states::{decompose_components, microcluster_graph, HConfig, MicroclusterKind};

fn main() -> rhg_fusion::Result<()> {
    let params = EncodingParams::new(2, 2, 1)?;
    for kind in [MicroclusterKind::Central, MicroclusterKind::Side] {
        for config in [HConfig::Hic, HConfig::His] {
            let g = microcluster_graph(kind, config, params);
            let set = decompose_components(&g);
            println!(
                "{kind:?}/{config:?}: {} photons, {} edges -> {} components, {} fusions between them",
                g.vertex_count(),
                g.edge_count(),
                set.components.len(),
                set.inter_component_fusions.len()
            );
            assert!(set.remerge().isomorphic_to(&g));
        }
    }
    let g = microcluster_graph(MicroclusterKind::Side, HConfig::Hic, params);
    println!("\nside HIC adjacency:\n{}", g.to_adjacency_text());
    Ok(())
}
