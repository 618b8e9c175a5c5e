//! Microcluster graphs checked against stabilizer groups written directly
//! from the parity-code and linear-cluster definitions.

use rhg_fusion::bsm_model::EncodingParams;
use rhg_fusion::graph_states::*;
use rhg_fusion::stabilizer::{Pauli, Tableau};

fn bit(g: &PhysGraph, id: VertexId) -> u64 {
    1u64 << g.index_of(id).unwrap()
}

fn enc(qubit: usize, block: usize, photon: usize) -> VertexId {
    VertexId::Encoded {
        qubit,
        block,
        photon,
    }
}

/// Stabilizer group of the lattice-level linear cluster 0-1-2 with
/// lattice-level Hadamards on `lattice_h`, built from the code stabilizers
/// `X_ij X_i(j+1)`, `prod_j Z_ij Z_(i+1)j` and logical operators
/// `X_L = prod_i X_i1`, `Z_L = prod_j Z_1j`.
fn reference_state(g: &PhysGraph, kind: MicroclusterKind, p: EncodingParams, lattice_h: &[usize]) -> Tableau {
    let (n, m) = (p.n(), p.m());
    let encoded = |q: usize| !(kind == MicroclusterKind::Central && q == 1);
    let x_l = |q: usize| -> (u64, u64) {
        if !encoded(q) {
            return (bit(g, VertexId::Central), 0);
        }
        ((1..=n).map(|i| bit(g, enc(q, i, 1))).fold(0, |a, b| a | b), 0)
    };
    let z_l = |q: usize| -> (u64, u64) {
        if !encoded(q) {
            return (0, bit(g, VertexId::Central));
        }
        (0, (1..=m).map(|j| bit(g, enc(q, 1, j))).fold(0, |a, b| a | b))
    };
    let x_eff = |q: usize| if lattice_h.contains(&q) { z_l(q) } else { x_l(q) };
    let z_eff = |q: usize| if lattice_h.contains(&q) { x_l(q) } else { z_l(q) };
    let mut gens = Vec::new();
    for q in 0..3 {
        if encoded(q) {
            for i in 1..=n {
                for j in 1..m {
                    gens.push(Pauli::new(bit(g, enc(q, i, j)) | bit(g, enc(q, i, j + 1)), 0, false));
                }
            }
            for i in 1..n {
                let z = (1..=m)
                    .map(|j| bit(g, enc(q, i, j)) | bit(g, enc(q, i + 1, j)))
                    .fold(0, |a, b| a | b);
                gens.push(Pauli::new(0, z, false));
            }
        }
        let (mut x, mut z) = x_eff(q);
        let neighbours: &[usize] = match q {
            0 => &[1],
            1 => &[0, 2],
            _ => &[1],
        };
        for &u in neighbours {
            let (a, b) = z_eff(u);
            x ^= a;
            z ^= b;
        }
        gens.push(Pauli::new(x, z, false));
    }
    Tableau::from_generators(g.vertex_count(), gens).unwrap()
}

const SIZES: [(usize, usize); 8] = [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (2, 3), (3, 2), (3, 3)];

#[test]
fn linear_clusters_match_code_definition_for_every_hadamard_placement() {
    for kind in [MicroclusterKind::Central, MicroclusterKind::Side] {
        for (n, m) in SIZES {
            let p = EncodingParams::new(n, m, 0).unwrap();
            for mask in 0..8usize {
                let lattice_h: Vec<usize> = (0..3).filter(|q| mask >> q & 1 == 1).collect();
                if kind == MicroclusterKind::Central && lattice_h.contains(&1) {
                    continue;
                }
                let g = linear_cluster_graph(kind, p, &lattice_h);
                let built = Tableau::from_graph(&g).unwrap();
                let reference = reference_state(&g, kind, p, &lattice_h);
                assert!(built.same_state(&reference), "{kind:?} ({n},{m}) H on {lattice_h:?}");
            }
        }
    }
}

#[test]
fn post_h_microclusters_match_reference() {
    for kind in [MicroclusterKind::Central, MicroclusterKind::Side] {
        for config in [HConfig::Hic, HConfig::His] {
            for (n, m) in SIZES {
                let p = EncodingParams::new(n, m, 0).unwrap();
                let g = microcluster_graph(kind, config, p);
                let reference = reference_state(&g, kind, p, post_h_qubits(kind, config));
                assert!(Tableau::from_graph(&g).unwrap().same_state(&reference));
            }
        }
    }
}

#[test]
fn vertex_counts() {
    for n in 1..=5 {
        for m in 1..=5 {
            let p = EncodingParams::new(n, m, 0).unwrap();
            for config in [HConfig::Hic, HConfig::His] {
                let c = microcluster_graph(MicroclusterKind::Central, config, p);
                let s = microcluster_graph(MicroclusterKind::Side, config, p);
                assert_eq!(c.vertex_count(), 2 * n * m + 1);
                assert_eq!(s.vertex_count(), 3 * n * m);
                assert!(c.is_connected() && s.is_connected());
            }
        }
    }
}

/// Replays the encoding circuit of `|+_L>`: CZ from photon [1,1] to every
/// [i,1], H on [1,1], CZ from [1,1] to [1,j] and from [i,1] to [i,j], then H
/// on every [i,1].
#[test]
fn encoding_circuit_replay_gives_plus_state_graph() {
    for (n, m) in SIZES {
        let p = EncodingParams::new(n, m, 0).unwrap();
        let mut g = PhysGraph::new();
        let mut idx = vec![vec![0; m]; n];
        for i in 0..n {
            for j in 0..m {
                idx[i][j] = g.add_vertex(enc(0, i + 1, j + 1));
            }
        }
        for i in 1..n {
            g.add_edge(idx[0][0], idx[i][0]).unwrap();
        }
        for j in 1..m {
            g = h_then_cz_transform(&g, idx[0][0], idx[0][j]).unwrap();
        }
        if m == 1 {
            g.mark_h(idx[0][0]);
        }
        for i in 1..n {
            for j in 1..m {
                g.add_edge(idx[i][0], idx[i][j]).unwrap();
            }
        }
        // Closing Hadamards: the one on [1,1] cancels the pending one.
        g.clear_h_mark(idx[0][0]);
        for i in 1..n {
            g.mark_h(idx[i][0]);
        }
        let reference = encoded_plus_graph(p);
        assert!(g.isomorphic_to(&reference), "({n},{m})");
        assert_eq!(g, reference);
    }
}

#[test]
fn h_then_cz_on_a_path() {
    let g = PhysGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
    let t = h_then_cz_transform(&g, 0, 2).unwrap();
    // b-c already exists, so toggling removes it.
    assert_eq!(t.edge_list(), vec![(0, 1)]);
    assert!(t.is_h_marked(0));
    let mut direct = Tableau::from_graph(&g).unwrap();
    direct.apply_h(0);
    let evolved = Tableau::from_generators(
        3,
        direct
            .generators()
            .iter()
            .map(|p| {
                let mut q = *p;
                if p.x & 1 == 1 {
                    q = q.mul(&Pauli::z_on(2));
                }
                if p.x >> 2 & 1 == 1 {
                    q = q.mul(&Pauli::z_on(0));
                }
                q
            })
            .collect(),
    )
    .unwrap();
    assert!(evolved.same_state(&Tableau::from_graph(&t).unwrap()));
    // a-b-c with H on b then CZ(b, d) for a fresh d
    let g = PhysGraph::from_edges(4, &[(0, 1), (1, 2)]).unwrap();
    let t = h_then_cz_transform(&g, 1, 3).unwrap();
    assert_eq!(t.edge_list(), vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
    let lone = PhysGraph::from_edges(2, &[]).unwrap();
    let t = h_then_cz_transform(&lone, 0, 1).unwrap();
    assert_eq!(t.edge_count(), 0);
    assert!(t.is_h_marked(0));
    assert!(h_then_cz_transform(&g, 0, 1).is_err());
}

#[test]
fn h_then_cz_rule_matches_stabilizer_evolution() {
    // CZ(1,2) H_1 |G> must equal H_1 |G'> where G' is the toggled graph.
    let g = PhysGraph::from_edges(5, &[(0, 1), (0, 3), (2, 4), (1, 4)]).unwrap();
    let mut direct = Tableau::from_graph(&g).unwrap();
    direct.apply_h(0);
    // CZ conjugation: X_a -> X_a Z_b, X_b -> Z_a X_b.
    let cz = |t: &Tableau, a: usize, b: usize| {
        let gens = t
            .generators()
            .iter()
            .map(|p| {
                let mut q = *p;
                if p.x >> a & 1 == 1 {
                    q = q.mul(&Pauli::z_on(b));
                }
                if p.x >> b & 1 == 1 {
                    q = q.mul(&Pauli::z_on(a));
                }
                q
            })
            .collect();
        Tableau::from_generators(t.num_qubits(), gens).unwrap()
    };
    let evolved = cz(&direct, 0, 2);
    let rule = h_then_cz_transform(&g, 0, 2).unwrap();
    let mut expected = Tableau::graph_state(5, &rule.edge_list()).unwrap();
    expected.apply_h(0);
    assert!(evolved.same_state(&expected));
}

#[test]
fn h_then_cz_twice_restores_edges() {
    let g = PhysGraph::from_edges(5, &[(0, 1), (0, 3), (2, 4), (1, 4)]).unwrap();
    let once = h_then_cz_transform(&g, 0, 2).unwrap();
    let twice = h_then_cz_transform(&once, 0, 2).unwrap();
    assert_eq!(twice.edge_list(), g.edge_list());
    assert!(twice.is_h_marked(0));
}

#[test]
fn decomposition_of_twins_attached_to_two_vertices() {
    // Three twins {2, 3, 4} attached to both 0 and 1, plus a tail 1-5.
    let g = PhysGraph::from_edges(6, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (1, 5)]).unwrap();
    let set = decompose_components(&g);
    assert_eq!(set.components.len(), 2);
    assert_eq!(set.inter_component_fusions.len(), 1);
    assert_eq!(set.vertex_count(), g.vertex_count() + 2);
    assert!(set.remerge().isomorphic_to(&g));
}

#[test]
fn decomposition_without_repetition_is_trivial() {
    let g = PhysGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
    let set = decompose_components(&g);
    assert_eq!(set.components.len(), 1);
    assert!(set.inter_component_fusions.is_empty());
    assert_eq!(set.components[0], g);
}

#[test]
fn central_hic_is_a_single_component() {
    for (n, m) in SIZES {
        let g = microcluster_graph(MicroclusterKind::Central, HConfig::Hic, EncodingParams::new(n, m, 0).unwrap());
        let set = decompose_components(&g);
        assert_eq!(set.components.len(), 1, "({n},{m})");
        assert!(set.inter_component_fusions.is_empty());
    }
}

#[test]
fn microcluster_decompositions_remerge() {
    for kind in [MicroclusterKind::Central, MicroclusterKind::Side] {
        for config in [HConfig::Hic, HConfig::His] {
            for n in 1..=4 {
                for m in 1..=4 {
                    let g = microcluster_graph(kind, config, EncodingParams::new(n, m, 0).unwrap());
                    let set = decompose_components(&g);
                    assert_eq!(set.vertex_count(), g.vertex_count() + 2 * set.inter_component_fusions.len());
                    assert!(set.remerge().isomorphic_to(&g), "{kind:?} {config:?} ({n},{m})");
                    let edges: usize = set.components.iter().map(|c| c.edge_count()).sum();
                    assert!(edges <= g.edge_count());
                }
            }
        }
    }
}

#[test]
fn adjacency_text_lists_every_vertex() {
    let g = microcluster_graph(MicroclusterKind::Central, HConfig::Hic, EncodingParams::new(2, 2, 1).unwrap());
    let text = g.to_adjacency_text();
    assert_eq!(text.lines().count(), 9);
    assert!(text.contains(" c central h=0"));
}
