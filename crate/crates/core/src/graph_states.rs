//! Physical-level graphs of microclusters and their decomposition into
//! separately prepared components.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bsm_model::EncodingParams;
use crate::error::{Error, Result};

/// Role of a physical vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexId {
    /// Photon `photon` (1-based) of block `block` (1-based) of encoded
    /// lattice-level qubit `qubit`.
    Encoded {
        qubit: usize,
        block: usize,
        photon: usize,
    },
    /// The unencoded middle qubit of a central microcluster.
    Central,
    /// Anything else: generic graphs and fusion ancillas added by
    /// [`decompose_components`].
    Plain(usize),
}

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VertexId::Encoded {
                qubit,
                block,
                photon,
            } => write!(f, "q{qubit}[{block},{photon}]"),
            VertexId::Central => write!(f, "c"),
            VertexId::Plain(k) => write!(f, "p{k}"),
        }
    }
}

/// Simple undirected graph with physical and lattice-level H-marks.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PhysGraph {
    ids: Vec<VertexId>,
    adj: Vec<BTreeSet<usize>>,
    h_marks: BTreeSet<usize>,
    lattice_h_marks: BTreeSet<usize>,
}

impl PhysGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph on `Plain(0..n)` with the given edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = PhysGraph::new();
        for k in 0..n {
            g.add_vertex(VertexId::Plain(k));
        }
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, id: VertexId) -> usize {
        self.ids.push(id);
        self.adj.push(BTreeSet::new());
        self.ids.len() - 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        if a == b || a >= self.ids.len() || b >= self.ids.len() {
            return Err(Error::Usage(format!("bad edge ({a}, {b})")));
        }
        self.adj[a].insert(b);
        self.adj[b].insert(a);
        Ok(())
    }

    pub fn toggle_edge(&mut self, a: usize, b: usize) {
        assert!(a != b, "self loops are not allowed");
        if !self.adj[a].remove(&b) {
            self.adj[a].insert(b);
            self.adj[b].insert(a);
        } else {
            self.adj[b].remove(&a);
        }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(&b)
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn id(&self, v: usize) -> VertexId {
        self.ids[v]
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn index_of(&self, id: VertexId) -> Option<usize> {
        self.ids.iter().position(|&x| x == id)
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Sorted edge list with `a < b`.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, nb) in self.adj.iter().enumerate() {
            for &b in nb.range(a + 1..) {
                out.push((a, b));
            }
        }
        out
    }

    pub fn mark_h(&mut self, v: usize) {
        self.h_marks.insert(v);
    }

    /// Removes an H-mark, e.g. when a second Hadamard cancels a pending one.
    pub fn clear_h_mark(&mut self, v: usize) {
        self.h_marks.remove(&v);
    }

    pub fn is_h_marked(&self, v: usize) -> bool {
        self.h_marks.contains(&v)
    }

    pub fn h_marked_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.h_marks.iter().copied()
    }

    pub fn lattice_h_marks(&self) -> &BTreeSet<usize> {
        &self.lattice_h_marks
    }

    pub fn is_connected(&self) -> bool {
        if self.ids.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.ids.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &u in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Undirected petgraph view; node `k` is vertex `k`, node weight is the
    /// H-mark flag.
    pub fn to_petgraph(&self) -> petgraph::graph::UnGraph<bool, ()> {
        let mut g = petgraph::graph::UnGraph::new_undirected();
        let nodes: Vec<_> = (0..self.ids.len()).map(|v| g.add_node(self.is_h_marked(v))).collect();
        for (a, b) in self.edge_list() {
            g.add_edge(nodes[a], nodes[b], ());
        }
        g
    }

    /// Isomorphism of the underlying graphs that also respects H-marks.
    pub fn isomorphic_to(&self, other: &PhysGraph) -> bool {
        petgraph::algo::is_isomorphic_matching(
            &self.to_petgraph(),
            &other.to_petgraph(),
            |a, b| a == b,
            |_, _| true,
        )
    }

    /// One line per vertex: `index id role h=0|1 : neighbor indices`.
    pub fn to_adjacency_text(&self) -> String {
        let mut s = String::new();
        for (v, id) in self.ids.iter().enumerate() {
            let role = match id {
                VertexId::Encoded { .. } => "encoded",
                VertexId::Central => "central",
                VertexId::Plain(_) => "plain",
            };
            let nb: Vec<String> = self.adj[v].iter().map(|u| u.to_string()).collect();
            let _ = writeln!(
                s,
                "{v} {id} {role} h={} : {}",
                self.is_h_marked(v) as u8,
                nb.join(" ")
            );
        }
        s
    }
}

/// Applies `H` to `h_vertex` followed by `CZ(h_vertex, cz_partner)`, in
/// graph form: every neighbour of `h_vertex` has its edge to `cz_partner`
/// toggled and `h_vertex` is H-marked.
pub fn h_then_cz_transform(g: &PhysGraph, h_vertex: usize, cz_partner: usize) -> Result<PhysGraph> {
    if h_vertex == cz_partner {
        return Err(Error::Usage("H vertex and CZ partner must differ".into()));
    }
    if g.has_edge(h_vertex, cz_partner) {
        return Err(Error::Usage(format!(
            "vertices {h_vertex} and {cz_partner} are adjacent"
        )));
    }
    let mut out = g.clone();
    let nb: Vec<usize> = g.neighbors(h_vertex).iter().copied().collect();
    for i in nb {
        if i != cz_partner {
            out.toggle_edge(cz_partner, i);
        }
    }
    out.mark_h(h_vertex);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MicroclusterKind {
    Central,
    Side,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HConfig {
    /// Step-1 Hadamards on the central microcluster.
    Hic,
    /// Step-1 Hadamards on the side microclusters.
    His,
}

fn encoded_id(qubit: usize, block: usize, photon: usize) -> VertexId {
    VertexId::Encoded {
        qubit,
        block,
        photon,
    }
}

/// Adds the `|+_L>` graph of one encoded qubit and returns the vertices
/// that lattice-level CZ gates attach to (the photons of block 1).
fn add_plus_state(g: &mut PhysGraph, qubit: usize, params: EncodingParams) -> Vec<usize> {
    let (n, m) = (params.n(), params.m());
    let idx: Vec<Vec<usize>> = (1..=n)
        .map(|i| (1..=m).map(|j| g.add_vertex(encoded_id(qubit, i, j))).collect())
        .collect();
    for i in 1..n {
        let hub = idx[i][0];
        g.mark_h(hub);
        for &b in &idx[0] {
            g.add_edge(b, hub).expect("distinct vertices");
        }
        for &leaf in &idx[i][1..] {
            g.add_edge(hub, leaf).expect("distinct vertices");
        }
    }
    idx[0].clone()
}

/// Adds `H_L |+_L>`: one star per block with an H-marked hub `[i, 1]`.
/// Returns the hubs, which is where lattice-level CZ gates attach.
fn add_zero_state(g: &mut PhysGraph, qubit: usize, params: EncodingParams) -> Vec<usize> {
    let (n, m) = (params.n(), params.m());
    let mut hubs = Vec::with_capacity(n);
    for i in 1..=n {
        let hub = g.add_vertex(encoded_id(qubit, i, 1));
        g.mark_h(hub);
        for j in 2..=m {
            let leaf = g.add_vertex(encoded_id(qubit, i, j));
            g.add_edge(hub, leaf).expect("distinct vertices");
        }
        hubs.push(hub);
    }
    hubs
}

/// Graph of `|+_L>` for one encoded qubit (qubit index 0).
pub fn encoded_plus_graph(params: EncodingParams) -> PhysGraph {
    let mut g = PhysGraph::new();
    add_plus_state(&mut g, 0, params);
    g
}

/// Three-qubit lattice-level linear cluster (qubits 0, 1, 2) with
/// lattice-level Hadamards applied to the qubits in `lattice_h`. The middle
/// qubit is unencoded for a central microcluster and never takes a
/// lattice-level Hadamard there.
pub fn linear_cluster_graph(
    kind: MicroclusterKind,
    params: EncodingParams,
    lattice_h: &[usize],
) -> PhysGraph {
    let mut g = PhysGraph::new();
    let mut attach = Vec::with_capacity(3);
    for q in 0..3 {
        let verts = if kind == MicroclusterKind::Central && q == 1 {
            vec![g.add_vertex(VertexId::Central)]
        } else if lattice_h.contains(&q) {
            g.lattice_h_marks.insert(q);
            add_zero_state(&mut g, q, params)
        } else {
            add_plus_state(&mut g, q, params)
        };
        attach.push(verts);
    }
    for end in [0, 2] {
        for &a in &attach[end] {
            for &b in &attach[1] {
                g.add_edge(a, b).expect("distinct vertices");
            }
        }
    }
    g
}

/// Lattice-level qubits that carry a Hadamard in the post-H microcluster.
///
/// Step-1 fusions put their Hadamard on the central microcluster's ends
/// (HIC) or on the side microcluster's middle (HIS). Every side
/// microcluster also carries the step-2 Hadamard on exactly one end.
pub fn post_h_qubits(kind: MicroclusterKind, config: HConfig) -> &'static [usize] {
    match (kind, config) {
        (MicroclusterKind::Central, HConfig::Hic) => &[0, 2],
        (MicroclusterKind::Central, HConfig::His) => &[],
        (MicroclusterKind::Side, HConfig::Hic) => &[2],
        (MicroclusterKind::Side, HConfig::His) => &[1, 2],
    }
}

/// Physical-level graph of a post-H microcluster: `2nm + 1` vertices for a
/// central one, `3nm` for a side one.
pub fn microcluster_graph(kind: MicroclusterKind, config: HConfig, params: EncodingParams) -> PhysGraph {
    linear_cluster_graph(kind, params, post_h_qubits(kind, config))
}

/// Microcluster of the unencoded scheme: a three-qubit path.
pub fn unencoded_microcluster_graph() -> PhysGraph {
    PhysGraph::from_edges(3, &[(0, 1), (1, 2)]).expect("valid path")
}

/// Components prepared separately and fused into one graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSet {
    pub components: Vec<PhysGraph>,
    /// Pairs of fusion qubits, each naming one vertex in some component.
    pub inter_component_fusions: Vec<(VertexId, VertexId)>,
}

impl ComponentSet {
    pub fn vertex_count(&self) -> usize {
        self.components.iter().map(|c| c.vertex_count()).sum()
    }

    /// Rebuilds the single graph: the union of the components where each
    /// fusion pair is consumed and its two neighbourhoods are joined.
    pub fn remerge(&self) -> PhysGraph {
        let mut g = PhysGraph::new();
        let mut index = BTreeMap::new();
        for c in &self.components {
            for v in 0..c.vertex_count() {
                let k = g.add_vertex(c.id(v));
                index.insert(c.id(v), k);
                if c.is_h_marked(v) {
                    g.mark_h(k);
                }
            }
            for (a, b) in c.edge_list() {
                g.add_edge(index[&c.id(a)], index[&c.id(b)]).expect("component edge");
            }
        }
        let mut consumed = BTreeSet::new();
        for (a, b) in &self.inter_component_fusions {
            let (a, b) = (index[a], index[b]);
            let na: Vec<usize> = g.neighbors(a).iter().copied().collect();
            let nb: Vec<usize> = g.neighbors(b).iter().copied().collect();
            for &u in &na {
                g.toggle_edge(u, a);
            }
            for &w in &nb {
                g.toggle_edge(w, b);
            }
            for &u in &na {
                for &w in &nb {
                    g.toggle_edge(u, w);
                }
            }
            consumed.insert(a);
            consumed.insert(b);
        }
        g.without_vertices(&consumed)
    }
}

impl PhysGraph {
    fn without_vertices(&self, drop: &BTreeSet<usize>) -> PhysGraph {
        let mut out = PhysGraph::new();
        let mut map = vec![usize::MAX; self.vertex_count()];
        for v in 0..self.vertex_count() {
            if !drop.contains(&v) {
                map[v] = out.add_vertex(self.ids[v]);
                if self.is_h_marked(v) {
                    out.mark_h(map[v]);
                }
            }
        }
        for (a, b) in self.edge_list() {
            if map[a] != usize::MAX && map[b] != usize::MAX {
                out.add_edge(map[a], map[b]).expect("kept edge");
            }
        }
        out.lattice_h_marks = self.lattice_h_marks.clone();
        out
    }

    fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertex_count()];
        let mut out = Vec::new();
        for s in 0..self.vertex_count() {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut k = 0;
            while k < comp.len() {
                for &u in &self.adj[comp[k]] {
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Splits off every set of twin vertices (same neighbourhood, same H-mark,
/// at least two members) attached to at least two vertices, whenever doing
/// so lowers the edge count: the twins keep a single new neighbour `a`, a
/// new vertex `a'` takes over their old neighbourhood, and `(a, a')` is
/// recorded as a fusion.
pub fn decompose_components(g: &PhysGraph) -> ComponentSet {
    let mut work = g.clone();
    let mut fusions = Vec::new();
    let mut next_plain = g
        .ids
        .iter()
        .filter_map(|id| match id {
            VertexId::Plain(k) => Some(k + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    loop {
        let mut classes: BTreeMap<(Vec<usize>, bool), Vec<usize>> = BTreeMap::new();
        for v in 0..work.vertex_count() {
            let nb: Vec<usize> = work.adj[v].iter().copied().collect();
            classes.entry((nb, work.is_h_marked(v))).or_default().push(v);
        }
        let pick = classes.into_iter().find(|((nb, _), twins)| {
            twins.len() >= 2 && nb.len() >= 2 && twins.len() * nb.len() > twins.len() + nb.len()
        });
        let Some(((nb, _), twins)) = pick else { break };
        let a = work.add_vertex(VertexId::Plain(next_plain));
        let a_prime = work.add_vertex(VertexId::Plain(next_plain + 1));
        next_plain += 2;
        for &t in &twins {
            for &u in &nb {
                work.toggle_edge(t, u);
            }
            work.add_edge(t, a).expect("new vertex");
        }
        for &u in &nb {
            work.add_edge(a_prime, u).expect("new vertex");
        }
        fusions.push((work.id(a), work.id(a_prime)));
    }
    let components = work
        .connected_components()
        .into_iter()
        .map(|comp| {
            let drop: BTreeSet<usize> = (0..work.vertex_count()).filter(|v| comp.binary_search(v).is_err()).collect();
            work.without_vertices(&drop)
        })
        .collect();
    ComponentSet {
        components,
        inter_component_fusions: fusions,
    }
}
