//! Merging graphs: which 3-GHZ states to place and which BSMs and fusions
//! join them into a target graph state, plus the greedy contraction order.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use super::fusion_sum;
use crate::error::{Error, Result};
use crate::graph_states::{ComponentSet, PhysGraph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    /// BSM between a root and a leaf, growing one GHZ state.
    Internal,
    /// Fusion between two leaves, creating a graph edge.
    External,
    /// Fusion joining two separately prepared components.
    Component,
}

/// Random choices that fix one merging graph: for every vertex of degree
/// at least three, the order of its neighbours and the root position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeChoices {
    pub orders: BTreeMap<usize, Vec<usize>>,
    pub roots: BTreeMap<usize, usize>,
}

impl MergeChoices {
    pub fn random<R: Rng + ?Sized>(g: &PhysGraph, rng: &mut R) -> Self {
        let mut orders = BTreeMap::new();
        let mut roots = BTreeMap::new();
        for v in 0..g.vertex_count() {
            let deg = g.degree(v);
            if deg >= 3 {
                let mut perm: Vec<usize> = (0..deg).collect();
                perm.shuffle(rng);
                orders.insert(v, perm);
                roots.insert(v, rng.gen_range(0..deg - 1));
            }
        }
        Self { orders, roots }
    }

    /// Every choice set for `g`; the count grows factorially with degree.
    pub fn enumerate(g: &PhysGraph) -> Vec<Self> {
        fn perms(k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(k - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, k - 1);
                    out.push(q);
                }
            }
            out
        }
        let mut all = vec![Self {
            orders: BTreeMap::new(),
            roots: BTreeMap::new(),
        }];
        for v in 0..g.vertex_count() {
            let deg = g.degree(v);
            if deg < 3 {
                continue;
            }
            let mut next = Vec::new();
            for c in &all {
                for p in perms(deg) {
                    for r in 0..deg - 1 {
                        let mut c = c.clone();
                        c.orders.insert(v, p.clone());
                        c.roots.insert(v, r);
                        next.push(c);
                    }
                }
            }
            all = next;
        }
        all
    }
}

/// Multigraph of 3-GHZ states. Loops and parallel edges are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct MergingGraph {
    pub weights: Vec<f64>,
    pub edges: Vec<(usize, usize, EdgeKind)>,
    /// Physical vertex -> merging vertex holding its qubit.
    pub roots: BTreeMap<VertexId, usize>,
    /// Merging vertices whose root qubit is reserved for the physical vertex.
    pub reserved_roots: BTreeSet<usize>,
    /// Degree-1 physical vertices dropped in construction, with the merging
    /// vertex whose free leaf becomes that qubit.
    pub dangling: Vec<(usize, VertexId)>,
}

/// Builds the merging graph of `g` for a given set of choices.
pub fn build_merging_graph_with(g: &PhysGraph, choices: &MergeChoices) -> Result<MergingGraph> {
    let n = g.vertex_count();
    let mut adj: Vec<Vec<(usize, EdgeKind)>> = vec![Vec::new(); n];
    for (a, b) in g.edge_list() {
        adj[a].push((b, EdgeKind::External));
        adj[b].push((a, EdgeKind::External));
    }
    let mut alive = vec![true; n];
    let mut root_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut reserved = BTreeSet::new();
    let high: Vec<usize> = (0..n).filter(|&v| g.degree(v) >= 3).collect();
    for v in 0..n {
        if g.degree(v) == 2 || g.degree(v) == 0 {
            root_of.insert(v, v);
        }
    }
    for &v in &high {
        let d = adj[v].len();
        let order = choices
            .orders
            .get(&v)
            .filter(|p| p.len() == d)
            .ok_or_else(|| Error::Usage(format!("missing neighbour order for vertex {v}")))?;
        let current: Vec<usize> = adj[v].iter().map(|&(u, _)| u).collect();
        let ngh: Vec<usize> = order.iter().map(|&i| current[i]).collect();
        for &u in &ngh {
            adj[u].retain(|&(w, _)| w != v);
        }
        adj[v].clear();
        alive[v] = false;

        let base = adj.len();
        let new: Vec<usize> = (base..base + d - 1).collect();
        adj.resize(base + d - 1, Vec::new());
        alive.resize(base + d - 1, true);
        let link = |adj: &mut Vec<Vec<(usize, EdgeKind)>>, a: usize, b: usize, k: EdgeKind| {
            adj[a].push((b, k));
            adj[b].push((a, k));
        };
        for w in new.windows(2) {
            link(&mut adj, w[0], w[1], EdgeKind::Internal);
        }
        let r = *choices
            .roots
            .get(&v)
            .filter(|&&r| r < d - 1)
            .ok_or_else(|| Error::Usage(format!("missing root choice for vertex {v}")))?;
        root_of.insert(v, new[r]);
        reserved.insert(new[r]);
        let rest: Vec<usize> = new.iter().copied().filter(|&x| x != new[r]).collect();
        for i in 0..d - 2 {
            link(&mut adj, rest[i], ngh[i], EdgeKind::External);
        }
        link(&mut adj, new[0], ngh[d - 2], EdgeKind::External);
        link(&mut adj, new[d - 2], ngh[d - 1], EdgeKind::External);
    }

    let mut dangling_raw = Vec::new();
    let keep: Vec<bool> = (0..adj.len()).map(|v| alive[v] && adj[v].len() != 1).collect();
    for v in 0..adj.len() {
        if alive[v] && adj[v].len() == 1 {
            dangling_raw.push((adj[v][0].0, v));
        }
    }
    let mut index = vec![usize::MAX; adj.len()];
    let mut count = 0;
    for v in 0..adj.len() {
        if keep[v] {
            index[v] = count;
            count += 1;
        }
    }
    let mut edges = Vec::new();
    for (a, list) in adj.iter().enumerate() {
        for &(b, k) in list {
            if a < b && keep[a] && keep[b] {
                edges.push((index[a], index[b], k));
            }
        }
    }

    let mut roots = BTreeMap::new();
    let mut dangling = Vec::new();
    if count == 0 {
        // Two-qubit graphs: a single 3-GHZ state covers both qubits.
        count = 1;
        for v in 0..n {
            roots.insert(g.id(v), 0);
        }
    } else {
        for (&v, &m) in &root_of {
            roots.insert(g.id(v), index[m]);
        }
        for (holder, v) in dangling_raw {
            if keep[holder] {
                roots.insert(g.id(v), index[holder]);
                dangling.push((index[holder], g.id(v)));
            }
        }
    }
    let reserved_roots = reserved.into_iter().filter(|&m| keep[m]).map(|m| index[m]).collect();
    Ok(MergingGraph {
        weights: vec![1.0; count],
        edges,
        roots,
        reserved_roots,
        dangling,
    })
}

pub fn build_merging_graph<R: Rng + ?Sized>(g: &PhysGraph, rng: &mut R) -> Result<MergingGraph> {
    build_merging_graph_with(g, &MergeChoices::random(g, rng))
}

impl MergingGraph {
    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    /// Disjoint union of component merging graphs, with the roots of every
    /// inter-component fusion pair joined.
    pub fn combine(parts: &[MergingGraph], fusions: &[(VertexId, VertexId)]) -> Result<MergingGraph> {
        let mut out = MergingGraph {
            weights: Vec::new(),
            edges: Vec::new(),
            roots: BTreeMap::new(),
            reserved_roots: BTreeSet::new(),
            dangling: Vec::new(),
        };
        for p in parts {
            let off = out.weights.len();
            out.weights.extend(&p.weights);
            out.edges.extend(p.edges.iter().map(|&(a, b, k)| (a + off, b + off, k)));
            out.roots.extend(p.roots.iter().map(|(&id, &m)| (id, m + off)));
            out.reserved_roots.extend(p.reserved_roots.iter().map(|&m| m + off));
            out.dangling.extend(p.dangling.iter().map(|&(m, id)| (m + off, id)));
        }
        for (a, b) in fusions {
            let ra = *out.roots.get(a).ok_or_else(|| Error::Usage(format!("fusion qubit {a} has no root")))?;
            let rb = *out.roots.get(b).ok_or_else(|| Error::Usage(format!("fusion qubit {b} has no root")))?;
            out.edges.push((ra, rb, EdgeKind::Component));
        }
        Ok(out)
    }
}

/// Greedy colouring of the line graph (ignoring loops), visiting edges in
/// order of decreasing line-graph degree.
pub fn greedy_edge_coloring(edges: &[(usize, usize)]) -> Vec<usize> {
    let m = edges.len();
    let mut incident: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &(a, b)) in edges.iter().enumerate() {
        incident.entry(a).or_default().push(i);
        incident.entry(b).or_default().push(i);
    }
    let neighbours: Vec<BTreeSet<usize>> = edges
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| {
            incident[&a]
                .iter()
                .chain(&incident[&b])
                .copied()
                .filter(|&j| j != i)
                .collect()
        })
        .collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(neighbours[i].len()));
    let mut color = vec![usize::MAX; m];
    for i in order {
        let used: BTreeSet<usize> = neighbours[i].iter().map(|&j| color[j]).collect();
        color[i] = (0..).find(|c| !used.contains(c)).expect("free colour");
    }
    color
}

/// Contracts the graph down to one vertex, always merging a largest
/// same-colour set of minimum-cost edges. Returns the final weight.
pub fn contraction_cost<R: Rng + ?Sized>(g: &MergingGraph, eta: f64, rng: &mut R) -> Result<f64> {
    let mut weights = g.weights.clone();
    let mut alive: Vec<bool> = vec![true; weights.len()];
    let mut edges: Vec<(usize, usize)> = g.edges.iter().map(|&(a, b, _)| (a, b)).collect();
    let mut remaining = weights.len();
    let cap = weights.len() + 1;
    for _ in 0..cap {
        if remaining == 1 {
            let v = alive.iter().position(|&a| a).expect("one vertex");
            return Ok(weights[v]);
        }
        let proper: Vec<(usize, usize)> = edges.iter().copied().filter(|(a, b)| a != b).collect();
        if proper.is_empty() {
            return Err(Error::Usage("merging graph is disconnected".into()));
        }
        let costs: Vec<f64> = proper
            .iter()
            .map(|&(a, b)| fusion_sum(weights[a], weights[b], eta))
            .collect::<Result<_>>()?;
        let min = costs.iter().copied().fold(f64::INFINITY, f64::min);
        let colors = greedy_edge_coloring(&proper);
        let mut by_color: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &c) in costs.iter().enumerate() {
            if c <= min * (1.0 + 1e-12) {
                by_color.entry(colors[i]).or_default().push(i);
            }
        }
        let largest = by_color.values().map(Vec::len).max().expect("non-empty");
        let candidates: Vec<&Vec<usize>> = by_color.values().filter(|s| s.len() == largest).collect();
        let chosen = candidates[rng.gen_range(0..candidates.len())].clone();
        let mut rename: BTreeMap<usize, usize> = BTreeMap::new();
        for i in chosen {
            let (a, b) = proper[i];
            weights[a] = costs[i];
            alive[b] = false;
            rename.insert(b, a);
            remaining -= 1;
        }
        for e in edges.iter_mut() {
            e.0 = *rename.get(&e.0).unwrap_or(&e.0);
            e.1 = *rename.get(&e.1).unwrap_or(&e.1);
        }
    }
    Err(Error::Usage("contraction did not terminate".into()))
}

/// Minimum over every sequential contraction order; exponential.
pub fn brute_force_contraction(g: &MergingGraph, eta: f64) -> Result<f64> {
    fn go(weights: &mut Vec<f64>, edges: &[(usize, usize)], eta: f64, remaining: usize) -> Result<f64> {
        if remaining == 1 {
            return Ok(weights.iter().copied().filter(|w| w.is_finite()).fold(0.0, f64::max));
        }
        let mut best = f64::INFINITY;
        for &(a, b) in edges.iter().filter(|(a, b)| a != b) {
            let (wa, wb) = (weights[a], weights[b]);
            weights[a] = fusion_sum(wa, wb, eta)?;
            weights[b] = f64::NEG_INFINITY;
            let renamed: Vec<(usize, usize)> = edges
                .iter()
                .map(|&(x, y)| (if x == b { a } else { x }, if y == b { a } else { y }))
                .collect();
            best = best.min(go(weights, &renamed, eta, remaining - 1)?);
            weights[a] = wa;
            weights[b] = wb;
        }
        Ok(best)
    }
    let edges: Vec<(usize, usize)> = g.edges.iter().map(|&(a, b, _)| (a, b)).collect();
    go(&mut g.weights.clone(), &edges, eta, g.weights.len())
}

/// One random sample of the cost of assembling a decomposed microcluster.
pub fn sample_cost<R: Rng + ?Sized>(set: &ComponentSet, eta: f64, rng: &mut R) -> Result<f64> {
    let parts = set
        .components
        .iter()
        .map(|c| build_merging_graph(c, rng))
        .collect::<Result<Vec<_>>>()?;
    let combined = MergingGraph::combine(&parts, &set.inter_component_fusions)?;
    contraction_cost(&combined, eta, rng)
}
