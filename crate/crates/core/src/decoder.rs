//! Minimum-weight perfect matching of primal syndromes with per-qubit
//! log-likelihood weights.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::convert::Infallible;

use petgraph::graph::{NodeIndex, UnGraph};
use rustworkx_core::max_weight_matching::max_weight_matching;

use crate::error::{Error, Result};
use crate::lattice::{QubitRecord, RhgLattice, Syndrome, XBoundary};

/// Heralded error probabilities below this are treated as exactly zero.
pub const Q_EXCLUDE: f64 = 1e-12;

const WEIGHT_SCALE: f64 = 1e9;

/// `log((1 - q) / q)`, or `None` for a qubit that cannot carry an error.
pub fn qubit_weight(q: f64) -> Option<f64> {
    if q < Q_EXCLUDE {
        None
    } else {
        Some(((1.0 - q) / q).ln().max(0.0))
    }
}

/// Decoding graph: primal cells plus one node per x-boundary, joined by
/// the qubits that may carry errors.
#[derive(Debug, Clone)]
pub struct MatchingProblem {
    pub defects: Vec<usize>,
    /// Per-qubit weight; `None` marks an excluded qubit.
    pub weights: Vec<Option<f64>>,
    num_cells: usize,
    /// `adjacency[node] = [(other node, qubit)]`.
    adjacency: Vec<Vec<(usize, usize)>>,
}

/// Builds the problem from one trial's records. When every heralded
/// probability is 0 or 1/2 the deficient qubits get weight 1 instead of 0.
pub fn build_matching_problem(lattice: &RhgLattice, syndrome: &Syndrome, records: &[QubitRecord]) -> MatchingProblem {
    let erasure_only = records.iter().all(|r| r.q_err < Q_EXCLUDE || r.q_err == 0.5);
    let weights = lattice
        .qubits()
        .iter()
        .zip(records)
        .map(|(q, r)| {
            if !q.primal {
                return None;
            }
            let w = qubit_weight(r.q_err)?;
            Some(if erasure_only { 1.0 } else { w })
        })
        .collect();
    MatchingProblem::new(lattice, syndrome.violated_cells.clone(), weights)
}

impl MatchingProblem {
    pub fn new(lattice: &RhgLattice, defects: Vec<usize>, weights: Vec<Option<f64>>) -> Self {
        let num_cells = lattice.num_cells();
        let mut adjacency = vec![Vec::new(); num_cells + 2];
        for (qi, q) in lattice.qubits().iter().enumerate() {
            if !q.primal || weights[qi].is_none() {
                continue;
            }
            match (q.cells.as_slice(), q.x_boundary) {
                (&[a, b], _) => {
                    adjacency[a].push((b, qi));
                    adjacency[b].push((a, qi));
                }
                (&[a], Some(side)) => {
                    let bnode = num_cells + if side == XBoundary::Low { 0 } else { 1 };
                    adjacency[a].push((bnode, qi));
                    adjacency[bnode].push((a, qi));
                }
                _ => {}
            }
        }
        Self {
            defects,
            weights,
            num_cells,
            adjacency,
        }
    }

    fn is_boundary(&self, node: usize) -> bool {
        node >= self.num_cells
    }

    fn dijkstra(&self, source: usize) -> (Vec<f64>, Vec<Option<(usize, usize)>>) {
        #[derive(PartialEq)]
        struct Entry(f64, usize);
        impl Eq for Entry {}
        impl Ord for Entry {
            fn cmp(&self, o: &Self) -> Ordering {
                o.0.total_cmp(&self.0).then_with(|| o.1.cmp(&self.1))
            }
        }
        impl PartialOrd for Entry {
            fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
                Some(self.cmp(o))
            }
        }
        let n = self.adjacency.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut pred = vec![None; n];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(Entry(0.0, source));
        while let Some(Entry(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            // Paths end at a boundary, never pass through one.
            if u != source && self.is_boundary(u) {
                continue;
            }
            for &(v, q) in &self.adjacency[u] {
                let nd = d + self.weights[q].unwrap_or(f64::INFINITY);
                if nd < dist[v] {
                    dist[v] = nd;
                    pred[v] = Some((u, q));
                    heap.push(Entry(nd, v));
                }
            }
        }
        (dist, pred)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Correction {
    /// Qubits to flip, sorted.
    pub qubits: Vec<usize>,
    /// Total matched weight.
    pub weight: f64,
}

fn trace(pred: &[Option<(usize, usize)>], mut node: usize, flips: &mut [bool]) {
    while let Some((prev, q)) = pred[node] {
        flips[q] ^= true;
        node = prev;
    }
}

type Paths = (Vec<f64>, Vec<Option<(usize, usize)>>);

impl MatchingProblem {
    /// Component label of every cell reachable from a defect; paths never
    /// pass through a boundary node, so boundaries do not join components.
    fn defect_groups(&self) -> Vec<Vec<usize>> {
        let mut label = vec![usize::MAX; self.num_cells];
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (i, &d) in self.defects.iter().enumerate() {
            if label[d] == usize::MAX {
                let id = groups.len();
                groups.push(Vec::new());
                label[d] = id;
                let mut stack = vec![d];
                while let Some(u) = stack.pop() {
                    for &(v, _) in &self.adjacency[u] {
                        if !self.is_boundary(v) && label[v] == usize::MAX {
                            label[v] = id;
                            stack.push(v);
                        }
                    }
                }
            }
            groups[label[d]].push(i);
        }
        groups
    }

    fn boundary_distance(&self, paths: &Paths) -> (f64, usize) {
        let (low, high) = (self.num_cells, self.num_cells + 1);
        if paths.0[low] <= paths.0[high] {
            (paths.0[low], low)
        } else {
            (paths.0[high], high)
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Optimal partners within one group: `Some(j)` pairs with defect `j` of
/// the group, `None` with the boundary.
fn match_group(p: &MatchingProblem, group: &[usize], paths: &[Paths]) -> Result<Vec<Option<usize>>> {
    let k = group.len();
    let dist = |a: usize, b: usize| paths[a].0[p.defects[group[b]]];
    let bd = |a: usize| p.boundary_distance(&paths[a]).0;
    match k {
        1 if bd(0).is_finite() => return Ok(vec![None]),
        2 if bd(0) + bd(1) >= dist(0, 1) && dist(0, 1).is_finite() => return Ok(vec![Some(1), Some(0)]),
        2 if (bd(0) + bd(1)).is_finite() => return Ok(vec![None, None]),
        _ => {}
    }
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let w = dist(i, j);
            if w.is_finite() {
                edges.push((i, j, w));
            }
        }
        let w = bd(i);
        if w.is_finite() {
            edges.push((i, k + i, w));
        }
        for j in i + 1..k {
            edges.push((k + i, k + j, 0.0));
        }
    }
    let max_w = edges.iter().map(|e| e.2).fold(0.0, f64::max);
    let offset = (max_w * WEIGHT_SCALE).round() as i128 + 1;
    let mut g: UnGraph<(), i128> = UnGraph::with_capacity(2 * k, edges.len());
    for _ in 0..2 * k {
        g.add_node(());
    }
    // The matcher resolves equal-weight optima in hash order, so every edge
    // gets a cell-keyed perturbation whose total over a matching stays below
    // one weight quantum. The optimum is then unique with high probability
    // and never changes the quantised cost.
    let key = |x: usize| -> u64 {
        if x < k {
            p.defects[group[x]] as u64
        } else {
            p.defects[group[x - k]] as u64 | 1 << 40
        }
    };
    let jitter = (1i128 << 32) / (k as i128 + 1);
    for &(a, b, w) in &edges {
        let (ka, kb) = (key(a).min(key(b)), key(a).max(key(b)));
        let t = splitmix64(ka.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ kb) as i128 % jitter;
        let quantised = offset - (w * WEIGHT_SCALE).round() as i128;
        g.add_edge(NodeIndex::new(a), NodeIndex::new(b), (quantised << 32) + t);
    }
    let matching = max_weight_matching(&g, true, |e| Ok::<i128, Infallible>(*e.weight()), false)
        .unwrap_or_else(|e| match e {});
    if matching.len() != k {
        return Err(Error::DecodeFailure(format!(
            "only {} of {} matching pairs found",
            matching.len(),
            k
        )));
    }
    let mut partner = vec![None; k];
    for (a, b) in matching {
        let (a, b) = (a.min(b), a.max(b));
        if b < k {
            partner[a] = Some(b);
            partner[b] = Some(a);
        }
    }
    Ok(partner)
}

/// Shortest paths between defects and to the boundaries, then an exact
/// blossom matching in which every defect owns a private boundary copy.
/// Defects that share no path are matched independently.
pub fn decode(p: &MatchingProblem) -> Result<Correction> {
    let mut flips = vec![false; p.weights.len()];
    let mut weight = 0.0;
    for group in p.defect_groups() {
        let paths: Vec<Paths> = group.iter().map(|&i| p.dijkstra(p.defects[i])).collect();
        let partner = match_group(p, &group, &paths)?;
        for (a, other) in partner.iter().enumerate() {
            match *other {
                Some(b) if a < b => {
                    weight += paths[a].0[p.defects[group[b]]];
                    trace(&paths[a].1, p.defects[group[b]], &mut flips);
                }
                Some(_) => {}
                None => {
                    let (w, node) = p.boundary_distance(&paths[a]);
                    if !w.is_finite() {
                        return Err(Error::DecodeFailure(format!("defect at cell {} is isolated", p.defects[group[a]])));
                    }
                    weight += w;
                    trace(&paths[a].1, node, &mut flips);
                }
            }
        }
    }
    let qubits = flips.iter().enumerate().filter(|(_, &f)| f).map(|(i, _)| i).collect();
    Ok(Correction { qubits, weight })
}

/// Exhaustive minimum over all ways to pair defects with each other or a
/// boundary, using the same shortest-path distances. Exponential; meant for
/// a handful of defects.
pub fn brute_force_weight(p: &MatchingProblem) -> Option<f64> {
    let k = p.defects.len();
    let dists: Vec<Vec<f64>> = p.defects.iter().map(|&d| p.dijkstra(d).0).collect();
    let to_boundary: Vec<f64> = dists.iter().map(|d| d[p.num_cells].min(d[p.num_cells + 1])).collect();
    fn go(used: &mut Vec<bool>, dists: &[Vec<f64>], defects: &[usize], tb: &[f64]) -> f64 {
        let Some(i) = used.iter().position(|u| !u) else {
            return 0.0;
        };
        used[i] = true;
        let mut best = tb[i] + go(used, dists, defects, tb);
        for j in i + 1..used.len() {
            if !used[j] {
                used[j] = true;
                best = best.min(dists[i][defects[j]] + go(used, dists, defects, tb));
                used[j] = false;
            }
        }
        used[i] = false;
        best
    }
    let best = go(&mut vec![false; k], &dists, &p.defects, &to_boundary);
    best.is_finite().then_some(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights() {
        assert_eq!(qubit_weight(0.5), Some(0.0));
        assert!((qubit_weight(0.1).unwrap() - 9f64.ln()).abs() < 1e-12);
        assert_eq!(qubit_weight(0.0), None);
        assert_eq!(qubit_weight(1e-13), None);
    }
}
