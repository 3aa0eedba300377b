//! Exact ground truth for the understanding tasks and the three polynomial
//! reasoning tasks, plus exhaustive oracles used to cross-check them.

mod flow;
mod isomorphism;
pub mod oracle;

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{HyperedgeId, Hypergraph, VertexId};

pub use flow::EdmondsKarp;
pub use isomorphism::solve_ism;

/// A minimum-weight hyperedge route together with its weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Route {
    pub total_weight: u64,
    pub witness: Vec<HyperedgeId>,
}

/// Outcome of an order-weighted shortest path query; `None` when unreachable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathResult {
    pub route: Option<Route>,
}

impl PathResult {
    pub fn reachable(&self) -> bool {
        self.route.is_some()
    }

    pub fn total_weight(&self) -> Option<u64> {
        self.route.as_ref().map(|r| r.total_weight)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowResult {
    pub value: u64,
}

pub fn solve_vc(h: &Hypergraph) -> usize {
    h.num_vertices()
}

pub fn solve_hec(h: &Hypergraph) -> usize {
    h.num_edges()
}

pub fn solve_ne(h: &Hypergraph, u: VertexId) -> Result<BTreeSet<VertexId>> {
    h.neighbors(u)
}

/// Number of vertices whose degree is exactly `d`.
pub fn solve_dvc(h: &Hypergraph, d: usize) -> usize {
    h.degree_profile().degrees.into_iter().filter(|&x| x == d).count()
}

/// Number of hyperedges whose order is exactly `k`.
pub fn solve_oec(h: &Hypergraph, k: usize) -> usize {
    h.edges().iter().filter(|e| e.len() == k).count()
}

pub fn solve_one(h: &Hypergraph, u: VertexId, k: usize) -> Result<BTreeSet<VertexId>> {
    h.neighbors_filtered(u, k)
}

pub(crate) fn check_endpoints(h: &Hypergraph, s: VertexId, t: VertexId) -> Result<()> {
    h.check_vertex(s)?;
    h.check_vertex(t)?;
    if s == t {
        return Err(Error::contract(format!("source and target are both {s}")));
    }
    Ok(())
}

/// Hyperedge adjacency: `adj[e]` lists the hyperedges sharing a vertex with `e`.
pub(crate) fn edge_adjacency(h: &Hypergraph) -> Vec<Vec<usize>> {
    let m = h.num_edges();
    let mut adj = vec![Vec::new(); m];
    for a in 0..m {
        for b in a + 1..m {
            if intersection_size(&h.edges()[a], &h.edges()[b]) > 0 {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
    }
    adj
}

/// Size of the intersection of two ascending vertex lists.
pub(crate) fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Order-weighted shortest path from `s` to `t`.
///
/// A route is a hyperedge sequence whose first hyperedge contains `s`, whose
/// last contains `t`, and whose consecutive hyperedges share a vertex; its
/// weight is the sum of the hyperedge orders. Dijkstra runs on the hyperedge
/// adjacency graph with node cost `|e|`. Keys are `(weight, id sequence)`, so
/// among equal-weight routes the lexicographically smallest is returned.
pub fn solve_osp(h: &Hypergraph, s: VertexId, t: VertexId) -> Result<PathResult> {
    check_endpoints(h, s, t)?;
    let adj = edge_adjacency(h);
    let mut settled = vec![false; h.num_edges()];
    let mut heap = BinaryHeap::new();
    for &e in h.incident_edges(s)? {
        heap.push(Reverse((h.edges()[e].len() as u64, vec![e])));
    }
    while let Some(Reverse((weight, path))) = heap.pop() {
        let last = *path.last().expect("routes are nonempty");
        if std::mem::replace(&mut settled[last], true) {
            continue;
        }
        if h.edge_contains(last, t.0) {
            return Ok(PathResult {
                route: Some(Route {
                    total_weight: weight,
                    witness: path.into_iter().map(HyperedgeId).collect(),
                }),
            });
        }
        for &next in &adj[last] {
            if !settled[next] {
                let mut extended = path.clone();
                extended.push(next);
                heap.push(Reverse((weight + h.edges()[next].len() as u64, extended)));
            }
        }
    }
    Ok(PathResult { route: None })
}

/// Order-weighted maximum flow from `s` to `t` on the incidence network.
///
/// One node per vertex and one per hyperedge; every membership `v ∈ e` is an
/// undirected link of capacity `|e|`, i.e. two opposite arcs of capacity `|e|`.
pub fn solve_omf(h: &Hypergraph, s: VertexId, t: VertexId) -> Result<FlowResult> {
    check_endpoints(h, s, t)?;
    let n = h.num_vertices();
    let mut network = EdmondsKarp::new(n + h.num_edges());
    for (j, edge) in h.edges().iter().enumerate() {
        let cap = edge.len() as u64;
        for &v in edge {
            network.add_undirected(v, n + j, cap);
        }
    }
    Ok(FlowResult {
        value: network.max_flow(s.0, t.0),
    })
}

/// Sum of the orders of the hyperedges containing `v`, the capacity leaving `v`.
pub fn incident_capacity(h: &Hypergraph, v: VertexId) -> Result<u64> {
    Ok(h.incident_edges(v)?
        .iter()
        .map(|&e| h.edges()[e].len() as u64)
        .sum())
}
