//! Exhaustive reference solvers for small instances (at most 8 vertices and 8
//! hyperedges). They share no code with the fast solvers beyond the hypergraph
//! type itself.

use std::collections::BTreeMap;

use super::{FlowResult, PathResult, Route};
use crate::error::{Error, Result};
use crate::hypergraph::{HyperedgeId, Hypergraph, VertexId};

pub const MAX_ORACLE_VERTICES: usize = 8;
pub const MAX_ORACLE_EDGES: usize = 8;

fn check_size(h: &Hypergraph) -> Result<()> {
    if h.num_vertices() > MAX_ORACLE_VERTICES || h.num_edges() > MAX_ORACLE_EDGES {
        return Err(Error::contract(format!(
            "oracle limited to {MAX_ORACLE_VERTICES} vertices and {MAX_ORACLE_EDGES} hyperedges, got {} and {}",
            h.num_vertices(),
            h.num_edges()
        )));
    }
    Ok(())
}

fn check_pair(h: &Hypergraph, s: VertexId, t: VertexId) -> Result<()> {
    check_size(h)?;
    if s.0 >= h.num_vertices() || t.0 >= h.num_vertices() || s == t {
        return Err(Error::contract("oracle needs two distinct in-range endpoints"));
    }
    Ok(())
}

fn shares_vertex(a: &[usize], b: &[usize]) -> bool {
    a.iter().any(|x| b.contains(x))
}

/// Enumerates every simple hyperedge sequence from `s` to `t` and keeps the
/// lightest, breaking ties by the smallest id sequence.
pub fn oracle_osp(h: &Hypergraph, s: VertexId, t: VertexId) -> Result<PathResult> {
    check_pair(h, s, t)?;
    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut stack = Vec::new();
    let mut used = vec![false; h.num_edges()];
    for first in 0..h.num_edges() {
        if h.edges()[first].contains(&s.0) {
            used[first] = true;
            stack.push(first);
            enumerate_paths(h, t.0, &mut stack, &mut used, &mut best);
            stack.pop();
            used[first] = false;
        }
    }
    Ok(PathResult {
        route: best.map(|(w, seq)| Route {
            total_weight: w,
            witness: seq.into_iter().map(HyperedgeId).collect(),
        }),
    })
}

fn enumerate_paths(
    h: &Hypergraph,
    t: usize,
    stack: &mut Vec<usize>,
    used: &mut [bool],
    best: &mut Option<(u64, Vec<usize>)>,
) {
    let last = *stack.last().unwrap();
    if h.edges()[last].contains(&t) {
        let weight: u64 = stack.iter().map(|&e| h.edges()[e].len() as u64).sum();
        let candidate = (weight, stack.clone());
        if best.as_ref().is_none_or(|b| candidate < *b) {
            *best = Some(candidate);
        }
    }
    for next in 0..h.num_edges() {
        if !used[next] && shares_vertex(&h.edges()[last], &h.edges()[next]) {
            used[next] = true;
            stack.push(next);
            enumerate_paths(h, t, stack, used, best);
            stack.pop();
            used[next] = false;
        }
    }
}

/// Minimum s–t cut over every node bipartition of the incidence network.
pub fn oracle_omf(h: &Hypergraph, s: VertexId, t: VertexId) -> Result<FlowResult> {
    check_pair(h, s, t)?;
    let n = h.num_vertices();
    let total = n + h.num_edges();
    let links: Vec<(usize, usize, u64)> = h
        .edges()
        .iter()
        .enumerate()
        .flat_map(|(j, e)| e.iter().map(move |&v| (v, n + j, e.len() as u64)))
        .collect();
    let free: Vec<usize> = (0..total).filter(|&x| x != s.0 && x != t.0).collect();
    let mut best = u64::MAX;
    for mask in 0u32..(1u32 << free.len()) {
        let mut source_side = vec![false; total];
        source_side[s.0] = true;
        for (bit, &node) in free.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                source_side[node] = true;
            }
        }
        let cut: u64 = links
            .iter()
            .filter(|(a, b, _)| source_side[*a] != source_side[*b])
            .map(|(_, _, c)| c)
            .sum();
        best = best.min(cut);
    }
    Ok(FlowResult { value: best })
}

/// Tries all `|V|!` vertex bijections.
pub fn oracle_ism(a: &Hypergraph, b: &Hypergraph) -> Result<bool> {
    check_size(a)?;
    check_size(b)?;
    if a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges() {
        return Ok(false);
    }
    let target = edge_multiset(b.edges().iter().cloned());
    let mut perm: Vec<usize> = (0..a.num_vertices()).collect();
    Ok(permutations_any(&mut perm, 0, &mut |p| {
        edge_multiset(a.edges().iter().map(|e| e.iter().map(|&v| p[v]).collect())) == target
    }))
}

fn edge_multiset(edges: impl Iterator<Item = Vec<usize>>) -> BTreeMap<Vec<usize>, usize> {
    let mut out = BTreeMap::new();
    for mut e in edges {
        e.sort_unstable();
        *out.entry(e).or_insert(0) += 1;
    }
    out
}

fn permutations_any(perm: &mut Vec<usize>, k: usize, test: &mut impl FnMut(&[usize]) -> bool) -> bool {
    if k == perm.len() {
        return test(perm);
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        if permutations_any(perm, k + 1, test) {
            perm.swap(k, i);
            return true;
        }
        perm.swap(k, i);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::tests::h_star;

    #[test]
    fn oracle_examples() {
        let h = h_star();
        let r = oracle_osp(&h, VertexId(0), VertexId(4)).unwrap().route.unwrap();
        assert_eq!(r.total_weight, 6);
        assert_eq!(oracle_omf(&h, VertexId(0), VertexId(4)).unwrap().value, 3);
        assert_eq!(oracle_omf(&h, VertexId(1), VertexId(3)).unwrap().value, 6);
        assert!(oracle_ism(&h, &h.relabel(&[1, 0, 4, 2, 3]).unwrap()).unwrap());
    }

    #[test]
    fn oracles_reject_large_instances() {
        let big = Hypergraph::new(9, vec![vec![0, 1]]).unwrap();
        assert!(oracle_osp(&big, VertexId(0), VertexId(1)).is_err());
        assert!(oracle_omf(&big, VertexId(0), VertexId(1)).is_err());
        assert!(oracle_ism(&big, &big).is_err());
    }
}
