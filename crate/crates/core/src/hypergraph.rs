//! Hypergraph data model and the structural queries every other module uses.
//!
//! A [`Hypergraph`] is a vertex count plus an ordered list of hyperedges.
//! Vertex and hyperedge ids are dense and 0-based; externally they are always
//! written `v<i>` and `e<j>`. Each hyperedge is stored with its vertices in
//! ascending order and must contain at least two distinct vertices. Duplicate
//! hyperedges (same vertex set under different ids) are allowed.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HyperedgeId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for HyperedgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// Per-vertex degrees and per-hyperedge orders, recomputed from scratch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    pub degrees: Vec<usize>,
    pub orders: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "HypergraphJson", into = "HypergraphJson")]
pub struct Hypergraph {
    num_vertices: usize,
    edges: Vec<Vec<usize>>,
    // incidence[v] = ascending ids of hyperedges containing v
    incidence: Vec<Vec<usize>>,
}

/// Canonical JSON shape: `{"n": <int>, "edges": [[<int>, ...], ...]}`.
#[derive(Serialize, Deserialize)]
struct HypergraphJson {
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl TryFrom<HypergraphJson> for Hypergraph {
    type Error = Error;

    fn try_from(raw: HypergraphJson) -> Result<Self> {
        Hypergraph::new(raw.n, raw.edges)
    }
}

impl From<Hypergraph> for HypergraphJson {
    fn from(h: Hypergraph) -> Self {
        HypergraphJson {
            n: h.num_vertices,
            edges: h.edges,
        }
    }
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.num_vertices == other.num_vertices && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

impl Hash for Hypergraph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num_vertices.hash(state);
        self.edges.hash(state);
    }
}

impl Hypergraph {
    /// Builds a hypergraph, sorting the vertices of every hyperedge.
    ///
    /// Rejects an empty vertex set, hyperedges with fewer than two vertices,
    /// repeated vertices inside one hyperedge and out-of-range vertex ids.
    pub fn new(num_vertices: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if num_vertices == 0 {
            return Err(Error::InvalidHypergraph(
                "a hypergraph needs at least one vertex".into(),
            ));
        }
        let mut incidence = vec![Vec::new(); num_vertices];
        let mut sorted_edges = Vec::with_capacity(edges.len());
        for (j, mut edge) in edges.into_iter().enumerate() {
            edge.sort_unstable();
            if edge.len() < 2 {
                return Err(Error::InvalidHypergraph(format!(
                    "hyperedge e{j} has order {}, minimum is 2",
                    edge.len()
                )));
            }
            if edge.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidHypergraph(format!(
                    "hyperedge e{j} repeats a vertex"
                )));
            }
            if let Some(&v) = edge.last().filter(|&&v| v >= num_vertices) {
                return Err(Error::VertexOutOfRange {
                    index: v,
                    count: num_vertices,
                });
            }
            for &v in &edge {
                incidence[v].push(j);
            }
            sorted_edges.push(edge);
        }
        Ok(Hypergraph {
            num_vertices,
            edges: sorted_edges,
            incidence,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.num_vertices).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = HyperedgeId> {
        (0..self.edges.len()).map(HyperedgeId)
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.0 < self.num_vertices {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                index: v.0,
                count: self.num_vertices,
            })
        }
    }

    pub fn check_edge(&self, e: HyperedgeId) -> Result<()> {
        if e.0 < self.edges.len() {
            Ok(())
        } else {
            Err(Error::EdgeOutOfRange {
                index: e.0,
                count: self.edges.len(),
            })
        }
    }

    pub fn edge(&self, e: HyperedgeId) -> Result<&[usize]> {
        self.check_edge(e)?;
        Ok(&self.edges[e.0])
    }

    /// Ids of the hyperedges containing `v`, ascending.
    pub fn incident_edges(&self, v: VertexId) -> Result<&[usize]> {
        self.check_vertex(v)?;
        Ok(&self.incidence[v.0])
    }

    pub fn edge_contains(&self, e: usize, v: usize) -> bool {
        self.edges[e].binary_search(&v).is_ok()
    }

    pub fn degree(&self, v: VertexId) -> Result<usize> {
        Ok(self.incident_edges(v)?.len())
    }

    pub fn order(&self, e: HyperedgeId) -> Result<usize> {
        Ok(self.edge(e)?.len())
    }

    pub fn neighbors(&self, u: VertexId) -> Result<BTreeSet<VertexId>> {
        self.neighbors_filtered(u, 2)
    }

    /// Neighbors of `u` reachable through hyperedges of order at least `min_order`.
    pub fn neighbors_filtered(&self, u: VertexId, min_order: usize) -> Result<BTreeSet<VertexId>> {
        if min_order < 2 {
            return Err(Error::contract(format!(
                "minimum order must be at least 2, got {min_order}"
            )));
        }
        let mut out = BTreeSet::new();
        for &j in self.incident_edges(u)? {
            let edge = &self.edges[j];
            if edge.len() >= min_order {
                out.extend(edge.iter().filter(|&&v| v != u.0).map(|&v| VertexId(v)));
            }
        }
        Ok(out)
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        DegreeProfile {
            degrees: self.incidence.iter().map(Vec::len).collect(),
            orders: self.edges.iter().map(Vec::len).collect(),
        }
    }

    /// Connected components as ascending vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.num_vertices];
        let mut components = Vec::new();
        for root in 0..self.num_vertices {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut members = vec![root];
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &j in &self.incidence[u] {
                    for &w in &self.edges[j] {
                        if !seen[w] {
                            seen[w] = true;
                            members.push(w);
                            queue.push_back(w);
                        }
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }

    /// True when every vertex is reachable from v0 through shared hyperedges.
    pub fn is_connected(&self) -> bool {
        // a lone vertex has no incident hyperedge, so it counts as isolated
        self.num_vertices > 1 && self.components().len() == 1
    }

    /// Clique expansion: every co-occurring vertex pair `(u, v)` with `u < v`,
    /// mapped to the ascending ids of the hyperedges containing both.
    pub fn co_occurrences(&self) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut pairs: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (j, edge) in self.edges.iter().enumerate() {
            for (a, &u) in edge.iter().enumerate() {
                for &v in &edge[a + 1..] {
                    pairs.entry((u, v)).or_default().push(j);
                }
            }
        }
        pairs
    }

    /// Applies a vertex relabeling `map[old] = new` and keeps the hyperedge order.
    pub fn relabel(&self, map: &[usize]) -> Result<Hypergraph> {
        check_permutation(map, self.num_vertices)?;
        let edges = self
            .edges
            .iter()
            .map(|e| e.iter().map(|&v| map[v]).collect())
            .collect();
        Hypergraph::new(self.num_vertices, edges)
    }

    pub fn from_json(text: &str) -> Result<Hypergraph> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("hypergraph serialization is infallible")
    }

    /// Parses the hMETIS-style text format: a header line
    /// `<num_edges> <num_vertices>` followed by one line of 1-based vertex ids
    /// per hyperedge. Lines starting with `%` are comments. An optional third
    /// header field must be `0` (unweighted).
    pub fn parse_hmetis(text: &str) -> Result<Hypergraph> {
        let mut lines = text
            .split_inclusive('\n')
            .scan(0usize, |offset, line| {
                let start = *offset;
                *offset += line.len();
                Some((start, line.trim()))
            })
            .filter(|(_, line)| !line.is_empty() && !line.starts_with('%'));

        let (header_pos, header) = lines
            .next()
            .ok_or_else(|| Error::parse(0, "missing header line"))?;
        let fields = parse_numbers(header, header_pos)?;
        let (num_edges, num_vertices) = match fields.as_slice() {
            [m, n] => (*m, *n),
            [m, n, 0] => (*m, *n),
            [_, _, fmt] => {
                return Err(Error::parse(
                    header_pos,
                    format!("weighted hMETIS format {fmt} is not supported"),
                ))
            }
            _ => return Err(Error::parse(header_pos, "header must be `<num_edges> <num_vertices>`")),
        };

        let mut edges = Vec::with_capacity(num_edges);
        for (pos, line) in lines {
            if edges.len() == num_edges {
                return Err(Error::parse(pos, "more hyperedge lines than declared"));
            }
            let ids = parse_numbers(line, pos)?;
            let edge = ids
                .into_iter()
                .map(|id| {
                    if id == 0 || id > num_vertices {
                        Err(Error::parse(pos, format!("vertex id {id} outside 1..={num_vertices}")))
                    } else {
                        Ok(id - 1)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            edges.push(edge);
        }
        if edges.len() != num_edges {
            return Err(Error::parse(
                text.len(),
                format!("declared {num_edges} hyperedges, found {}", edges.len()),
            ));
        }
        Hypergraph::new(num_vertices, edges)
    }

    pub fn to_hmetis(&self) -> String {
        let mut out = format!("{} {}\n", self.edges.len(), self.num_vertices);
        for edge in &self.edges {
            let line: Vec<String> = edge.iter().map(|v| (v + 1).to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

fn parse_numbers(line: &str, pos: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::parse(pos, format!("expected a non-negative integer, found `{tok}`")))
        })
        .collect()
}

pub(crate) fn check_permutation(map: &[usize], n: usize) -> Result<()> {
    if map.len() != n {
        return Err(Error::contract(format!(
            "permutation has length {}, expected {n}",
            map.len()
        )));
    }
    let mut seen = vec![false; n];
    for &x in map {
        if x >= n || std::mem::replace(&mut seen[x], true) {
            return Err(Error::contract("vertex map is not a permutation"));
        }
    }
    Ok(())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    /// The five-vertex, three-hyperedge hypergraph used throughout the examples.
    pub(crate) fn h_star() -> Hypergraph {
        Hypergraph::new(5, vec![vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 4]]).unwrap()
    }

    fn vs(ids: &[usize]) -> BTreeSet<VertexId> {
        ids.iter().map(|&v| VertexId(v)).collect()
    }

    #[test]
    fn degree_examples() {
        let h = h_star();
        assert_eq!(h.degree(VertexId(2)).unwrap(), 3);
        assert_eq!(h.degree(VertexId(0)).unwrap(), 1);
        let single = Hypergraph::new(2, vec![vec![0, 1]]).unwrap();
        assert_eq!(single.degree(VertexId(0)).unwrap(), 1);
        assert!(matches!(
            h.degree(VertexId(5)),
            Err(Error::VertexOutOfRange { index: 5, count: 5 })
        ));
    }

    #[test]
    fn order_examples() {
        let h = h_star();
        assert_eq!(h.order(HyperedgeId(0)).unwrap(), 3);
        assert_eq!(h.order(HyperedgeId(2)).unwrap(), 3);
        let pair = Hypergraph::new(2, vec![vec![1, 0]]).unwrap();
        assert_eq!(pair.order(HyperedgeId(0)).unwrap(), 2);
        assert!(matches!(h.order(HyperedgeId(3)), Err(Error::EdgeOutOfRange { .. })));
    }

    #[test]
    fn neighbor_examples() {
        let h = h_star();
        assert_eq!(h.neighbors(VertexId(4)).unwrap(), vs(&[2, 3]));
        assert_eq!(h.neighbors(VertexId(2)).unwrap(), vs(&[0, 1, 3, 4]));
        let isolated = Hypergraph::new(5, vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert!(isolated.neighbors(VertexId(4)).unwrap().is_empty());
        assert!(h.neighbors(VertexId(9)).is_err());
    }

    #[test]
    fn filtered_neighbor_examples() {
        let h = h_star();
        assert_eq!(h.neighbors_filtered(VertexId(4), 3).unwrap(), vs(&[2, 3]));
        assert!(h.neighbors_filtered(VertexId(4), 4).unwrap().is_empty());
        assert!(h.neighbors_filtered(VertexId(4), 1).is_err());
    }

    #[test]
    fn connectivity_examples() {
        assert!(h_star().is_connected());
        let split = Hypergraph::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert!(!split.is_connected());
        let whole = Hypergraph::new(6, vec![(0..6).collect()]).unwrap();
        assert!(whole.is_connected());
        let lonely = Hypergraph::new(1, vec![]).unwrap();
        assert!(!lonely.is_connected());
    }

    #[test]
    fn rejects_malformed_edges() {
        assert!(Hypergraph::new(0, vec![]).is_err());
        assert!(Hypergraph::new(3, vec![vec![0]]).is_err());
        assert!(Hypergraph::new(3, vec![vec![0, 0]]).is_err());
        assert!(matches!(
            Hypergraph::new(3, vec![vec![0, 3]]),
            Err(Error::VertexOutOfRange { index: 3, count: 3 })
        ));
        // duplicates are fine
        assert_eq!(
            Hypergraph::new(3, vec![vec![0, 1], vec![1, 0]]).unwrap().num_edges(),
            2
        );
    }

    #[test]
    fn json_shape() {
        let h = h_star();
        assert_eq!(h.to_json(), r#"{"n":5,"edges":[[0,1,2],[1,2,3],[2,3,4]]}"#);
        assert_eq!(Hypergraph::from_json(&h.to_json()).unwrap(), h);
        assert!(Hypergraph::from_json(r#"{"n":2,"edges":[[0]]}"#).is_err());
    }

    #[test]
    fn hmetis_ingestion() {
        let text = "% comment\n3 5\n1 2 3\n2 3 4\n\n3 4 5\n";
        assert_eq!(Hypergraph::parse_hmetis(text).unwrap(), h_star());
        assert_eq!(Hypergraph::parse_hmetis(&h_star().to_hmetis()).unwrap(), h_star());
        assert!(Hypergraph::parse_hmetis("2 5\n1 2\n").is_err());
        assert!(Hypergraph::parse_hmetis("1 5\n0 2\n").is_err());
        assert!(Hypergraph::parse_hmetis("1 5 1\n1 2\n").is_err());
        let err = Hypergraph::parse_hmetis("1 5\n1 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { position: 4, .. }), "{err}");
    }

    pub(crate) fn arb_hypergraph(max_n: usize, max_m: usize) -> impl Strategy<Value = Hypergraph> {
        (2..=max_n).prop_flat_map(move |n| {
            let edge = proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 2..=n.min(6));
            proptest::collection::vec(edge, 0..=max_m)
                .prop_map(move |edges| Hypergraph::new(n, edges).unwrap())
        })
    }

    proptest! {
        #[test]
        fn neighbor_symmetry(h in arb_hypergraph(10, 12)) {
            for u in h.vertices() {
                let nu = h.neighbors(u).unwrap();
                prop_assert!(!nu.contains(&u));
                for v in &nu {
                    prop_assert!(h.neighbors(*v).unwrap().contains(&u));
                }
            }
        }

        #[test]
        fn handshake_and_profile(h in arb_hypergraph(10, 12)) {
            let profile = h.degree_profile();
            prop_assert_eq!(profile.degrees.iter().sum::<usize>(), profile.orders.iter().sum::<usize>());
            for v in h.vertices() {
                let brute = h.edges().iter().filter(|e| e.contains(&v.0)).count();
                prop_assert_eq!(h.degree(v).unwrap(), brute);
                prop_assert_eq!(profile.degrees[v.0], brute);
            }
            for e in h.edge_ids() {
                prop_assert_eq!(h.order(e).unwrap(), profile.orders[e.0]);
            }
        }

        #[test]
        fn filtering_is_monotone(h in arb_hypergraph(10, 12), a in 2usize..7, b in 2usize..7) {
            let (lo, hi) = (a.min(b), a.max(b));
            for u in h.vertices() {
                let wide = h.neighbors_filtered(u, lo).unwrap();
                let narrow = h.neighbors_filtered(u, hi).unwrap();
                prop_assert!(narrow.is_subset(&wide));
                prop_assert_eq!(h.neighbors_filtered(u, 2).unwrap(), h.neighbors(u).unwrap());
            }
        }
    }
}
