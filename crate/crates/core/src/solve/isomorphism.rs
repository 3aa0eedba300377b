use std::collections::BTreeMap;

use crate::hypergraph::Hypergraph;

/// Decides whether a vertex bijection maps `a`'s hyperedge multiset exactly
/// onto `b`'s.
///
/// Vertices are first partitioned by colour refinement on the incidence
/// structure, seeded with degree and hyperedge order (so the first round is the
/// `(degree, incident orders)` signature). Backtracking then maps vertices
/// class by class, pruning on pairwise co-occurrence counts and on partially
/// mapped hyperedges, and finishes with a multiset comparison.
pub fn solve_ism(a: &Hypergraph, b: &Hypergraph) -> bool {
    if a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges() {
        return false;
    }
    let mut orders_a: Vec<usize> = a.edges().iter().map(Vec::len).collect();
    let mut orders_b: Vec<usize> = b.edges().iter().map(Vec::len).collect();
    orders_a.sort_unstable();
    orders_b.sort_unstable();
    if orders_a != orders_b {
        return false;
    }

    let Some((colors_a, colors_b)) = refine(a, b) else {
        return false;
    };

    let search = Search::new(a, b, colors_a, colors_b);
    search.run()
}

/// Joint colour refinement. Returns `None` as soon as the colour histograms of
/// the two hypergraphs differ.
fn refine(a: &Hypergraph, b: &Hypergraph) -> Option<(Vec<usize>, Vec<usize>)> {
    let init_v = |h: &Hypergraph| h.degree_profile().degrees;
    let init_e = |h: &Hypergraph| h.degree_profile().orders;
    let (mut va, mut vb) = (init_v(a), init_v(b));
    let (mut ea, mut eb) = (init_e(a), init_e(b));
    if histogram(&va) != histogram(&vb) {
        return None;
    }
    let mut classes = distinct(&va);
    loop {
        // hyperedge colours from member vertex colours
        let esig = |h: &Hypergraph, v: &[usize], e: &[usize]| -> Vec<(usize, Vec<usize>)> {
            h.edges()
                .iter()
                .enumerate()
                .map(|(j, edge)| {
                    let mut members: Vec<usize> = edge.iter().map(|&x| v[x]).collect();
                    members.sort_unstable();
                    (e[j], members)
                })
                .collect()
        };
        let (sa, sb) = (esig(a, &va, &ea), esig(b, &vb, &eb));
        let (na, nb) = relabel_jointly(&sa, &sb);
        ea = na;
        eb = nb;
        if histogram(&ea) != histogram(&eb) {
            return None;
        }

        // vertex colours from incident hyperedge colours
        let vsig = |h: &Hypergraph, v: &[usize], e: &[usize]| -> Vec<(usize, Vec<usize>)> {
            (0..h.num_vertices())
                .map(|x| {
                    let mut inc: Vec<usize> = h
                        .incident_edges(crate::hypergraph::VertexId(x))
                        .expect("vertex in range")
                        .iter()
                        .map(|&j| e[j])
                        .collect();
                    inc.sort_unstable();
                    (v[x], inc)
                })
                .collect()
        };
        let (sa, sb) = (vsig(a, &va, &ea), vsig(b, &vb, &eb));
        let (na, nb) = relabel_jointly(&sa, &sb);
        va = na;
        vb = nb;
        if histogram(&va) != histogram(&vb) {
            return None;
        }
        let next = distinct(&va);
        if next == classes {
            return Some((va, vb));
        }
        classes = next;
    }
}

fn relabel_jointly<T: Ord + Clone>(a: &[T], b: &[T]) -> (Vec<usize>, Vec<usize>) {
    let mut ids: BTreeMap<T, usize> = BTreeMap::new();
    for sig in a.iter().chain(b) {
        ids.entry(sig.clone()).or_insert(0);
    }
    for (i, v) in ids.values_mut().enumerate() {
        *v = i;
    }
    (
        a.iter().map(|s| ids[s]).collect(),
        b.iter().map(|s| ids[s]).collect(),
    )
}

fn histogram(colors: &[usize]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for &c in colors {
        *h.entry(c).or_insert(0) += 1;
    }
    h
}

fn distinct(colors: &[usize]) -> usize {
    histogram(colors).len()
}

fn co_occurrence_matrix(h: &Hypergraph) -> Vec<Vec<u32>> {
    let n = h.num_vertices();
    let mut m = vec![vec![0u32; n]; n];
    for edge in h.edges() {
        for &u in edge {
            for &w in edge {
                if u != w {
                    m[u][w] += 1;
                }
            }
        }
    }
    m
}

struct Search<'a> {
    a: &'a Hypergraph,
    b: &'a Hypergraph,
    colors_a: Vec<usize>,
    colors_b: Vec<usize>,
    pair_a: Vec<Vec<u32>>,
    pair_b: Vec<Vec<u32>>,
    // b-hyperedges grouped by order, for partial-edge pruning
    b_by_order: BTreeMap<usize, Vec<usize>>,
    b_multiset: BTreeMap<Vec<usize>, usize>,
    order: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(a: &'a Hypergraph, b: &'a Hypergraph, colors_a: Vec<usize>, colors_b: Vec<usize>) -> Self {
        let mut b_by_order: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut b_multiset = BTreeMap::new();
        for (j, edge) in b.edges().iter().enumerate() {
            b_by_order.entry(edge.len()).or_default().push(j);
            *b_multiset.entry(edge.clone()).or_insert(0) += 1;
        }
        let pair_a = co_occurrence_matrix(a);
        let order = assignment_order(&colors_a, &pair_a);
        Search {
            a,
            b,
            pair_b: co_occurrence_matrix(b),
            pair_a,
            colors_a,
            colors_b,
            b_by_order,
            b_multiset,
            order,
        }
    }

    fn run(&self) -> bool {
        let n = self.a.num_vertices();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.extend(0, &mut map, &mut used)
    }

    fn extend(&self, depth: usize, map: &mut [usize], used: &mut [bool]) -> bool {
        if depth == self.order.len() {
            return self.full_check(map);
        }
        let u = self.order[depth];
        for cand in 0..self.b.num_vertices() {
            if used[cand] || self.colors_b[cand] != self.colors_a[u] {
                continue;
            }
            let pairs_ok = self.order[..depth]
                .iter()
                .all(|&w| self.pair_a[u][w] == self.pair_b[cand][map[w]]);
            if !pairs_ok {
                continue;
            }
            map[u] = cand;
            used[cand] = true;
            if self.partial_edges_ok(u, map) && self.extend(depth + 1, map, used) {
                return true;
            }
            used[cand] = false;
            map[u] = usize::MAX;
        }
        false
    }

    /// Every hyperedge of `a` through `u` must have its mapped part inside some
    /// equal-order hyperedge of `b`.
    fn partial_edges_ok(&self, u: usize, map: &[usize]) -> bool {
        let incident = self
            .a
            .incident_edges(crate::hypergraph::VertexId(u))
            .expect("vertex in range");
        incident.iter().all(|&j| {
            let edge = &self.a.edges()[j];
            let image: Vec<usize> = edge
                .iter()
                .filter(|&&x| map[x] != usize::MAX)
                .map(|&x| map[x])
                .collect();
            self.b_by_order[&edge.len()]
                .iter()
                .any(|&k| image.iter().all(|&y| self.b.edge_contains(k, y)))
        })
    }

    fn full_check(&self, map: &[usize]) -> bool {
        let mut image: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for edge in self.a.edges() {
            let mut mapped: Vec<usize> = edge.iter().map(|&x| map[x]).collect();
            mapped.sort_unstable();
            *image.entry(mapped).or_insert(0) += 1;
        }
        image == self.b_multiset
    }
}

/// Rarest colour class first, then greedily the vertex with the most
/// already-ordered co-occurring partners.
fn assignment_order(colors: &[usize], pair: &[Vec<u32>]) -> Vec<usize> {
    let n = colors.len();
    let hist = histogram(colors);
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let links = order.iter().filter(|&&w| pair[v][w] > 0).count();
                (links, std::cmp::Reverse(hist[&colors[v]]), std::cmp::Reverse(v))
            })
            .expect("unplaced vertex exists");
        placed[next] = true;
        order.push(next);
    }
    order
}
