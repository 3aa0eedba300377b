use std::collections::VecDeque;

#[derive(Clone, Debug)]
struct Arc {
    to: usize,
    residual: u64,
}

/// Shortest-augmenting-path maximum flow on a small residual network.
///
/// Arcs are stored in pairs so that `arc ^ 1` is always the reverse arc.
#[derive(Clone, Debug)]
pub struct EdmondsKarp {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl EdmondsKarp {
    pub fn new(nodes: usize) -> Self {
        EdmondsKarp {
            arcs: Vec::new(),
            out: vec![Vec::new(); nodes],
        }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: u64) {
        self.push_pair(from, to, cap, 0);
    }

    /// An undirected link: both directions carry `cap`.
    pub fn add_undirected(&mut self, a: usize, b: usize, cap: u64) {
        self.push_pair(a, b, cap, cap);
    }

    fn push_pair(&mut self, a: usize, b: usize, forward: u64, backward: u64) {
        self.out[a].push(self.arcs.len());
        self.arcs.push(Arc { to: b, residual: forward });
        self.out[b].push(self.arcs.len());
        self.arcs.push(Arc { to: a, residual: backward });
    }

    /// Runs to completion and returns the flow value. Consumes residual capacity.
    pub fn max_flow(&mut self, source: usize, sink: usize) -> u64 {
        if source == sink {
            return 0;
        }
        let nodes = self.out.len();
        let mut total = 0;
        loop {
            // BFS for a shortest augmenting path, remembering the arc used to enter each node
            let mut via: Vec<Option<usize>> = vec![None; nodes];
            let mut visited = vec![false; nodes];
            visited[source] = true;
            let mut queue = VecDeque::from([source]);
            'bfs: while let Some(u) = queue.pop_front() {
                for &a in &self.out[u] {
                    let arc = &self.arcs[a];
                    if arc.residual > 0 && !visited[arc.to] {
                        visited[arc.to] = true;
                        via[arc.to] = Some(a);
                        if arc.to == sink {
                            break 'bfs;
                        }
                        queue.push_back(arc.to);
                    }
                }
            }
            if !visited[sink] {
                return total;
            }

            let mut bottleneck = u64::MAX;
            let mut node = sink;
            while let Some(a) = via[node] {
                bottleneck = bottleneck.min(self.arcs[a].residual);
                node = self.arcs[a ^ 1].to;
            }
            let mut node = sink;
            while let Some(a) = via[node] {
                self.arcs[a].residual -= bottleneck;
                self.arcs[a ^ 1].residual += bottleneck;
                node = self.arcs[a ^ 1].to;
            }
            total += bottleneck;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_directed_network() {
        // CLRS figure 26.1: max flow 23
        let mut g = EdmondsKarp::new(6);
        for (a, b, c) in [
            (0, 1, 16),
            (0, 2, 13),
            (2, 1, 4),
            (1, 3, 12),
            (3, 2, 9),
            (2, 4, 14),
            (4, 3, 7),
            (3, 5, 20),
            (4, 5, 4),
        ] {
            g.add_arc(a, b, c);
        }
        assert_eq!(g.max_flow(0, 5), 23);
    }

    #[test]
    fn undirected_links_carry_flow_both_ways() {
        let mut g = EdmondsKarp::new(3);
        g.add_undirected(2, 1, 5);
        g.add_undirected(1, 0, 3);
        assert_eq!(g.clone().max_flow(0, 2), 3);
        assert_eq!(g.max_flow(2, 0), 3);
    }
}
