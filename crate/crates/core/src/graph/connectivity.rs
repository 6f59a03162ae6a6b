use std::collections::VecDeque;

use serde::Serialize;

use super::{Graph, VertexSet};

/// Vertex connectivity with a minimum separating set when one exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Connectivity {
    pub kappa: usize,
    /// A minimum separating set; `None` for complete graphs.
    pub cut: Option<VertexSet>,
    /// Components of `G - cut`.
    pub components: Vec<VertexSet>,
}

/// Computes κ(G) with unit-capacity max-flow between nonadjacent pairs.
///
/// Only pairs `(v_i, v_j)` with `i ≤ κ` need checking: some vertex among the
/// first κ+1 avoids a minimum cut, and all lower-indexed vertices lie in it.
pub fn vertex_connectivity(g: &Graph) -> Connectivity {
    let n = g.n();
    let comps = g.components();
    if comps.len() > 1 {
        return Connectivity {
            kappa: 0,
            cut: Some(VertexSet::new()),
            components: comps,
        };
    }
    let mut best = n.saturating_sub(1);
    let mut best_cut = None;
    let mut net = FlowNet::new(g);
    let mut i = 0;
    while i < n && i <= best {
        for j in i + 1..n {
            if g.has_edge(i, j) {
                continue;
            }
            let flow = net.max_flow(i, j, best);
            if flow < best || best_cut.is_none() {
                best = flow;
                best_cut = Some(net.min_cut(i));
            }
        }
        i += 1;
    }
    match best_cut {
        None => Connectivity {
            kappa: n.saturating_sub(1),
            cut: None,
            components: Vec::new(),
        },
        Some(cut) => {
            let components = g.components_within(&g.vertices().difference(&cut));
            debug_assert_eq!(cut.len(), best);
            Connectivity {
                kappa: best,
                cut: Some(cut),
                components,
            }
        }
    }
}

/// All separating pairs `{x, y}` (x < y) in lexicographic order.
pub fn separating_pairs(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.n();
    let all = g.vertices();
    let mut out = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            let mut rest = all;
            rest.remove(x);
            rest.remove(y);
            if !rest.is_empty() && g.components_within(&rest).len() > 1 {
                out.push((x, y));
            }
        }
    }
    out
}

/// Vertex-split flow network: vertex `v` becomes `in = 2v`, `out = 2v + 1`.
struct FlowNet {
    head: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<u32>,
    base: Vec<u32>,
    next: Vec<usize>,
    nodes: usize,
}

const NONE: usize = usize::MAX;

impl FlowNet {
    fn new(g: &Graph) -> FlowNet {
        let nodes = 2 * g.n();
        let mut net = FlowNet {
            head: vec![NONE; nodes],
            to: Vec::new(),
            cap: Vec::new(),
            base: Vec::new(),
            next: Vec::new(),
            nodes,
        };
        for v in 0..g.n() {
            net.arc(2 * v, 2 * v + 1, 1);
        }
        let big = g.n() as u32 + 1;
        for (u, v) in g.edges() {
            net.arc(2 * u + 1, 2 * v, big);
            net.arc(2 * v + 1, 2 * u, big);
        }
        net
    }

    fn arc(&mut self, a: usize, b: usize, c: u32) {
        for (from, to, cap) in [(a, b, c), (b, a, 0)] {
            self.to.push(to);
            self.cap.push(cap);
            self.base.push(cap);
            self.next.push(self.head[from]);
            self.head[from] = self.to.len() - 1;
        }
    }

    /// Number of internally vertex-disjoint s–t paths, stopping at `limit`.
    fn max_flow(&mut self, s: usize, t: usize, limit: usize) -> usize {
        self.cap.copy_from_slice(&self.base);
        let source = 2 * s + 1;
        let sink = 2 * t;
        let mut flow = 0;
        let mut prev = vec![NONE; self.nodes];
        while flow < limit {
            prev.iter_mut().for_each(|p| *p = NONE);
            let mut queue = VecDeque::from([source]);
            let mut seen = vec![false; self.nodes];
            seen[source] = true;
            while let Some(a) = queue.pop_front() {
                if a == sink {
                    break;
                }
                let mut e = self.head[a];
                while e != NONE {
                    let b = self.to[e];
                    if self.cap[e] > 0 && !seen[b] {
                        seen[b] = true;
                        prev[b] = e;
                        queue.push_back(b);
                    }
                    e = self.next[e];
                }
            }
            if !seen[sink] {
                break;
            }
            let mut node = sink;
            while node != source {
                let e = prev[node];
                self.cap[e] -= 1;
                self.cap[e ^ 1] += 1;
                node = self.to[e ^ 1];
            }
            flow += 1;
        }
        flow
    }

    /// Vertices whose internal arc crosses the residual cut from `s`.
    fn min_cut(&self, s: usize) -> VertexSet {
        let source = 2 * s + 1;
        let mut seen = vec![false; self.nodes];
        seen[source] = true;
        let mut stack = vec![source];
        while let Some(a) = stack.pop() {
            let mut e = self.head[a];
            while e != NONE {
                let b = self.to[e];
                if self.cap[e] > 0 && !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
                e = self.next[e];
            }
        }
        (0..self.nodes / 2)
            .filter(|&v| v != s && seen[2 * v] && !seen[2 * v + 1])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_kappa(g: &Graph) -> usize {
        let n = g.n();
        for size in 0..n.saturating_sub(1) {
            for mask in 0u32..(1 << n) {
                if mask.count_ones() as usize != size {
                    continue;
                }
                let cut: VertexSet = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                let rest = g.vertices().difference(&cut);
                if g.components_within(&rest).len() > 1 {
                    return size;
                }
            }
        }
        n.saturating_sub(1)
    }

    #[test]
    fn complete_graphs() {
        for k in 2..7 {
            let c = vertex_connectivity(&Graph::complete(k));
            assert_eq!(c.kappa, k - 1);
            assert!(c.cut.is_none());
        }
    }

    #[test]
    fn cycle_has_kappa_two() {
        let c = vertex_connectivity(&Graph::cycle(5));
        assert_eq!(c.kappa, 2);
        assert_eq!(c.components.len(), 2);
        assert_eq!(c.cut.unwrap().len(), 2);
    }

    #[test]
    fn disconnected_graph() {
        let g = Graph::complete(3).disjoint_union(&Graph::complete(2)).unwrap();
        let c = vertex_connectivity(&g);
        assert_eq!(c.kappa, 0);
        assert_eq!(c.components.len(), 2);
    }

    #[test]
    fn agrees_with_brute_force_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..400 {
            let n = rng.gen_range(2..=8);
            let p: f64 = rng.gen_range(0.2..0.95);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let c = vertex_connectivity(&g);
            assert_eq!(c.kappa, brute_kappa(&g), "{g:?}");
            if let Some(cut) = c.cut {
                assert_eq!(cut.len(), c.kappa);
                let rest = g.vertices().difference(&cut);
                assert!(g.components_within(&rest).len() > 1, "{g:?} cut {cut:?}");
            }
        }
    }

    #[test]
    fn separating_pairs_of_cycle() {
        let pairs = separating_pairs(&Graph::cycle(5));
        assert_eq!(pairs, vec![(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)]);
        assert!(separating_pairs(&Graph::complete(5)).is_empty());
    }
}
