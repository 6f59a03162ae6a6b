//! Simple undirected graphs on dense vertex indices, stored as bitset rows.
//!
//! Graph values are immutable: every mutation returns a new graph. Operations
//! that remove vertices compact the indices and hand back the renaming map.

mod bitset;
pub(crate) mod canon;
mod connectivity;
pub mod io;

use std::borrow::Cow;

use serde::{Deserialize, Serialize};

pub use bitset::{VertexSet, MAX_VERTICES};
pub use canon::{canonical_form, canonical_labeling, is_isomorphic, CanonicalForm};
pub use connectivity::{separating_pairs, vertex_connectivity, Connectivity};

use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<VertexSet>,
    m: usize,
    labels: Option<Vec<String>>,
}

/// Splits `target` into two nonadjacent vertices with the given neighborhoods.
///
/// `first` stays on the target's index, `second` lands on a new last vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSplit {
    pub target: usize,
    pub first: VertexSet,
    pub second: VertexSet,
}

impl VertexSplit {
    pub fn new(target: usize, first: impl IntoIterator<Item = usize>, second: impl IntoIterator<Item = usize>) -> Self {
        VertexSplit {
            target,
            first: first.into_iter().collect(),
            second: second.into_iter().collect(),
        }
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        g.check_vertex(self.target)?;
        if self.first.is_empty() || self.second.is_empty() {
            return Err(Error::InvalidSplit("both sides must be nonempty".into()));
        }
        if self.first.intersects(&self.second) {
            return Err(Error::InvalidSplit("sides overlap".into()));
        }
        if self.first.union(&self.second) != g.neighbors(self.target) {
            return Err(Error::InvalidSplit(format!(
                "sides do not partition the neighborhood of {}",
                self.target
            )));
        }
        Ok(())
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = v.iter().find(|&&x| x >= MAX_VERTICES) {
            return Err(serde::de::Error::custom(format!("vertex {bad} out of range")));
        }
        Ok(v.into_iter().collect())
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Graph> {
        if n > MAX_VERTICES {
            return Err(Error::Capacity(n));
        }
        Ok(Graph {
            adj: vec![VertexSet::new(); n],
            m: 0,
            labels: None,
        })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if g.has_edge(u, v) {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.link(u, v);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n).expect("complete graph exceeds capacity");
        for u in 0..n {
            g.adj[u] = VertexSet::full(n);
            g.adj[u].remove(u);
        }
        g.m = n * n.saturating_sub(1) / 2;
        g
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycles need at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).expect("valid cycle")
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("valid path")
    }

    /// `K_{1,leaves}` with the center at vertex 0.
    pub fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges).expect("valid star")
    }

    /// Attaches vertex labels. Their count must match `n`.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Graph> {
        if labels.len() != self.n() {
            return Err(Error::InvalidArgument(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Graph {
        self.labels = None;
        self
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<_> = (0..self.n()).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n() {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    /// Number of edges with both ends in `set`.
    pub fn edges_within(&self, set: &VertexSet) -> usize {
        set.iter().map(|v| self.adj[v].intersection_len(set)).sum::<usize>() / 2
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of `v`, falling back to its index.
    pub fn label(&self, v: usize) -> Cow<'_, str> {
        match &self.labels {
            Some(l) => Cow::Borrowed(l[v].as_str()),
            None => Cow::Owned(v.to_string()),
        }
    }

    pub fn labels_or_indices(&self) -> Vec<String> {
        (0..self.n()).map(|v| self.label(v).into_owned()).collect()
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        (0..self.n()).find(|&v| self.label(v) == label)
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    #[inline]
    pub(crate) fn link(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && !self.has_edge(u, v));
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        self.m += 1;
    }

    #[inline]
    pub(crate) fn unlink(&mut self, u: usize, v: usize) {
        debug_assert!(self.has_edge(u, v));
        self.adj[u].remove(v);
        self.adj[v].remove(u);
        self.m -= 1;
    }

    pub(crate) fn push_vertex(&mut self, label: Option<String>) -> usize {
        assert!(self.n() < MAX_VERTICES, "graph exceeds bitset capacity");
        if let Some(labels) = &mut self.labels {
            labels.push(label.unwrap_or_else(|| self.adj.len().to_string()));
        }
        self.adj.push(VertexSet::new());
        self.adj.len() - 1
    }

    /// Checks the simple-graph invariants: symmetric, irreflexive, and `m`
    /// equal to half the degree sum.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        let mut degree_sum = 0;
        for u in 0..n {
            let row = self.adj[u];
            if row.contains(u) {
                return Err(Error::SelfLoop(u));
            }
            if !row.is_subset(&VertexSet::full(n)) {
                return Err(Error::Precondition(format!("row {u} points outside the vertex range")));
            }
            for v in row.iter() {
                if !self.adj[v].contains(u) {
                    return Err(Error::Precondition(format!("asymmetric adjacency {u}->{v}")));
                }
            }
            degree_sum += row.len();
        }
        if degree_sum != 2 * self.m {
            return Err(Error::Precondition(format!(
                "edge count {} does not match degree sum {degree_sum}",
                self.m
            )));
        }
        if let Some(l) = &self.labels {
            if l.len() != n {
                return Err(Error::Precondition("label count mismatch".into()));
            }
        }
        Ok(())
    }

    pub fn delete_edge(&self, u: usize, v: usize) -> Result<Graph> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !self.has_edge(u, v) {
            return Err(Error::MissingEdge(u, v));
        }
        let mut g = self.clone();
        g.unlink(u, v);
        Ok(g)
    }

    pub fn add_edge(&self, u: usize, v: usize) -> Result<Graph> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
        }
        let mut g = self.clone();
        g.link(u, v);
        Ok(g)
    }

    /// Splits a vertex; the graph gains one vertex and keeps its edge count.
    pub fn split_vertex(&self, split: &VertexSplit) -> Result<Graph> {
        split.validate(self)?;
        let z = split.target;
        let mut g = self.clone();
        for v in split.second.iter() {
            g.unlink(z, v);
        }
        let label = self.labels.as_ref().map(|l| format!("{}''", l[z]));
        if let Some(labels) = &mut g.labels {
            labels[z] = format!("{}'", labels[z]);
        }
        let z2 = g.push_vertex(label);
        for v in split.second.iter() {
            g.link(z2, v);
        }
        Ok(g)
    }

    /// Glues two nonadjacent vertices into one adjacent to `N(u) ∪ N(v)`.
    ///
    /// The merged vertex takes the smaller index; the larger index is removed.
    /// Returns the graph together with the old-to-new index map.
    pub fn identify_vertices(&self, u: usize, v: usize) -> Result<(Graph, Vec<usize>)> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::InvalidArgument(format!("cannot identify vertex {u} with itself")));
        }
        if self.has_edge(u, v) {
            return Err(Error::Adjacent(u, v));
        }
        let (keep, drop) = (u.min(v), u.max(v));
        let mut g = self.clone();
        for w in self.adj[drop].difference(&self.adj[keep]).iter() {
            g.link(keep, w);
        }
        if let Some(labels) = &mut g.labels {
            labels[keep] = format!("{}*{}", self.label(u), self.label(v));
        }
        let (g, map) = g.remove_vertices(&VertexSet::singleton(drop));
        let map = map.into_iter().map(|x| x.unwrap_or(keep)).collect();
        Ok((g, map))
    }

    /// Deletes a vertex set, compacting indices.
    ///
    /// `map[old]` is the new index of `old`, or `None` when it was removed.
    pub fn remove_vertices(&self, set: &VertexSet) -> (Graph, Vec<Option<usize>>) {
        let keep = self.vertices().difference(set);
        let (g, new_to_old) = self.induced(&keep);
        let mut map = vec![None; self.n()];
        for (new, &old) in new_to_old.iter().enumerate() {
            map[old] = Some(new);
        }
        (g, map)
    }

    /// Induced subgraph on `set`; `result.1[new]` is the original index.
    pub fn induced(&self, set: &VertexSet) -> (Graph, Vec<usize>) {
        let order: Vec<usize> = set.iter().filter(|&v| v < self.n()).collect();
        let mut pos = vec![usize::MAX; self.n()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut g = Graph::empty(order.len()).expect("subgraph fits");
        for (i, &v) in order.iter().enumerate() {
            for w in self.adj[v].intersection(set).iter() {
                if pos[w] > i {
                    g.link(i, pos[w]);
                }
            }
        }
        if let Some(labels) = &self.labels {
            g.labels = Some(order.iter().map(|&v| labels[v].clone()).collect());
        }
        (g, order)
    }

    /// Renumbers vertices so that old vertex `v` becomes `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n());
        let mut g = Graph::empty(self.n()).expect("same size");
        for (u, v) in self.edges() {
            g.link(perm[u], perm[v]);
        }
        if let Some(labels) = &self.labels {
            let mut out = vec![String::new(); self.n()];
            for (v, l) in labels.iter().enumerate() {
                out[perm[v]] = l.clone();
            }
            g.labels = Some(out);
        }
        g
    }

    /// Disjoint union; the vertices of `other` follow those of `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let n = self.n() + other.n();
        if n > MAX_VERTICES {
            return Err(Error::Capacity(n));
        }
        let mut g = self.clone();
        g.labels = match (&self.labels, &other.labels) {
            (None, None) => None,
            _ => Some(self.labels_or_indices()),
        };
        for v in 0..other.n() {
            let label = g.labels.as_ref().map(|_| other.label(v).into_owned());
            g.push_vertex(label);
        }
        let off = self.n();
        for (u, v) in other.edges() {
            g.link(u + off, v + off);
        }
        Ok(g)
    }

    /// Connected components of the subgraph induced by `within`.
    pub fn components_within(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mut rest = *within;
        let mut out = Vec::new();
        while let Some(s) = rest.first() {
            let mut comp = VertexSet::singleton(s);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VertexSet::new();
                for v in frontier.iter() {
                    next = next.union(&self.adj[v]);
                }
                frontier = next.intersection(within).difference(&comp);
                comp = comp.union(&frontier);
            }
            rest = rest.difference(&comp);
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<VertexSet> {
        self.components_within(&self.vertices())
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    /// True iff `n = k` and every pair is adjacent.
    pub fn is_complete_of_order(&self, k: usize) -> bool {
        self.n() == k && self.m == k * k.saturating_sub(1) / 2
    }

    /// True iff the vertices of `set` are pairwise adjacent.
    pub fn is_clique(&self, set: &VertexSet) -> bool {
        set.iter()
            .all(|v| set.difference(&VertexSet::singleton(v)).is_subset(&self.adj[v]))
    }

    /// Complement graph (labels kept).
    pub fn complement(&self) -> Graph {
        let n = self.n();
        let mut g = self.clone();
        for u in 0..n {
            let mut row = VertexSet::full(n).difference(&self.adj[u]);
            row.remove(u);
            g.adj[u] = row;
        }
        g.m = n * n.saturating_sub(1) / 2 - self.m;
        g
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={}, edges={:?})", self.n(), self.m, self.edges())
    }
}

/// True iff `g` is `K_k`.
pub fn is_isomorphic_to_complete(g: &Graph, k: usize) -> bool {
    g.is_complete_of_order(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Graph {
        Graph::complete(4)
    }

    #[test]
    fn delete_edge_examples() {
        let g = k4().delete_edge(0, 1).unwrap();
        assert_eq!(g.m(), 5);
        g.validate().unwrap();

        let p3 = Graph::path(3).delete_edge(0, 1).unwrap();
        assert_eq!(p3.components().len(), 2);

        let p5 = Graph::cycle(5).delete_edge(2, 3).unwrap();
        assert!(p5.is_connected());
        assert_eq!(p5.degree_sequence(), vec![1, 1, 2, 2, 2]);

        assert!(matches!(k4().delete_edge(0, 0), Err(Error::MissingEdge(0, 0))));
        assert!(matches!(Graph::path(3).delete_edge(0, 2), Err(Error::MissingEdge(0, 2))));
    }

    #[test]
    fn split_vertex_examples() {
        let g = k4().split_vertex(&VertexSplit::new(3, [0], [1, 2])).unwrap();
        g.validate().unwrap();
        assert_eq!((g.n(), g.m()), (5, 6));
        let degrees: Vec<_> = (0..5).map(|v| g.degree(v)).collect();
        assert_eq!(degrees, vec![3, 3, 3, 1, 2]);
        assert_eq!(g.degree_sequence(), vec![1, 2, 3, 3, 3]);
        assert!(!g.has_edge(3, 4));

        let s = Graph::star(4).split_vertex(&VertexSplit::new(0, [1, 2], [3, 4])).unwrap();
        assert_eq!((s.n(), s.m(), s.components().len()), (6, 4, 2));

        let empty_side = VertexSplit::new(3, [], [0, 1, 2]);
        assert!(matches!(k4().split_vertex(&empty_side), Err(Error::InvalidSplit(_))));
        let not_covering = VertexSplit::new(3, [0], [1]);
        assert!(matches!(k4().split_vertex(&not_covering), Err(Error::InvalidSplit(_))));
    }

    #[test]
    fn identify_vertices_examples() {
        let two = Graph::complete(3).disjoint_union(&Graph::complete(3)).unwrap();
        let (bowtie, map) = two.identify_vertices(0, 3).unwrap();
        assert_eq!((bowtie.n(), bowtie.m()), (5, 6));
        assert_eq!(map[3], 0);
        bowtie.validate().unwrap();

        let (g, _) = Graph::path(3).identify_vertices(0, 2).unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));

        let (g, _) = Graph::cycle(4).identify_vertices(0, 2).unwrap();
        assert_eq!((g.n(), g.m()), (3, 2));

        assert!(matches!(k4().identify_vertices(0, 1), Err(Error::Adjacent(0, 1))));
    }

    #[test]
    fn complete_recognition() {
        assert!(is_isomorphic_to_complete(&Graph::complete(5), 5));
        assert!(!is_isomorphic_to_complete(&Graph::complete(5).delete_edge(0, 1).unwrap(), 5));
        assert!(!is_isomorphic_to_complete(&Graph::complete(4), 5));
    }

    #[test]
    fn split_then_identify_restores_graph() {
        let g = Graph::cycle(5);
        let split = g.split_vertex(&VertexSplit::new(0, [1], [4])).unwrap();
        let (back, _) = split.identify_vertices(0, 5).unwrap();
        assert!(is_isomorphic(&back, &g).unwrap());
    }

    #[test]
    fn labels_follow_mutations() {
        let g = Graph::path(3)
            .with_labels(vec!["a".into(), "b".into(), "c".into()])
            .unwrap();
        let (h, _) = g.identify_vertices(0, 2).unwrap();
        assert_eq!(h.labels().unwrap(), &["a*c".to_string(), "b".to_string()]);
        let (sub, order) = g.induced(&[1, 2].into_iter().collect());
        assert_eq!(order, vec![1, 2]);
        assert_eq!(sub.label(0), "b");
    }
}
