//! Generators for extremal and near-extremal k-critical graphs.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::coloring::{forcing, ForcingRelation};
use crate::graph::{io, vertex_connectivity};
use crate::ore::compose;
use crate::{check_k, Error, Graph, Result, VertexSplit};

/// Composes `g` with `K_k` at vertex 0: the edge from 0 to its largest
/// neighbor is replaced, and vertex 0 of `K_k` splits into
/// `{1..k-2}` and `{k-1}`.
pub fn extend_with_complete(g: &Graph, k: usize) -> Result<Graph> {
    check_k(k)?;
    let hub = 0;
    g.check_vertex(hub)?;
    let far = g
        .neighbors(hub)
        .iter()
        .last()
        .ok_or_else(|| Error::Precondition("vertex 0 is isolated".into()))?;
    compose(g, (hub, far), &Graph::complete(k), &VertexSplit::new(0, 1..k - 1, [k - 1]))
}

/// `j` copies of `K_k` chained by composition.
pub fn gallai_chain(k: usize, j: usize) -> Result<Graph> {
    check_k(k)?;
    if j == 0 {
        return Err(Error::InvalidArgument("a chain needs at least one copy".into()));
    }
    let mut g = Graph::complete(k);
    for _ in 1..j {
        g = extend_with_complete(&g, k)?;
    }
    Ok(g)
}

/// `H_{k,t}`: two copies of `K_{k-1}` on `u_1..u_{k-1}` and
/// `v_1..v_{k-1}`, a complete bipartite join between the first `t` of each,
/// and a vertex `w` adjacent to the remaining `u_i` and `v_i`.
///
/// Vertices are `u_i = i-1`, `v_i = k-2+i`, `w = 2k-2`.
pub fn hkt(k: usize, t: usize) -> Result<Graph> {
    check_k(k)?;
    if t == 0 || 2 * t >= k {
        return Err(Error::InvalidArgument(format!("H_{{k,t}} needs 1 <= t < k/2 (k = {k}, t = {t})")));
    }
    let side = k - 1;
    let u = |i: usize| i - 1;
    let v = |i: usize| side + i - 1;
    let w = 2 * side;
    let mut edges = Vec::new();
    for i in 1..=side {
        for j in i + 1..=side {
            edges.push((u(i), u(j)));
            edges.push((v(i), v(j)));
        }
    }
    for i in 1..=t {
        for j in 1..=t {
            edges.push((u(i), v(j)));
        }
    }
    for i in t + 1..=side {
        edges.push((w, u(i)));
        edges.push((w, v(i)));
    }
    let labels = (1..=side)
        .map(|i| format!("u{i}"))
        .chain((1..=side).map(|i| format!("v{i}")))
        .chain(["w".to_string()])
        .collect();
    Graph::from_edges(2 * side + 1, &edges)?.with_labels(labels)
}

/// Toft's extension. Requires that every `(k-1)`-coloring of `G - uv`
/// gives `u`, `v` and `w` one color. Deletes `uv`, adds a `K_{k-1}` split
/// into parts of the given sizes, and joins the parts to `u`, `v`, `w`.
///
/// `g` is assumed k-critical; the coloring precondition and 3-connectivity
/// are checked.
pub fn toft_extend(g: &Graph, k: usize, e: (usize, usize), w: usize, sizes: (usize, usize, usize)) -> Result<Graph> {
    check_k(k)?;
    let (u, v) = e;
    g.check_vertex(w)?;
    if !g.has_edge(u, v) {
        return Err(Error::MissingEdge(u, v));
    }
    if w == u || w == v {
        return Err(Error::InvalidArgument("w must differ from both ends of e".into()));
    }
    let (s1, s2, s3) = sizes;
    if s1 == 0 || s2 == 0 || s3 == 0 {
        return Err(Error::InvalidArgument("every part of the clique must be nonempty".into()));
    }
    if s1 + s2 + s3 != k - 1 {
        return Err(Error::InvalidArgument(format!(
            "part sizes {s1} + {s2} + {s3} must add up to k - 1 = {}",
            k - 1
        )));
    }
    let kappa = vertex_connectivity(g).kappa;
    if kappa < 3 {
        return Err(Error::Precondition(format!("input is only {kappa}-connected")));
    }
    let h = g.delete_edge(u, v)?;
    for (a, b) in [(u, v), (u, w)] {
        let report = forcing(&h, k - 1, a, b)?;
        if report.relation != ForcingRelation::AlwaysEqual {
            let detail = match report.distinct_witness {
                Some(c) => format!("coloring {:?} gives {a} and {b} different colors", c.as_slice()),
                None => format!("G - e has no {}-coloring", k - 1),
            };
            return Err(Error::Precondition(format!("forcing fails for ({a}, {b}): {detail}")));
        }
    }
    let mut out = h;
    let base = out.n();
    let labelled = g.labels().is_some();
    let xs: Vec<usize> = (0..k - 1)
        .map(|i| out.push_vertex(labelled.then(|| format!("x{}", base + i))))
        .collect();
    for (i, &a) in xs.iter().enumerate() {
        for &b in &xs[i + 1..] {
            out.link(a, b);
        }
        let anchor = if i < s1 {
            u
        } else if i < s1 + s2 {
            v
        } else {
            w
        };
        out.link(anchor, a);
    }
    Ok(out)
}

/// A starting graph for the 3-connected family together with a subgraph
/// `H'` that forces `u` and `w` to share a color.
#[derive(Clone, Debug)]
pub struct GkSeed {
    pub graph: Graph,
    pub u: usize,
    pub w: usize,
    /// Edges of `graph` outside `H'`.
    pub removed: Vec<(usize, usize)>,
    pub provenance: &'static str,
}

const SEED_4: &str = include_str!("../data/gk4_seed.txt");
const SEED_5: &str = include_str!("../data/gk5_seed.txt");

fn parse_seed(text: &str, provenance: &'static str) -> Result<GkSeed> {
    let graph = io::parse_edge_list(text)?;
    let mut u = None;
    let mut w = None;
    let mut removed = Vec::new();
    for line in text.lines() {
        let Some(rest) = line.strip_prefix("# ") else { continue };
        let fields: Vec<&str> = rest.split_whitespace().collect();
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse { line: 0, msg: format!("bad seed field {s}") })
        };
        match fields.as_slice() {
            ["u", x] => u = Some(num(x)?),
            ["w", x] => w = Some(num(x)?),
            ["removed", a, b] => removed.push((num(a)?, num(b)?)),
            _ => {}
        }
    }
    let missing = || Error::Precondition("seed file lacks u or w".into());
    Ok(GkSeed {
        graph,
        u: u.ok_or_else(missing)?,
        w: w.ok_or_else(missing)?,
        removed,
        provenance,
    })
}

/// The seed for `k`: `H_{k,2}` with `H' = H_{k,2} - {u_1v_1, u_1v_2}` when
/// `k ≥ 6`, otherwise a graph found by exhaustive search.
pub fn gk_seed(k: usize) -> Result<GkSeed> {
    check_k(k)?;
    match k {
        4 => parse_seed(SEED_4, "exhaustive search: 3-connected 4-critical, n = 8, m = 13"),
        5 => parse_seed(SEED_5, "exhaustive search: 3-connected 5-critical, n = 10, m = 22"),
        _ => Ok(GkSeed {
            graph: hkt(k, 2)?,
            u: 0,
            w: 2 * k - 2,
            removed: vec![(0, k - 1), (0, k)],
            provenance: "H_{k,2}",
        }),
    }
}

/// Iterates Toft's extension from a seed. The first item is the seed itself;
/// each later item extends the previous one along [`GkFamily::next_edge`].
pub struct GkFamily {
    k: usize,
    last: Option<Graph>,
    seed: Option<Graph>,
    u: usize,
    w: usize,
    forcing_subgraph: HashSet<(usize, usize)>,
}

impl GkFamily {
    pub fn new(k: usize) -> Result<GkFamily> {
        Ok(GkFamily::from_seed(k, gk_seed(k)?))
    }

    pub fn from_seed(k: usize, seed: GkSeed) -> GkFamily {
        let removed: HashSet<(usize, usize)> = seed.removed.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        let forcing_subgraph = seed.graph.edges().into_iter().filter(|e| !removed.contains(e)).collect();
        GkFamily {
            k,
            last: None,
            seed: Some(seed.graph),
            u: seed.u,
            w: seed.w,
            forcing_subgraph,
        }
    }

    /// Lexicographically first edge at `u` outside `H'` and away from `w`.
    pub fn next_edge(&self, g: &Graph) -> Option<(usize, usize)> {
        let u = self.u;
        g.neighbors(u)
            .iter()
            .filter(|&a| a != self.w)
            .map(|a| (u.min(a), u.max(a)))
            .filter(|e| !self.forcing_subgraph.contains(e))
            .min()
    }

    fn extend(&self, g: &Graph) -> Result<Graph> {
        let (a, b) = self
            .next_edge(g)
            .ok_or_else(|| Error::Precondition("no edge available for the next extension".into()))?;
        let other = if a == self.u { b } else { a };
        toft_extend(g, self.k, (self.u, other), self.w, (self.k - 3, 1, 1))
    }
}

impl Iterator for GkFamily {
    type Item = Result<Graph>;

    fn next(&mut self) -> Option<Result<Graph>> {
        let next = match (self.seed.take(), self.last.take()) {
            (Some(seed), _) => Ok(seed),
            (None, Some(last)) => self.extend(&last),
            (None, None) => return None,
        };
        if let Ok(g) = &next {
            self.last = Some(g.clone());
        }
        Some(next)
    }
}

/// The member of the family after `steps` extensions.
pub fn gk_iterate(k: usize, steps: usize) -> Result<Graph> {
    GkFamily::new(k)?.nth(steps).expect("family is unbounded until an error")
}

/// `K_{k+1}` minus a triangle `{a, b, c}`, plus a disjoint `K_{k-1}` whose
/// vertices are split into three nonempty parts joined by a matching-like
/// rule: every vertex of part `i` gets one edge to the `i`-th triangle vertex.
///
/// Order `2k`, size `k^2 - 3`. Vertices `0, 1, 2` are `a, b, c`.
pub fn triangle_split(k: usize, parts: (usize, usize, usize)) -> Result<Graph> {
    check_k(k)?;
    let (p, q, r) = parts;
    if k < 4 || p == 0 || q == 0 || r == 0 || p + q + r != k - 1 {
        return Err(Error::InvalidArgument(format!(
            "parts {parts:?} must be positive and sum to k - 1 = {}",
            k - 1
        )));
    }
    let n = 2 * k;
    let core = |i: usize| 3 + i;
    let clique = |i: usize| k + 1 + i;
    let mut edges = Vec::new();
    for i in 0..k - 2 {
        for t in 0..3 {
            edges.push((t, core(i)));
        }
        for j in i + 1..k - 2 {
            edges.push((core(i), core(j)));
        }
    }
    for i in 0..k - 1 {
        for j in i + 1..k - 1 {
            edges.push((clique(i), clique(j)));
        }
        let t = if i < p { 0 } else if i < p + q { 1 } else { 2 };
        edges.push((t, clique(i)));
    }
    let labels = ["a", "b", "c"]
        .into_iter()
        .map(String::from)
        .chain((1..=k - 2).map(|i| format!("x{i}")))
        .chain((1..k).map(|i| format!("y{i}")))
        .collect();
    Graph::from_edges(n, &edges)?.with_labels(labels)
}

/// A reproducible description of a construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConstructionSpec {
    GallaiChain { k: usize, j: usize },
    Toft { k: usize, edge: (usize, usize), w: usize, sizes: (usize, usize, usize) },
    Hkt { k: usize, t: usize },
    GkIterate { k: usize, steps: usize },
    TriangleSplit { k: usize, parts: (usize, usize, usize) },
}

impl ConstructionSpec {
    /// Builds the graph. `Toft` applies to `input`, the other kinds ignore it.
    pub fn build(&self, input: Option<&Graph>) -> Result<Graph> {
        match *self {
            ConstructionSpec::GallaiChain { k, j } => gallai_chain(k, j),
            ConstructionSpec::Hkt { k, t } => hkt(k, t),
            ConstructionSpec::GkIterate { k, steps } => gk_iterate(k, steps),
            ConstructionSpec::TriangleSplit { k, parts } => triangle_split(k, parts),
            ConstructionSpec::Toft { k, edge, w, sizes } => {
                let g = input.ok_or_else(|| Error::InvalidArgument("Toft's extension needs an input graph".into()))?;
                toft_extend(g, k, edge, w, sizes)
            }
        }
    }

    pub fn seed_provenance(&self) -> Option<&'static str> {
        match *self {
            ConstructionSpec::GkIterate { k, .. } => gk_seed(k).ok().map(|s| s.provenance),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::is_critical;
    use crate::ore::recognize;
    use crate::potential::rho_full;

    #[test]
    fn chain_examples() {
        assert!(gallai_chain(4, 1).unwrap().is_complete_of_order(4));
        let g = gallai_chain(4, 2).unwrap();
        assert_eq!((g.n(), g.m()), (7, 11));
        let g = gallai_chain(5, 3).unwrap();
        assert_eq!((g.n(), g.m()), (13, 28));
        assert_eq!(rho_full(&g, 5).unwrap(), 10);
        assert!(recognize(&g, 5).unwrap().is_yes());
        assert!(gallai_chain(4, 0).is_err());
    }

    #[test]
    fn hkt_examples() {
        let g = hkt(6, 2).unwrap();
        assert_eq!((g.n(), g.m()), (11, 30));
        assert_eq!(rho_full(&g, 6).unwrap(), 8);
        assert_eq!(g.label(0), "u1");
        assert_eq!(g.label(10), "w");
        let g = hkt(5, 1).unwrap();
        assert_eq!((g.n(), g.m()), (9, 19));
        assert!(recognize(&g, 5).unwrap().is_yes());
        assert!(hkt(6, 3).is_err());
        assert!(hkt(6, 0).is_err());
    }

    #[test]
    fn triangle_split_is_critical() {
        for k in 4..=7 {
            for p in 1..k - 2 {
                for q in 1..k - 1 - p {
                    let g = triangle_split(k, (p, q, k - 1 - p - q)).unwrap();
                    assert_eq!((g.n(), g.m()), (2 * k, k * k - 3));
                    assert!(is_critical(&g, k).unwrap(), "k = {k}, parts ({p}, {q})");
                    assert!(vertex_connectivity(&g).kappa >= 3);
                }
            }
        }
        let g4 = io::from_graph6("G@U^FC").unwrap();
        assert!(crate::graph::is_isomorphic(&triangle_split(4, (1, 1, 1)).unwrap(), &g4).unwrap());
        let g5 = io::from_graph6("I@]xeFBow").unwrap();
        assert!(crate::graph::is_isomorphic(&triangle_split(5, (2, 1, 1)).unwrap(), &g5).unwrap());
        assert!(triangle_split(5, (4, 0, 0)).is_err());
        assert!(triangle_split(5, (1, 1, 1)).is_err());
    }

    #[test]
    fn toft_on_h62() {
        let g = hkt(6, 2).unwrap();
        let out = toft_extend(&g, 6, (0, 5), 10, (3, 1, 1)).unwrap();
        assert_eq!((out.n(), out.m()), (16, 44));
        assert_eq!(rho_full(&out, 6).unwrap(), 8);
        assert!(is_critical(&out, 6).unwrap());
        assert!(toft_extend(&g, 6, (0, 5), 10, (4, 1, 0)).is_err());
        // e = u1u2 lies inside H', where u1 and w are not forced together
        assert!(toft_extend(&g, 6, (0, 1), 10, (3, 1, 1)).is_err());
    }

    #[test]
    fn family_edges_are_reproducible() {
        let fam = GkFamily::new(6).unwrap();
        let g = hkt(6, 2).unwrap();
        assert_eq!(fam.next_edge(&g), Some((0, 5)));
        let g2 = gk_iterate(6, 2).unwrap();
        assert_eq!(g2.n(), 21);
        assert_eq!(rho_full(&g2, 6).unwrap(), 8);
    }

    #[test]
    fn small_k_seeds() {
        for (k, parts) in [(4, (1, 1, 1)), (5, (2, 1, 1))] {
            let seed = gk_seed(k).unwrap();
            assert!(crate::graph::is_isomorphic(&seed.graph, &triangle_split(k, parts).unwrap()).unwrap());
            assert!(is_critical(&seed.graph, k).unwrap());
            let h = seed.graph.delete_edge(seed.removed[0].0, seed.removed[0].1).unwrap();
            assert_eq!(forcing(&h, k - 1, seed.u, seed.w).unwrap().relation, ForcingRelation::AlwaysEqual);
        }
        let g = gk_iterate(4, 1).unwrap();
        assert_eq!((g.n(), g.m(), rho_full(&g, 4).unwrap()), (11, 18, 2));
        let g = gk_iterate(4, 3).unwrap();
        assert_eq!((g.n(), g.m(), rho_full(&g, 4).unwrap()), (17, 28, 2));
        assert!(is_critical(&g, 4).unwrap());
        assert!(vertex_connectivity(&g).kappa >= 3);
        let g = gk_iterate(5, 2).unwrap();
        assert_eq!((g.n(), g.m(), rho_full(&g, 5).unwrap()), (18, 40, 4));
        assert!(is_critical(&g, 5).unwrap());
    }

    #[test]
    fn spec_roundtrip() {
        let spec = ConstructionSpec::Hkt { k: 6, t: 2 };
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"kind":"hkt","k":6,"t":2}"#);
        let back: ConstructionSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back.build(None).unwrap().m(), 30);
    }
}
