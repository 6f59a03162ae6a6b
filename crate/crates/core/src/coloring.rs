//! Exact colorability and the coloring-based structure tests built on it.
//!
//! The solver is a DSATUR-ordered backtracking search over bitset color
//! classes. Colors are introduced in order (a vertex may only open color
//! `used + 1`), which removes the permutation symmetry among color classes
//! and makes an exhausted search a proof of uncolorability.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::graph::{separating_pairs, Graph, VertexSet};
use crate::potential::{rho, vertex_potential};
use crate::{check_k, Error, Limits, Result};

/// A color assignment with colors numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring(Vec<usize>);

impl Coloring {
    pub fn new(colors: Vec<usize>) -> Self {
        Coloring(colors)
    }

    pub fn color(&self, v: usize) -> usize {
        self.0[v]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// No edge is monochromatic and every color is at least 1.
    pub fn is_proper(&self, g: &Graph) -> bool {
        self.0.len() == g.n()
            && self.0.iter().all(|&c| c >= 1)
            && g.edges().iter().all(|&(u, v)| self.0[u] != self.0[v])
    }

    pub fn colors_used(&self) -> usize {
        let mut seen: Vec<usize> = self.0.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

impl Serialize for Coloring {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (v, c) in self.0.iter().enumerate() {
            map.serialize_entry(&v.to_string(), c)?;
        }
        map.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Colorable { witness: Coloring },
    /// Exhausted search; `search_nodes` is the deterministic node count.
    Uncolorable { search_nodes: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColoringCertificate {
    pub budget: usize,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub colors_used: usize,
}

impl ColoringCertificate {
    pub fn is_colorable(&self) -> bool {
        matches!(self.verdict, Verdict::Colorable { .. })
    }

    pub fn witness(&self) -> Option<&Coloring> {
        match &self.verdict {
            Verdict::Colorable { witness } => Some(witness),
            Verdict::Uncolorable { .. } => None,
        }
    }

    pub fn into_witness(self) -> Option<Coloring> {
        match self.verdict {
            Verdict::Colorable { witness } => Some(witness),
            Verdict::Uncolorable { .. } => None,
        }
    }
}

fn check_limits(n: usize, c: usize) -> Result<()> {
    let limits = Limits::get();
    let limit = if c <= 6 { limits.coloring } else { limits.coloring_wide };
    Limits::check("exact coloring", n, limit)
}

/// Decides whether `g` has a proper `c`-coloring.
pub fn colorable(g: &Graph, c: usize) -> Result<ColoringCertificate> {
    let n = g.n();
    if c == 0 {
        return Err(Error::InvalidArgument("color budget must be at least 1".into()));
    }
    if c >= n {
        let witness = Coloring((1..=n).collect());
        return Ok(ColoringCertificate {
            budget: c,
            colors_used: n,
            verdict: Verdict::Colorable { witness },
        });
    }
    check_limits(n, c)?;
    let mut solver = Solver::new(g, c);
    let found = solver.run();
    let verdict = if found {
        let witness = Coloring(solver.color.iter().map(|&c| c as usize).collect());
        debug_assert!(witness.is_proper(g));
        Verdict::Colorable { witness }
    } else {
        Verdict::Uncolorable {
            search_nodes: solver.nodes,
        }
    };
    let colors_used = match &verdict {
        Verdict::Colorable { witness } => witness.colors_used(),
        Verdict::Uncolorable { .. } => 0,
    };
    Ok(ColoringCertificate {
        budget: c,
        verdict,
        colors_used,
    })
}

pub fn is_colorable(g: &Graph, c: usize) -> Result<bool> {
    Ok(colorable(g, c)?.is_colorable())
}

pub fn chromatic_number(g: &Graph) -> Result<usize> {
    if g.n() == 0 {
        return Ok(0);
    }
    let mut c = 1;
    loop {
        if colorable(g, c)?.is_colorable() {
            return Ok(c);
        }
        c += 1;
    }
}

struct Solver<'a> {
    g: &'a Graph,
    budget: usize,
    color: Vec<u8>,
    classes: Vec<VertexSet>,
    uncolored: VertexSet,
    nodes: u64,
}

impl<'a> Solver<'a> {
    fn new(g: &'a Graph, budget: usize) -> Self {
        Solver {
            g,
            budget,
            color: vec![0; g.n()],
            classes: vec![VertexSet::new(); budget],
            uncolored: g.vertices(),
            nodes: 0,
        }
    }

    fn run(&mut self) -> bool {
        if greedy_clique_size(self.g) > self.budget {
            return false;
        }
        self.search(0)
    }

    fn search(&mut self, used: usize) -> bool {
        if self.uncolored.is_empty() {
            return true;
        }
        self.nodes += 1;
        let mut pick: Option<(usize, usize, usize, u128)> = None;
        for v in self.uncolored.iter() {
            let nb = self.g.neighbors(v);
            let mut forbidden = 0u128;
            for (c, class) in self.classes[..used].iter().enumerate() {
                if nb.intersects(class) {
                    forbidden |= 1 << c;
                }
            }
            let sat = forbidden.count_ones() as usize;
            if sat == self.budget {
                return false;
            }
            let deg = nb.intersection_len(&self.uncolored);
            let better = match pick {
                None => true,
                Some((_, s, d, _)) => sat > s || (sat == s && deg > d),
            };
            if better {
                pick = Some((v, sat, deg, forbidden));
            }
        }
        let (v, _, _, forbidden) = pick.expect("uncolored vertex exists");
        let open = (used + 1).min(self.budget);
        self.uncolored.remove(v);
        for c in 0..open {
            if forbidden >> c & 1 == 1 {
                continue;
            }
            self.color[v] = c as u8 + 1;
            self.classes[c].insert(v);
            if self.search(used.max(c + 1)) {
                return true;
            }
            self.classes[c].remove(v);
        }
        self.color[v] = 0;
        self.uncolored.insert(v);
        false
    }
}

/// Size of a clique found greedily by repeatedly taking the max-degree candidate.
fn greedy_clique_size(g: &Graph) -> usize {
    let mut best = 0;
    for start in 0..g.n() {
        let mut clique = 1;
        let mut cand = g.neighbors(start);
        while let Some(v) = cand
            .iter()
            .max_by_key(|&v| (g.neighbors(v).intersection_len(&cand), std::cmp::Reverse(v)))
        {
            clique += 1;
            cand = cand.intersection(&g.neighbors(v));
        }
        best = best.max(clique);
    }
    best
}

/// Proper `(k-1)`-coloring of `G - e` for one edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeWitness {
    pub edge: (usize, usize),
    pub coloring: Coloring,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CriticalityObstruction {
    /// The graph itself has a `(k-1)`-coloring.
    Colorable { coloring: Coloring },
    /// Deleting this edge leaves a graph that is still not `(k-1)`-colorable.
    RedundantEdge { edge: (usize, usize) },
    /// An isolated vertex can be deleted without changing colorability.
    IsolatedVertex { vertex: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalityReport {
    pub k: usize,
    /// The graph is not `(k-1)`-colorable.
    pub is_k_chromatic: bool,
    pub is_critical: bool,
    /// One witness per edge when the graph is critical.
    pub per_edge: Vec<EdgeWitness>,
    pub obstruction: Option<CriticalityObstruction>,
}

/// Tests k-criticality: not `(k-1)`-colorable while every proper subgraph is.
pub fn check_critical(g: &Graph, k: usize) -> Result<CriticalityReport> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("criticality needs k >= 2, got {k}")));
    }
    let c = k - 1;
    let base = colorable(g, c)?;
    let mut report = CriticalityReport {
        k,
        is_k_chromatic: !base.is_colorable(),
        is_critical: false,
        per_edge: Vec::new(),
        obstruction: None,
    };
    if let Some(coloring) = base.into_witness() {
        report.obstruction = Some(CriticalityObstruction::Colorable { coloring });
        return Ok(report);
    }
    if g.n() > 1 {
        if let Some(v) = (0..g.n()).find(|&v| g.degree(v) == 0) {
            report.obstruction = Some(CriticalityObstruction::IsolatedVertex { vertex: v });
            return Ok(report);
        }
    }
    let witnesses: Vec<Result<(usize, usize, Option<Coloring>)>> = g
        .edges()
        .into_par_iter()
        .map(|(u, v)| {
            let h = g.delete_edge(u, v)?;
            Ok((u, v, colorable(&h, c)?.into_witness()))
        })
        .collect();
    let mut per_edge = Vec::with_capacity(witnesses.len());
    for w in witnesses {
        let (u, v, coloring) = w?;
        match coloring {
            Some(coloring) => per_edge.push(EdgeWitness { edge: (u, v), coloring }),
            None => {
                report.obstruction = Some(CriticalityObstruction::RedundantEdge { edge: (u, v) });
                return Ok(report);
            }
        }
    }
    report.is_critical = true;
    report.per_edge = per_edge;
    Ok(report)
}

pub fn is_critical(g: &Graph, k: usize) -> Result<bool> {
    Ok(check_critical(g, k)?.is_critical)
}

/// How every proper `c`-coloring treats a vertex pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForcingRelation {
    AlwaysEqual,
    AlwaysDistinct,
    Free,
    Uncolorable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForcingReport {
    pub relation: ForcingRelation,
    /// A coloring giving `a` and `b` the same color, if one exists.
    pub equal_witness: Option<Coloring>,
    /// A coloring giving `a` and `b` different colors, if one exists.
    pub distinct_witness: Option<Coloring>,
}

/// Classifies `(a, b)` over all proper `c`-colorings with two solver calls:
/// one on `g` with `a, b` glued, one on `g + ab`.
pub fn forcing(g: &Graph, c: usize, a: usize, b: usize) -> Result<ForcingReport> {
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    if a == b {
        return Err(Error::InvalidArgument("forcing needs two distinct vertices".into()));
    }
    let equal_witness = if g.has_edge(a, b) {
        None
    } else {
        let (glued, map) = g.identify_vertices(a, b)?;
        colorable(&glued, c)?
            .into_witness()
            .map(|w| Coloring((0..g.n()).map(|v| w.color(map[v])).collect()))
    };
    let distinct_witness = if g.has_edge(a, b) {
        colorable(g, c)?.into_witness()
    } else {
        colorable(&g.add_edge(a, b)?, c)?.into_witness()
    };
    let relation = match (&equal_witness, &distinct_witness) {
        (Some(_), Some(_)) => ForcingRelation::Free,
        (Some(_), None) => ForcingRelation::AlwaysEqual,
        (None, Some(_)) => ForcingRelation::AlwaysDistinct,
        (None, None) => ForcingRelation::Uncolorable,
    };
    Ok(ForcingReport {
        relation,
        equal_witness,
        distinct_witness,
    })
}

pub fn forcing_relation(g: &Graph, c: usize, a: usize, b: usize) -> Result<ForcingRelation> {
    Ok(forcing(g, c, a, b)?.relation)
}

/// Sides of a two-cut `{x, y}` of a k-critical graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoCutSides {
    /// Side (including `x, y`) on which every `(k-1)`-coloring agrees on `x, y`.
    pub quasi_vertex: VertexSet,
    /// Side (including `x, y`) on which every `(k-1)`-coloring separates `x, y`.
    pub quasi_edge: VertexSet,
}

/// Forcing relation of `x, y` inside `G[side]`.
fn side_relation(g: &Graph, c: usize, side: &VertexSet, x: usize, y: usize) -> Result<ForcingRelation> {
    let (sub, order) = g.induced(side);
    let pos = |v| order.iter().position(|&w| w == v).expect("border vertex in side");
    forcing_relation(&sub, c, pos(x), pos(y))
}

/// Labels the two sides of a two-cut of a k-critical graph as quasi-vertex
/// and quasi-edge.
pub fn classify_two_cut(g: &Graph, k: usize, x: usize, y: usize) -> Result<TwoCutSides> {
    check_k(k)?;
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    let err = |msg: String| Error::TwoCut { x, y, msg };
    if x == y {
        return Err(err("border vertices must differ".into()));
    }
    if g.has_edge(x, y) {
        return Err(err("border vertices are adjacent, but a two-cut of a critical graph is independent".into()));
    }
    let mut rest = g.vertices();
    rest.remove(x);
    rest.remove(y);
    let comps = g.components_within(&rest);
    match comps.len() {
        0 | 1 => return Err(err("not a separating set".into())),
        2 => {}
        c => {
            return Err(err(format!(
                "G - x - y has {c} components, but a critical graph leaves exactly two"
            )))
        }
    }
    if !is_critical(g, k)? {
        return Err(err(format!("graph is not {k}-critical")));
    }
    let border: VertexSet = [x, y].into_iter().collect();
    let sides = [comps[0].union(&border), comps[1].union(&border)];
    let rel = [
        side_relation(g, k - 1, &sides[0], x, y)?,
        side_relation(g, k - 1, &sides[1], x, y)?,
    ];
    use ForcingRelation::*;
    match rel {
        [AlwaysEqual, AlwaysDistinct] => Ok(TwoCutSides {
            quasi_vertex: sides[0],
            quasi_edge: sides[1],
        }),
        [AlwaysDistinct, AlwaysEqual] => Ok(TwoCutSides {
            quasi_vertex: sides[1],
            quasi_edge: sides[0],
        }),
        other => Err(err(format!("sides force {other:?}, expected one equal and one distinct"))),
    }
}

/// Clusters: classes of degree-`(k-1)` vertices with equal closed neighborhoods.
pub fn clusters(g: &Graph, k: usize) -> Vec<VertexSet> {
    let mut groups: BTreeMap<Vec<usize>, VertexSet> = BTreeMap::new();
    for v in (0..g.n()).filter(|&v| g.degree(v) + 1 == k) {
        let mut closed = g.neighbors(v);
        closed.insert(v);
        groups.entry(closed.to_vec()).or_default().insert(v);
    }
    let mut out: Vec<VertexSet> = groups.into_values().collect();
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StandardSet {
    pub set: VertexSet,
    pub x: usize,
    pub y: usize,
}

/// Tests the quasi-`xy`-vertex conditions on `G[set]` with `k-1` colors:
/// colorable, `x` and `y` always equal, and every edge deletion admits a
/// coloring separating them.
pub fn is_quasi_vertex(g: &Graph, k: usize, set: &VertexSet, x: usize, y: usize) -> Result<bool> {
    let (sub, order) = g.induced(set);
    let pos = |v| order.iter().position(|&w| w == v);
    let (Some(px), Some(py)) = (pos(x), pos(y)) else {
        return Ok(false);
    };
    if forcing_relation(&sub, k - 1, px, py)? != ForcingRelation::AlwaysEqual {
        return Ok(false);
    }
    for (u, v) in sub.edges() {
        let h = sub.delete_edge(u, v)?;
        if forcing(&h, k - 1, px, py)?.distinct_witness.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All standard sets: potential `(k+1)(k-2)`, spanned by a two-cut and one
/// component of its complement, and a quasi-vertex for that cut.
pub fn find_standard_sets(g: &Graph, k: usize) -> Result<Vec<StandardSet>> {
    check_k(k)?;
    check_limits(g.n(), k - 1)?;
    let target = vertex_potential(k);
    let mut out = Vec::new();
    for (x, y) in separating_pairs(g) {
        let mut rest = g.vertices();
        rest.remove(x);
        rest.remove(y);
        for comp in g.components_within(&rest) {
            let mut set = comp;
            set.insert(x);
            set.insert(y);
            if rho(g, k, &set)? != target {
                continue;
            }
            if is_quasi_vertex(g, k, &set, x, y)? {
                out.push(StandardSet { set, x, y });
            }
        }
    }
    out.sort_by_key(|a| (a.x, a.y, a.set));
    Ok(out)
}
