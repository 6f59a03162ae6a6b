//! Isomorph-free search for k-critical graphs with prescribed order and size.
//!
//! Graphs are grown one vertex at a time by canonical augmentation: a child
//! is accepted only if removing its canonical deletion vertex (a minimum
//! degree vertex, ties broken by a local invariant and then by canonical
//! position) gives back a graph
//! isomorphic to the parent. Every intermediate graph is an induced subgraph
//! of some target, so it must be `(k-1)`-colorable and must respect the
//! degree and edge budgets of the target.

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use crate::coloring::{check_critical, colorable, is_colorable};
use crate::graph::canon::canonical_labeling_unchecked;
use crate::graph::{vertex_connectivity, CanonicalForm};
use crate::{check_k, Error, Graph, Limits, Result, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FigureQuery {
    pub k: usize,
    pub n: usize,
    /// Exact edge count; `None` accepts any size.
    pub m: Option<usize>,
    pub three_connected: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchStats {
    /// Accepted graphs per order, index = order.
    pub accepted: Vec<u64>,
    /// Children whose canonical form was computed.
    pub canonical_calls: u64,
}

#[derive(Clone, Debug)]
pub struct FigureSearch {
    pub query: FigureQuery,
    /// Pairwise non-isomorphic hits, canonically relabeled, sorted by form.
    pub graphs: Vec<Graph>,
    pub stats: SearchStats,
}

struct Ctx {
    k: usize,
    n: usize,
    m: Option<usize>,
    /// Total allowed degree above `k - 1`, summed over the target.
    excess: usize,
    /// Fewest and most edges an intermediate graph of each order can have.
    floor: Vec<usize>,
    ceiling: Vec<usize>,
    three_connected: bool,
    /// Disables every pruning rule; used to count all graphs of an order.
    census: bool,
    accepted: Vec<AtomicU64>,
    canonical_calls: AtomicU64,
    found: Mutex<Vec<(CanonicalForm, Graph)>>,
}

/// All k-critical graphs matching the query, up to isomorphism.
pub fn find_figure_graphs(q: &FigureQuery) -> Result<FigureSearch> {
    check_k(q.k)?;
    Limits::check("figure search order", q.n, Limits::get().search)?;
    if q.n == 0 {
        return Err(Error::InvalidArgument("order must be positive".into()));
    }
    let excess = match q.m {
        Some(m) => match (2 * m).checked_sub(q.n * (q.k - 1)) {
            Some(e) => e,
            None => {
                return Ok(FigureSearch {
                    query: *q,
                    graphs: Vec::new(),
                    stats: SearchStats {
                        accepted: vec![0; q.n + 1],
                        canonical_calls: 0,
                    },
                })
            }
        },
        None => usize::MAX,
    };
    let ctx = Ctx {
        k: q.k,
        n: q.n,
        m: q.m,
        excess,
        floor: edge_floor(q.n, q.m.unwrap_or((q.n * (q.k - 1)).div_ceil(2))),
        ceiling: edge_ceiling(q.k, q.n, q.m),
        three_connected: q.three_connected,
        census: false,
        accepted: (0..=q.n).map(|_| AtomicU64::new(0)).collect(),
        canonical_calls: AtomicU64::new(0),
        found: Mutex::new(Vec::new()),
    };
    ctx.run()?;
    let mut found = ctx.found.into_inner().expect("search worker panicked");
    found.sort_by(|a, b| a.0.cmp(&b.0));
    found.dedup_by(|a, b| a.0 == b.0);
    Ok(FigureSearch {
        query: *q,
        graphs: found.into_iter().map(|(_, g)| g).collect(),
        stats: SearchStats {
            accepted: ctx.accepted.iter().map(|a| a.load(Ordering::Relaxed)).collect(),
            canonical_calls: ctx.canonical_calls.load(Ordering::Relaxed),
        },
    })
}

/// Deleting a minimum-degree vertex from a graph with `e` edges on `j`
/// vertices removes at most `2e / j` edges, so every graph on the deletion
/// path of an `m`-edge target keeps this many.
fn edge_floor(n: usize, m: usize) -> Vec<usize> {
    let mut floor = vec![0; n + 1];
    floor[n] = m;
    for j in (2..=n).rev() {
        floor[j - 1] = floor[j] - 2 * floor[j] / j;
    }
    floor
}

/// The vertex deleted from order `j` keeps at least `k - 1 - (n - j)`
/// neighbors, so the edge count drops by at least that much per step.
fn edge_ceiling(k: usize, n: usize, m: Option<usize>) -> Vec<usize> {
    let mut ceiling = vec![usize::MAX; n + 1];
    if let Some(m) = m {
        ceiling[n] = m;
        for j in (2..=n).rev() {
            ceiling[j - 1] = ceiling[j].saturating_sub((k - 1).saturating_sub(n - j));
        }
    }
    ceiling
}

fn excess_of(deg: usize, k: usize) -> usize {
    deg.saturating_sub(k - 1)
}

/// Number of graphs of each order up to `n`, via the unpruned generator.
pub fn census(n: usize) -> Result<Vec<u64>> {
    Limits::check("census order", n, Limits::get().search)?;
    let ctx = Ctx {
        k: 4,
        n,
        m: None,
        excess: usize::MAX,
        floor: vec![0; n + 1],
        ceiling: vec![usize::MAX; n + 1],
        three_connected: false,
        census: true,
        accepted: (0..=n).map(|_| AtomicU64::new(0)).collect(),
        canonical_calls: AtomicU64::new(0),
        found: Mutex::new(Vec::new()),
    };
    ctx.run()?;
    Ok(ctx.accepted.iter().map(|a| a.load(Ordering::Relaxed)).collect())
}

impl Ctx {
    fn run(&self) -> Result<()> {
        let root = Graph::empty(1)?;
        self.accepted[1].fetch_add(1, Ordering::Relaxed);
        if self.n == 1 {
            self.finish(root)
        } else {
            let (form, _) = canonical_labeling_unchecked(&root);
            self.expand(&root, &form)
        }
    }

    fn expand(&self, p: &Graph, pform: &CanonicalForm) -> Result<()> {
        let children = self.children(p, pform)?;
        let order = p.n() + 1;
        children
            .into_par_iter()
            .map(|(child, form)| {
                self.accepted[order].fetch_add(1, Ordering::Relaxed);
                if order == self.n {
                    self.finish(child)
                } else {
                    self.expand(&child, &form)
                }
            })
            .collect::<Result<Vec<()>>>()
            .map(|_| ())
    }

    /// Accepted, pairwise non-isomorphic children of `p`.
    fn children(&self, p: &Graph, pform: &CanonicalForm) -> Result<Vec<(Graph, CanonicalForm)>> {
        let k = self.k;
        let i = p.n();
        let rest = self.n - (i + 1);
        let need = if self.census { 0 } else { (k - 1).saturating_sub(rest) };
        let deg: Vec<usize> = (0..i).map(|v| p.degree(v)).collect();
        let forced: VertexSet = (0..i).filter(|&v| deg[v] < need).collect();
        if (0..i).any(|v| deg[v] + 1 < need) {
            return Ok(Vec::new());
        }
        let base_excess: usize = deg.iter().map(|&d| excess_of(d, k)).sum();
        let min_deg = deg.iter().copied().min().unwrap_or(0);
        let lo = need.max(forced.len()).max(self.floor[i + 1].saturating_sub(p.m()));
        if p.m() > self.ceiling[i + 1] {
            return Ok(Vec::new());
        }
        let hi = (min_deg + 1).min(i).min(self.ceiling[i + 1] - p.m());
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        // colorings of p; a last vertex whose neighborhood misses a color in one of them is colorable
        let last = rest == 0 && !self.census;
        let mut palettes: Vec<Vec<usize>> = Vec::new();
        if last {
            match colorable(p, k - 1)?.into_witness() {
                Some(w) => palettes.push(w.as_slice().to_vec()),
                None => return Ok(Vec::new()),
            }
        }
        let full = (1usize << (k - 1)) - 1;
        for size in lo..=hi {
            let mut chosen = Vec::with_capacity(size);
            let mut sets = Vec::new();
            choose(i, size, 0, &mut chosen, &forced, &mut sets);
            for s in sets {
                let set: VertexSet = s.iter().copied().collect();
                // the new vertex must be a minimum-degree vertex of the child
                if (0..i).any(|v| deg[v] + (set.contains(v) as usize) < size) {
                    continue;
                }
                let excess = base_excess
                    + s.iter()
                        .filter(|&&v| deg[v] >= k - 1)
                        .count()
                    + excess_of(size, k);
                if excess > self.excess {
                    continue;
                }
                if let Some(m) = self.m {
                    let edges = p.m() + size;
                    let room = rest * (k - 1) + (self.excess - excess);
                    if edges > m || edges + room < m || (rest == 0 && edges != m) {
                        continue;
                    }
                }
                let mut child = p.clone();
                let w = child.push_vertex(None);
                for &v in &s {
                    child.link(w, v);
                }
                if last {
                    if size + 1 < k
                        || palettes
                            .iter()
                            .any(|c| s.iter().fold(0usize, |acc, &v| acc | 1 << (c[v] - 1)) != full)
                    {
                        continue;
                    }
                    if let Some(wit) = colorable(&child, k - 1)?.into_witness() {
                        palettes.push(wit.as_slice()[..i].to_vec());
                        continue;
                    }
                }
                let delta = child.min_degree();
                let lows: Vec<(usize, (usize, usize))> = (0..=i)
                    .filter(|&v| child.degree(v) == delta)
                    .map(|v| (v, deletion_key(&child, v)))
                    .collect();
                let top = lows.iter().map(|l| l.1).max().expect("nonempty");
                if deletion_key(&child, w) < top {
                    continue;
                }
                self.canonical_calls.fetch_add(1, Ordering::Relaxed);
                let (form, perm) = canonical_labeling_unchecked(&child);
                if !seen.insert(form.clone()) {
                    continue;
                }
                let c = lows
                    .iter()
                    .filter(|l| l.1 == top)
                    .map(|l| l.0)
                    .max_by_key(|&v| perm[v])
                    .expect("nonempty");
                if c != w {
                    let (minus, _) = child.remove_vertices(&VertexSet::singleton(c));
                    self.canonical_calls.fetch_add(1, Ordering::Relaxed);
                    if canonical_labeling_unchecked(&minus).0 != *pform {
                        continue;
                    }
                }
                if rest > 0 && !self.census && !is_colorable(&child, k - 1)? {
                    continue;
                }
                out.push((child, form));
            }
        }
        Ok(out)
    }

    fn finish(&self, g: Graph) -> Result<()> {
        if self.census {
            return Ok(());
        }
        if g.min_degree() + 1 < self.k || self.m.is_some_and(|m| m != g.m()) {
            return Ok(());
        }
        if !check_critical(&g, self.k)?.is_critical {
            return Ok(());
        }
        if self.three_connected && vertex_connectivity(&g).kappa < 3 {
            return Ok(());
        }
        let (form, perm) = canonical_labeling_unchecked(&g);
        self.found
            .lock()
            .expect("search worker panicked")
            .push((form, g.permute(&perm)));
        Ok(())
    }
}

/// Isomorphism-invariant tie-break among minimum-degree vertices: degree sum
/// of the neighborhood, then edges inside it.
fn deletion_key(g: &Graph, v: usize) -> (usize, usize) {
    let nb = g.neighbors(v);
    let sum = nb.iter().map(|u| g.degree(u)).sum();
    let inner = nb.iter().map(|u| g.neighbors(u).intersection_len(&nb)).sum::<usize>() / 2;
    (sum, inner)
}

/// Subsets of `0..n` of the given size containing `forced`, in
/// lexicographic order.
fn choose(n: usize, size: usize, from: usize, chosen: &mut Vec<usize>, forced: &VertexSet, out: &mut Vec<Vec<usize>>) {
    if chosen.len() == size {
        if forced.iter().all(|v| chosen.contains(&v)) {
            out.push(chosen.clone());
        }
        return;
    }
    for v in from..n {
        if n - v < size - chosen.len() {
            break;
        }
        chosen.push(v);
        choose(n, size, v + 1, chosen, forced, out);
        chosen.pop();
        if forced.contains(v) {
            break;
        }
    }
}
