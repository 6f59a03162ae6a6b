//! Canonical labeling by partition refinement and individualization.
//!
//! The search explores every leaf of the individualization tree and keeps the
//! lexicographically largest permuted adjacency matrix. Branches through
//! twins (vertices whose transposition is an automorphism) are skipped, which
//! keeps clique-heavy graphs such as Ore compositions cheap.

use std::cmp::Ordering;

use super::{Graph, VertexSet};
use crate::{Limits, Result};

/// Byte string identifying a graph up to isomorphism.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Order of the encoded graph.
    pub fn order(&self) -> usize {
        u16::from_le_bytes([self.0[0], self.0[1]]) as usize
    }
}

pub fn canonical_form(g: &Graph) -> Result<CanonicalForm> {
    canonical_labeling(g).map(|(f, _)| f)
}

/// Canonical form plus the labeling: `perm[v]` is the canonical position of `v`.
pub fn canonical_labeling(g: &Graph) -> Result<(CanonicalForm, Vec<usize>)> {
    Limits::check("canonical form", g.n(), Limits::get().canonical)?;
    Ok(canonical_labeling_unchecked(g))
}

pub(crate) fn canonical_labeling_unchecked(g: &Graph) -> (CanonicalForm, Vec<usize>) {
    let n = g.n();
    let mut search = Search {
        g,
        best_rows: Vec::new(),
        best_perm: Vec::new(),
        autos: Vec::new(),
        path: Vec::new(),
    };
    let colors = vec![0u16; n];
    search.descend(colors, if n == 0 { 0 } else { 1 });
    if n == 0 {
        return (encode(0, &[]), Vec::new());
    }
    (encode(n, &search.best_rows), search.best_perm)
}

/// Isomorphism test with a cheap degree-sequence prefilter.
pub fn is_isomorphic(a: &Graph, b: &Graph) -> Result<bool> {
    if a.n() != b.n() || a.m() != b.m() || a.degree_sequence() != b.degree_sequence() {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

fn encode(n: usize, rows: &[VertexSet]) -> CanonicalForm {
    let mut bytes = Vec::with_capacity(2 + n * n / 16 + 1);
    bytes.extend_from_slice(&(n as u16).to_le_bytes());
    let mut acc = 0u8;
    let mut bits = 0;
    for (i, row) in rows.iter().enumerate() {
        for j in i + 1..n {
            acc = acc << 1 | row.contains(j) as u8;
            bits += 1;
            if bits == 8 {
                bytes.push(acc);
                acc = 0;
                bits = 0;
            }
        }
    }
    if bits > 0 {
        bytes.push(acc << (8 - bits));
    }
    CanonicalForm(bytes)
}

struct Search<'a> {
    g: &'a Graph,
    best_rows: Vec<VertexSet>,
    best_perm: Vec<usize>,
    /// Automorphisms found so far, as vertex maps.
    autos: Vec<Vec<usize>>,
    path: Vec<usize>,
}

impl Search<'_> {
    fn descend(&mut self, mut colors: Vec<u16>, cells: usize) {
        let n = self.g.n();
        let cells = refine(self.g, &mut colors, cells);
        if cells == n {
            self.leaf(&colors);
            return;
        }
        // first non-singleton cell
        let mut size = vec![0usize; cells];
        for &c in &colors {
            size[c as usize] += 1;
        }
        let target = size.iter().position(|&s| s > 1).expect("partition not discrete") as u16;
        let members: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &members {
            if tried.iter().any(|&r| twins(self.g, r, v)) {
                continue;
            }
            if !tried.is_empty() && self.same_orbit(&tried, v) {
                continue;
            }
            tried.push(v);
            let mut next = colors.clone();
            for (w, c) in next.iter_mut().enumerate() {
                if w != v && *c >= target {
                    *c += 1;
                }
            }
            self.path.push(v);
            self.descend(next, cells + 1);
            self.path.pop();
        }
    }

    /// `v` is mapped onto some tried vertex by the automorphisms fixing the
    /// current path.
    fn same_orbit(&self, tried: &[usize], v: usize) -> bool {
        let gens: Vec<&Vec<usize>> = self
            .autos
            .iter()
            .filter(|a| self.path.iter().all(|&p| a[p] == p))
            .collect();
        if gens.is_empty() {
            return false;
        }
        let mut orbit = VertexSet::singleton(v);
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            for a in &gens {
                let y = a[x];
                if !orbit.contains(y) {
                    orbit.insert(y);
                    stack.push(y);
                }
            }
        }
        tried.iter().any(|&t| orbit.contains(t))
    }

    fn leaf(&mut self, colors: &[u16]) {
        let n = self.g.n();
        let mut rows = vec![VertexSet::new(); n];
        for v in 0..n {
            let mut row = VertexSet::new();
            for w in self.g.neighbors(v).iter() {
                row.insert(colors[w] as usize);
            }
            rows[colors[v] as usize] = row;
        }
        let cmp = if self.best_rows.is_empty() {
            Ordering::Greater
        } else {
            compare_rows(&rows, &self.best_rows)
        };
        if cmp == Ordering::Equal {
            let mut inv = vec![0; n];
            for (v, &p) in self.best_perm.iter().enumerate() {
                inv[p] = v;
            }
            self.autos.push(colors.iter().map(|&c| inv[c as usize]).collect());
        } else if cmp == Ordering::Greater {
            self.best_rows = rows;
            self.best_perm = colors.iter().map(|&c| c as usize).collect();
        }
    }
}

fn compare_rows(a: &[VertexSet], b: &[VertexSet]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.words().cmp(y.words()) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Transposing `u` and `v` is an automorphism.
#[inline]
fn twins(g: &Graph, u: usize, v: usize) -> bool {
    let mut nu = g.neighbors(u);
    let mut nv = g.neighbors(v);
    nu.remove(v);
    nv.remove(u);
    nu == nv
}

/// Refines an ordered partition to the coarsest equitable one below it.
///
/// Cells are split by neighbor counts into every cell; the resulting order is
/// a function of the old order and the counts only, so it commutes with
/// relabeling.
fn refine(g: &Graph, colors: &mut [u16], mut cells: usize) -> usize {
    let n = g.n();
    let mut members = vec![VertexSet::new(); n];
    let mut keys: Vec<u16> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    loop {
        for s in members.iter_mut().take(cells) {
            *s = VertexSet::new();
        }
        for (v, &c) in colors.iter().enumerate() {
            members[c as usize].insert(v);
        }
        let width = cells + 1;
        keys.clear();
        keys.resize(n * width, 0);
        for v in 0..n {
            let row = &mut keys[v * width..(v + 1) * width];
            row[0] = colors[v];
            let nb = g.neighbors(v);
            for (c, slot) in row[1..].iter_mut().enumerate() {
                *slot = nb.intersection_len(&members[c]) as u16;
            }
        }
        order.sort_unstable_by(|&a, &b| keys[a * width..(a + 1) * width].cmp(&keys[b * width..(b + 1) * width]));
        let mut next = 0u16;
        let mut new_colors = vec![0u16; n];
        for i in 0..n {
            if i > 0 {
                let (a, b) = (order[i - 1], order[i]);
                if keys[a * width..(a + 1) * width] != keys[b * width..(b + 1) * width] {
                    next += 1;
                }
            }
            new_colors[order[i]] = next;
        }
        let new_cells = if n == 0 { 0 } else { next as usize + 1 };
        colors.copy_from_slice(&new_colors);
        if new_cells == cells {
            return cells;
        }
        cells = new_cells;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn relabel(g: &Graph, perm: &[usize]) -> Graph {
        g.permute(perm)
    }

    #[test]
    fn cycle_invariant_under_relabeling() {
        let c5 = Graph::cycle(5);
        let other = relabel(&c5, &[3, 0, 4, 1, 2]);
        assert_eq!(canonical_form(&c5).unwrap(), canonical_form(&other).unwrap());
    }

    #[test]
    fn distinguishes_small_graphs() {
        assert_ne!(canonical_form(&Graph::cycle(5)).unwrap(), canonical_form(&Graph::path(5)).unwrap());
        assert_ne!(canonical_form(&Graph::complete(4)).unwrap(), canonical_form(&Graph::star(3)).unwrap());
    }

    #[test]
    fn over_limit_is_an_error() {
        let g = Graph::empty(Limits::DEFAULT.canonical + 1).unwrap();
        assert!(matches!(canonical_form(&g), Err(crate::Error::LimitExceeded { .. })));
    }

    #[test]
    fn labeling_reproduces_form() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5)]).unwrap();
        let (form, perm) = canonical_labeling(&g).unwrap();
        let h = g.permute(&perm);
        let (form2, perm2) = canonical_labeling(&h).unwrap();
        assert_eq!(form, form2);
        assert_eq!(perm2, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn large_complete_graph_is_fast() {
        let g = Graph::complete(16);
        assert_eq!(canonical_form(&g).unwrap().order(), 16);
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..=10).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut it = bits.into_iter();
                for u in 0..n {
                    for v in u + 1..n {
                        if it.next().unwrap() {
                            edges.push((u, v));
                        }
                    }
                }
                Graph::from_edges(n, &edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn invariant_under_random_permutation(g in arb_graph(), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut perm: Vec<usize> = (0..g.n()).collect();
            perm.shuffle(&mut rng);
            let h = g.permute(&perm);
            prop_assert_eq!(canonical_form(&g).unwrap(), canonical_form(&h).unwrap());
        }

        #[test]
        fn form_decodes_to_isomorphic_graph(g in arb_graph()) {
            let (_, perm) = canonical_labeling(&g).unwrap();
            let h = g.permute(&perm);
            prop_assert_eq!(h.m(), g.m());
            prop_assert_eq!(h.degree_sequence(), g.degree_sequence());
        }
    }
}
