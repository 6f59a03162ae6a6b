//! DHGO composition, k-Ore recognition with decomposition trees, and a
//! closure-based membership oracle.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{canonical_form, canonical_labeling, vertex_connectivity, CanonicalForm};
use crate::{check_k, Error, Graph, Limits, Result, VertexSet, VertexSplit};

/// DHGO composition: delete `xy` from `g1`, split `z` of `g2` per `split`,
/// then glue `x` to the first half and `y` to the second.
///
/// The result keeps the indices of `g1` and appends `g2 - z` in order.
pub fn compose(g1: &Graph, xy: (usize, usize), g2: &Graph, split: &VertexSplit) -> Result<Graph> {
    let (x, y) = xy;
    g1.check_vertex(x)?;
    g1.check_vertex(y)?;
    if !g1.has_edge(x, y) {
        return Err(Error::MissingEdge(x, y));
    }
    split.validate(g2)?;
    let z = split.target;
    let n = g1.n() + g2.n() - 1;
    if n > crate::MAX_VERTICES {
        return Err(Error::Capacity(n));
    }
    let mut g = g1.delete_edge(x, y)?;
    let labelled = g1.labels().is_some() || g2.labels().is_some();
    if labelled && g.labels().is_none() {
        g = g.with_labels(g1.labels_or_indices())?;
    }
    let mut pos = vec![usize::MAX; g2.n()];
    for v in (0..g2.n()).filter(|&v| v != z) {
        pos[v] = g.push_vertex(labelled.then(|| g2.label(v).into_owned()));
    }
    pos[z] = usize::MAX;
    for (u, v) in g2.edges() {
        if u != z && v != z {
            g.link(pos[u], pos[v]);
        }
    }
    for v in split.first.iter() {
        g.link(x, pos[v]);
    }
    for v in split.second.iter() {
        g.link(y, pos[v]);
    }
    Ok(g)
}

/// Decomposition tree over vertex labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OreTree {
    Leaf {
        vertices: Vec<String>,
    },
    Node {
        cut: (String, String),
        /// Label of `x*y` in the second child.
        glued: String,
        /// Neighbors of the glued vertex going back to `x` and to `y`.
        split: SplitRecord,
        first: Box<OreTree>,
        second: Box<OreTree>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitRecord {
    pub to_x: Vec<String>,
    pub to_y: Vec<String>,
}

impl OreTree {
    pub fn leaves(&self) -> usize {
        match self {
            OreTree::Leaf { .. } => 1,
            OreTree::Node { first, second, .. } => first.leaves() + second.leaves(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            OreTree::Leaf { .. } => 0,
            OreTree::Node { first, second, .. } => 1 + first.depth().max(second.depth()),
        }
    }

    /// Indented rendering for terminals.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        self.write_pretty(&mut out, 0);
        out
    }

    fn write_pretty(&self, out: &mut String, indent: usize) {
        let pad = "  ".repeat(indent);
        match self {
            OreTree::Leaf { vertices } => {
                out.push_str(&format!("{pad}K{} [{}]\n", vertices.len(), vertices.join(" ")));
            }
            OreTree::Node {
                cut,
                glued,
                split,
                first,
                second,
            } => {
                out.push_str(&format!(
                    "{pad}cut {{{}, {}}}  {} -> x: [{}] y: [{}]\n",
                    cut.0,
                    cut.1,
                    glued,
                    split.to_x.join(" "),
                    split.to_y.join(" ")
                ));
                first.write_pretty(out, indent + 1);
                second.write_pretty(out, indent + 1);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OreDecomposition {
    pub k: usize,
    pub tree: OreTree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rejection {
    /// Algorithm step (1, 2 or 3) that returned "no".
    pub step: u8,
    /// Recursion depth of the failing subgraph; 0 is the input.
    pub depth: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Recognition {
    Yes(OreDecomposition),
    No(Rejection),
}

impl Recognition {
    pub fn is_yes(&self) -> bool {
        matches!(self, Recognition::Yes(_))
    }

    pub fn decomposition(&self) -> Option<&OreDecomposition> {
        match self {
            Recognition::Yes(d) => Some(d),
            Recognition::No(_) => None,
        }
    }
}

/// The two children of a graph at a two-cut.
#[derive(Clone, Debug)]
pub struct Children {
    /// `G[A] + xy`, where `A` includes `x, y`.
    pub first: Graph,
    /// `G[B]` with `x, y` glued.
    pub second: Graph,
    /// Quasi-vertex side, including `x, y`.
    pub a: VertexSet,
    /// Quasi-edge side, including `x, y`.
    pub b: VertexSet,
    /// `x` and `y` inside `first`.
    pub cut_in_first: (usize, usize),
    /// Split of the glued vertex that recovers the parent.
    pub split: VertexSplit,
}

/// Edge count forced on a k-Ore graph of order `n`, or `None` when `n` has
/// the wrong residue.
pub fn ore_edge_count(k: usize, n: usize) -> Option<usize> {
    if k < 4 || n % (k - 1) != 1 {
        return None;
    }
    let num = (k + 1) * (k - 2) * n - k * (k - 3);
    num.is_multiple_of(2 * (k - 1)).then(|| num / (2 * (k - 1)))
}

/// Splits a graph at a two-cut into its first and second child.
pub fn decompose_children(g: &Graph, k: usize, x: usize, y: usize) -> Result<Children> {
    check_k(k)?;
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    let step3 = |msg: String| Error::Step { step: 3, msg };
    if x == y {
        return Err(step3("cut vertices must differ".into()));
    }
    if g.has_edge(x, y) {
        return Err(step3(format!("cut vertices {x} and {y} are adjacent")));
    }
    let mut rest = g.vertices();
    rest.remove(x);
    rest.remove(y);
    let comps = g.components_within(&rest);
    if comps.len() != 2 {
        return Err(step3(format!("G - x - y has {} components, expected 2", comps.len())));
    }
    let r = k - 1;
    let (a, b) = match (comps[0].len() % r, comps[1].len() % r) {
        (ra, 0) if ra == k - 2 => (comps[0], comps[1]),
        (0, rb) if rb == k - 2 => (comps[1], comps[0]),
        (ra, rb) => {
            return Err(step3(format!(
                "component residues {{{ra}, {rb}}} mod {r} differ from {{{}, 0}}",
                k - 2
            )))
        }
    };
    let border: VertexSet = [x, y].into_iter().collect();
    let (a, b) = (a.union(&border), b.union(&border));

    let (ga, order_a) = g.induced(&a);
    let at = |order: &[usize], v| order.iter().position(|&w| w == v).expect("border vertex kept");
    let cut_in_first = (at(&order_a, x), at(&order_a, y));
    let first = ga.add_edge(cut_in_first.0, cut_in_first.1)?;

    let (gb, order_b) = g.induced(&b);
    let (bx, by) = (at(&order_b, x), at(&order_b, y));
    let to_x: Vec<usize> = gb.neighbors(bx).iter().collect();
    let to_y: Vec<usize> = gb.neighbors(by).iter().collect();
    let (second, map) = gb.identify_vertices(bx, by)?;
    let split = VertexSplit::new(map[bx], to_x.into_iter().map(|v| map[v]), to_y.into_iter().map(|v| map[v]));
    Ok(Children {
        first,
        second,
        a,
        b,
        cut_in_first,
        split,
    })
}

fn labelled(g: &Graph) -> Graph {
    if g.labels().is_some() {
        g.clone()
    } else {
        g.clone().with_labels(g.labels_or_indices()).expect("label count matches")
    }
}

/// Lexicographically first separating pair.
fn first_separating_pair(g: &Graph) -> Option<(usize, usize)> {
    let all = g.vertices();
    for x in 0..g.n() {
        for y in x + 1..g.n() {
            let mut rest = all;
            rest.remove(x);
            rest.remove(y);
            if !rest.is_empty() && g.components_within(&rest).len() > 1 {
                return Some((x, y));
            }
        }
    }
    None
}

/// Steps 0-2 of the recognition algorithm on one graph: `Ok(true)` for
/// `K_k`, `Ok(false)` when steps 1 and 2 pass.
fn screen(g: &Graph, k: usize) -> std::result::Result<bool, (u8, String)> {
    if g.is_complete_of_order(k) {
        return Ok(true);
    }
    let n = g.n();
    if n % (k - 1) != 1 {
        return Err((1, format!("n = {n} is not 1 mod {}", k - 1)));
    }
    if ore_edge_count(k, n) != Some(g.m()) {
        return Err((
            1,
            format!(
                "m = {} but a {k}-Ore graph on {n} vertices has {} edges",
                g.m(),
                ore_edge_count(k, n).map_or("no integral number of".into(), |m| m.to_string())
            ),
        ));
    }
    let kappa = vertex_connectivity(g).kappa;
    if kappa != 2 {
        return Err((2, format!("connectivity is {kappa}, not 2")));
    }
    Ok(false)
}

/// Runs the k-Ore recognition algorithm, taking the lexicographically first
/// separating pair at each step 2.
pub fn recognize(g: &Graph, k: usize) -> Result<Recognition> {
    check_k(k)?;
    let g = labelled(g);
    Ok(match recognize_at(&g, k, 0) {
        Ok(tree) => Recognition::Yes(OreDecomposition { k, tree }),
        Err(rejection) => Recognition::No(rejection),
    })
}

fn recognize_at(g: &Graph, k: usize, depth: usize) -> std::result::Result<OreTree, Rejection> {
    let reject = |(step, reason): (u8, String)| Rejection { step, depth, reason };
    if screen(g, k).map_err(reject)? {
        return Ok(OreTree::Leaf {
            vertices: g.labels_or_indices(),
        });
    }
    let (x, y) = first_separating_pair(g).expect("connectivity 2 has a separating pair");
    let children = decompose_children(g, k, x, y).map_err(|e| match e {
        Error::Step { step, msg } => reject((step, msg)),
        other => reject((3, other.to_string())),
    })?;
    let first = recognize_at(&children.first, k, depth + 1)?;
    let second = recognize_at(&children.second, k, depth + 1)?;
    let sg = &children.second;
    let names = |s: &VertexSet| s.iter().map(|v| sg.label(v).into_owned()).collect();
    Ok(OreTree::Node {
        cut: (g.label(x).into_owned(), g.label(y).into_owned()),
        glued: sg.label(children.split.target).into_owned(),
        split: SplitRecord {
            to_x: names(&children.split.first),
            to_y: names(&children.split.second),
        },
        first: Box::new(first),
        second: Box::new(second),
    })
}

/// Rebuilds a graph from a decomposition by composing bottom-up. Labels of
/// the result are those of the decomposed graph.
pub fn replay(d: &OreDecomposition) -> Result<Graph> {
    replay_tree(&d.tree, d.k)
}

fn replay_tree(t: &OreTree, k: usize) -> Result<Graph> {
    match t {
        OreTree::Leaf { vertices } => {
            if vertices.len() != k {
                return Err(Error::Precondition(format!("leaf has {} vertices, expected {k}", vertices.len())));
            }
            Graph::complete(k).with_labels(vertices.clone())
        }
        OreTree::Node {
            cut,
            glued,
            split,
            first,
            second,
        } => {
            let g1 = replay_tree(first, k)?;
            let g2 = replay_tree(second, k)?;
            let find = |g: &Graph, l: &str| {
                g.find_label(l)
                    .ok_or_else(|| Error::Precondition(format!("label {l} missing in subtree")))
            };
            let x = find(&g1, &cut.0)?;
            let y = find(&g1, &cut.1)?;
            let z = find(&g2, glued)?;
            let side = |ls: &[String]| ls.iter().map(|l| find(&g2, l)).collect::<Result<Vec<_>>>();
            let vs = VertexSplit::new(z, side(&split.to_x)?, side(&split.to_y)?);
            compose(&g1, (x, y), &g2, &vs)
        }
    }
}

/// Reorders a replayed graph so that vertex `i` carries the label of vertex
/// `i` in `original`. Fails if the label sets differ.
pub fn align_by_labels(replayed: &Graph, original: &Graph) -> Result<Graph> {
    let names = original.labels_or_indices();
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    if replayed.n() != original.n() {
        return Err(Error::Precondition("orders differ".into()));
    }
    let perm = (0..replayed.n())
        .map(|v| {
            index
                .get(replayed.label(v).as_ref())
                .copied()
                .ok_or_else(|| Error::Precondition(format!("unknown label {}", replayed.label(v))))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(replayed.permute(&perm))
}

/// Which verdicts are reachable when step 2 may pick any separating pair.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ChoiceVerdicts {
    pub yes: bool,
    pub no: bool,
}

impl ChoiceVerdicts {
    pub fn consistent(&self) -> bool {
        self.yes != self.no
    }
}

/// Runs recognition over every sequence of separating-pair choices.
///
/// Children are memoized by canonical form when small enough.
pub fn recognize_all_choices(g: &Graph, k: usize) -> Result<ChoiceVerdicts> {
    check_k(k)?;
    let mut memo = HashMap::new();
    all_choices(g, k, &mut memo)
}

fn all_choices(g: &Graph, k: usize, memo: &mut HashMap<CanonicalForm, ChoiceVerdicts>) -> Result<ChoiceVerdicts> {
    let key = if g.n() <= Limits::get().canonical {
        Some(canonical_form(g)?)
    } else {
        None
    };
    if let Some(v) = key.as_ref().and_then(|f| memo.get(f)) {
        return Ok(*v);
    }
    let mut out = ChoiceVerdicts::default();
    match screen(g, k) {
        Ok(true) => out.yes = true,
        Err(_) => out.no = true,
        Ok(false) => {
            for (x, y) in crate::graph::separating_pairs(g) {
                match decompose_children(g, k, x, y) {
                    Err(Error::Step { .. }) => out.no = true,
                    Err(e) => return Err(e),
                    Ok(ch) => {
                        let a = all_choices(&ch.first, k, memo)?;
                        let b = all_choices(&ch.second, k, memo)?;
                        out.yes |= a.yes && b.yes;
                        out.no |= a.no || b.no;
                    }
                }
                if out.yes && out.no {
                    break;
                }
            }
        }
    }
    if let Some(f) = key {
        memo.insert(f, out);
    }
    Ok(out)
}

/// Every k-Ore graph up to a given order, one canonical representative each.
#[derive(Clone, Debug)]
pub struct OreCatalog {
    pub k: usize,
    pub n_max: usize,
    /// Keyed by canonical form; values are canonically relabeled graphs.
    pub members: BTreeMap<CanonicalForm, Graph>,
}

impl OreCatalog {
    pub fn contains(&self, g: &Graph) -> Result<bool> {
        Ok(self.members.contains_key(&canonical_form(g)?))
    }

    pub fn of_order(&self, n: usize) -> impl Iterator<Item = &Graph> {
        self.members.values().filter(move |g| g.n() == n)
    }

    /// Member counts by order.
    pub fn counts(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for g in self.members.values() {
            *out.entry(g.n()).or_default() += 1;
        }
        out
    }
}

/// All ordered 2-partitions of `set` into nonempty parts.
pub(crate) fn ordered_splits(set: &VertexSet) -> Vec<(VertexSet, VertexSet)> {
    let items = set.to_vec();
    let d = items.len();
    if d < 2 {
        return Vec::new();
    }
    (1u64..(1 << d) - 1)
        .map(|mask| {
            let mut a = VertexSet::new();
            let mut b = VertexSet::new();
            for (i, &v) in items.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    a.insert(v);
                } else {
                    b.insert(v);
                }
            }
            (a, b)
        })
        .collect()
}

fn canonical_rep(g: &Graph) -> Result<(CanonicalForm, Graph)> {
    let (form, perm) = canonical_labeling(g)?;
    Ok((form, g.permute(&perm)))
}

/// Closes `{K_k}` under composition up to `n_max` vertices.
///
/// Each order `n = k + j(k-1)` is built from every pair of smaller members
/// whose orders add to `n + 1`, over all edges and all ordered splits.
pub fn ore_oracle(k: usize, n_max: usize) -> Result<OreCatalog> {
    check_k(k)?;
    Limits::check("ore oracle order", n_max, Limits::get().oracle)?;
    let mut by_order: BTreeMap<usize, Vec<Graph>> = BTreeMap::new();
    let mut members = BTreeMap::new();
    if n_max >= k {
        let (form, rep) = canonical_rep(&Graph::complete(k))?;
        members.insert(form, rep.clone());
        by_order.insert(k, vec![rep]);
    }
    let mut n = k + (k - 1);
    while n <= n_max {
        let mut jobs: Vec<(&Graph, &Graph)> = Vec::new();
        for (&n1, g1s) in &by_order {
            let n2 = n + 1 - n1;
            if let Some(g2s) = by_order.get(&n2) {
                for g1 in g1s {
                    for g2 in g2s {
                        jobs.push((g1, g2));
                    }
                }
            }
        }
        let found: Vec<(CanonicalForm, Graph)> = jobs
            .par_iter()
            .map(|&(g1, g2)| -> Result<Vec<(CanonicalForm, Graph)>> {
                let mut local = BTreeMap::new();
                for (x, y) in g1.edges() {
                    for z in 0..g2.n() {
                        for (s1, s2) in ordered_splits(&g2.neighbors(z)) {
                            let split = VertexSplit {
                                target: z,
                                first: s1,
                                second: s2,
                            };
                            let g = compose(g1, (x, y), g2, &split)?;
                            let (form, rep) = canonical_rep(&g)?;
                            local.entry(form).or_insert(rep);
                        }
                    }
                }
                Ok(local.into_iter().collect())
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let mut layer = BTreeMap::new();
        for (form, rep) in found {
            layer.entry(form).or_insert(rep);
        }
        by_order.insert(n, layer.values().cloned().collect());
        members.extend(layer);
        n += k - 1;
    }
    Ok(OreCatalog { k, n_max, members })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::rho_full;

    fn k4_pair() -> Graph {
        compose(
            &Graph::complete(4),
            (0, 1),
            &Graph::complete(4),
            &VertexSplit::new(0, [1], [2, 3]),
        )
        .unwrap()
    }

    #[test]
    fn compose_counts() {
        let g = k4_pair();
        assert_eq!((g.n(), g.m()), (7, 11));
        g.validate().unwrap();
        let g = compose(
            &Graph::complete(5),
            (2, 4),
            &Graph::complete(5),
            &VertexSplit::new(1, [0, 2], [3, 4]),
        )
        .unwrap();
        assert_eq!((g.n(), g.m()), (9, 19));
        assert_eq!(rho_full(&g, 5).unwrap(), 10);
    }

    #[test]
    fn compose_errors() {
        let k4 = Graph::complete(4);
        let mut p = Graph::path(3);
        assert!(compose(&p, (0, 2), &k4, &VertexSplit::new(0, [1], [2, 3])).is_err());
        p = Graph::complete(4);
        assert!(compose(&p, (0, 1), &k4, &VertexSplit::new(0, [], [1, 2, 3])).is_err());
        assert!(compose(&p, (0, 1), &k4, &VertexSplit::new(0, [1], [2])).is_err());
    }

    #[test]
    fn chain_of_complete_graphs() {
        for k in 4..=6 {
            let mut g = Graph::complete(k);
            for j in 1..5 {
                let split = VertexSplit::new(0, 1..k - 1, [k - 1]);
                let last = g.n() - 1;
                let e = (last, g.neighbors(last).first().unwrap());
                g = compose(&g, e, &Graph::complete(k), &split).unwrap();
                assert_eq!(g.n(), k + j * (k - 1));
                assert_eq!(Some(g.m()), ore_edge_count(k, g.n()));
                assert_eq!(rho_full(&g, k).unwrap(), (k * (k - 3)) as i64);
            }
        }
    }

    #[test]
    fn recognize_examples() {
        assert!(recognize(&Graph::complete(4), 4).unwrap().is_yes());
        let wheel = {
            let mut e: Vec<_> = Graph::cycle(5).edges();
            e.extend((0..5).map(|i| (i, 5)));
            Graph::from_edges(6, &e).unwrap()
        };
        match recognize(&wheel, 4).unwrap() {
            Recognition::No(r) => assert_eq!(r.step, 1),
            other => panic!("{other:?}"),
        }
        let r = recognize(&k4_pair(), 4).unwrap();
        let d = r.decomposition().unwrap();
        assert_eq!(d.tree.leaves(), 2);
        assert!(recognize(&Graph::complete(3), 3).is_err());
    }

    #[test]
    fn replay_reproduces_input() {
        let mut g = k4_pair();
        g = compose(&g, (2, 3), &Graph::complete(4), &VertexSplit::new(3, [0, 1], [2])).unwrap();
        let d = recognize(&g, 4).unwrap().decomposition().unwrap().clone();
        assert_eq!(d.tree.leaves(), 3);
        let back = replay(&d).unwrap();
        let aligned = align_by_labels(&back, &g).unwrap();
        assert_eq!(aligned.edges(), g.edges());
    }

    #[test]
    fn tree_json_shape() {
        let r = recognize(&k4_pair(), 4).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["verdict"], "yes");
        assert_eq!(v["tree"]["kind"], "node");
        assert_eq!(v["tree"]["cut"][0], "0");
        let d: OreDecomposition = serde_json::from_value(v).unwrap();
        assert_eq!(d.tree.leaves(), 2);
    }

    #[test]
    fn children_of_pair() {
        let ch = decompose_children(&k4_pair(), 4, 0, 1).unwrap();
        assert!(ch.first.is_complete_of_order(4));
        assert!(ch.second.is_complete_of_order(4));
        assert_eq!(ch.a.to_vec(), vec![0, 1, 2, 3]);
        let back = compose(&ch.first, ch.cut_in_first, &ch.second, &ch.split).unwrap();
        assert!(crate::graph::is_isomorphic(&back, &k4_pair()).unwrap());
        assert!(matches!(
            decompose_children(&k4_pair(), 4, 2, 3),
            Err(Error::Step { step: 3, .. })
        ));
    }

    #[test]
    fn small_oracle() {
        let c = ore_oracle(4, 4).unwrap();
        assert_eq!(c.members.len(), 1);
        let c = ore_oracle(4, 7).unwrap();
        assert_eq!(c.counts().get(&7), Some(&1));
        for g in c.of_order(7) {
            assert_eq!(g.m(), 11);
        }
        assert!(ore_oracle(4, 14).is_err());
    }

    #[test]
    fn ordered_split_count() {
        let s: VertexSet = [1, 4, 6].into_iter().collect();
        assert_eq!(ordered_splits(&s).len(), 6);
        assert!(ordered_splits(&VertexSet::singleton(2)).is_empty());
    }
}
