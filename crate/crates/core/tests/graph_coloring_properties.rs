use proptest::prelude::*;

use kcrit::coloring::{check_critical, colorable, forcing, ForcingRelation};
use kcrit::graph::{canonical_form, io};
use kcrit::{Graph, VertexSplit};

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
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

fn arb_perm(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut s = seed | 1;
    for i in (1..n).rev() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        perm.swap(i, (s % (i as u64 + 1)) as usize);
    }
    perm
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn mutations_keep_graphs_valid(g in arb_graph(10), pick in any::<usize>()) {
        let edges = g.edges();
        if let Some(&(u, v)) = edges.get(pick % edges.len().max(1)) {
            let h = g.delete_edge(u, v).unwrap();
            h.validate().unwrap();
            prop_assert_eq!(h.m(), g.m() - 1);
            let back = h.add_edge(u, v).unwrap();
            back.validate().unwrap();
            prop_assert_eq!(back, g.clone());
            let (glued, _) = h.identify_vertices(u, v).unwrap();
            glued.validate().unwrap();
        }
        let v = pick % g.n();
        let (minus, _) = g.remove_vertices(&std::iter::once(v).collect());
        minus.validate().unwrap();
        prop_assert_eq!(minus.n(), g.n() - 1);
        g.complement().validate().unwrap();
    }

    #[test]
    fn split_then_identify_is_isomorphic(g in arb_graph(9), pick in any::<usize>(), mask in any::<u32>()) {
        let z = pick % g.n();
        let nb: Vec<usize> = g.neighbors(z).iter().collect();
        prop_assume!(nb.len() >= 2);
        let mut first: Vec<usize> = nb.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
        let mut second: Vec<usize> = nb.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 0).map(|(_, &v)| v).collect();
        if first.is_empty() {
            first.push(second.pop().unwrap());
        }
        if second.is_empty() {
            second.push(first.pop().unwrap());
        }
        let split = g.split_vertex(&VertexSplit::new(z, first, second)).unwrap();
        split.validate().unwrap();
        let n = split.n();
        let (back, _) = split.identify_vertices(z, n - 1).unwrap();
        prop_assert_eq!(canonical_form(&back).unwrap(), canonical_form(&g).unwrap());
    }

    #[test]
    fn forcing_is_symmetric_and_relabeling_invariant(g in arb_graph(8), c in 2usize..4, a in any::<usize>(), b in any::<usize>(), seed in any::<u64>()) {
        let n = g.n();
        let (a, b) = (a % n, b % n);
        prop_assume!(a != b);
        let r = forcing(&g, c, a, b).unwrap();
        prop_assert_eq!(forcing(&g, c, b, a).unwrap().relation, r.relation);
        let perm = arb_perm(n, seed);
        let h = g.permute(&perm);
        prop_assert_eq!(forcing(&h, c, perm[a], perm[b]).unwrap().relation, r.relation);
        for w in [&r.equal_witness, &r.distinct_witness].into_iter().flatten() {
            prop_assert!(w.is_proper(&g));
        }
        if let Some(w) = &r.equal_witness {
            prop_assert_eq!(w.color(a), w.color(b));
        }
        if let Some(w) = &r.distinct_witness {
            prop_assert_ne!(w.color(a), w.color(b));
        }
        if r.relation == ForcingRelation::Uncolorable {
            prop_assert!(!colorable(&g, c).unwrap().is_colorable());
        }
    }

    #[test]
    fn witnesses_pass_an_edge_scan(g in arb_graph(12), c in 1usize..6) {
        let cert = colorable(&g, c).unwrap();
        if let Some(w) = cert.witness() {
            for (u, v) in g.edges() {
                prop_assert_ne!(w.color(u), w.color(v));
            }
            prop_assert!((0..g.n()).all(|v| (1..=c).contains(&w.color(v))));
        }
    }

    #[test]
    fn critical_graphs_have_large_minimum_degree(g in arb_graph(8), k in 3usize..6) {
        let r = check_critical(&g, k).unwrap();
        if r.is_critical {
            prop_assert!(g.min_degree() + 1 >= k);
            prop_assert_eq!(r.per_edge.len(), g.m());
        }
    }
}

#[test]
fn graph6_roundtrip_of_search_hits() {
    for code in ["G@U^FC", "I@]xeFBow", "FLr~w"] {
        let g = io::from_graph6(code).unwrap();
        assert_eq!(io::to_graph6(&g), code);
    }
}
