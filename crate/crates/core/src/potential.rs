//! k-potentials of vertex sets and their global minima.
//!
//! For a vertex set `R` of `G`, `ρ_k(R) = (k+1)(k-2)|R| - 2(k-1)|E(G[R])|`.
//! [`min_potential`] computes `P_k` (minimum over nonempty sets) and `P̃_k`
//! (minimum over sets with `2 ≤ |W| ≤ n-1`) by exhaustive Gray-code
//! enumeration.

use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{Graph, VertexSet};
use crate::{check_k, Error, Limits, Result};

/// Default number of minimizers kept per minimum.
pub const DEFAULT_MINIMIZER_CAP: usize = 32;

/// Potential of a single vertex, `(k+1)(k-2)`.
pub fn vertex_potential(k: usize) -> i64 {
    let k = k as i64;
    (k + 1) * (k - 2)
}

/// Potential of the vertex set of `K_s`.
pub fn clique_potential(k: usize, s: usize) -> i64 {
    let (k, s) = (k as i64, s as i64);
    (k + 1) * (k - 2) * s - (k - 1) * s * (s - 1)
}

#[inline]
fn rho_raw(k: usize, size: usize, edges: usize) -> i64 {
    vertex_potential(k) * size as i64 - 2 * (k as i64 - 1) * edges as i64
}

pub fn rho(g: &Graph, k: usize, set: &VertexSet) -> Result<i64> {
    check_k(k)?;
    if let Some(v) = set.iter().find(|&v| v >= g.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    let value = rho_raw(k, set.len(), g.edges_within(set));
    debug_assert!(value % 2 == 0);
    Ok(value)
}

/// `ρ_k(V(G))`.
pub fn rho_full(g: &Graph, k: usize) -> Result<i64> {
    check_k(k)?;
    Ok(rho_raw(k, g.n(), g.m()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Minimum over all nonempty sets (`P_k`).
    AllNonempty,
    /// Minimum over sets with `2 ≤ |W| ≤ n-1` (`P̃_k`).
    ProperNontrivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Minimizers {
    pub p_k: Vec<Vec<usize>>,
    pub p_tilde: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PotentialReport {
    pub k: usize,
    pub rho_full: i64,
    pub p_k: i64,
    /// `None` when the graph has fewer than three vertices.
    pub p_tilde: Option<i64>,
    pub minimizers: Minimizers,
}

pub fn min_potential(g: &Graph, k: usize, mode: Mode) -> Result<PotentialReport> {
    min_potential_capped(g, k, mode, DEFAULT_MINIMIZER_CAP)
}

pub fn min_potential_capped(g: &Graph, k: usize, mode: Mode, cap: usize) -> Result<PotentialReport> {
    check_k(k)?;
    let n = g.n();
    Limits::check("potential enumeration", n, Limits::get().potential.min(63))?;
    if n == 0 {
        return Err(Error::EmptyRange("graph has no vertices".into()));
    }
    if mode == Mode::ProperNontrivial && n < 3 {
        return Err(Error::EmptyRange(format!(
            "no vertex set W with 2 <= |W| <= n-1 exists for n = {n}"
        )));
    }
    let adj: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |a, w| a | 1 << w))
        .collect();

    // Split on the high bits; each chunk walks the low bits in Gray order.
    let high = n.min(6);
    let low = n - high;
    let acc = (0u64..1 << high)
        .into_par_iter()
        .map(|h| scan_chunk(&adj, k, n, low, h << low, cap))
        .reduce(|| Acc::new(cap), |a, b| a.merge(b));

    let to_lists = |v: &[u64]| -> Vec<Vec<usize>> {
        v.iter()
            .map(|&mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
            .collect()
    };
    let report = PotentialReport {
        k,
        rho_full: rho_raw(k, n, g.m()),
        p_k: acc.all.value,
        p_tilde: (n >= 3).then_some(acc.proper.value),
        minimizers: Minimizers {
            p_k: to_lists(&acc.all.sets),
            p_tilde: if n >= 3 { to_lists(&acc.proper.sets) } else { Vec::new() },
        },
    };
    Ok(report)
}

#[derive(Clone)]
struct Best {
    value: i64,
    sets: Vec<u64>,
    cap: usize,
}

impl Best {
    fn new(cap: usize) -> Self {
        Best {
            value: i64::MAX,
            sets: Vec::new(),
            cap,
        }
    }

    #[inline]
    fn offer(&mut self, value: i64, mask: u64) {
        if value < self.value {
            self.value = value;
            self.sets.clear();
            self.sets.push(mask);
        } else if value == self.value {
            self.sets.push(mask);
            if self.sets.len() > 4 * self.cap.max(1) {
                self.trim();
            }
        }
    }

    fn trim(&mut self) {
        self.sets.sort_unstable_by(|&a, &b| cmp_as_lists(a, b));
        self.sets.dedup();
        self.sets.truncate(self.cap);
    }

    fn merge(mut self, other: Best) -> Best {
        if other.value < self.value {
            return other.finish();
        }
        if other.value == self.value {
            self.sets.extend(other.sets);
        }
        self.finish()
    }

    fn finish(mut self) -> Best {
        self.trim();
        self
    }
}

/// Compares masks as sorted vertex lists.
fn cmp_as_lists(mut a: u64, mut b: u64) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    loop {
        match (a == 0, b == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {
                let (x, y) = (a.trailing_zeros(), b.trailing_zeros());
                if x != y {
                    return x.cmp(&y);
                }
                a &= a - 1;
                b &= b - 1;
            }
        }
    }
}

struct Acc {
    all: Best,
    proper: Best,
}

impl Acc {
    fn new(cap: usize) -> Self {
        Acc {
            all: Best::new(cap),
            proper: Best::new(cap),
        }
    }

    fn merge(self, other: Acc) -> Acc {
        Acc {
            all: self.all.merge(other.all),
            proper: self.proper.merge(other.proper),
        }
    }
}

fn scan_chunk(adj: &[u64], k: usize, n: usize, low: usize, base: u64, cap: usize) -> Acc {
    let mut acc = Acc::new(cap);
    let mut set = base;
    let mut edges: usize = (0..n)
        .filter(|&v| base >> v & 1 == 1)
        .map(|v| (adj[v] & base).count_ones() as usize)
        .sum::<usize>()
        / 2;
    let visit = |set: u64, edges: usize, acc: &mut Acc| {
        let size = set.count_ones() as usize;
        if size == 0 {
            return;
        }
        let value = rho_raw(k, size, edges);
        acc.all.offer(value, set);
        if size >= 2 && size < n {
            acc.proper.offer(value, set);
        }
    };
    visit(set, edges, &mut acc);
    for i in 1u64..1u64 << low {
        let bit = i.trailing_zeros() as usize;
        let flip = 1u64 << bit;
        let touching = (adj[bit] & set & !flip).count_ones() as usize;
        if set & flip == 0 {
            set |= flip;
            edges += touching;
        } else {
            set &= !flip;
            edges -= touching;
        }
        visit(set, edges, &mut acc);
    }
    acc.all = acc.all.finish();
    acc.proper = acc.proper.finish();
    acc
}

/// Checks the submodularity identity
/// `ρ(X∩Y) + ρ(X∪Y) = ρ(X) + ρ(Y) - 2(k-1)|E[X-Y, Y-X]|` for one pair.
pub fn check_submodularity(g: &Graph, k: usize, x: &VertexSet, y: &VertexSet) -> Result<bool> {
    let lhs = rho(g, k, &x.intersection(y))? + rho(g, k, &x.union(y))?;
    let only_x = x.difference(y);
    let only_y = y.difference(x);
    let crossing: usize = only_x.iter().map(|v| g.neighbors(v).intersection_len(&only_y)).sum();
    let rhs = rho(g, k, x)? + rho(g, k, y)? - 2 * (k as i64 - 1) * crossing as i64;
    Ok(lhs == rhs)
}
