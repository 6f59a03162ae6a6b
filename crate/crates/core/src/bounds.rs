//! Closed-form edge bounds for k-critical graphs and a harness that checks
//! concrete graphs against them. All arithmetic is exact integer arithmetic.

use serde::Serialize;

use crate::coloring::check_critical;
use crate::constructions::extend_with_complete;
use crate::ore::recognize;
use crate::potential::rho_full;
use crate::{check_k, Error, Graph, Result};

fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b) + (a.rem_euclid(b) != 0) as i64
}

/// Lower bound on the edges of an `n`-vertex k-critical graph:
/// `⌈((k+1)(k-2)n - k(k-3)) / (2(k-1))⌉`.
pub fn f_bound(k: usize, n: usize) -> Result<usize> {
    check_k(k)?;
    if n < k || n == k + 1 {
        return Err(Error::EmptyRange(format!(
            "the bound needs n >= k and n != k + 1 (k = {k}, n = {n})"
        )));
    }
    let (k, n) = (k as i64, n as i64);
    Ok(ceil_div((k + 1) * (k - 2) * n - k * (k - 3), 2 * (k - 1)) as usize)
}

/// `max{2k - 6, k² - 5k + 2}`.
pub fn y(k: usize) -> Result<i64> {
    check_k(k)?;
    let k = k as i64;
    Ok((2 * k - 6).max(k * k - 5 * k + 2))
}

/// Exact minimum edge count of a k-critical graph on `k+2 ≤ n ≤ 2k-1`
/// vertices: `((k-1)n + (n-k)(2k-n)) / 2 - 1`.
pub fn gallai_small_n(k: usize, n: usize) -> Result<usize> {
    check_k(k)?;
    if n < k + 2 || n > 2 * k - 1 {
        return Err(Error::EmptyRange(format!(
            "needs k + 2 <= n <= 2k - 1 (k = {k}, n = {n})"
        )));
    }
    let twice = (k - 1) * n + (n - k) * (2 * k - n);
    debug_assert!(twice.is_multiple_of(2));
    Ok(twice / 2 - 1)
}

/// Edge lower bound for k-critical graphs that are not k-Ore:
/// `⌈((k+1)(k-2)n - y_k) / (2(k-1))⌉`.
pub fn non_ore_bound(k: usize, n: usize) -> Result<usize> {
    let yk = y(k)?;
    let (k, n) = (k as i64, n as i64);
    Ok(ceil_div((k + 1) * (k - 2) * n - yk, 2 * (k - 1)).max(0) as usize)
}

/// Cases in which the minimum edge count is known exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExactCase {
    /// `k ∈ {4, 5}`.
    SmallK,
    /// `k = 6` and `n ≡ 0 (mod 5)`.
    SixZero,
    /// `k = 6` and `n ≡ 2 (mod 5)`.
    SixTwo,
    /// `k = 7` and `n ≡ 2 (mod 6)`.
    SevenTwo,
    /// `n ≡ 1 (mod k-1)`.
    OreResidue,
}

impl ExactCase {
    pub fn roman(self) -> &'static str {
        match self {
            ExactCase::SmallK => "i",
            ExactCase::SixZero => "ii",
            ExactCase::SixTwo => "iii",
            ExactCase::SevenTwo => "iv",
            ExactCase::OreResidue => "v",
        }
    }
}

pub fn exact_cases(k: usize, n: usize) -> Vec<ExactCase> {
    let mut out = Vec::new();
    if k == 4 || k == 5 {
        out.push(ExactCase::SmallK);
    }
    if k == 6 && n.is_multiple_of(5) {
        out.push(ExactCase::SixZero);
    }
    if k == 6 && n % 5 == 2 {
        out.push(ExactCase::SixTwo);
    }
    if k == 7 && n % 6 == 2 {
        out.push(ExactCase::SevenTwo);
    }
    if k >= 4 && n % (k - 1) == 1 {
        out.push(ExactCase::OreResidue);
    }
    out
}

/// The exact minimum edge count of an `n`-vertex k-critical graph when one
/// of the [`ExactCase`]s applies.
pub fn known_exact(k: usize, n: usize) -> Result<Option<usize>> {
    let f = f_bound(k, n)?;
    if exact_cases(k, n).is_empty() {
        return Ok(None);
    }
    if n % (k - 1) == 1 {
        Ok(Some(f))
    } else {
        Ok(Some(non_ore_bound(k, n)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub n: usize,
    pub f: usize,
    pub gallai: Option<usize>,
    pub exact: Option<usize>,
    pub cases: Vec<&'static str>,
}

/// Rows for `n_from..=n_to`, skipping orders where the bound is undefined.
pub fn table(k: usize, n_from: usize, n_to: usize) -> Result<Vec<TableRow>> {
    check_k(k)?;
    let mut rows = Vec::new();
    for n in n_from.max(k)..=n_to {
        if n == k + 1 {
            continue;
        }
        rows.push(TableRow {
            n,
            f: f_bound(k, n)?,
            gallai: gallai_small_n(k, n).ok(),
            exact: known_exact(k, n)?,
            cases: exact_cases(k, n).into_iter().map(ExactCase::roman).collect(),
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    /// `m ≥ F(k,n)`; `None` when the graph is not k-critical or F is undefined.
    pub meets_f: Option<bool>,
    /// k-critical with `ρ_k(V) = k(k-3)`.
    pub is_extremal: bool,
    /// `ρ_k(V) ≤ y_k`; `None` unless the graph is k-critical and not k-Ore.
    pub non_ore_bound_ok: Option<bool>,
    /// `ρ_k(V) = y_k` for a non-Ore k-critical graph.
    pub non_ore_tight: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub k: usize,
    pub n: usize,
    pub m: usize,
    pub f_kn: Option<usize>,
    pub gallai_value: Option<usize>,
    pub y_k: i64,
    pub rho_full: i64,
    pub is_critical: bool,
    pub is_ore: bool,
    pub verdicts: Verdicts,
}

impl BoundReport {
    /// No bound is violated.
    pub fn consistent(&self) -> bool {
        self.verdicts.meets_f != Some(false) && self.verdicts.non_ore_bound_ok != Some(false)
    }
}

/// Measures a graph against every applicable bound, computing criticality
/// and Ore membership from scratch.
pub fn verify_graph(g: &Graph, k: usize) -> Result<BoundReport> {
    check_k(k)?;
    let n = g.n();
    let rho = rho_full(g, k)?;
    let yk = y(k)?;
    let is_critical = check_critical(g, k)?.is_critical;
    let is_ore = recognize(g, k)?.is_yes();
    let f_kn = f_bound(k, n).ok();
    let ore_potential = (k * (k - 3)) as i64;
    let non_ore = is_critical && !is_ore;
    Ok(BoundReport {
        k,
        n,
        m: g.m(),
        f_kn,
        gallai_value: gallai_small_n(k, n).ok(),
        y_k: yk,
        rho_full: rho,
        is_critical,
        is_ore,
        verdicts: Verdicts {
            meets_f: if is_critical { f_kn.map(|f| g.m() >= f) } else { None },
            is_extremal: is_critical && rho == ore_potential,
            non_ore_bound_ok: non_ore.then_some(rho <= yk),
            non_ore_tight: non_ore.then_some(rho == yk),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecurrenceStep {
    pub n: usize,
    pub m: usize,
    /// Edges gained over the previous step.
    pub increment: Option<usize>,
    /// `None` once criticality is beyond the solver limits.
    pub critical: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecurrenceSeries {
    pub k: usize,
    /// The increment every step should show, `(k+1)(k-2)/2`.
    pub expected_increment: usize,
    pub steps: Vec<RecurrenceStep>,
    /// Why the series stopped early, if it did.
    pub truncated: Option<String>,
}

impl RecurrenceSeries {
    pub fn holds(&self) -> bool {
        self.steps
            .iter()
            .all(|s| s.critical != Some(false) && s.increment.is_none_or(|d| d == self.expected_increment))
    }
}

/// Composes `base` with `K_k` `steps` times, recording the edge increments
/// and re-checking criticality at each stage.
pub fn check_ore_recurrence(k: usize, base: &Graph, steps: usize) -> Result<RecurrenceSeries> {
    check_k(k)?;
    let expected_increment = (k + 1) * (k - 2) / 2;
    let mut series = RecurrenceSeries {
        k,
        expected_increment,
        steps: Vec::new(),
        truncated: None,
    };
    let mut g = base.clone();
    let mut prev: Option<usize> = None;
    for step in 0..=steps {
        let critical = match check_critical(&g, k) {
            Ok(r) => Some(r.is_critical),
            Err(Error::LimitExceeded { .. }) => None,
            Err(e) => return Err(e),
        };
        series.steps.push(RecurrenceStep {
            n: g.n(),
            m: g.m(),
            increment: prev.map(|p| g.m() - p),
            critical,
        });
        if critical == Some(false) && step == 0 {
            return Err(Error::Precondition(format!("base graph is not {k}-critical")));
        }
        if critical.is_none() {
            series.truncated = Some(format!("order {} exceeds the coloring limit", g.n()));
            break;
        }
        if step == steps {
            break;
        }
        prev = Some(g.m());
        g = match extend_with_complete(&g, k) {
            Ok(next) => next,
            Err(Error::Capacity(n)) => {
                series.truncated = Some(format!("order {n} exceeds the bitset capacity"));
                break;
            }
            Err(e) => return Err(e),
        };
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn f_examples() {
        assert_eq!(f_bound(4, 4).unwrap(), 6);
        assert_eq!(f_bound(4, 7).unwrap(), 11);
        assert_eq!(f_bound(5, 9).unwrap(), 19);
        assert!(f_bound(4, 5).is_err());
        assert!(f_bound(4, 3).is_err());
        assert!(f_bound(3, 7).is_err());
    }

    #[test]
    fn y_and_gallai_examples() {
        assert_eq!([y(4).unwrap(), y(5).unwrap(), y(6).unwrap()], [2, 4, 8]);
        assert!(y(3).is_err());
        assert_eq!(gallai_small_n(5, 7).unwrap(), 16);
        assert_eq!(gallai_small_n(7, 9).unwrap(), 31);
        assert_eq!(gallai_small_n(4, 6).unwrap(), 10);
        assert!(gallai_small_n(5, 6).is_err());
        assert!(gallai_small_n(5, 10).is_err());
    }

    #[test]
    fn exact_values_of_the_figure_targets() {
        assert_eq!(known_exact(5, 7).unwrap(), Some(16));
        assert_eq!(known_exact(5, 8).unwrap(), Some(18));
        assert_eq!(known_exact(6, 10).unwrap(), Some(28));
        assert_eq!(known_exact(6, 12).unwrap(), Some(33));
        assert_eq!(known_exact(7, 14).unwrap(), Some(46));
        assert_eq!(known_exact(6, 13).unwrap(), None);
        assert_eq!(known_exact(8, 15).unwrap(), Some(f_bound(8, 15).unwrap()));
    }

    #[test]
    fn gallai_agrees_with_exact_where_both_apply() {
        for k in 4..=12 {
            for n in k + 2..=2 * k - 1 {
                if let Some(e) = known_exact(k, n).unwrap() {
                    assert_eq!(e, gallai_small_n(k, n).unwrap(), "k={k} n={n}");
                }
            }
        }
    }

    #[test]
    fn table_markers() {
        let rows = table(6, 6, 12).unwrap();
        assert!(rows.iter().all(|r| r.n != 7));
        let r10 = rows.iter().find(|r| r.n == 10).unwrap();
        assert_eq!(r10.cases, vec!["ii"]);
        let r11 = rows.iter().find(|r| r.n == 11).unwrap();
        assert_eq!(r11.cases, vec!["v"]);
        let r12 = rows.iter().find(|r| r.n == 12).unwrap();
        assert_eq!(r12.cases, vec!["iii"]);
    }

    #[test]
    fn potential_window_of_y() {
        for k in 4..=50usize {
            let (kk, yk) = (k as i64, y(k).unwrap());
            assert!(kk * (kk - 3) <= yk + 2 * kk - 2);
            assert!(yk + 2 * kk - 2 < (kk + 1) * (kk - 2));
        }
    }

    #[test]
    fn recurrence_from_small_bases() {
        let s = check_ore_recurrence(4, &Graph::complete(4), 3).unwrap();
        assert_eq!(s.steps.iter().map(|s| s.m).collect::<Vec<_>>(), vec![6, 11, 16, 21]);
        assert!(s.holds());
        let s = check_ore_recurrence(6, &Graph::complete(6), 1).unwrap();
        assert_eq!((s.steps[1].n, s.steps[1].m), (11, 29));
        assert!(s.holds());
        assert!(check_ore_recurrence(4, &Graph::cycle(5), 1).is_err());
    }

    #[test]
    fn verify_complete_graph() {
        let r = verify_graph(&Graph::complete(5), 5).unwrap();
        assert!(r.is_ore && r.is_critical && r.verdicts.is_extremal);
        assert_eq!(r.rho_full, 10);
        assert!(r.consistent());
    }

    proptest! {
        #[test]
        fn f_telescopes(k in 4usize..=10, n in 4usize..=200) {
            prop_assume!(n >= k && n != k + 1);
            let step = (k + 1) * (k - 2) / 2;
            prop_assert_eq!(f_bound(k, n + k - 1).unwrap() - f_bound(k, n).unwrap(), step);
        }

        #[test]
        fn f_is_exact_on_ore_residue(k in 4usize..=10, j in 0usize..30) {
            let n = k + j * (k - 1);
            let num = (k + 1) * (k - 2) * n - k * (k - 3);
            prop_assert_eq!(num % (2 * (k - 1)), 0);
            prop_assert_eq!(f_bound(k, n).unwrap(), num / (2 * (k - 1)));
        }
    }
}
