//! Exact even-decomposability by search over vertex subsets, and the
//! exhaustive census of all labelled graphs on `n` vertices.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clique::has_clique_of_size;
use crate::degeneracy::DegenerateSearch;
use crate::engine::DecompositionWitness;
use crate::error::CapExceeded;
use crate::format::{emit_graph6, pair_order};
use crate::graph::{Graph, VertexSet};

/// Default cap on `n` for [`exact_even_decomposable`].
pub const DECOMPOSABLE_CAP: usize = 18;
/// Hard ceiling for the subset tables, whatever cap is requested.
pub const DECOMPOSABLE_HARD_CAP: usize = 24;
/// Census caps per mode.
pub const CENSUS_DECOMPOSABLE_CAP: usize = 7;
pub const CENSUS_DEGENERATE_CAP: usize = 8;

/// `Some(witness)` iff `g` is even-decomposable, for `n <= 18`.
pub fn exact_even_decomposable(g: &Graph) -> Result<Option<DecompositionWitness>, CapExceeded> {
    exact_even_decomposable_capped(g, DECOMPOSABLE_CAP)
}

pub fn exact_even_decomposable_capped(
    g: &Graph,
    cap: usize,
) -> Result<Option<DecompositionWitness>, CapExceeded> {
    let cap = cap.min(DECOMPOSABLE_HARD_CAP);
    if g.n() > cap {
        return Err(CapExceeded {
            what: "exact even-decomposability",
            n: g.n(),
            cap,
        });
    }
    let mut search = DecomposeSearch::new(g.n());
    Ok(search.witness(g))
}

/// Reusable subset search. `indep` and `parity` are tables over all vertex
/// masks; `failed` memoises sets already shown not to be removable.
#[derive(Debug, Clone)]
pub struct DecomposeSearch {
    n: usize,
    indep: Vec<u64>,
    parity: Vec<u64>,
    failed: Vec<u64>,
}

#[inline]
fn get(bits: &[u64], i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

#[inline]
fn set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

impl DecomposeSearch {
    pub fn new(n: usize) -> Self {
        let words = ((1usize << n) / 64).max(1);
        DecomposeSearch {
            n,
            indep: vec![0; words],
            parity: vec![0; words],
            failed: vec![0; words],
        }
    }

    fn prepare(&mut self, g: &Graph) {
        if g.n() != self.n {
            *self = DecomposeSearch::new(g.n());
        }
        self.indep.fill(0);
        self.parity.fill(0);
        self.failed.fill(0);
        set(&mut self.indep, 0);
        for mask in 1usize..1 << self.n {
            let v = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let row = g.row(v) as usize;
            if get(&self.indep, rest) && row & rest == 0 {
                set(&mut self.indep, mask);
            }
            if get(&self.parity, rest) ^ ((row & rest).count_ones() & 1 == 1) {
                set(&mut self.parity, mask);
            }
        }
    }

    /// True iff `g` is even-decomposable.
    pub fn decide(&mut self, g: &Graph) -> bool {
        if g.edge_count() % 2 == 1 {
            return false;
        }
        self.prepare(g);
        self.good(g.vertices().bits() as usize, None)
    }

    pub fn witness(&mut self, g: &Graph) -> Option<DecompositionWitness> {
        if g.edge_count() % 2 == 1 {
            return None;
        }
        self.prepare(g);
        let mut steps = Vec::new();
        self.good(g.vertices().bits() as usize, Some(&mut steps))
            .then(|| {
                DecompositionWitness::new(
                    g.vertices(),
                    steps.into_iter().rev().map(|s| VertexSet(s as u64)),
                )
            })
    }

    /// `w` has an even number of edges on entry. Steps are pushed innermost
    /// first.
    fn good(&mut self, w: usize, mut steps: Option<&mut Vec<usize>>) -> bool {
        if w == 0 {
            return true;
        }
        if get(&self.failed, w) {
            return false;
        }
        // submasks of w in decreasing order
        let mut s = w;
        while s != 0 {
            let rest = w ^ s;
            if get(&self.indep, s)
                && !get(&self.parity, rest)
                && self.good(rest, steps.as_deref_mut())
            {
                if let Some(st) = steps {
                    st.push(s);
                }
                return true;
            }
            s = (s - 1) & w;
        }
        set(&mut self.failed, w);
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusOptions {
    pub decomposability: bool,
    pub degeneracy: bool,
    /// Exemplars kept per class, first in index order.
    pub exemplars: usize,
    pub workers: usize,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            decomposability: true,
            degeneracy: true,
            exemplars: 0,
            workers: 1,
        }
    }
}

/// First graphs (as graph6) of each notable class.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exemplars {
    pub even_non_decomposable: Vec<String>,
    pub non_even_degenerate: Vec<String>,
    pub k4_free_even_non_decomposable: Vec<String>,
    pub degenerate_even_non_decomposable: Vec<String>,
}

impl Exemplars {
    fn append(&mut self, other: Exemplars, k: usize) {
        for (mine, theirs) in [
            (&mut self.even_non_decomposable, other.even_non_decomposable),
            (&mut self.non_even_degenerate, other.non_even_degenerate),
            (
                &mut self.k4_free_even_non_decomposable,
                other.k4_free_even_non_decomposable,
            ),
            (
                &mut self.degenerate_even_non_decomposable,
                other.degenerate_even_non_decomposable,
            ),
        ] {
            let room = k.saturating_sub(mine.len());
            mine.extend(theirs.into_iter().take(room));
        }
    }
}

/// Exact class counts over all `2^C(n,2)` labelled graphs on `n` vertices.
/// Counts for a disabled mode are `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub n: usize,
    pub total: u64,
    pub even_edge: u64,
    pub even_decomposable: Option<u64>,
    pub even_degenerate: Option<u64>,
    pub non_even_degenerate: Option<u64>,
    pub k4_free_even_non_decomposable: Option<u64>,
    pub degenerate_even_non_decomposable: Option<u64>,
    /// Non-even-degenerate graphs whose degrees are all odd.
    pub non_degenerate_all_odd: Option<u64>,
    pub exemplars: Exemplars,
}

impl CensusReport {
    pub const CSV_HEADER: [&'static str; 13] = [
        "n",
        "total",
        "even_edge",
        "even_decomposable",
        "even_degenerate",
        "non_even_degenerate",
        "k4_free_even_non_decomposable",
        "degenerate_even_non_decomposable",
        "non_degenerate_all_odd",
        "exemplars_even_non_decomposable",
        "exemplars_non_even_degenerate",
        "exemplars_k4_free_even_non_decomposable",
        "exemplars_degenerate_even_non_decomposable",
    ];

    pub fn csv_row(&self) -> Vec<String> {
        let opt = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
        let ex = &self.exemplars;
        vec![
            self.n.to_string(),
            self.total.to_string(),
            self.even_edge.to_string(),
            opt(self.even_decomposable),
            opt(self.even_degenerate),
            opt(self.non_even_degenerate),
            opt(self.k4_free_even_non_decomposable),
            opt(self.degenerate_even_non_decomposable),
            opt(self.non_degenerate_all_odd),
            ex.even_non_decomposable.join(" "),
            ex.non_even_degenerate.join(" "),
            ex.k4_free_even_non_decomposable.join(" "),
            ex.degenerate_even_non_decomposable.join(" "),
        ]
    }

    /// Header plus one row.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(Self::CSV_HEADER).expect("in-memory write");
        w.write_record(self.csv_row()).expect("in-memory write");
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

#[derive(Debug, Default)]
struct Tally {
    total: u64,
    even_edge: u64,
    even_decomposable: u64,
    even_degenerate: u64,
    k4_free_bad: u64,
    degenerate_bad: u64,
    all_odd_bad: u64,
    exemplars: Exemplars,
}

impl Tally {
    fn merge(mut self, other: Tally, k: usize) -> Tally {
        self.total += other.total;
        self.even_edge += other.even_edge;
        self.even_decomposable += other.even_decomposable;
        self.even_degenerate += other.even_degenerate;
        self.k4_free_bad += other.k4_free_bad;
        self.degenerate_bad += other.degenerate_bad;
        self.all_odd_bad += other.all_odd_bad;
        self.exemplars.append(other.exemplars, k);
        self
    }
}

const CHUNK: u64 = 1 << 14;

/// The graph whose edge set is given by the bits of `index`, bit `k` being
/// the `k`-th pair in graph6 order.
pub fn graph_from_index(n: usize, index: u64) -> Graph {
    let mut g = Graph::empty(n);
    for (k, (i, j)) in pair_order(n).enumerate() {
        if index >> k & 1 == 1 {
            g.add_edge(i, j);
        }
    }
    g
}

pub fn census(n: usize, opts: CensusOptions) -> Result<CensusReport, CapExceeded> {
    let cap = if opts.decomposability {
        CENSUS_DECOMPOSABLE_CAP
    } else {
        CENSUS_DEGENERATE_CAP
    };
    if n > cap {
        return Err(CapExceeded {
            what: "census",
            n,
            cap,
        });
    }
    let total = 1u64 << (n * n.saturating_sub(1) / 2);
    let chunks = total.div_ceil(CHUNK);
    let k = opts.exemplars;
    let run = || {
        let parts: Vec<Tally> = (0..chunks)
            .into_par_iter()
            .map(|c| census_range(n, c * CHUNK, ((c + 1) * CHUNK).min(total), opts))
            .collect();
        parts
            .into_iter()
            .fold(Tally::default(), |acc, t| acc.merge(t, k))
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .expect("thread pool");
    let t = pool.install(run);
    let dec = opts.decomposability;
    let deg = opts.degeneracy;
    Ok(CensusReport {
        n,
        total: t.total,
        even_edge: t.even_edge,
        even_decomposable: dec.then_some(t.even_decomposable),
        even_degenerate: deg.then_some(t.even_degenerate),
        non_even_degenerate: deg.then_some(t.total - t.even_degenerate),
        k4_free_even_non_decomposable: dec.then_some(t.k4_free_bad),
        degenerate_even_non_decomposable: (dec && deg).then_some(t.degenerate_bad),
        non_degenerate_all_odd: deg.then_some(t.all_odd_bad),
        exemplars: t.exemplars,
    })
}

fn census_range(n: usize, lo: u64, hi: u64, opts: CensusOptions) -> Tally {
    let mut t = Tally::default();
    let mut dec = DecomposeSearch::new(n);
    let mut deg = DegenerateSearch::new(n);
    let k = opts.exemplars;
    let all_odd = VertexSet::full(n).bits();
    for index in lo..hi {
        let g = graph_from_index(n, index);
        t.total += 1;
        let even = g.edge_count().is_multiple_of(2);
        t.even_edge += even as u64;
        let degenerate = opts.degeneracy && deg.decide(&g);
        if opts.degeneracy {
            if degenerate {
                t.even_degenerate += 1;
            } else {
                if g.degree_parities() == all_odd {
                    t.all_odd_bad += 1;
                }
                if t.exemplars.non_even_degenerate.len() < k {
                    t.exemplars.non_even_degenerate.push(emit_graph6(&g));
                }
            }
        }
        if opts.decomposability && even {
            if dec.decide(&g) {
                t.even_decomposable += 1;
            } else {
                if t.exemplars.even_non_decomposable.len() < k {
                    t.exemplars.even_non_decomposable.push(emit_graph6(&g));
                }
                if !has_clique_of_size(&g, 4) {
                    t.k4_free_bad += 1;
                    if t.exemplars.k4_free_even_non_decomposable.len() < k {
                        t.exemplars
                            .k4_free_even_non_decomposable
                            .push(emit_graph6(&g));
                    }
                }
                if degenerate {
                    t.degenerate_bad += 1;
                    if t.exemplars.degenerate_even_non_decomposable.len() < k {
                        t.exemplars
                            .degenerate_even_non_decomposable
                            .push(emit_graph6(&g));
                    }
                }
            }
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::verify_witness;
    use crate::graph::named::*;

    #[test]
    fn examples() {
        assert_eq!(exact_even_decomposable(&Graph::complete(4)).unwrap(), None);
        let w = exact_even_decomposable(&cycle(4)).unwrap().unwrap();
        assert!(verify_witness(&cycle(4), &w));
        assert_eq!(exact_even_decomposable(&path(4)).unwrap(), None);
        assert!(exact_even_decomposable(&Graph::empty(19)).is_err());
        let e = exact_even_decomposable(&Graph::empty(0)).unwrap().unwrap();
        assert!(e.steps.is_empty());
    }

    #[test]
    fn census_four() {
        let r = census(
            4,
            CensusOptions {
                exemplars: 5,
                ..CensusOptions::default()
            },
        )
        .unwrap();
        assert_eq!(r.total, 64);
        assert_eq!(r.even_edge, 32);
        assert_eq!(r.even_decomposable, Some(31));
        assert_eq!(r.exemplars.even_non_decomposable, vec!["C~".to_string()]);
        assert_eq!(r.non_even_degenerate, Some(8));
        assert_eq!(r.non_degenerate_all_odd, Some(8));
        assert_eq!(r.k4_free_even_non_decomposable, Some(0));
    }

    #[test]
    fn census_worker_independent() {
        let opts = CensusOptions {
            exemplars: 3,
            ..CensusOptions::default()
        };
        let one = census(6, CensusOptions { workers: 1, ..opts }).unwrap();
        let four = census(6, CensusOptions { workers: 4, ..opts }).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn census_caps() {
        assert!(census(8, CensusOptions::default()).is_err());
        assert!(census(
            9,
            CensusOptions {
                decomposability: false,
                ..CensusOptions::default()
            }
        )
        .is_err());
    }

    #[test]
    fn csv_has_header_and_row() {
        let r = census(3, CensusOptions::default()).unwrap();
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("n,total,even_edge"));
        assert!(lines[1].starts_with("3,8,"));
    }
}
