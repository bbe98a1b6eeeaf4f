//! Even-degenerate orderings: verifier, smallest-label greedy, exact search.

use serde::{Deserialize, Serialize};

use crate::error::CapExceeded;
use crate::graph::{Graph, VertexSet};

/// Default cap on `n` for [`exact_even_degenerate`].
pub const DEGENERATE_CAP: usize = 24;

/// A vertex ordering `v_1, ..., v_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ordering {
    pub perm: Vec<usize>,
}

impl Ordering {
    pub fn new(perm: Vec<usize>) -> Self {
        Ordering { perm }
    }

    pub fn is_permutation_of(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        self.perm.len() == n
            && self
                .perm
                .iter()
                .all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
    }
}

/// True iff every vertex but the last two has an even number of later
/// neighbours.
pub fn verify_ordering(g: &Graph, o: &Ordering) -> bool {
    if !o.is_permutation_of(g.n()) {
        return false;
    }
    let n = g.n();
    for i in 0..n.saturating_sub(2) {
        let later = o.perm[i + 1..]
            .iter()
            .filter(|&&u| g.has_edge(o.perm[i], u))
            .count();
        if later % 2 == 1 {
            return false;
        }
    }
    debug_assert!(
        suffix_parities(g, o)
            .iter()
            .all(|&p| p == g.edge_count() % 2),
        "suffix parity drifted on an accepted ordering"
    );
    true
}

/// Parity of `e(G[{v_i, ..., v_n}])` for `i = 1..=n-1`.
pub fn suffix_parities(g: &Graph, o: &Ordering) -> Vec<usize> {
    let n = g.n();
    (0..n.saturating_sub(1))
        .map(|i| g.edges_in(o.perm[i..].iter().copied().collect()) % 2)
        .collect()
}

/// Repeatedly removes the smallest-labelled even-degree vertex. Succeeds once
/// at most two vertices remain; otherwise returns the stuck set, in which
/// every degree is odd.
pub fn greedy_ordering(g: &Graph) -> Result<Ordering, VertexSet> {
    let mut w = g.vertices();
    let mut perm = Vec::with_capacity(g.n());
    while w.len() > 2 {
        let v = w
            .iter()
            .find(|&v| (g.row(v) & w.bits()).count_ones().is_multiple_of(2))
            .ok_or(w)?;
        perm.push(v);
        w.remove(v);
    }
    perm.extend(w.iter());
    Ok(Ordering { perm })
}

/// Exact decision with the default cap.
pub fn exact_even_degenerate(g: &Graph) -> Result<Option<Ordering>, CapExceeded> {
    exact_even_degenerate_capped(g, DEGENERATE_CAP)
}

pub fn exact_even_degenerate_capped(
    g: &Graph,
    cap: usize,
) -> Result<Option<Ordering>, CapExceeded> {
    if g.n() > cap {
        return Err(CapExceeded {
            what: "exact even-degeneracy",
            n: g.n(),
            cap,
        });
    }
    if let Ok(o) = greedy_ordering(g) {
        return Ok(Some(o));
    }
    let mut search = DegenerateSearch::new(g.n());
    let mut perm = Vec::with_capacity(g.n());
    if search.good(g, g.vertices(), &mut perm) {
        Ok(Some(Ordering { perm }))
    } else {
        Ok(None)
    }
}

/// Reusable depth-first search with a memo of failed vertex sets.
#[derive(Debug, Clone)]
pub struct DegenerateSearch {
    failed: Vec<u64>,
    n: usize,
}

impl DegenerateSearch {
    pub fn new(n: usize) -> Self {
        DegenerateSearch {
            failed: vec![0; ((1usize << n) / 64).max(1)],
            n,
        }
    }

    /// Decides `g` without building an ordering.
    pub fn decide(&mut self, g: &Graph) -> bool {
        if g.n() != self.n {
            *self = DegenerateSearch::new(g.n());
        } else {
            self.failed.fill(0);
        }
        let mut w = g.vertices();
        // walk the greedy path first; on success no memo is needed
        while w.len() > 2 {
            match w
                .iter()
                .find(|&v| (g.row(v) & w.bits()).count_ones().is_multiple_of(2))
            {
                Some(v) => w.remove(v),
                None => break,
            }
        }
        if w.len() <= 2 {
            return true;
        }
        let mut scratch = Vec::new();
        self.good(g, g.vertices(), &mut scratch)
    }

    fn good(&mut self, g: &Graph, w: VertexSet, perm: &mut Vec<usize>) -> bool {
        if w.len() <= 2 {
            perm.extend(w.iter());
            return true;
        }
        let idx = w.bits() as usize;
        if self.failed[idx / 64] >> (idx % 64) & 1 == 1 {
            return false;
        }
        for v in w {
            if (g.row(v) & w.bits()).count_ones().is_multiple_of(2) {
                perm.push(v);
                let mut rest = w;
                rest.remove(v);
                if self.good(g, rest, perm) {
                    return true;
                }
                perm.pop();
            }
        }
        self.failed[idx / 64] |= 1 << (idx % 64);
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    #[test]
    fn verify_examples() {
        let k3 = Graph::complete(3);
        assert!(verify_ordering(&k3, &Ordering::new(vec![2, 0, 1])));
        let k4 = Graph::complete(4);
        assert!(!verify_ordering(&k4, &Ordering::new(vec![0, 1, 2, 3])));
        assert!(verify_ordering(
            &Graph::complete(2),
            &Ordering::new(vec![1, 0])
        ));
        assert!(!verify_ordering(&k3, &Ordering::new(vec![0, 0, 1])));
    }

    #[test]
    fn greedy_examples() {
        assert_eq!(
            greedy_ordering(&Graph::empty(5)).unwrap().perm,
            vec![0, 1, 2, 3, 4]
        );
        assert_eq!(greedy_ordering(&star(3)).unwrap_err(), VertexSet::full(4));
        let o = greedy_ordering(&path(4)).unwrap();
        assert_eq!(o.perm, vec![1, 0, 2, 3]);
        assert!(verify_ordering(&path(4), &o));
    }

    /// Brute force over all orderings.
    fn any_ordering(g: &Graph) -> bool {
        fn rec(g: &Graph, w: VertexSet) -> bool {
            w.len() <= 2
                || w.iter().any(|v| {
                    let mut r = w;
                    r.remove(v);
                    (g.row(v) & r.bits()).count_ones().is_multiple_of(2) && rec(g, r)
                })
        }
        rec(g, g.vertices())
    }

    #[test]
    fn exact_matches_brute_force_on_five_vertices() {
        let pairs: Vec<(usize, usize)> = crate::format::pair_order(5).collect();
        let mut search = DegenerateSearch::new(5);
        for idx in 0u32..1 << pairs.len() {
            let g = Graph::from_edges(
                5,
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| idx >> k & 1 == 1)
                    .map(|(_, &p)| p),
            )
            .unwrap();
            let want = any_ordering(&g);
            let got = exact_even_degenerate(&g).unwrap();
            assert_eq!(got.is_some(), want, "{g:?}");
            assert_eq!(search.decide(&g), want);
            if let Some(o) = got {
                assert!(verify_ordering(&g, &o));
            }
        }
    }

    #[test]
    fn four_vertex_count() {
        let pairs: Vec<(usize, usize)> = crate::format::pair_order(4).collect();
        let mut bad = 0;
        for idx in 0u32..64 {
            let g = Graph::from_edges(
                4,
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| idx >> k & 1 == 1)
                    .map(|(_, &p)| p),
            )
            .unwrap();
            if exact_even_degenerate(&g).unwrap().is_none() {
                bad += 1;
                assert_eq!(g.degree_parities(), 0b1111);
            }
        }
        assert_eq!(bad, 8);
    }

    #[test]
    fn cap() {
        assert!(exact_even_degenerate_capped(&Graph::empty(10), 9).is_err());
        assert_eq!(exact_even_degenerate(&Graph::complete(4)).unwrap(), None);
    }
}
