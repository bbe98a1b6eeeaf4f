//! Exact clique detection: branch and bound over bit-set candidates, pruned
//! with greedy colouring bounds.

use crate::graph::{bit, Graph, VertexSet};

/// True iff `g` contains a clique on `k` vertices.
pub fn has_clique_of_size(g: &Graph, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    if k > g.n() {
        return false;
    }
    expand(g, g.vertices().bits(), 0, k)
}

/// Size of a largest clique.
pub fn clique_number(g: &Graph) -> usize {
    let mut k = 0;
    while has_clique_of_size(g, k + 1) {
        k += 1;
    }
    k
}

/// A maximum clique, lowest-label preference among ties of the search order.
pub fn find_clique_of_size(g: &Graph, k: usize) -> Option<VertexSet> {
    if k > g.n() {
        return None;
    }
    let mut chosen = Vec::with_capacity(k);
    find(g, g.vertices().bits(), k, &mut chosen).then(|| chosen.into_iter().collect())
}

fn expand(g: &Graph, mut cand: u64, depth: usize, k: usize) -> bool {
    if depth >= k {
        return true;
    }
    if depth + (cand.count_ones() as usize) < k {
        return false;
    }
    let mut order = Vec::with_capacity(cand.count_ones() as usize);
    let mut colors = Vec::with_capacity(order.capacity());
    color_sort(g, cand, &mut order, &mut colors);
    for i in (0..order.len()).rev() {
        if depth + colors[i] < k {
            return false;
        }
        let v = order[i];
        if expand(g, cand & g.row(v), depth + 1, k) {
            return true;
        }
        cand &= !bit(v);
    }
    false
}

/// Greedy sequential colouring of `cand`; appends vertices in non-decreasing
/// colour order together with their colour (1-based).
fn color_sort(g: &Graph, cand: u64, order: &mut Vec<usize>, colors: &mut Vec<usize>) {
    let mut uncolored = cand;
    let mut color = 0;
    while uncolored != 0 {
        color += 1;
        let mut q = uncolored;
        while q != 0 {
            let v = q.trailing_zeros() as usize;
            q &= !bit(v);
            q &= !g.row(v);
            uncolored &= !bit(v);
            order.push(v);
            colors.push(color);
        }
    }
}

fn find(g: &Graph, mut cand: u64, k: usize, chosen: &mut Vec<usize>) -> bool {
    if chosen.len() >= k {
        return true;
    }
    while cand != 0 {
        if chosen.len() + (cand.count_ones() as usize) < k {
            return false;
        }
        let v = cand.trailing_zeros() as usize;
        cand &= !bit(v);
        let next = cand & g.row(v);
        // Only descend when a k-clique is still reachable through v.
        if expand(g, next, chosen.len() + 1, k) {
            chosen.push(v);
            if find(g, next, k, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    fn brute_force_clique_number(g: &Graph) -> usize {
        let n = g.n();
        (0u64..1 << n)
            .filter(|&m| g.is_clique(VertexSet(m)))
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn examples() {
        assert!(has_clique_of_size(&Graph::complete(4), 4));
        assert!(!has_clique_of_size(&cycle(5), 3));
        assert!(has_clique_of_size(&cycle(5), 2));
        assert!(has_clique_of_size(&Graph::empty(3), 1));
        assert!(has_clique_of_size(&Graph::empty(3), 0));
        assert!(has_clique_of_size(&Graph::empty(0), 0));
        assert!(!has_clique_of_size(&Graph::empty(3), 2));
    }

    #[test]
    fn agrees_with_brute_force_on_small_graphs() {
        // Every graph on 6 vertices.
        let pairs: Vec<(usize, usize)> = (1..6).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        for code in 0u32..1 << pairs.len() {
            let g = Graph::from_edges(
                6,
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| code >> i & 1 == 1)
                    .map(|(_, &e)| e),
            )
            .unwrap();
            let w = brute_force_clique_number(&g);
            assert_eq!(clique_number(&g), w, "{g:?}");
            let c = find_clique_of_size(&g, w).unwrap();
            assert!(g.is_clique(c) && c.len() == w);
            assert!(find_clique_of_size(&g, w + 1).is_none());
        }
    }
}
