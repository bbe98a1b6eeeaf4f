//! Packings of vertex-disjoint induced copies of the two gadget patterns:
//! the path `P3` (four vertices, three edges) and `F` (two disjoint copies of
//! `K_{5,5}`).

use serde::{Deserialize, Serialize};

use crate::graph::{above, named, Graph, VertexSet};
use crate::rng::CounterRng;

/// Default number of candidate checks a search may spend.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

const F_SEARCH_SEED: u64 = 0x5eed_f00d_0f0f;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pattern {
    P3,
    F,
}

impl Pattern {
    pub fn order(self) -> usize {
        match self {
            Pattern::P3 => 4,
            Pattern::F => 20,
        }
    }

    /// The pattern graph; tuple position `i` of a copy maps to vertex `i`.
    ///
    /// `P3` is the path `0-1-2-3`. `F` has parts `0..5 | 5..10` and
    /// `10..15 | 15..20`.
    pub fn graph(self) -> Graph {
        match self {
            Pattern::P3 => named::path(4),
            Pattern::F => named::gadget_f(),
        }
    }
}

/// Pairwise-disjoint vertex tuples, each inducing `pattern` position by
/// position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternPacking {
    pub pattern: Pattern,
    pub copies: Vec<Vec<usize>>,
    /// The search ran out of budget before reaching its target.
    pub budget_exhausted: bool,
}

impl PatternPacking {
    pub fn new(pattern: Pattern, copies: Vec<Vec<usize>>) -> Self {
        PatternPacking {
            pattern,
            copies,
            budget_exhausted: false,
        }
    }

    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    pub fn vertex_sets(&self) -> impl Iterator<Item = VertexSet> + '_ {
        self.copies.iter().map(|c| c.iter().copied().collect())
    }

    pub fn covered(&self) -> VertexSet {
        self.vertex_sets().fold(VertexSet::EMPTY, VertexSet::union)
    }

    /// Every copy is an exact induced copy and copies are pairwise disjoint.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let mut seen = VertexSet::EMPTY;
        for copy in &self.copies {
            if !induces_pattern(g, copy, self.pattern) {
                return false;
            }
            let set: VertexSet = copy.iter().copied().collect();
            if !seen.is_disjoint(set) {
                return false;
            }
            seen = seen.union(set);
        }
        true
    }
}

/// Naive pairwise check: `tuple[i] ~ tuple[j]` in `g` exactly when `i ~ j`
/// in the pattern. Labels must be distinct and in range.
pub fn induces_pattern(g: &Graph, tuple: &[usize], pattern: Pattern) -> bool {
    let h = pattern.graph();
    if tuple.len() != h.n() || tuple.iter().any(|&v| v >= g.n()) {
        return false;
    }
    for i in 0..tuple.len() {
        for j in i + 1..tuple.len() {
            if tuple[i] == tuple[j] || g.has_edge(tuple[i], tuple[j]) != h.has_edge(i, j) {
                return false;
            }
        }
    }
    true
}

/// Greedy search for up to `target` disjoint induced copies of `pattern`.
///
/// `budget` caps candidate checks; running out returns the partial packing
/// with `budget_exhausted` set.
pub fn find_disjoint_induced(
    g: &Graph,
    pattern: Pattern,
    target: usize,
    budget: u64,
) -> PatternPacking {
    match pattern {
        Pattern::P3 => find_p3(g, target, budget),
        Pattern::F => find_f(g, target, budget, F_SEARCH_SEED),
    }
}

/// `F` search with an explicit seed for the anchor-edge sampling order.
pub fn find_disjoint_f_seeded(g: &Graph, target: usize, budget: u64, seed: u64) -> PatternPacking {
    find_f(g, target, budget, seed)
}

/// First-fit sweep in label order: middle edge `b-c`, then the lowest
/// admissible end `a` at `b` and `d` at `c`.
fn find_p3(g: &Graph, target: usize, budget: u64) -> PatternPacking {
    let mut packing = PatternPacking::new(Pattern::P3, Vec::new());
    let mut avail = g.vertices();
    let mut spent = 0u64;
    'outer: for b in g.vertices() {
        for c in g.neighbors(b) {
            if packing.len() >= target {
                break 'outer;
            }
            if !avail.contains(b) {
                continue 'outer;
            }
            if !avail.contains(c) {
                continue;
            }
            spent += 1;
            if spent > budget {
                packing.budget_exhausted = true;
                break 'outer;
            }
            let nb = g.neighbors(b);
            let nc = g.neighbors(c);
            let a_cands = nb
                .difference(nc)
                .intersection(avail)
                .difference(VertexSet::singleton(c));
            for a in a_cands {
                let d_cands = nc
                    .difference(nb)
                    .difference(g.neighbors(a))
                    .intersection(avail)
                    .difference(VertexSet::from_vertices([a, b]));
                if let Some(d) = d_cands.first() {
                    packing.copies.push(vec![a, b, c, d]);
                    for v in [a, b, c, d] {
                        avail.remove(v);
                    }
                    continue 'outer;
                }
            }
        }
    }
    packing
}

/// An induced `K_{5,5}`: `left` and `right` independent, complete to each other.
#[derive(Debug, Clone, Copy)]
struct Biclique {
    left: VertexSet,
    right: VertexSet,
}

impl Biclique {
    fn vertices(self) -> VertexSet {
        self.left.union(self.right)
    }
}

struct BicliqueSearch<'g> {
    g: &'g Graph,
    spent: u64,
    budget: u64,
}

impl BicliqueSearch<'_> {
    fn tick(&mut self) -> bool {
        self.spent += 1;
        self.spent <= self.budget
    }

    /// Extends an anchor edge `u-v` to an induced `K_{5,5}` inside `avail`.
    fn around_edge(&mut self, u: usize, v: usize, avail: VertexSet) -> Option<Biclique> {
        let g = self.g;
        let left_pool = g
            .neighbors(v)
            .difference(g.neighbors(u))
            .intersection(avail)
            .difference(VertexSet::singleton(u));
        let right_pool = g
            .neighbors(u)
            .difference(g.neighbors(v))
            .intersection(avail)
            .difference(VertexSet::singleton(v));
        self.grow_left(
            VertexSet::singleton(u),
            left_pool,
            right_pool,
            VertexSet::singleton(v),
        )
    }

    fn grow_left(
        &mut self,
        left: VertexSet,
        pool: VertexSet,
        right_pool: VertexSet,
        anchor: VertexSet,
    ) -> Option<Biclique> {
        if !self.tick() {
            return None;
        }
        // right side: anchor plus four vertices adjacent to all of `left`
        if right_pool.len() < 4 {
            return None;
        }
        if left.len() == 5 {
            return self
                .grow_right(anchor, right_pool)
                .map(|right| Biclique { left, right });
        }
        if left.len() + pool.len() < 5 {
            return None;
        }
        for x in pool {
            let rest = VertexSet(pool.bits() & above(x)).difference(self.g.neighbors(x));
            let next_right = right_pool.intersection(self.g.neighbors(x));
            let mut bigger = left;
            bigger.insert(x);
            if let Some(b) = self.grow_left(bigger, rest, next_right, anchor) {
                return Some(b);
            }
            if self.spent > self.budget {
                return None;
            }
        }
        None
    }

    fn grow_right(&mut self, right: VertexSet, pool: VertexSet) -> Option<VertexSet> {
        if !self.tick() {
            return None;
        }
        if right.len() == 5 {
            return Some(right);
        }
        if right.len() + pool.len() < 5 {
            return None;
        }
        for y in pool {
            let rest = VertexSet(pool.bits() & above(y)).difference(self.g.neighbors(y));
            let mut bigger = right;
            bigger.insert(y);
            if let Some(r) = self.grow_right(bigger, rest) {
                return Some(r);
            }
            if self.spent > self.budget {
                return None;
            }
        }
        None
    }
}

/// Seeded anchor-edge sampling with backtracking completion to disjoint
/// induced `K_{5,5}`s, then greedy pairing of bicliques with no edges between
/// them.
fn find_f(g: &Graph, target: usize, budget: u64, seed: u64) -> PatternPacking {
    let mut packing = PatternPacking::new(Pattern::F, Vec::new());
    if target == 0 {
        return packing;
    }
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    let rng = CounterRng::new(seed, 0);
    // Fisher-Yates driven by the counter generator.
    for i in (1..edges.len()).rev() {
        let j = rng.below(i as u64, i as u64 + 1) as usize;
        edges.swap(i, j);
    }

    let mut search = BicliqueSearch {
        g,
        spent: 0,
        budget,
    };
    let mut avail = g.vertices();
    let mut found: Vec<Biclique> = Vec::new();
    let mut paired = vec![false; 0];
    for (u, v) in edges {
        if !avail.contains(u) || !avail.contains(v) {
            continue;
        }
        if search.spent > budget {
            packing.budget_exhausted = true;
            break;
        }
        let hit = search
            .around_edge(u, v, avail)
            .or_else(|| search.around_edge(v, u, avail));
        let Some(b) = hit else { continue };
        avail = avail.difference(b.vertices());
        found.push(b);
        paired.push(false);
        // Pair the new biclique with the earliest unpaired one it sends no edges to.
        let last = found.len() - 1;
        if let Some(i) =
            (0..last).find(|&i| !paired[i] && g.sends_no_edges(found[i].vertices(), b.vertices()))
        {
            paired[i] = true;
            paired[last] = true;
            let (first, second) = (found[i], b);
            let copy: Vec<usize> = [first.left, first.right, second.left, second.right]
                .into_iter()
                .flat_map(VertexSet::iter)
                .collect();
            packing.copies.push(copy);
            if packing.len() >= target {
                return packing;
            }
        }
    }
    if search.spent > budget {
        packing.budget_exhausted = true;
    }
    packing
}
