//! Random instances with planted gadgets, for exercising the decomposers
//! well outside the exact oracle's range.

use serde::{Deserialize, Serialize};

use crate::engine::{
    check_witness, decompose_dense, decompose_sparse, decompose_uniform, EngineOutcome,
    EngineStatus, Thresholds,
};
use crate::graph::{named, Graph};
use crate::pattern::{Pattern, PatternPacking};
use crate::rng::{CounterRng, Draws};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlantedKind {
    Uniform,
    Dense,
    Sparse,
}

impl PlantedKind {
    pub const ALL: [PlantedKind; 3] = [
        PlantedKind::Uniform,
        PlantedKind::Dense,
        PlantedKind::Sparse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PlantedKind::Uniform => "uniform",
            PlantedKind::Dense => "dense",
            PlantedKind::Sparse => "sparse",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedInstance {
    pub kind: PlantedKind,
    pub graph: Graph,
    /// The planted copies, after relabelling.
    pub packing: PatternPacking,
}

/// Instance `index` of family `kind` under `seed`.
pub fn planted_instance(kind: PlantedKind, seed: u64, index: u64) -> PlantedInstance {
    let stream = index << 2 | kind as u64;
    let mut d = Draws::new(CounterRng::new(seed, stream), 0);
    let (g, packing) = match kind {
        PlantedKind::Uniform => plant_f(&mut d),
        PlantedKind::Sparse => plant_p3(&mut d, false),
        PlantedKind::Dense => plant_p3(&mut d, true),
    };
    let perm = d.permutation(g.n());
    let copies = packing
        .copies
        .iter()
        .map(|c| c.iter().map(|&v| perm[v]).collect())
        .collect();
    PlantedInstance {
        kind,
        graph: g.relabel(&perm),
        packing: PatternPacking::new(packing.pattern, copies),
    }
}

/// `copy[v]` is the planted copy holding `v`, if any.
fn owner(n: usize, packing: &PatternPacking) -> Vec<Option<usize>> {
    let mut own = vec![None; n];
    for (i, c) in packing.copies.iter().enumerate() {
        for &v in c {
            own[v] = Some(i);
        }
    }
    own
}

fn free_pair(own: &[Option<usize>], u: usize, v: usize) -> bool {
    own[u].is_none() || own[u] != own[v]
}

/// Makes the edge count even by toggling one pair outside every copy.
fn fix_parity(
    g: &mut Graph,
    own: &[Option<usize>],
    d: &mut Draws,
    add_ok: impl Fn(&Graph, usize, usize) -> bool,
) {
    if g.edge_count().is_multiple_of(2) {
        return;
    }
    let n = g.n();
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|v| (0..v).map(move |u| (u, v)))
        .filter(|&(u, v)| free_pair(own, u, v))
        .collect();
    d.shuffle(&mut pairs);
    let pick = pairs
        .iter()
        .find(|&&(u, v)| g.has_edge(u, v) || add_ok(g, u, v))
        .copied()
        .expect("an odd edge count always leaves a removable edge outside the copies");
    g.toggle_edge(pick.0, pick.1);
}

/// `t` copies of `F`, a small core, and random extra edges that never close
/// a clique on `t + 1` vertices.
fn plant_f(d: &mut Draws) -> (Graph, PatternPacking) {
    let t = d.range(2, 3);
    let core = if t == 2 {
        d.range(0, 24)
    } else {
        d.range(0, 4)
    };
    let mut g = Graph::empty(0);
    for _ in 0..t {
        g = g.disjoint_union(&named::gadget_f());
    }
    g.add_vertices(core);
    let packing = PatternPacking::new(
        Pattern::F,
        (0..t).map(|i| (20 * i..20 * i + 20).collect()).collect(),
    );
    let own = owner(g.n(), &packing);
    let p = [0.02, 0.05, 0.1, 0.2][d.below(4) as usize];
    let safe = |g: &Graph, u: usize, v: usize| {
        let common = g.neighbors(u).intersection(g.neighbors(v));
        !g.induced(common).has_clique_of_size(t - 1)
    };
    let n = g.n();
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|v| (0..v).map(move |u| (u, v)))
        .filter(|&(u, v)| free_pair(&own, u, v))
        .collect();
    d.shuffle(&mut pairs);
    for (u, v) in pairs {
        if d.bernoulli(p) && safe(&g, u, v) {
            g.add_edge(u, v);
        }
    }
    fix_parity(&mut g, &own, d, |_, _, _| false);
    (g, packing)
}

/// `k` induced paths on four vertices plus a core, with sparse random edges
/// elsewhere; complemented for the dense family.
fn plant_p3(d: &mut Draws, dense: bool) -> (Graph, PatternPacking) {
    let k = d.range(3, 8);
    let core = d.range(2, (64 - 4 * k).min(24));
    let mut g = Graph::empty(0);
    for _ in 0..k {
        g = g.disjoint_union(&named::path(4));
    }
    g.add_vertices(core);
    let mut copies: Vec<Vec<usize>> = (0..k).map(|i| (4 * i..4 * i + 4).collect()).collect();
    let own = owner(g.n(), &PatternPacking::new(Pattern::P3, copies.clone()));
    let p = [0.01, 0.03, 0.06, 0.1][d.below(4) as usize];
    for v in 0..g.n() {
        for u in 0..v {
            if free_pair(&own, u, v) && d.bernoulli(p) {
                g.add_edge(u, v);
            }
        }
    }
    if dense {
        g = g.complement();
        // the complement of the path a-b-c-d is the path c-a-d-b
        for c in &mut copies {
            *c = vec![c[2], c[0], c[3], c[1]];
        }
    }
    fix_parity(&mut g, &own, d, |_, _, _| true);
    (g, PatternPacking::new(Pattern::P3, copies))
}

/// Runs the decomposer matching the family. Dense and sparse use permissive
/// thresholds and search their own packing; uniform is handed the planted one.
pub fn run_planted(inst: &PlantedInstance) -> EngineOutcome {
    let g = &inst.graph;
    match inst.kind {
        PlantedKind::Uniform => decompose_uniform(g, &inst.packing, inst.packing.len()),
        PlantedKind::Dense => decompose_dense(g, Thresholds::permissive(g, true)),
        PlantedKind::Sparse => decompose_sparse(g, Thresholds::permissive(g, false)),
    }
}

/// Tallies over a batch of planted instances.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedTally {
    pub instances: u64,
    pub decomposed: u64,
    /// Decomposed outcomes whose witness failed an independent replay.
    pub bad_witness: u64,
    pub condition_unmet: u64,
    pub faults: u64,
    pub other: u64,
}

impl PlantedTally {
    pub fn add(&mut self, g: &Graph, out: &EngineOutcome) {
        self.instances += 1;
        match &out.status {
            EngineStatus::Decomposed { witness } => {
                self.decomposed += 1;
                if check_witness(g, witness).is_err() {
                    self.bad_witness += 1;
                }
            }
            EngineStatus::ConditionUnmet { .. } => self.condition_unmet += 1,
            EngineStatus::Fault { .. } => self.faults += 1,
            _ => self.other += 1,
        }
    }

    pub fn merge(mut self, o: PlantedTally) -> PlantedTally {
        self.instances += o.instances;
        self.decomposed += o.decomposed;
        self.bad_witness += o.bad_witness;
        self.condition_unmet += o.condition_unmet;
        self.faults += o.faults;
        self.other += o.other;
        self
    }

    pub fn sound(&self) -> bool {
        self.bad_witness == 0 && self.faults == 0
    }
}

/// Runs instances `0..count` of `kind` in parallel.
pub fn planted_batch(kind: PlantedKind, count: u64, seed: u64) -> PlantedTally {
    use rayon::prelude::*;
    (0..count)
        .into_par_iter()
        .map(|i| {
            let inst = planted_instance(kind, seed, i);
            let mut t = PlantedTally::default();
            t.add(&inst.graph, &run_planted(&inst));
            t
        })
        .reduce(PlantedTally::default, PlantedTally::merge)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_even_and_keep_their_gadgets() {
        for kind in PlantedKind::ALL {
            for i in 0..40 {
                let inst = planted_instance(kind, 11, i);
                assert_eq!(inst.graph.edge_count() % 2, 0);
                assert!(inst.packing.is_valid_in(&inst.graph), "{kind:?} {i}");
                assert_eq!(inst, planted_instance(kind, 11, i));
            }
        }
    }

    #[test]
    fn uniform_instances_respect_the_clique_bound() {
        for i in 0..40 {
            let inst = planted_instance(PlantedKind::Uniform, 3, i);
            assert!(!inst.graph.has_clique_of_size(inst.packing.len() + 1));
        }
    }

    #[test]
    fn small_batches_are_sound() {
        for kind in PlantedKind::ALL {
            let t = planted_batch(kind, 200, 5);
            assert!(t.sound(), "{kind:?} {t:?}");
            assert!(t.decomposed > 0, "{kind:?} {t:?}");
        }
    }
}
