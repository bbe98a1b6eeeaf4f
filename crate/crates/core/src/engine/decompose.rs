//! Whole-graph decomposers: the uniform (`F` gadget), dense and sparse
//! (`P3` gadget) constructions, and the dispatcher that picks among them.

use serde::{Deserialize, Serialize};

use crate::engine::absorb::absorb_clique_in;
use crate::engine::greedy::greedy_in;
use crate::engine::hamilton::hamilton_cycle_dirac;
use crate::engine::p3::absorb_in;
use crate::engine::witness::check_witness;
use crate::engine::{
    Condition, DecompositionWitness, EngineError, EngineOutcome, EngineStatus, Session,
};
use crate::graph::{Graph, VertexSet};
use crate::oracle::exact_even_decomposable_capped;
use crate::pattern::{find_disjoint_induced, Pattern, PatternPacking, DEFAULT_BUDGET};

/// Hypothesis thresholds for the dense and sparse decomposers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Minimum number of disjoint induced `P3`s (`tau1`).
    pub packing: usize,
    /// Forbidden clique size (`tau2`): the graph must have no `K_tau2`.
    pub clique_cap: usize,
    /// Maximum degree in the complement (dense) or the graph (sparse) (`tau3`).
    pub degree_cap: usize,
}

impl Thresholds {
    pub fn new(packing: usize, clique_cap: usize, degree_cap: usize) -> Self {
        Thresholds {
            packing,
            clique_cap,
            degree_cap,
        }
    }

    /// The asymptotic constants `n/100`, `n/200` and `n/10^5`. At desk scale
    /// these make the hypotheses fail outright.
    pub fn asymptotic(n: usize) -> Self {
        Thresholds::new(n.div_ceil(100), n.div_ceil(200), n / 100_000)
    }

    /// Loose thresholds that only demand a handful of gadgets.
    pub fn permissive(g: &Graph, dense: bool) -> Self {
        let n = g.n();
        let cap = if dense {
            g.complement().max_degree()
        } else {
            g.max_degree()
        };
        Thresholds::new(n.div_ceil(100).max(1), n + 1, cap)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Regime {
    Dense,
    Sparse,
}

impl Regime {
    fn name(self) -> &'static str {
        match self {
            Regime::Dense => "dense",
            Regime::Sparse => "sparse",
        }
    }

    /// `r` is complete to `c` (dense) or sends it no edges (sparse).
    fn fits(self, g: &Graph, r: VertexSet, c: VertexSet) -> bool {
        match self {
            Regime::Dense => g.is_complete_to(r, c),
            Regime::Sparse => g.sends_no_edges(r, c),
        }
    }
}

fn outcome(g: &Graph, result: Result<Session, (EngineError, Vec<String>)>) -> EngineOutcome {
    match result {
        Ok(sess) => {
            let mut trace = sess.trace;
            let witness = DecompositionWitness::new(g.vertices(), sess.steps);
            match check_witness(g, &witness) {
                Ok(()) => {
                    trace.push(format!("verified {} steps", witness.steps.len()));
                    EngineOutcome::new(EngineStatus::Decomposed { witness }, trace)
                }
                Err(fault) => EngineOutcome::new(
                    EngineStatus::Fault {
                        reason: format!("witness rejected: {fault}"),
                    },
                    trace,
                ),
            }
        }
        Err((EngineError::ConditionUnmet(c), trace)) => EngineOutcome::unmet(c, trace),
        Err((e, trace)) => EngineOutcome::new(
            EngineStatus::Fault {
                reason: e.to_string(),
            },
            trace,
        ),
    }
}

/// Runs `body` in a fresh session over all of `g`, keeping the trace on failure.
fn session<'g>(
    g: &'g Graph,
    trace: Vec<String>,
    body: impl FnOnce(&mut Session<'g>) -> Result<(), EngineError>,
) -> Result<Session<'g>, (EngineError, Vec<String>)> {
    let mut sess = Session::new(g, g.vertices());
    sess.trace = trace;
    match body(&mut sess) {
        Ok(()) => Ok(sess),
        Err(e) => Err((e, sess.trace)),
    }
}

/// Removes the final remainder, which must be independent.
fn finish(sess: &mut Session) -> Result<(), EngineError> {
    let rest = sess.remaining;
    if rest.is_empty() {
        return Ok(());
    }
    if !sess.g.is_independent(rest) {
        return Err(EngineError::Postcondition(format!(
            "remainder {rest:?} spans an edge"
        )));
    }
    sess.note(format!("final remainder {rest:?}"));
    sess.remove(rest)
}

/// Decomposes `g` using `t` disjoint induced copies of `F` from `packing`,
/// provided `g` has no clique on `t + 1` vertices.
pub fn decompose_uniform(g: &Graph, packing: &PatternPacking, t: usize) -> EngineOutcome {
    if g.edge_count() % 2 == 1 {
        return EngineOutcome::unmet(Condition::OddEdgeCount, vec![]);
    }
    if packing.pattern != Pattern::F || packing.len() < t || !packing.is_valid_in(g) {
        return EngineOutcome::unmet(Condition::Packing, vec![]);
    }
    if g.has_clique_of_size(t + 1) {
        return EngineOutcome::unmet(Condition::CliqueBound, vec![]);
    }
    let gadgets: Vec<VertexSet> = packing.vertex_sets().take(t).collect();
    let covered = gadgets
        .iter()
        .fold(VertexSet::EMPTY, |acc, &r| acc.union(r));
    let result = session(g, vec![], |sess| {
        let mut c = greedy_in(sess, g.vertices().difference(covered))?;
        sess.note(format!("stage 1 left clique {c:?}"));
        for (i, &r) in gadgets.iter().enumerate() {
            c = absorb_clique_in(sess, r, c)?;
            sess.note(format!("gadget {i} left clique {c:?}"));
        }
        finish(sess)
    });
    outcome(g, result)
}

pub fn decompose_dense(g: &Graph, cfg: Thresholds) -> EngineOutcome {
    decompose_p3(g, cfg, Regime::Dense)
}

pub fn decompose_sparse(g: &Graph, cfg: Thresholds) -> EngineOutcome {
    decompose_p3(g, cfg, Regime::Sparse)
}

fn decompose_p3(g: &Graph, cfg: Thresholds, regime: Regime) -> EngineOutcome {
    if g.edge_count() % 2 == 1 {
        return EngineOutcome::unmet(Condition::OddEdgeCount, vec![]);
    }
    let (deg, cap_condition) = match regime {
        Regime::Dense => (g.complement().max_degree(), Condition::ComplementDegreeCap),
        Regime::Sparse => (g.max_degree(), Condition::DegreeCap),
    };
    if deg > cfg.degree_cap {
        return EngineOutcome::unmet(cap_condition, vec![]);
    }
    if g.has_clique_of_size(cfg.clique_cap) {
        return EngineOutcome::unmet(Condition::CliqueBound, vec![]);
    }
    let packing = find_disjoint_induced(g, Pattern::P3, g.n() / 4, DEFAULT_BUDGET);
    let trace = vec![format!(
        "{} regime, {} disjoint induced P3s",
        regime.name(),
        packing.len()
    )];
    if packing.len() < cfg.packing {
        return EngineOutcome::unmet(Condition::Packing, trace);
    }
    let mut gadgets: Vec<[usize; 4]> = packing
        .copies
        .iter()
        .map(|c| [c[0], c[1], c[2], c[3]])
        .collect();
    let covered = packing.covered();
    let result = session(g, trace, |sess| {
        // Stage 1
        let mut c = greedy_in(sess, g.vertices().difference(covered))?;
        sess.note(format!("stage 1 left clique {c:?}"));
        // Stage 2
        while c.len() > 2 {
            let k3: VertexSet = c.iter().take(3).collect();
            let pick = gadgets
                .iter()
                .position(|r| regime.fits(g, VertexSet::from_vertices(*r), k3))
                .ok_or(EngineError::ConditionUnmet(Condition::Stage2Gadget))?;
            let r = gadgets.remove(pick);
            let c_prime = absorb_in(sess, regime == Regime::Dense, r, k3, true)?;
            c = greedy_in(sess, c_prime.union(c.difference(k3)))?;
            sess.note(format!("stage 2 used {r:?}, clique now {c:?}"));
        }
        // Stage 3
        let order = stage3_order(g, &gadgets, c, regime)?;
        let mut d = c;
        for i in order {
            d = absorb_in(sess, regime == Regime::Dense, gadgets[i], d, false)?;
        }
        sess.note(format!("stage 3 chained {} gadgets", gadgets.len()));
        finish(sess)
    });
    outcome(g, result)
}

/// Order in which the unused gadgets are chained in stage 3: a Hamilton
/// cycle of the auxiliary graph on the gadgets plus the clique `d`, read
/// from `d`.
fn stage3_order(
    g: &Graph,
    gadgets: &[[usize; 4]],
    d: VertexSet,
    regime: Regime,
) -> Result<Vec<usize>, EngineError> {
    let sets: Vec<VertexSet> = gadgets
        .iter()
        .map(|r| VertexSet::from_vertices(*r))
        .collect();
    match sets.len() {
        0 => return Ok(vec![]),
        1 if regime.fits(g, sets[0], d) => return Ok(vec![0]),
        1 => return Err(Condition::Stage3Dirac.into()),
        _ => {}
    }
    // vertex 0 of the auxiliary graph is `d`, vertex i + 1 is gadget i
    let mut aux = Graph::empty(sets.len() + 1);
    for (i, &r) in sets.iter().enumerate() {
        if regime.fits(g, r, d) {
            aux.add_edge(0, i + 1);
        }
        for (j, &s) in sets.iter().enumerate().skip(i + 1) {
            if regime.fits(g, r, s) {
                aux.add_edge(i + 1, j + 1);
            }
        }
    }
    let cycle = hamilton_cycle_dirac(&aux)
        .map_err(|_| EngineError::ConditionUnmet(Condition::Stage3Dirac))?;
    Ok(cycle[1..].iter().map(|&x| x - 1).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutoOptions {
    /// Largest `n` handed to the exact oracle.
    pub exact_cap: usize,
}

impl Default for AutoOptions {
    fn default() -> Self {
        AutoOptions { exact_cap: 18 }
    }
}

/// Exact oracle for small graphs; otherwise the sparse, dense and uniform
/// decomposers with permissive thresholds, then plain greedy removal.
pub fn decompose_auto(g: &Graph, opts: AutoOptions) -> EngineOutcome {
    if g.edge_count() % 2 == 1 {
        return EngineOutcome::unmet(Condition::OddEdgeCount, vec![]);
    }
    if g.n() <= opts.exact_cap {
        let trace = vec![format!("exact oracle on {} vertices", g.n())];
        return match exact_even_decomposable_capped(g, opts.exact_cap) {
            Ok(Some(w)) => outcome(
                g,
                Ok(Session {
                    g,
                    remaining: VertexSet::EMPTY,
                    steps: w.steps.iter().map(|s| s.removed).collect(),
                    trace,
                }),
            ),
            Ok(None) => EngineOutcome::new(EngineStatus::NonDecomposable, trace),
            Err(e) => EngineOutcome::new(
                EngineStatus::Fault {
                    reason: e.to_string(),
                },
                trace,
            ),
        };
    }
    let mut trace = Vec::new();
    let attempts = [
        decompose_sparse(g, Thresholds::permissive(g, false)),
        decompose_dense(g, Thresholds::permissive(g, true)),
    ];
    for (name, attempt) in ["sparse", "dense"].iter().zip(attempts) {
        if attempt.is_decomposed() {
            let mut t = trace;
            t.extend(attempt.trace);
            return EngineOutcome::new(attempt.status, t);
        }
        trace.push(format!("{name}: {}", summary(&attempt)));
    }
    let t = g.clique_number();
    let packing = find_disjoint_induced(g, Pattern::F, t, DEFAULT_BUDGET);
    let uniform = decompose_uniform(g, &packing, t);
    if uniform.is_decomposed() {
        trace.extend(uniform.trace);
        return EngineOutcome::new(uniform.status, trace);
    }
    trace.push(format!("uniform: {}", summary(&uniform)));
    let result = session(g, vec![], |sess| {
        let left = greedy_in(sess, g.vertices())?;
        if !left.is_empty() {
            sess.note(format!("greedy stuck at {left:?}"));
        }
        Ok(())
    });
    match result {
        Ok(sess) if !sess.remaining.is_empty() => {
            trace.extend(sess.trace);
            EngineOutcome::new(
                EngineStatus::Stuck {
                    remaining: sess.remaining,
                },
                trace,
            )
        }
        other => {
            let mut out = outcome(g, other);
            trace.append(&mut out.trace);
            out.trace = trace;
            out
        }
    }
}

fn summary(o: &EngineOutcome) -> String {
    match &o.status {
        EngineStatus::ConditionUnmet { condition } => format!("condition unmet ({condition})"),
        EngineStatus::Fault { reason } => format!("fault ({reason})"),
        EngineStatus::Stuck { remaining } => format!("stuck at {remaining:?}"),
        EngineStatus::NonDecomposable => "non-decomposable".into(),
        EngineStatus::Decomposed { .. } => "decomposed".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    fn disjoint_paths(k: usize) -> Graph {
        (0..k).fold(Graph::empty(0), |g, _| g.disjoint_union(&path(4)))
    }

    #[test]
    fn sparse_ten_paths() {
        let g = disjoint_paths(10);
        let o = decompose_sparse(&g, Thresholds::new(10, 3, 4));
        assert!(o.is_decomposed(), "{o:?}");
    }

    #[test]
    fn sparse_k4_plus_eight_paths() {
        let g = Graph::complete(4).disjoint_union(&disjoint_paths(8));
        assert_eq!(g.edge_count(), 30);
        let o = decompose_sparse(&g, Thresholds::new(8, 5, 4));
        assert!(o.is_decomposed(), "{o:?}");
    }

    #[test]
    fn sparse_degree_cap() {
        let g = star(4).disjoint_union(&disjoint_paths(2));
        let o = decompose_sparse(&g, Thresholds::new(1, 10, 3));
        assert_eq!(o.condition(), Some(Condition::DegreeCap));
    }

    #[test]
    fn dense_gates() {
        let k20 = Graph::complete(20);
        assert_eq!(
            decompose_dense(&k20, Thresholds::new(1, 25, 20)).condition(),
            Some(Condition::Packing)
        );
        let odd = path(4);
        assert_eq!(
            decompose_dense(&odd, Thresholds::new(1, 5, 5)).condition(),
            Some(Condition::OddEdgeCount)
        );
    }

    #[test]
    fn uniform_two_gadgets() {
        let g = gadget_f()
            .disjoint_union(&gadget_f())
            .disjoint_union(&Graph::empty(4));
        let packing = find_disjoint_induced(&g, Pattern::F, 2, DEFAULT_BUDGET);
        let o = decompose_uniform(&g, &packing, 2);
        assert!(o.is_decomposed(), "{o:?}");
    }

    #[test]
    fn uniform_clique_bound() {
        let g = Graph::complete(4).disjoint_union(&gadget_f());
        let packing = find_disjoint_induced(&g, Pattern::F, 1, DEFAULT_BUDGET);
        let o = decompose_uniform(&g, &packing, 1);
        assert_eq!(o.condition(), Some(Condition::CliqueBound));
    }

    #[test]
    fn auto_small_cases() {
        assert_eq!(
            decompose_auto(&Graph::complete(4), AutoOptions::default()).status,
            EngineStatus::NonDecomposable
        );
        assert!(decompose_auto(&cycle(4), AutoOptions::default()).is_decomposed());
        assert_eq!(
            decompose_auto(&path(4), AutoOptions::default()).condition(),
            Some(Condition::OddEdgeCount)
        );
    }

    #[test]
    fn auto_forty_vertices_of_paths() {
        let o = decompose_auto(&disjoint_paths(10), AutoOptions::default());
        assert!(o.is_decomposed(), "{o:?}");
    }
}
