//! Parity rigs: small graphs whose degree parities are pinned by pendant
//! vertices, used to replay every case of the absorption steps.
//!
//! Pendants live inside the window but outside every set an operation may
//! touch, so they fix parities without taking part.

use serde::Serialize;

use crate::engine::witness::replay_steps;
use crate::engine::{
    absorb_clique_with_f, absorb_vertex, p3_dense_stage2, p3_dense_stage3, p3_sparse_stage2,
    p3_sparse_stage3, Absorption, EngineError, Signature,
};
use crate::graph::{named, Graph, VertexSet};
use crate::rng::CounterRng;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RigResult {
    pub suite: &'static str,
    pub case: String,
    pub passed: bool,
    pub detail: String,
}

impl RigResult {
    fn new(suite: &'static str, case: String, check: Result<(), String>) -> Self {
        let (passed, detail) = match check {
            Ok(()) => (true, String::new()),
            Err(e) => (false, e),
        };
        RigResult {
            suite,
            case,
            passed,
            detail,
        }
    }
}

/// Adds a pendant to each listed vertex whose degree parity differs from the
/// wanted one.
pub fn pin_parities(g: &mut Graph, want: &[(usize, bool)]) {
    for &(x, odd) in want {
        if (g.degree(x) % 2 == 1) != odd {
            let p = g.add_vertices(1);
            g.add_edge(x, p);
        }
    }
}

/// Degree of `v` inside `w`, counted edge by edge.
fn deg_within(g: &Graph, w: VertexSet, v: usize) -> usize {
    w.iter().filter(|&u| g.has_edge(u, v)).count()
}

/// Replays `steps`, checks they only touch `allowed`, and returns what is left.
fn replay_within(g: &Graph, steps: &[VertexSet], allowed: VertexSet) -> Result<VertexSet, String> {
    if let Some(s) = steps.iter().find(|s| !s.is_subset(allowed)) {
        return Err(format!("step {s:?} leaves the allowed set {allowed:?}"));
    }
    replay_steps(g, g.vertices(), steps).map_err(|f| f.to_string())
}

/// `s` is a clique of odd-degree vertices of the remaining graph `left`, of
/// size at most `cap`.
fn odd_clique(g: &Graph, left: VertexSet, s: VertexSet, cap: usize) -> Result<(), String> {
    if !s.is_subset(left) {
        return Err(format!("reported clique {s:?} is not all present"));
    }
    let v: Vec<usize> = s.to_vec();
    for (i, &x) in v.iter().enumerate() {
        if deg_within(g, left, x).is_multiple_of(2) {
            return Err(format!("vertex {x} of the clique has even degree"));
        }
        if let Some(&y) = v[i + 1..].iter().find(|&&y| !g.has_edge(x, y)) {
            return Err(format!("{x} and {y} are not adjacent"));
        }
    }
    if s.len() > cap {
        return Err(format!("clique has {} vertices, bound is {cap}", s.len()));
    }
    Ok(())
}

/// All 512 rigs for single-vertex absorption: `A = {0,1}`, `B = {2,3}` with
/// the matching `0-2, 1-3`, `v = 4` with every neighbourhood in `A ∪ B` and
/// every parity pattern on `A ∪ B ∪ {v}`.
pub fn absorb_vertex_suite() -> Vec<RigResult> {
    let a = VertexSet::from_vertices([0, 1]);
    let b = VertexSet::from_vertices([2, 3]);
    let mut out = Vec::with_capacity(512);
    for nbrs in 0u32..16 {
        for parity in 0u32..32 {
            let mut g = Graph::from_edges(5, [(0, 2), (1, 3)]).expect("rig edges");
            for x in 0..4 {
                if nbrs >> x & 1 == 1 {
                    g.add_edge(4, x);
                }
            }
            let want: Vec<(usize, bool)> = (0..5).map(|x| (x, parity >> x & 1 == 1)).collect();
            pin_parities(&mut g, &want);
            let case = format!("nbrs={nbrs:04b} parity={parity:05b}");
            let check = absorb_vertex(&g, g.vertices(), a, b, 4)
                .map_err(|e| e.to_string())
                .and_then(|steps| {
                    let left =
                        replay_within(&g, &steps, a.union(b).union(VertexSet::singleton(4)))?;
                    if left.contains(4) {
                        return Err("v was not removed".into());
                    }
                    let gone = g.vertices().difference(left);
                    if gone.intersection(a).len() > 2 || gone.intersection(b).len() > 2 {
                        return Err(format!("removed {gone:?}, more than two from one side"));
                    }
                    Ok(())
                });
            out.push(RigResult::new("absorb-vertex", case, check));
        }
    }
    out
}

/// Gadget absorption: `F` on `0..20`, a clique of `m` vertices after it,
/// random edges between the two, and random pinned parities.
pub fn absorb_clique_suite(per_size: u64, seed: u64) -> Vec<RigResult> {
    let mut out = Vec::new();
    for m in 0..=6usize {
        for trial in 0..per_size {
            let rng = CounterRng::new(seed, (m as u64) << 32 | trial);
            let mut g = named::gadget_f().disjoint_union(&Graph::complete(m));
            let mut ctr = 0;
            let mut draw = || {
                ctr += 1;
                rng.word(ctr)
            };
            for c in 20..20 + m {
                for r in 0..20 {
                    if draw() & 1 == 1 {
                        g.add_edge(c, r);
                    }
                }
            }
            let want: Vec<(usize, bool)> = (0..20 + m).map(|x| (x, draw() & 1 == 1)).collect();
            pin_parities(&mut g, &want);
            let r = VertexSet::full(20);
            let c = VertexSet::from_vertices(20..20 + m);
            let case = format!("m={m} trial={trial}");
            let check = absorb_clique_with_f(&g, g.vertices(), r, c)
                .map_err(|e| e.to_string())
                .and_then(|abs| {
                    let left = replay_within(&g, &abs.steps, r.union(c))?;
                    odd_clique(&g, left, abs.new_clique, m.saturating_sub(1).max(2))?;
                    if !abs.new_clique.is_subset(r.union(c)) {
                        return Err("clique escapes C and R".into());
                    }
                    // every other vertex of C and R must be gone
                    let stray = left.intersection(r.union(c)).difference(abs.new_clique);
                    if !stray.is_empty() {
                        return Err(format!("{stray:?} left outside the clique"));
                    }
                    Ok(())
                });
            out.push(RigResult::new("absorb-clique", case, check));
        }
    }
    out
}

/// Path `0-1-2-3` with the clique on `4..4+m`, complete to it when `dense`,
/// with pinned parities: the path per `sig`, the clique all odd.
pub fn p3_rig(sig: Signature, m: usize, dense: bool) -> (Graph, [usize; 4], VertexSet) {
    let mut g = named::path(4).disjoint_union(&Graph::complete(m));
    if dense {
        for x in 0..4 {
            for k in 4..4 + m {
                g.add_edge(x, k);
            }
        }
    }
    let mut want: Vec<(usize, bool)> = (0..4).map(|i| (i, sig.0[i])).collect();
    want.extend((4..4 + m).map(|k| (k, true)));
    pin_parities(&mut g, &want);
    (g, [0, 1, 2, 3], VertexSet::from_vertices(4..4 + m))
}

type StageFn = fn(&Graph, VertexSet, [usize; 4], VertexSet) -> Result<Absorption, EngineError>;

fn p3_suite(dense: bool) -> Vec<RigResult> {
    let (suite2, suite3, f2, f3): (&'static str, &'static str, StageFn, StageFn) = if dense {
        (
            "dense-stage-2",
            "dense-stage-3",
            p3_dense_stage2,
            p3_dense_stage3,
        )
    } else {
        (
            "sparse-stage-2",
            "sparse-stage-3",
            p3_sparse_stage2,
            p3_sparse_stage3,
        )
    };
    let mut out = Vec::new();
    for sig in Signature::classes() {
        for m in 2..=5 {
            let (g, r, c) = p3_rig(sig, m, dense);
            let rs = VertexSet::from_vertices(r);
            let cap = if dense { m - 1 } else { (m - 1).max(2) };
            let check = f2(&g, g.vertices(), r, c)
                .map_err(|e| e.to_string())
                .and_then(|abs| {
                    let left = replay_within(&g, &abs.steps, rs.union(c))?;
                    odd_clique(&g, left, abs.new_clique, cap)?;
                    let stray = left.intersection(rs.union(c)).difference(abs.new_clique);
                    if stray.is_empty() {
                        Ok(())
                    } else {
                        Err(format!("{stray:?} left outside the clique"))
                    }
                });
            out.push(RigResult::new(suite2, format!("{sig} |C|={m}"), check));
        }
        for m in 0..=2 {
            let (g, r, c) = p3_rig(sig, m, dense);
            let rs = VertexSet::from_vertices(r);
            let check = f3(&g, g.vertices(), r, c)
                .map_err(|e| e.to_string())
                .and_then(|abs| {
                    let left = replay_within(&g, &abs.steps, rs.union(c))?;
                    if !left.is_disjoint(c) {
                        return Err(format!("C not cleared, {:?} remain", left.intersection(c)));
                    }
                    odd_clique(&g, left, abs.new_clique, 2)?;
                    let stray = left.intersection(rs).difference(abs.new_clique);
                    if stray.is_empty() {
                        Ok(())
                    } else {
                        Err(format!("{stray:?} left outside the clique"))
                    }
                });
            out.push(RigResult::new(suite3, format!("{sig} |C|={m}"), check));
        }
    }
    out
}

pub fn dense_suite() -> Vec<RigResult> {
    p3_suite(true)
}

pub fn sparse_suite() -> Vec<RigResult> {
    p3_suite(false)
}

/// Every suite, in a fixed order.
pub fn all_suites() -> Vec<RigResult> {
    let mut out = absorb_vertex_suite();
    out.extend(absorb_clique_suite(32, 0x1a5e));
    out.extend(dense_suite());
    out.extend(sparse_suite());
    out
}
