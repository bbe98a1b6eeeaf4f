//! Decomposition witnesses and their replay verifier.
//!
//! The verifier deliberately works pair by pair over explicit vertex lists
//! and never calls into the removal machinery that produces witnesses.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::graph::{Graph, VertexSet};

/// One simple admissible removal: the independent set taken out in one go.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RemovalStep {
    pub removed: VertexSet,
}

/// Ordered removal steps starting from `initial`. The `V_i` of an even
/// decomposition are the suffix unions of the steps.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DecompositionWitness {
    pub initial: VertexSet,
    pub steps: Vec<RemovalStep>,
}

impl DecompositionWitness {
    pub fn new(initial: VertexSet, steps: impl IntoIterator<Item = VertexSet>) -> Self {
        DecompositionWitness {
            initial,
            steps: steps
                .into_iter()
                .map(|removed| RemovalStep { removed })
                .collect(),
        }
    }

    /// Witness whose initial set is the union of the given steps.
    pub fn from_steps(steps: impl IntoIterator<Item = VertexSet>) -> Self {
        let steps: Vec<RemovalStep> = steps
            .into_iter()
            .map(|removed| RemovalStep { removed })
            .collect();
        let initial = steps
            .iter()
            .fold(VertexSet::EMPTY, |acc, s| acc.union(s.removed));
        DecompositionWitness { initial, steps }
    }

    pub fn step_lists(&self) -> Vec<Vec<usize>> {
        self.steps.iter().map(|s| s.removed.to_vec()).collect()
    }

    /// The chain `V_0 ⊃ V_1 ⊃ ... ⊃ V_k`.
    pub fn chain(&self) -> Vec<VertexSet> {
        let mut out = vec![self.initial];
        let mut cur = self.initial;
        for s in &self.steps {
            cur = cur.difference(s.removed);
            out.push(cur);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("witness serialises")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

impl Serialize for DecompositionWitness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.step_lists().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DecompositionWitness {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let lists: Vec<Vec<usize>> = Vec::deserialize(d)?;
        if let Some(&v) = lists.iter().flatten().find(|&&v| v >= 64) {
            return Err(serde::de::Error::custom(format!("vertex {v} out of range")));
        }
        Ok(DecompositionWitness::from_steps(
            lists.into_iter().map(VertexSet::from_vertices),
        ))
    }
}

/// Why a witness was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessFault {
    InitialMismatch {
        expected: VertexSet,
        found: VertexSet,
    },
    OddEdgeCount(usize),
    EmptyStep(usize),
    StepOutsideRemaining {
        step: usize,
        vertex: usize,
    },
    NotIndependent {
        step: usize,
        u: usize,
        v: usize,
    },
    OddCrossEdges {
        step: usize,
        count: usize,
    },
    Leftover(VertexSet),
}

impl fmt::Display for WitnessFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessFault::InitialMismatch { expected, found } => {
                write!(
                    f,
                    "initial set {found:?} is not the vertex set {expected:?}"
                )
            }
            WitnessFault::OddEdgeCount(e) => write!(f, "graph has an odd number of edges ({e})"),
            WitnessFault::EmptyStep(i) => write!(f, "step {i} removes nothing"),
            WitnessFault::StepOutsideRemaining { step, vertex } => {
                write!(f, "step {step} removes {vertex}, which is not present")
            }
            WitnessFault::NotIndependent { step, u, v } => {
                write!(f, "step {step} removes adjacent vertices {u} and {v}")
            }
            WitnessFault::OddCrossEdges { step, count } => {
                write!(
                    f,
                    "step {step} cuts {count} edges to the rest, an odd number"
                )
            }
            WitnessFault::Leftover(s) => write!(f, "vertices {s:?} are never removed"),
        }
    }
}

/// Replays `w` against `g` and reports the first violation, if any.
pub fn check_witness(g: &Graph, w: &DecompositionWitness) -> Result<(), WitnessFault> {
    let all: Vec<usize> = (0..g.n()).collect();
    let expected = VertexSet::full(g.n());
    if w.initial != expected {
        return Err(WitnessFault::InitialMismatch {
            expected,
            found: w.initial,
        });
    }
    let mut total = 0;
    for (i, &u) in all.iter().enumerate() {
        for &v in &all[i + 1..] {
            total += g.has_edge(u, v) as usize;
        }
    }
    if total % 2 == 1 {
        return Err(WitnessFault::OddEdgeCount(total));
    }

    let mut present = vec![true; g.n()];
    for (step, s) in w.steps.iter().enumerate() {
        let removed: Vec<usize> = s.removed.to_vec();
        if removed.is_empty() {
            return Err(WitnessFault::EmptyStep(step));
        }
        if let Some(&vertex) = removed.iter().find(|&&v| v >= g.n() || !present[v]) {
            return Err(WitnessFault::StepOutsideRemaining { step, vertex });
        }
        for (i, &u) in removed.iter().enumerate() {
            for &v in &removed[i + 1..] {
                if g.has_edge(u, v) {
                    return Err(WitnessFault::NotIndependent { step, u, v });
                }
            }
        }
        let mut cross = 0;
        for &u in &removed {
            for &x in &all {
                if present[x] && !s.removed.contains(x) && g.has_edge(u, x) {
                    cross += 1;
                }
            }
        }
        if cross % 2 == 1 {
            return Err(WitnessFault::OddCrossEdges { step, count: cross });
        }
        for &u in &removed {
            present[u] = false;
        }
    }
    let leftover: VertexSet = all.iter().copied().filter(|&v| present[v]).collect();
    if !leftover.is_empty() {
        return Err(WitnessFault::Leftover(leftover));
    }
    Ok(())
}

/// True iff `w` certifies that `g` is even-decomposable.
pub fn verify_witness(g: &Graph, w: &DecompositionWitness) -> bool {
    check_witness(g, w).is_ok()
}

/// Replays `steps` from `start` without requiring the run to finish: every
/// step must be a simple admissible removal from what is left at that point.
/// Returns the final remaining set.
pub fn replay_steps(
    g: &Graph,
    start: VertexSet,
    steps: &[VertexSet],
) -> Result<VertexSet, WitnessFault> {
    let mut present: Vec<bool> = (0..g.n()).map(|v| start.contains(v)).collect();
    for (step, s) in steps.iter().enumerate() {
        let removed = s.to_vec();
        if removed.is_empty() {
            return Err(WitnessFault::EmptyStep(step));
        }
        if let Some(&vertex) = removed.iter().find(|&&v| v >= g.n() || !present[v]) {
            return Err(WitnessFault::StepOutsideRemaining { step, vertex });
        }
        let mut cross = 0;
        for (i, &u) in removed.iter().enumerate() {
            for &v in &removed[i + 1..] {
                if g.has_edge(u, v) {
                    return Err(WitnessFault::NotIndependent { step, u, v });
                }
            }
            for x in 0..g.n() {
                if present[x] && !s.contains(x) && g.has_edge(u, x) {
                    cross += 1;
                }
            }
        }
        if cross % 2 == 1 {
            return Err(WitnessFault::OddCrossEdges { step, count: cross });
        }
        for u in removed {
            present[u] = false;
        }
    }
    Ok((0..g.n()).filter(|&v| present[v]).collect())
}
