//! Witness-producing decomposers and the removal bookkeeping they share.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, VertexSet};

mod absorb;
mod decompose;
mod greedy;
mod hamilton;
mod p3;
pub mod witness;

pub use absorb::{absorb_clique_with_f, absorb_vertex, GadgetSides};
pub use decompose::{
    decompose_auto, decompose_dense, decompose_sparse, decompose_uniform, AutoOptions, Thresholds,
};
pub use greedy::{greedy_removal, GreedyRun};
pub use hamilton::hamilton_cycle_dirac;
pub use p3::{
    p3_absorb_dense, p3_absorb_sparse, p3_dense_stage2, p3_dense_stage3, p3_sparse_stage2,
    p3_sparse_stage3, Signature,
};
pub use witness::{
    check_witness, replay_steps, verify_witness, DecompositionWitness, RemovalStep, WitnessFault,
};

/// A hypothesis of some constructive step that the input fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    OddEdgeCount,
    CrossEdge,
    GadgetShape,
    RCompleteToC,
    RDisjointFromC,
    PathShape,
    CliqueShape,
    DiracDegree,
    CliqueBound,
    Packing,
    ComplementDegreeCap,
    DegreeCap,
    Stage2Gadget,
    Stage3Dirac,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::OddEdgeCount => "odd edge count",
            Condition::CrossEdge => "cross-edge condition",
            Condition::GadgetShape => "gadget shape",
            Condition::RCompleteToC => "R complete to C",
            Condition::RDisjointFromC => "R disjoint from C's neighborhood",
            Condition::PathShape => "induced path shape",
            Condition::CliqueShape => "odd-degree clique",
            Condition::DiracDegree => "Dirac degree bound",
            Condition::CliqueBound => "clique bound",
            Condition::Packing => "packing",
            Condition::ComplementDegreeCap => "complement degree cap",
            Condition::DegreeCap => "degree cap",
            Condition::Stage2Gadget => "stage 2 gadget selection",
            Condition::Stage3Dirac => "stage 3 Dirac cycle",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("condition unmet: {0}")]
    ConditionUnmet(Condition),
    /// A producer attempted a removal that is not simple admissible.
    #[error("inadmissible removal of {set:?}: {reason}")]
    Inadmissible {
        set: VertexSet,
        reason: &'static str,
    },
    /// A producer's promised postcondition did not hold.
    #[error("postcondition failed: {0}")]
    Postcondition(String),
}

impl From<Condition> for EngineError {
    fn from(c: Condition) -> Self {
        EngineError::ConditionUnmet(c)
    }
}

/// Steps emitted by a sub-procedure together with what it leaves behind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Absorption {
    pub steps: Vec<VertexSet>,
    pub new_clique: VertexSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum EngineStatus {
    Decomposed {
        witness: DecompositionWitness,
    },
    /// Removal stopped at a clique of odd-degree vertices.
    Stuck {
        remaining: VertexSet,
    },
    ConditionUnmet {
        condition: Condition,
    },
    /// The exact oracle certified that no decomposition exists.
    NonDecomposable,
    /// A producer broke one of its own guarantees; always a bug.
    Fault {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EngineOutcome {
    #[serde(flatten)]
    pub status: EngineStatus,
    pub trace: Vec<String>,
}

impl EngineOutcome {
    pub fn new(status: EngineStatus, trace: Vec<String>) -> Self {
        EngineOutcome { status, trace }
    }

    pub fn unmet(c: Condition, mut trace: Vec<String>) -> Self {
        trace.push(format!("condition unmet: {c}"));
        EngineOutcome::new(EngineStatus::ConditionUnmet { condition: c }, trace)
    }

    pub fn is_decomposed(&self) -> bool {
        matches!(self.status, EngineStatus::Decomposed { .. })
    }

    pub fn witness(&self) -> Option<&DecompositionWitness> {
        match &self.status {
            EngineStatus::Decomposed { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn condition(&self) -> Option<Condition> {
        match self.status {
            EngineStatus::ConditionUnmet { condition } => Some(condition),
            _ => None,
        }
    }

    pub fn is_fault(&self) -> bool {
        matches!(self.status, EngineStatus::Fault { .. })
    }
}

/// True iff `s` is independent in `G[w]` and sends an even number of edges
/// to `w \ s`. Panics if `s` is not inside `w`.
pub fn is_simple_admissible(g: &Graph, w: VertexSet, s: VertexSet) -> bool {
    assert!(s.is_subset(w), "{s:?} is not inside the window {w:?}");
    g.is_independent(s) && g.edges_between(s, w.difference(s)).is_multiple_of(2)
}

/// Running removal state: the remaining vertex set and the steps so far.
/// Every step is checked for simple admissibility before it is applied.
#[derive(Debug, Clone)]
pub(crate) struct Session<'g> {
    pub g: &'g Graph,
    pub remaining: VertexSet,
    pub steps: Vec<VertexSet>,
    pub trace: Vec<String>,
}

impl<'g> Session<'g> {
    pub fn new(g: &'g Graph, w: VertexSet) -> Self {
        Session {
            g,
            remaining: w,
            steps: Vec::new(),
            trace: Vec::new(),
        }
    }

    #[inline]
    pub fn deg(&self, v: usize) -> usize {
        (self.g.row(v) & self.remaining.bits()).count_ones() as usize
    }

    #[inline]
    pub fn odd(&self, v: usize) -> bool {
        self.deg(v) % 2 == 1
    }

    pub fn live(&self, s: VertexSet) -> VertexSet {
        s.intersection(self.remaining)
    }

    pub fn remove(&mut self, s: VertexSet) -> Result<(), EngineError> {
        if s.is_empty() {
            return Err(EngineError::Inadmissible {
                set: s,
                reason: "empty set",
            });
        }
        if !s.is_subset(self.remaining) {
            return Err(EngineError::Inadmissible {
                set: s,
                reason: "not present",
            });
        }
        if !self.g.is_independent(s) {
            return Err(EngineError::Inadmissible {
                set: s,
                reason: "not independent",
            });
        }
        if self.g.edges_between(s, self.remaining.difference(s)) % 2 == 1 {
            return Err(EngineError::Inadmissible {
                set: s,
                reason: "odd cut",
            });
        }
        self.remaining = self.remaining.difference(s);
        self.steps.push(s);
        Ok(())
    }

    pub fn remove_vertex(&mut self, v: usize) -> Result<(), EngineError> {
        self.remove(VertexSet::singleton(v))
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.trace.push(msg.into());
    }
}

/// Checks that `s` is a clique of odd-degree vertices of at most `cap`
/// vertices in the session's remaining graph.
pub(crate) fn check_terminal(
    sess: &Session,
    s: VertexSet,
    cap: usize,
    what: &str,
) -> Result<(), EngineError> {
    if !s.is_subset(sess.remaining) {
        return Err(EngineError::Postcondition(format!(
            "{what}: {s:?} is not all present"
        )));
    }
    if !sess.g.is_clique(s) {
        return Err(EngineError::Postcondition(format!(
            "{what}: {s:?} is not a clique"
        )));
    }
    if let Some(v) = s.iter().find(|&v| !sess.odd(v)) {
        return Err(EngineError::Postcondition(format!(
            "{what}: vertex {v} has even degree"
        )));
    }
    if s.len() > cap {
        return Err(EngineError::Postcondition(format!(
            "{what}: clique of {} vertices exceeds {cap}",
            s.len()
        )));
    }
    Ok(())
}
