use crate::engine::{EngineError, Session};
use crate::graph::{above, Graph, VertexSet};

/// Result of a greedy removal run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyRun {
    pub steps: Vec<VertexSet>,
    /// What is left of `S`: a clique of odd-degree vertices.
    pub terminal: VertexSet,
}

/// Greedily removes vertices of `s` from `G[w]`: the lowest even-degree vertex
/// as a singleton, else the lexicographically least non-adjacent pair (both
/// then odd), until neither exists.
pub fn greedy_removal(g: &Graph, w: VertexSet, s: VertexSet) -> GreedyRun {
    assert!(s.is_subset(w), "{s:?} is not inside the window {w:?}");
    let mut sess = Session::new(g, w);
    let terminal = greedy_in(&mut sess, s).expect("greedy steps are admissible by construction");
    GreedyRun {
        steps: sess.steps,
        terminal,
    }
}

pub(crate) fn greedy_in(sess: &mut Session, s: VertexSet) -> Result<VertexSet, EngineError> {
    loop {
        let live = sess.live(s);
        if let Some(v) = live.iter().find(|&v| !sess.odd(v)) {
            sess.remove_vertex(v)?;
            continue;
        }
        let pair = live.iter().find_map(|u| {
            let rest = VertexSet(live.bits() & above(u)).difference(sess.g.neighbors(u));
            rest.first().map(|v| (u, v))
        });
        match pair {
            Some((u, v)) => sess.remove(VertexSet::from_vertices([u, v]))?,
            None => return Ok(live),
        }
    }
}
