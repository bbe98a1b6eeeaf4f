//! Absorbing single vertices and whole cliques into an `F` gadget.

use crate::engine::greedy::greedy_in;
use crate::engine::{check_terminal, Absorption, Condition, EngineError, Session};
use crate::graph::{Graph, VertexSet};

/// Removes `v` from `G[w]` using at most two vertices from each of `a` and
/// `b`, which must be disjoint independent sets of size at least 2 where every
/// vertex of one side has both an edge and a non-edge into the other.
pub fn absorb_vertex(
    g: &Graph,
    w: VertexSet,
    a: VertexSet,
    b: VertexSet,
    v: usize,
) -> Result<Vec<VertexSet>, EngineError> {
    let mut sess = Session::new(g, w);
    absorb_vertex_in(&mut sess, a, b, v)?;
    Ok(sess.steps)
}

fn check_sides(sess: &Session, a: VertexSet, b: VertexSet, v: usize) -> Result<(), Condition> {
    let g = sess.g;
    let ok = a.union(b).is_subset(sess.remaining)
        && a.is_disjoint(b)
        && a.len() >= 2
        && b.len() >= 2
        && g.is_independent(a)
        && g.is_independent(b)
        && sess.remaining.contains(v)
        && !a.union(b).contains(v)
        && a.iter().all(|x| mixed(g, x, b))
        && b.iter().all(|y| mixed(g, y, a));
    if ok {
        Ok(())
    } else {
        Err(Condition::CrossEdge)
    }
}

/// `x` sends both an edge and a non-edge into `side`.
fn mixed(g: &Graph, x: usize, side: VertexSet) -> bool {
    let nb = g.neighbors(x).intersection(side);
    !nb.is_empty() && nb != side
}

pub(crate) fn absorb_vertex_in(
    sess: &mut Session,
    a: VertexSet,
    b: VertexSet,
    v: usize,
) -> Result<(), EngineError> {
    check_sides(sess, a, b, v)?;
    let g = sess.g;
    if !sess.odd(v) {
        return sess.remove_vertex(v);
    }
    let scan: Vec<usize> = b.iter().chain(a.iter()).collect();
    if let Some(&x) = scan.iter().find(|&&x| sess.odd(x) != g.has_edge(x, v)) {
        return claim_step(sess, x, v);
    }
    // Now every x in A and B is odd exactly when it is adjacent to v.
    if let Some(&x) = scan.iter().find(|&&x| !sess.odd(x)) {
        let other = if b.contains(x) { a } else { b };
        let y = g
            .neighbors(x)
            .intersection(other)
            .first()
            .expect("cross-edge condition gives a neighbour");
        sess.remove_vertex(x)?;
        if sess.odd(y) == g.has_edge(y, v) {
            return Err(EngineError::Postcondition(format!(
                "flip at {x} left {y} without a usable parity"
            )));
        }
        return claim_step(sess, y, v);
    }
    let x = a.first().expect("A is non-empty");
    let b1 = g.neighbors(x).intersection(b).first().expect("edge into B");
    let b2 = b
        .difference(g.neighbors(x))
        .first()
        .expect("non-edge into B");
    sess.remove(VertexSet::from_vertices([b1, b2]))?;
    sess.remove_vertex(x)?;
    sess.remove_vertex(v)
}

/// `x` is odd and not adjacent to `v`, or even and adjacent to `v`.
fn claim_step(sess: &mut Session, x: usize, v: usize) -> Result<(), EngineError> {
    if sess.odd(x) {
        sess.remove(VertexSet::from_vertices([x, v]))
    } else {
        sess.remove_vertex(x)?;
        sess.remove_vertex(v)
    }
}

/// The four sides of an induced `F`: `t1 | s1` and `t2 | s2` are the two
/// `K_{5,5}`s, with `t_i` holding the lowest label of its half.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GadgetSides {
    pub t1: VertexSet,
    pub s1: VertexSet,
    pub t2: VertexSet,
    pub s2: VertexSet,
}

impl GadgetSides {
    /// Recovers the sides from the vertex set of an induced copy of `F`.
    pub fn of(g: &Graph, r: VertexSet) -> Result<GadgetSides, Condition> {
        if r.len() != 20 {
            return Err(Condition::GadgetShape);
        }
        let (t1, s1) = half(g, r, r).ok_or(Condition::GadgetShape)?;
        let rest = r.difference(t1.union(s1));
        let (t2, s2) = half(g, r, rest).ok_or(Condition::GadgetShape)?;
        Ok(GadgetSides { t1, s1, t2, s2 })
    }

    pub fn a(&self) -> VertexSet {
        self.t1.union(self.t2)
    }

    pub fn b(&self) -> VertexSet {
        self.s1.union(self.s2)
    }
}

fn half(g: &Graph, r: VertexSet, pool: VertexSet) -> Option<(VertexSet, VertexSet)> {
    let x = pool.first()?;
    let s = g.neighbors(x).intersection(r);
    let t = g.neighbors(s.first()?).intersection(r);
    let both = t.union(s);
    let ok = t.len() == 5
        && s.len() == 5
        && both.is_subset(pool)
        && g.is_independent(t)
        && g.is_independent(s)
        && g.is_complete_to(t, s)
        && g.sends_no_edges(both, r.difference(both));
    ok.then_some((t, s))
}

/// Shrinks the clique `c` using the gadget on `r`: the remaining clique has
/// at most `max(|c| - 1, 2)` vertices, all of odd degree.
pub fn absorb_clique_with_f(
    g: &Graph,
    w: VertexSet,
    r: VertexSet,
    c: VertexSet,
) -> Result<Absorption, EngineError> {
    let mut sess = Session::new(g, w);
    let new_clique = absorb_clique_in(&mut sess, r, c)?;
    Ok(Absorption {
        steps: sess.steps,
        new_clique,
    })
}

pub(crate) fn absorb_clique_in(
    sess: &mut Session,
    r: VertexSet,
    c: VertexSet,
) -> Result<VertexSet, EngineError> {
    if !r.is_subset(sess.remaining) {
        return Err(Condition::GadgetShape.into());
    }
    let sides = GadgetSides::of(sess.g, r)?;
    if !c.is_subset(sess.remaining) || !c.is_disjoint(r) || !sess.g.is_clique(c) {
        return Err(Condition::CliqueShape.into());
    }
    let m = c.len();
    for v in c.iter().take(3) {
        let (a, b) = (sess.live(sides.a()), sess.live(sides.b()));
        absorb_vertex_in(sess, a, b, v)?;
    }
    greedy_in(sess, sess.live(sides.a()))?;
    greedy_in(sess, sess.live(sides.b()))?;
    let new_clique = greedy_in(sess, sess.live(c.union(r)))?;
    check_terminal(
        sess,
        new_clique,
        m.saturating_sub(1).max(2),
        "gadget absorption",
    )?;
    Ok(new_clique)
}
