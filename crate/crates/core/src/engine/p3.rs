//! Absorbing a clique into an induced path `a-b-c-d` that is either complete
//! to the clique (dense regime) or sends it no edges (sparse regime).

use std::fmt;

use crate::engine::greedy::greedy_in;
use crate::engine::{check_terminal, Absorption, Condition, EngineError, Session};
use crate::graph::{Graph, VertexSet};

/// Degree parities of the path vertices `(a, b, c, d)`, `true` meaning odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature(pub [bool; 4]);

impl Signature {
    /// Bit 3 is `a`, bit 0 is `d`.
    pub fn from_bits(bits: u8) -> Self {
        Signature([bits & 8 != 0, bits & 4 != 0, bits & 2 != 0, bits & 1 != 0])
    }

    pub fn all() -> impl Iterator<Item = Signature> {
        (0u8..16).map(Signature::from_bits)
    }

    pub fn reversed(self) -> Signature {
        let [a, b, c, d] = self.0;
        Signature([d, c, b, a])
    }

    /// The representative used by the case tables, and whether the path had
    /// to be read backwards to reach it.
    pub fn canonical(self) -> (Signature, bool) {
        if dense_case(self).is_some() {
            (self, false)
        } else {
            (self.reversed(), true)
        }
    }

    /// The ten classes up to reversal.
    pub fn classes() -> Vec<Signature> {
        Signature::all().filter(|s| !s.canonical().1).collect()
    }

    fn read(sess: &Session, r: [usize; 4]) -> Signature {
        Signature(r.map(|x| sess.odd(x)))
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for odd in self.0 {
            f.write_str(if odd { "o" } else { "e" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    /// Path vertex by position.
    P(usize),
    /// Clique vertex `k1` or `k2`.
    K(usize),
    Pair(usize, usize),
}

use Tok::{Pair, K, P};

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;
const D: usize = 3;

fn dense_case(sig: Signature) -> Option<[Tok; 5]> {
    let key = sig.to_string();
    let seq = match key.as_str() {
        "eeee" => [P(B), K(0), P(C), K(1), Pair(A, D)],
        "eeeo" => [P(B), K(0), P(C), K(1), P(D)],
        "eeoe" => [P(B), K(0), P(A), K(1), P(C)],
        "eeoo" => [P(B), K(0), P(A), K(1), P(C)],
        "oooo" => [Pair(A, D), P(B), K(0), P(C), K(1)],
        "oooe" => [P(D), K(0), P(B), K(1), P(A)],
        "ooeo" => [P(C), K(0), P(A), K(1), P(D)],
        "oeoe" => [P(D), K(0), P(A), K(1), P(C)],
        "oeeo" => [P(B), K(0), P(C), K(1), P(A)],
        "eooe" => [P(A), K(0), P(C), K(1), Pair(B, D)],
        _ => return None,
    };
    Some(seq)
}

/// Dense removal sequence for `sig`, with path positions already mapped back
/// through the reversal when needed.
fn dense_sequence(sig: Signature) -> Vec<Tok> {
    let (canon, flipped) = sig.canonical();
    let seq = dense_case(canon).expect("every signature has a canonical case");
    let map = |i: usize| if flipped { 3 - i } else { i };
    seq.iter()
        .map(|&t| match t {
            P(i) => P(map(i)),
            Pair(i, j) => Pair(map(i), map(j)),
            k => k,
        })
        .collect()
}

fn sparse_sequence(sess: &Session, r: [usize; 4]) -> Vec<Tok> {
    match (0..4).find(|&i| sess.odd(r[i])) {
        Some(t) => vec![Pair(t, 4), K(1)],
        None => vec![Pair(A, C), Pair(D, 4), K(1)],
    }
}

fn token_set(tok: Tok, r: [usize; 4], k: &[usize]) -> Option<VertexSet> {
    // Pair index 4 stands for k1.
    let at = |i: usize| {
        if i == 4 {
            k.first().copied()
        } else {
            Some(r[i])
        }
    };
    Some(match tok {
        P(i) => VertexSet::singleton(r[i]),
        K(j) => VertexSet::singleton(*k.get(j)?),
        Pair(i, j) => VertexSet::from_vertices([at(i)?, at(j)?]),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Regime {
    Dense,
    Sparse,
}

fn check_inputs(
    sess: &Session,
    r: [usize; 4],
    c: VertexSet,
    regime: Regime,
) -> Result<VertexSet, Condition> {
    let g = sess.g;
    let rs = VertexSet::from_vertices(r);
    let path_ok = rs.len() == 4
        && rs.is_subset(sess.remaining)
        && (0..4).all(|i| (i + 1..4).all(|j| g.has_edge(r[i], r[j]) == (j == i + 1)));
    if !path_ok {
        return Err(Condition::PathShape);
    }
    if !c.is_subset(sess.remaining)
        || !c.is_disjoint(rs)
        || !g.is_clique(c)
        || c.iter().any(|k| !sess.odd(k))
    {
        return Err(Condition::CliqueShape);
    }
    match regime {
        Regime::Dense if !g.is_complete_to(rs, c) => Err(Condition::RCompleteToC),
        Regime::Sparse if !g.sends_no_edges(rs, c) => Err(Condition::RDisjointFromC),
        _ => Ok(rs),
    }
}

fn stage2_in(
    sess: &mut Session,
    r: [usize; 4],
    c: VertexSet,
    regime: Regime,
) -> Result<VertexSet, EngineError> {
    let rs = check_inputs(sess, r, c, regime)?;
    let m = c.len();
    if m < 2 {
        return Err(Condition::CliqueShape.into());
    }
    let k = c.to_vec();
    let (seq, cap) = match regime {
        Regime::Dense => (dense_sequence(Signature::read(sess, r)), m - 1),
        Regime::Sparse => {
            let mut seq = sparse_sequence(sess, r);
            if seq.len() == 2 {
                // odd endpoint case: only {t, k1} before the greedy pass
                seq.pop();
            }
            (seq, (m - 1).max(2))
        }
    };
    for tok in seq {
        sess.remove(token_set(tok, r, &k).expect("k1 and k2 exist"))?;
    }
    let left = greedy_in(sess, sess.live(c.union(rs)))?;
    check_terminal(sess, left, cap, "stage 2")?;
    Ok(left)
}

fn stage3_in(
    sess: &mut Session,
    r: [usize; 4],
    c: VertexSet,
    regime: Regime,
) -> Result<VertexSet, EngineError> {
    let rs = check_inputs(sess, r, c, regime)?;
    if c.len() > 2 {
        return Err(Condition::CliqueShape.into());
    }
    let k = c.to_vec();
    let seq = match regime {
        Regime::Dense => dense_sequence(Signature::read(sess, r)),
        Regime::Sparse => sparse_sequence(sess, r),
    };
    for tok in seq {
        if sess.live(c).is_empty() {
            break;
        }
        let set = token_set(tok, r, &k).ok_or_else(|| {
            EngineError::Postcondition("clique vertex missing before C was cleared".into())
        })?;
        sess.remove(set)?;
    }
    if !sess.live(c).is_empty() {
        return Err(EngineError::Postcondition(format!(
            "stage 3 left {:?} of C",
            sess.live(c)
        )));
    }
    let left = greedy_in(sess, sess.live(rs))?;
    check_terminal(sess, left, 2, "stage 3")?;
    Ok(left)
}

fn run(
    g: &Graph,
    w: VertexSet,
    r: [usize; 4],
    c: VertexSet,
    f: fn(&mut Session, [usize; 4], VertexSet, Regime) -> Result<VertexSet, EngineError>,
    regime: Regime,
) -> Result<Absorption, EngineError> {
    let mut sess = Session::new(g, w);
    let new_clique = f(&mut sess, r, c, regime)?;
    Ok(Absorption {
        steps: sess.steps,
        new_clique,
    })
}

/// Dense stage 2: `|c| >= 2`, leaves a clique of at most `|c| - 1` vertices.
pub fn p3_dense_stage2(
    g: &Graph,
    w: VertexSet,
    r: [usize; 4],
    c: VertexSet,
) -> Result<Absorption, EngineError> {
    run(g, w, r, c, stage2_in, Regime::Dense)
}

/// Dense stage 3: `|c| <= 2`, removes all of `c`.
pub fn p3_dense_stage3(
    g: &Graph,
    w: VertexSet,
    r: [usize; 4],
    c: VertexSet,
) -> Result<Absorption, EngineError> {
    run(g, w, r, c, stage3_in, Regime::Dense)
}

/// Sparse stage 2: `|c| >= 2`, leaves a clique of at most `max(|c| - 1, 2)` vertices.
pub fn p3_sparse_stage2(
    g: &Graph,
    w: VertexSet,
    r: [usize; 4],
    c: VertexSet,
) -> Result<Absorption, EngineError> {
    run(g, w, r, c, stage2_in, Regime::Sparse)
}

/// Sparse stage 3: `|c| <= 2`, removes all of `c`.
pub fn p3_sparse_stage3(
    g: &Graph,
    w: VertexSet,
    r: [usize; 4],
    c: VertexSet,
) -> Result<Absorption, EngineError> {
    run(g, w, r, c, stage3_in, Regime::Sparse)
}

/// Stage 2 for cliques of three or more vertices, stage 3 otherwise.
pub fn p3_absorb_dense(
    g: &Graph,
    w: VertexSet,
    r: [usize; 4],
    c: VertexSet,
) -> Result<Absorption, EngineError> {
    if c.len() >= 3 {
        p3_dense_stage2(g, w, r, c)
    } else {
        p3_dense_stage3(g, w, r, c)
    }
}

pub fn p3_absorb_sparse(
    g: &Graph,
    w: VertexSet,
    r: [usize; 4],
    c: VertexSet,
) -> Result<Absorption, EngineError> {
    if c.len() >= 3 {
        p3_sparse_stage2(g, w, r, c)
    } else {
        p3_sparse_stage3(g, w, r, c)
    }
}

pub(crate) fn absorb_in(
    sess: &mut Session,
    dense: bool,
    r: [usize; 4],
    c: VertexSet,
    stage2: bool,
) -> Result<VertexSet, EngineError> {
    let regime = if dense { Regime::Dense } else { Regime::Sparse };
    if stage2 {
        stage2_in(sess, r, c, regime)
    } else {
        stage3_in(sess, r, c, regime)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::witness::replay_steps;
    use crate::graph::named::path;

    fn vs(v: &[usize]) -> VertexSet {
        VertexSet::from_vertices(v.iter().copied())
    }

    #[test]
    fn ten_classes() {
        let classes = Signature::classes();
        assert_eq!(classes.len(), 10);
        for s in Signature::all() {
            let (canon, _) = s.canonical();
            assert!(classes.contains(&canon), "{s}");
        }
    }

    /// Path 0-1-2-3 complete to the clique on 4..4+m; pendants fix parities.
    fn dense_rig(sig: Signature, m: usize) -> (Graph, VertexSet) {
        let mut g = path(4).disjoint_union(&Graph::complete(m));
        for x in 0..4 {
            for k in 4..4 + m {
                g.add_edge(x, k);
            }
        }
        let mut want: Vec<(usize, bool)> = (0..4).map(|i| (i, sig.0[i])).collect();
        want.extend((4..4 + m).map(|k| (k, true)));
        for (x, odd) in want {
            if (g.degree(x) % 2 == 1) != odd {
                let p = g.add_vertices(1);
                g.add_edge(x, p);
            }
        }
        (g, VertexSet::from_vertices(4..4 + m))
    }

    #[test]
    fn eeee_triangle_sequence() {
        let (g, c) = dense_rig(Signature::from_bits(0), 3);
        let out = p3_dense_stage2(&g, g.vertices(), [0, 1, 2, 3], c).unwrap();
        assert_eq!(
            &out.steps[..5],
            &[vs(&[1]), vs(&[4]), vs(&[2]), vs(&[5]), vs(&[0, 3])]
        );
        assert!(out
            .new_clique
            .is_subset(replay_steps(&g, g.vertices(), &out.steps).unwrap()));
        assert!(out.new_clique.len() <= 2);
    }

    #[test]
    fn oooo_stage3_clears_pair() {
        let (g, c) = dense_rig(Signature::from_bits(15), 2);
        let out = p3_dense_stage3(&g, g.vertices(), [0, 1, 2, 3], c).unwrap();
        assert_eq!(&out.steps[..3], &[vs(&[0, 3]), vs(&[1]), vs(&[4])]);
        assert!(out.new_clique.is_disjoint(c));
    }

    #[test]
    fn every_dense_case_replays() {
        for sig in Signature::all() {
            for m in 2..=5 {
                let (g, c) = dense_rig(sig, m);
                let out = p3_dense_stage2(&g, g.vertices(), [0, 1, 2, 3], c)
                    .unwrap_or_else(|e| panic!("{sig} m={m}: {e}"));
                let left = replay_steps(&g, g.vertices(), &out.steps).unwrap();
                assert!(out.new_clique.is_subset(left) && out.new_clique.len() < m);
            }
            for m in 0..=2 {
                let (g, c) = dense_rig(sig, m);
                let out = p3_dense_stage3(&g, g.vertices(), [0, 1, 2, 3], c)
                    .unwrap_or_else(|e| panic!("{sig} m={m}: {e}"));
                assert!(out.new_clique.len() <= 2 && out.new_clique.is_disjoint(c));
            }
        }
    }

    #[test]
    fn sparse_all_even_sequence() {
        let mut g = path(4).disjoint_union(&Graph::complete(3));
        for k in 4..7 {
            let p = g.add_vertices(1);
            g.add_edge(k, p);
        }
        // each path vertex needs even degree: pendants on 0 and 3
        for x in [0, 3] {
            let p = g.add_vertices(1);
            g.add_edge(x, p);
        }
        let c = vs(&[4, 5, 6]);
        let out = p3_sparse_stage2(&g, g.vertices(), [0, 1, 2, 3], c).unwrap();
        assert_eq!(&out.steps[..3], &[vs(&[0, 2]), vs(&[3, 4]), vs(&[5])]);
    }

    #[test]
    fn gate_errors() {
        let (g, c) = dense_rig(Signature::from_bits(0), 3);
        assert_eq!(
            p3_sparse_stage2(&g, g.vertices(), [0, 1, 2, 3], c).unwrap_err(),
            EngineError::ConditionUnmet(Condition::RDisjointFromC)
        );
        let mut h = g.clone();
        h.remove_edge(0, 4);
        assert!(matches!(
            p3_dense_stage2(&h, h.vertices(), [0, 1, 2, 3], c),
            Err(EngineError::ConditionUnmet(
                Condition::RCompleteToC | Condition::CliqueShape
            ))
        ));
        assert_eq!(
            p3_dense_stage2(&g, g.vertices(), [0, 2, 1, 3], c).unwrap_err(),
            EngineError::ConditionUnmet(Condition::PathShape)
        );
    }

    #[test]
    fn empty_clique_is_greedy_on_path() {
        let g = path(4);
        let out = p3_absorb_sparse(&g, g.vertices(), [0, 1, 2, 3], VertexSet::EMPTY).unwrap();
        assert!(out.new_clique.len() <= 2);
        let out = p3_absorb_dense(&g, g.vertices(), [0, 1, 2, 3], VertexSet::EMPTY).unwrap();
        assert!(out.new_clique.len() <= 2);
    }
}
