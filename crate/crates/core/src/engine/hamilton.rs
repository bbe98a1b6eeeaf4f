use crate::engine::Condition;
use crate::graph::{Graph, VertexSet};

/// Hamilton cycle of a graph with minimum degree at least `n / 2`, `n >= 3`,
/// by path extension and rotation. The cycle is returned as a vertex list
/// starting at vertex 0; its closing edge runs from the last entry back to 0.
pub fn hamilton_cycle_dirac(h: &Graph) -> Result<Vec<usize>, Condition> {
    let n = h.n();
    if n < 3 || (0..n).any(|v| 2 * h.degree(v) < n) {
        return Err(Condition::DiracDegree);
    }
    let mut path = vec![0];
    let mut on = VertexSet::singleton(0);
    loop {
        // extend greedily at both ends
        loop {
            let end = *path.last().expect("path is never empty");
            if let Some(x) = h.neighbors(end).difference(on).first() {
                path.push(x);
                on.insert(x);
                continue;
            }
            if let Some(x) = h.neighbors(path[0]).difference(on).first() {
                path.insert(0, x);
                on.insert(x);
                continue;
            }
            break;
        }
        let cycle = close(h, &path).ok_or(Condition::DiracDegree)?;
        if cycle.len() == n {
            let at = cycle
                .iter()
                .position(|&v| v == 0)
                .expect("vertex 0 is on the cycle");
            let mut out = cycle[at..].to_vec();
            out.extend_from_slice(&cycle[..at]);
            return Ok(out);
        }
        // open the cycle next to a vertex with a neighbour off the cycle
        let (j, x) = cycle
            .iter()
            .enumerate()
            .find_map(|(j, &u)| h.neighbors(u).difference(on).first().map(|x| (j, x)))
            .ok_or(Condition::DiracDegree)?;
        path = cycle[j + 1..].iter().chain(&cycle[..=j]).copied().collect();
        path.push(x);
        on.insert(x);
    }
}

/// Turns a path whose end neighbourhoods lie on the path into a cycle on the
/// same vertices.
fn close(h: &Graph, path: &[usize]) -> Option<Vec<usize>> {
    let k = path.len();
    let (first, last) = (path[0], path[k - 1]);
    if k <= 2 || h.has_edge(first, last) {
        return Some(path.to_vec());
    }
    let i = (0..k - 1).find(|&i| h.has_edge(first, path[i + 1]) && h.has_edge(path[i], last))?;
    let mut cycle = path[..=i].to_vec();
    cycle.extend(path[i + 1..].iter().rev());
    Some(cycle)
}
