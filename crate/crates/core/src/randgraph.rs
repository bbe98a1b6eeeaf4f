//! Seeded samplers for `G(n, p)`, `G(n, p)` conditioned on an even edge
//! count, and linked / parity-linked pairs of `G(n, 1/2)` graphs.
//!
//! Pair `(i, j)`, `i < j`, has index `j(j-1)/2 + i` (graph6 order). Its bit
//! in attempt `a` is drawn from the counter generator keyed by
//! `(seed, stream)` at domain `a`: for `p = 1/2` it is bit `k mod 64` of word
//! `k / 64`, otherwise word `k` is compared against `p`.

use serde::{Deserialize, Serialize};

use crate::error::SamplerError;
use crate::graph::{Graph, MAX_VERTICES};
use crate::rng::CounterRng;

/// Domain offset for the redrawn pairs of the second graph in a linked pair.
const LINKED_DOMAIN: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerSpec {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    #[serde(default)]
    pub stream: u64,
}

impl SamplerSpec {
    pub fn new(n: usize, p: f64, seed: u64) -> Self {
        SamplerSpec {
            n,
            p,
            seed,
            stream: 0,
        }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        SamplerSpec { stream, ..self }
    }

    fn validate(&self) -> Result<(), SamplerError> {
        if self.n > MAX_VERTICES {
            return Err(SamplerError::TooManyVertices(self.n));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(SamplerError::BadProbability(self.p));
        }
        Ok(())
    }
}

#[inline]
pub fn pair_index(i: usize, j: usize) -> u64 {
    debug_assert!(i < j);
    (j * (j - 1) / 2 + i) as u64
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Whether pair `k` is an edge in attempt `domain`.
#[inline]
pub fn pair_bit(rng: &CounterRng, domain: u64, k: u64, p: f64) -> bool {
    if p == 0.5 {
        rng.word_at(domain, k / 64) >> (k % 64) & 1 == 1
    } else {
        rng.bernoulli_at(domain, k, p)
    }
}

fn draw(n: usize, p: f64, rng: &CounterRng, domain: u64) -> Graph {
    let mut g = Graph::empty(n);
    if p == 0.5 {
        // Same bits as `pair_bit`, one word per 64 pairs.
        let mut k = 0u64;
        let mut word = 0;
        for j in 1..n {
            for i in 0..j {
                if k.is_multiple_of(64) {
                    word = rng.word_at(domain, k / 64);
                }
                if word >> (k % 64) & 1 == 1 {
                    g.add_edge(i, j);
                }
                k += 1;
            }
        }
    } else if p > 0.0 {
        for j in 1..n {
            for i in 0..j {
                if rng.bernoulli_at(domain, pair_index(i, j), p) {
                    g.add_edge(i, j);
                }
            }
        }
    }
    g
}

/// Binomial random graph: each pair independently an edge with probability `p`.
pub fn sample_gnp(spec: SamplerSpec) -> Result<Graph, SamplerError> {
    spec.validate()?;
    Ok(draw(
        spec.n,
        spec.p,
        &CounterRng::new(spec.seed, spec.stream),
        0,
    ))
}

/// Attempt `attempt` of the draw behind [`sample_gnp`]; attempt 0 is the
/// graph `sample_gnp` returns. Rejection samplers walk the attempts in order.
pub fn sample_gnp_attempt(spec: SamplerSpec, attempt: u64) -> Result<Graph, SamplerError> {
    spec.validate()?;
    Ok(draw(
        spec.n,
        spec.p,
        &CounterRng::new(spec.seed, spec.stream),
        attempt,
    ))
}

/// `G(n, p)` conditioned on an even number of edges, by rejection: attempt
/// `a` uses domain `a` until an even draw appears.
pub fn sample_gnp_even(spec: SamplerSpec) -> Result<Graph, SamplerError> {
    spec.validate()?;
    if spec.p == 1.0 && pair_count(spec.n) % 2 == 1 {
        return Err(SamplerError::ImpossibleParity { n: spec.n });
    }
    let rng = CounterRng::new(spec.seed, spec.stream);
    let mut attempt = 0u64;
    loop {
        let g = draw(spec.n, spec.p, &rng, attempt);
        if g.edge_count().is_multiple_of(2) {
            return Ok(g);
        }
        attempt += 1;
    }
}

/// A pair `(G, G')` of `G(n, 1/2)` graphs linked on the first `shared` labels:
/// `G'` copies every pair inside the shared set and redraws all others. With
/// `parity`, the redraw is repeated until `e(G') ≡ e(G) (mod 2)`.
pub fn sample_linked_pair(
    n: usize,
    shared: usize,
    parity: bool,
    seed: u64,
    stream: u64,
) -> Result<(Graph, Graph), SamplerError> {
    if n > MAX_VERTICES {
        return Err(SamplerError::TooManyVertices(n));
    }
    if shared > n {
        return Err(SamplerError::SharedTooLarge { shared, n });
    }
    let rng = CounterRng::new(seed, stream);
    let g = draw(n, 0.5, &rng, 0);
    let free_pairs = pair_count(n) - pair_count(shared);
    if free_pairs == 0 {
        // Everything is shared, so the parities agree automatically.
        return Ok((g.clone(), g));
    }
    let target = g.edge_count() % 2;
    let mut attempt = 0u64;
    loop {
        let fresh = draw(n, 0.5, &rng, LINKED_DOMAIN + attempt);
        let mut h = Graph::empty(n);
        for j in 1..n {
            for i in 0..j {
                let src = if j < shared { &g } else { &fresh };
                if src.has_edge(i, j) {
                    h.add_edge(i, j);
                }
            }
        }
        if !parity || h.edge_count() % 2 == target {
            return Ok((g, h));
        }
        attempt += 1;
    }
}
