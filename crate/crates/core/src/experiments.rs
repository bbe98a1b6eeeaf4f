//! Seeded Monte-Carlo experiments. Trial `i` draws everything from stream
//! `i` of the run's seed, so tallies do not depend on the worker count.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degeneracy::{greedy_ordering, DegenerateSearch, DEGENERATE_CAP};
use crate::engine::{decompose_auto, AutoOptions, EngineStatus};
use crate::error::{CapExceeded, ExperimentError};
use crate::graph::{Graph, VertexSet, MAX_VERTICES};
use crate::oracle::DECOMPOSABLE_HARD_CAP;
use crate::planted::{planted_instance, run_planted, PlantedKind, PlantedTally};
use crate::randgraph::{
    sample_gnp, sample_gnp_attempt, sample_gnp_even, sample_linked_pair, SamplerSpec,
};
use crate::rng::{CounterRng, Draws};
use crate::stats::{chi_square_uniform, proportion};

/// Trials per parallel work item.
const CHUNK: u64 = 4096;
/// Domain for the removal process's own coin flips.
const PROCESS_DOMAIN: u64 = 1 << 48;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub n: usize,
    pub p: Option<f64>,
    pub t: Option<usize>,
    pub a: Option<usize>,
    pub s: Option<usize>,
    pub samples: u64,
    pub seed: u64,
    pub tallies: BTreeMap<String, u64>,
    /// Test statistic, for goodness-of-fit runs.
    pub statistic: Option<f64>,
    /// A proportion, or the p-value of a goodness-of-fit run.
    pub estimate: f64,
    pub stderr: Option<f64>,
    pub runtime_s: Option<f64>,
    pub build: String,
}

impl ExperimentRecord {
    fn base(experiment: &str, n: usize, samples: u64, seed: u64) -> Self {
        ExperimentRecord {
            experiment: experiment.to_string(),
            n,
            p: None,
            t: None,
            a: None,
            s: None,
            samples,
            seed,
            tallies: BTreeMap::new(),
            statistic: None,
            estimate: 0.0,
            stderr: None,
            runtime_s: None,
            build: crate::BUILD.to_string(),
        }
    }

    fn proportion_of(mut self, key: &str) -> Self {
        let (est, se) = proportion(self.tally(key), self.samples);
        self.estimate = est;
        self.stderr = Some(se);
        self
    }

    pub fn tally(&self, key: &str) -> u64 {
        self.tallies.get(key).copied().unwrap_or(0)
    }

    pub fn sigma(&self) -> f64 {
        self.stderr.unwrap_or(0.0)
    }

    /// Same run: experiment, parameters, samples and seed agree.
    pub fn same_run(&self, other: &ExperimentRecord) -> bool {
        self.experiment == other.experiment
            && self.n == other.n
            && self.p == other.p
            && self.t == other.t
            && self.a == other.a
            && self.s == other.s
            && self.samples == other.samples
            && self.seed == other.seed
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialOutcome {
    CertifiedDecomposable,
    CertifiedNonDecomposable,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegeneracyOutcome {
    Degenerate,
    NonDegenerate,
}

/// Decomposer verdict on one graph. A certified negative only comes from
/// the exact oracle; a positive always carries a verified witness.
pub fn classify_decomposability(g: &Graph, exact_cap: usize) -> TrialOutcome {
    match decompose_auto(g, AutoOptions { exact_cap }).status {
        EngineStatus::Decomposed { .. } => TrialOutcome::CertifiedDecomposable,
        EngineStatus::NonDecomposable => TrialOutcome::CertifiedNonDecomposable,
        _ => TrialOutcome::Unknown,
    }
}

/// Worker count plus the optional wall clock.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOptions {
    pub workers: usize,
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            timing: false,
        }
    }
}

/// Sums `trial(state, i, counts)` over `0..samples`, in chunks of trials
/// spread over `workers` threads.
fn tally<S, const K: usize>(
    samples: u64,
    workers: usize,
    init: impl Fn() -> S + Sync + Send,
    trial: impl Fn(&mut S, u64, &mut [u64; K]) + Sync + Send,
) -> [u64; K] {
    let chunks = samples.div_ceil(CHUNK);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map_init(&init, |state, c| {
                let mut counts = [0u64; K];
                for i in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                    trial(state, i, &mut counts);
                }
                counts
            })
            .reduce(
                || [0u64; K],
                |mut x, y| {
                    x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
                    x
                },
            )
    })
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), ExperimentError> {
    if ok {
        Ok(())
    } else {
        Err(ExperimentError::InvalidParameter(msg()))
    }
}

fn cap(what: &'static str, n: usize, cap: usize) -> Result<(), ExperimentError> {
    if n <= cap {
        Ok(())
    } else {
        Err(CapExceeded { what, n, cap }.into())
    }
}

fn timed(
    opts: RunOptions,
    body: impl FnOnce() -> Result<ExperimentRecord, ExperimentError>,
) -> Result<ExperimentRecord, ExperimentError> {
    let start = Instant::now();
    let mut rec = body()?;
    if opts.timing {
        rec.runtime_s = Some(start.elapsed().as_secs_f64());
    }
    Ok(rec)
}

/// Three-way decomposability split of `G(n, p)` conditioned on an even edge
/// count. The estimate is the certified non-decomposable rate.
pub fn estimate_nondecomposable(
    n: usize,
    p: f64,
    exact_cap: usize,
    samples: u64,
    seed: u64,
    opts: RunOptions,
) -> Result<ExperimentRecord, ExperimentError> {
    check(exact_cap <= DECOMPOSABLE_HARD_CAP, || {
        format!("exact cap {exact_cap} exceeds {DECOMPOSABLE_HARD_CAP}")
    })?;
    sample_gnp_even(SamplerSpec::new(n, p, seed))?;
    timed(opts, || {
        let c = tally::<_, 3>(
            samples,
            opts.workers,
            || (),
            |_, i, c| {
                let g = sample_gnp_even(SamplerSpec::new(n, p, seed).with_stream(i))
                    .expect("validated spec");
                c[classify_decomposability(&g, exact_cap) as usize] += 1;
            },
        );
        let mut rec = ExperimentRecord::base("nondecomposable", n, samples, seed);
        rec.p = Some(p);
        rec.tallies.insert("certified_decomposable".into(), c[0]);
        rec.tallies
            .insert("certified_non_decomposable".into(), c[1]);
        rec.tallies.insert("unknown".into(), c[2]);
        Ok(rec.proportion_of("certified_non_decomposable"))
    })
}

/// Non-even-degeneracy rate of `G(n, 1/2)` by the exact search, alongside
/// the smallest-label greedy failure rate.
pub fn estimate_c(
    n: usize,
    samples: u64,
    seed: u64,
    opts: RunOptions,
) -> Result<ExperimentRecord, ExperimentError> {
    cap("even-degeneracy search", n, DEGENERATE_CAP)?;
    timed(opts, || {
        let c = tally::<_, 2>(
            samples,
            opts.workers,
            || DegenerateSearch::new(n),
            |search, i, c| {
                let g =
                    sample_gnp(SamplerSpec::new(n, 0.5, seed).with_stream(i)).expect("valid spec");
                if greedy_ordering(&g).is_err() {
                    c[1] += 1;
                    if !search.decide(&g) {
                        c[0] += 1;
                    }
                }
            },
        );
        let mut rec = ExperimentRecord::base("c", n, samples, seed);
        rec.p = Some(0.5);
        rec.tallies.insert("non_degenerate".into(), c[0]);
        rec.tallies.insert("greedy_failed".into(), c[1]);
        Ok(rec.proportion_of("non_degenerate"))
    })
}

/// Probability that both members of a parity-linked pair on `n` vertices,
/// sharing the first `s` labels, are non-even-degenerate.
pub fn estimate_b_star(
    n: usize,
    s: usize,
    samples: u64,
    seed: u64,
    opts: RunOptions,
) -> Result<ExperimentRecord, ExperimentError> {
    cap("even-degeneracy search", n, DEGENERATE_CAP)?;
    sample_linked_pair(n, s, true, seed, 0)?;
    timed(opts, || {
        let c = tally::<_, 3>(
            samples,
            opts.workers,
            || DegenerateSearch::new(n),
            |search, i, c| {
                let (g, h) = sample_linked_pair(n, s, true, seed, i).expect("validated pair");
                let bad_g = !search.decide(&g);
                let bad_h = !search.decide(&h);
                c[0] += (bad_g && bad_h) as u64;
                c[1] += bad_g as u64;
                c[2] += bad_h as u64;
            },
        );
        let mut rec = ExperimentRecord::base("b_star", n, samples, seed);
        rec.p = Some(0.5);
        rec.s = Some(s);
        rec.tallies.insert("both_non_degenerate".into(), c[0]);
        rec.tallies.insert("first_non_degenerate".into(), c[1]);
        rec.tallies.insert("second_non_degenerate".into(), c[2]);
        Ok(rec.proportion_of("both_non_degenerate"))
    })
}

/// One run of the removal process on `G(2n, 1/2)`: `n` times, delete the
/// smallest-label vertex of even degree, or a uniform random vertex when
/// every degree is odd. Returns whether every deletion was even, and the
/// deleted set.
pub fn removal_process(g: &Graph, n: usize, coins: &mut Draws) -> (bool, VertexSet) {
    let mut w = g.vertices();
    let mut gone = VertexSet::EMPTY;
    let mut all_even = true;
    for _ in 0..n {
        let v = match w
            .iter()
            .find(|&v| (g.row(v) & w.bits()).count_ones().is_multiple_of(2))
        {
            Some(v) => v,
            None => {
                all_even = false;
                let k = coins.below(w.len() as u64) as usize;
                w.iter().nth(k).expect("index below the set size")
            }
        };
        w.remove(v);
        gone.insert(v);
    }
    (all_even, gone)
}

/// `[n - t] ⊆ c ⊆ [n + t]` and `|[n] \ c| <= a`, labels counted from 1.
pub fn is_initial(c: VertexSet, n: usize, t: usize, a: usize) -> bool {
    VertexSet::full(n.saturating_sub(t)).is_subset(c)
        && c.is_subset(VertexSet::full((n + t).min(2 * n)))
        && VertexSet::full(n).difference(c).len() <= a
}

/// Empirical probability that the removal process makes only even
/// deletions and ends with a `(t, a)`-initial set.
pub fn removal_process_stats(
    n: usize,
    t: usize,
    a: usize,
    samples: u64,
    seed: u64,
    opts: RunOptions,
) -> Result<ExperimentRecord, ExperimentError> {
    check(a <= t && t <= n, || {
        format!("need a <= t <= n, got a = {a}, t = {t}, n = {n}")
    })?;
    cap("removal process on 2n vertices", 2 * n, MAX_VERTICES)?;
    timed(opts, || {
        let c = tally::<_, 3>(
            samples,
            opts.workers,
            || (),
            |_, i, c| {
                let g = sample_gnp(SamplerSpec::new(2 * n, 0.5, seed).with_stream(i))
                    .expect("valid spec");
                let mut coins = Draws::new(CounterRng::new(seed, i), PROCESS_DOMAIN);
                let (even, gone) = removal_process(&g, n, &mut coins);
                let init = is_initial(gone, n, t, a);
                c[0] += (even && init) as u64;
                c[1] += even as u64;
                c[2] += init as u64;
            },
        );
        let mut rec = ExperimentRecord::base("removal", n, samples, seed);
        rec.p = Some(0.5);
        rec.t = Some(t);
        rec.a = Some(a);
        rec.tallies.insert("event_f".into(), c[0]);
        rec.tallies.insert("all_even".into(), c[1]);
        rec.tallies.insert("initial".into(), c[2]);
        Ok(rec.proportion_of("event_f"))
    })
}

/// Lower bound on the event probability, `1 - 7 2^{-t/2} - 4 2^{-a^2}`.
pub fn removal_bound(t: usize, a: usize) -> f64 {
    1.0 - 7.0 * 2f64.powf(-(t as f64) / 2.0) - 4.0 * 2f64.powf(-((a * a) as f64))
}

/// Chi-square test that the degree-parity vector of `G(n, 1/2)` is uniform
/// over the `2^{n-1}` vectors of even weight. The estimate is the p-value.
pub fn degree_parity_gof(
    n: usize,
    samples: u64,
    seed: u64,
    opts: RunOptions,
) -> Result<ExperimentRecord, ExperimentError> {
    check((2..=8).contains(&n), || format!("n = {n} outside 2..=8"))?;
    timed(opts, || {
        let cells = 1usize << (n - 1);
        let c = tally::<_, 128>(
            samples,
            opts.workers,
            || (),
            |_, i, c| {
                let g =
                    sample_gnp(SamplerSpec::new(n, 0.5, seed).with_stream(i)).expect("valid spec");
                // the last parity is fixed by the others
                c[(g.degree_parities() as usize) & (cells - 1)] += 1;
            },
        );
        let test = chi_square_uniform(&c[..cells]);
        let mut rec = ExperimentRecord::base("degree_parity", n, samples, seed);
        rec.p = Some(0.5);
        rec.tallies.insert("cells".into(), cells as u64);
        rec.tallies.insert("dof".into(), test.dof as u64);
        rec.statistic = Some(test.statistic);
        rec.estimate = test.p_value;
        Ok(rec)
    })
}

/// Index of `g` over its pairs in graph6 order.
fn graph_index(g: &Graph) -> usize {
    crate::format::pair_order(g.n())
        .enumerate()
        .filter(|&(_, (i, j))| g.has_edge(i, j))
        .fold(0, |acc, (k, _)| acc | 1 << k)
}

/// Chi-square test that `G - vertex`, for `G ~ G(n, 1/2)` conditioned on the
/// degree-parity vector `parities` by rejection, is uniform over all graphs
/// on the other `n - 1` labels. The estimate is the p-value.
pub fn forgetfulness_gof(
    n: usize,
    vertex: usize,
    parities: u64,
    samples: u64,
    seed: u64,
    opts: RunOptions,
) -> Result<ExperimentRecord, ExperimentError> {
    check((3..=5).contains(&n), || format!("n = {n} outside 3..=5"))?;
    check(vertex < n, || format!("vertex {vertex} outside 0..{n}"))?;
    check(parities < 1 << n && parities.count_ones().is_multiple_of(2), || {
        format!("parity vector {parities:#b} is not an even-weight vector on {n} bits")
    })?;
    timed(opts, || {
        let cells = 1usize << ((n - 1) * (n - 2) / 2);
        let rest: Vec<usize> = (0..n).filter(|&v| v != vertex).collect();
        let rest_set = VertexSet::from_vertices(rest.iter().copied());
        let c = tally::<_, 64>(
            samples,
            opts.workers,
            || (),
            |_, i, c| {
                let spec = SamplerSpec::new(n, 0.5, seed).with_stream(i);
                let g = (0..)
                    .map(|attempt| sample_gnp_attempt(spec, attempt).expect("valid spec"))
                    .find(|g| g.degree_parities() == parities)
                    .expect("every even-weight parity vector is reachable");
                c[graph_index(&g.induced(rest_set))] += 1;
            },
        );
        let test = chi_square_uniform(&c[..cells]);
        let mut rec = ExperimentRecord::base("forgetfulness", n, samples, seed);
        rec.p = Some(0.5);
        rec.a = Some(vertex);
        rec.tallies.insert("parities".into(), parities);
        rec.tallies.insert("cells".into(), cells as u64);
        rec.tallies.insert("dof".into(), test.dof as u64);
        rec.statistic = Some(test.statistic);
        rec.estimate = test.p_value;
        Ok(rec)
    })
}

/// Runs planted instances `0..samples` of `kind`; the estimate is the
/// decomposed fraction.
pub fn planted_soundness(
    kind: PlantedKind,
    samples: u64,
    seed: u64,
    opts: RunOptions,
) -> Result<ExperimentRecord, ExperimentError> {
    timed(opts, || {
        let c = tally::<_, 5>(
            samples,
            opts.workers,
            || (),
            |_, i, c| {
                let inst = planted_instance(kind, seed, i);
                let mut t = PlantedTally::default();
                t.add(&inst.graph, &run_planted(&inst));
                c[0] += t.decomposed;
                c[1] += t.bad_witness;
                c[2] += t.condition_unmet;
                c[3] += t.faults;
                c[4] += t.other;
            },
        );
        let mut rec = ExperimentRecord::base(
            &format!("planted_{}", kind.name()),
            MAX_VERTICES,
            samples,
            seed,
        );
        rec.tallies.insert("decomposed".into(), c[0]);
        rec.tallies.insert("bad_witness".into(), c[1]);
        rec.tallies.insert("condition_unmet".into(), c[2]);
        rec.tallies.insert("faults".into(), c[3]);
        rec.tallies.insert("other".into(), c[4]);
        Ok(rec.proportion_of("decomposed"))
    })
}
