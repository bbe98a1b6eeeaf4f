use evendecomp::experiments::*;
use evendecomp::format::pair_order;
use evendecomp::oracle::graph_from_index;
use evendecomp::stats::within_sigmas;
use evendecomp::*;

fn opts(workers: usize) -> RunOptions {
    RunOptions {
        workers,
        timing: false,
    }
}

fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let m = n * n.saturating_sub(1) / 2;
    (0u64..1 << m).map(move |i| graph_from_index(n, i))
}

/// Some ordering works, by trying every vertex first at every level.
fn degenerate_brute(g: &Graph, w: VertexSet) -> bool {
    w.len() <= 2
        || w.iter().any(|v| {
            let mut rest = w;
            rest.remove(v);
            g.degree_in(rest.union(VertexSet::singleton(v)), v).is_multiple_of(2)
                && degenerate_brute(g, rest)
        })
}

/// Some nonempty independent subset with an even cut leads to a
/// decomposable remainder.
fn decomposable_brute(g: &Graph, w: VertexSet) -> bool {
    if w.is_empty() {
        return true;
    }
    let bits = w.bits();
    let mut s = bits;
    while s != 0 {
        let set = VertexSet(s);
        let rest = w.difference(set);
        if g.is_independent(set)
            && g.edges_between(set, rest).is_multiple_of(2)
            && decomposable_brute(g, rest)
        {
            return true;
        }
        s = (s - 1) & bits;
    }
    false
}

#[test]
fn c4_matches_enumeration() {
    let bad = all_graphs(4)
        .filter(|g| !degenerate_brute(g, g.vertices()))
        .count();
    assert_eq!(bad, 8);
    let r = estimate_c(4, 1_000_000, 20_240_401, opts(2)).unwrap();
    assert!(
        within_sigmas(r.estimate, r.sigma(), bad as f64 / 64.0, 3.0),
        "{r:?}"
    );
    assert_eq!(r.tally("greedy_failed"), r.tally("non_degenerate"));
}

#[test]
fn c3_is_zero() {
    for n in 1..=3 {
        assert!(all_graphs(n).all(|g| degenerate_brute(&g, g.vertices())));
        let r = estimate_c(n, 50_000, 3, opts(2)).unwrap();
        assert_eq!(r.estimate, 0.0);
        assert_eq!(r.tally("non_degenerate"), 0);
    }
}

#[test]
fn greedy_failures_dominate_exact_failures() {
    for n in [6, 9, 12] {
        let r = estimate_c(n, 100_000, 9, opts(2)).unwrap();
        assert!(r.tally("greedy_failed") >= r.tally("non_degenerate"));
    }
}

#[test]
fn recursion_inequality_at_moderate_sample_sizes() {
    let recs: Vec<ExperimentRecord> = (4..=15)
        .map(|n| estimate_c(n, 200_000, 11, opts(2)).unwrap())
        .collect();
    for w in recs.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let q = 2f64.powi(-(a.n as i32));
        let sigma = (a.sigma().powi(2) + b.sigma().powi(2)).sqrt();
        assert!(
            b.estimate <= (1.0 - q) * a.estimate + q + 3.0 * sigma,
            "{a:?} {b:?}"
        );
    }
}

#[test]
fn nondecomposable_rate_at_four_vertices() {
    let even: Vec<Graph> = all_graphs(4).filter(|g| g.edge_count() % 2 == 0).collect();
    let bad = even
        .iter()
        .filter(|g| !decomposable_brute(g, g.vertices()))
        .count();
    assert_eq!((even.len(), bad), (32, 1));
    let r = estimate_nondecomposable(4, 0.5, 18, 1_000_000, 42, opts(2)).unwrap();
    assert!(
        within_sigmas(r.estimate, r.sigma(), 1.0 / 32.0, 3.0),
        "{r:?}"
    );
    assert_eq!(r.tally("unknown"), 0);
    assert_eq!(
        r.tally("certified_decomposable")
            + r.tally("certified_non_decomposable")
            + r.tally("unknown"),
        r.samples
    );
}

#[test]
fn nondecomposable_rate_agrees_with_the_oracle_on_the_same_stream() {
    let (n, p, samples, seed) = (10, 0.05, 20_000, 5);
    let r = estimate_nondecomposable(n, p, 18, samples, seed, opts(2)).unwrap();
    let direct = (0..samples)
        .filter(|&i| {
            let g = sample_gnp_even(SamplerSpec::new(n, p, seed).with_stream(i)).unwrap();
            exact_even_decomposable(&g).unwrap().is_none()
        })
        .count() as u64;
    assert_eq!(r.tally("certified_non_decomposable"), direct);
}

#[test]
fn nearly_complete_graphs_fail_more_often() {
    // expected complement edges: 66 * 0.03 < 12 / 5
    let dense = estimate_nondecomposable(12, 0.97, 18, 20_000, 8, opts(2)).unwrap();
    let half = estimate_nondecomposable(12, 0.5, 18, 20_000, 8, opts(2)).unwrap();
    let sigma = (dense.sigma().powi(2) + half.sigma().powi(2)).sqrt();
    assert!(
        dense.estimate - half.estimate > 3.0 * sigma,
        "{dense:?} {half:?}"
    );
}

#[test]
fn three_way_mode_above_the_cap() {
    let r = estimate_nondecomposable(20, 0.5, 18, 40, 3, opts(2)).unwrap();
    assert_eq!(r.tally("certified_non_decomposable"), 0);
    assert_eq!(r.tally("certified_decomposable") + r.tally("unknown"), 40);
}

#[test]
fn b_star_matches_pair_enumeration_at_four_vertices() {
    // shared labels {0,1,2}; pairs touching 3 are redrawn
    let free: Vec<usize> = pair_order(4)
        .enumerate()
        .filter(|&(_, (_, j))| j == 3)
        .map(|(k, _)| k)
        .collect();
    let free_mask: u64 = free.iter().map(|&k| 1 << k).sum();
    let mut exact = 0.0;
    for gi in 0u64..64 {
        let g = graph_from_index(4, gi);
        let bad_g = !degenerate_brute(&g, g.vertices());
        let partners: Vec<Graph> = (0u64..8)
            .map(|c| {
                let bits: u64 = free
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| c >> b & 1 == 1)
                    .map(|(_, &k)| 1 << k)
                    .sum();
                graph_from_index(4, (gi & !free_mask) | bits)
            })
            .filter(|h| h.edge_count() % 2 == g.edge_count() % 2)
            .collect();
        assert_eq!(partners.len(), 4);
        let both = partners
            .iter()
            .filter(|h| bad_g && !degenerate_brute(h, h.vertices()))
            .count();
        exact += both as f64 / partners.len() as f64 / 64.0;
    }
    let r = estimate_b_star(4, 3, 1_000_000, 17, opts(2)).unwrap();
    assert!(
        within_sigmas(r.estimate, r.sigma(), exact, 3.0),
        "{r:?} vs {exact}"
    );
    for key in ["first_non_degenerate", "second_non_degenerate"] {
        let (m, s) = evendecomp::stats::proportion(r.tally(key), r.samples);
        assert!(r.estimate <= m + 3.0 * s);
    }
}

#[test]
fn b_star_with_full_sharing_is_c() {
    for n in [4, 7] {
        let b = estimate_b_star(n, n, 100_000, 4, opts(2)).unwrap();
        let c = estimate_c(n, 100_000, 4, opts(2)).unwrap();
        assert_eq!(b.tally("both_non_degenerate"), c.tally("non_degenerate"));
        assert_eq!(b.estimate, c.estimate);
    }
}

/// Exact `P(F)` for the removal process on `G(2n, 1/2)`, summing over every
/// graph and every branch of the process's random choices.
fn removal_exact(n: usize, t: usize, a: usize) -> f64 {
    fn walk(
        g: &Graph,
        w: VertexSet,
        gone: VertexSet,
        left: usize,
        even: bool,
        n: usize,
        t: usize,
        a: usize,
    ) -> f64 {
        if left == 0 {
            return (even && is_initial(gone, n, t, a)) as u8 as f64;
        }
        let step = |v: usize, even: bool| {
            let mut rest = w;
            rest.remove(v);
            let mut out = gone;
            out.insert(v);
            walk(g, rest, out, left - 1, even, n, t, a)
        };
        match w.iter().find(|&v| g.degree_in(w, v).is_multiple_of(2)) {
            Some(v) => step(v, even),
            None => w.iter().map(|v| step(v, false)).sum::<f64>() / w.len() as f64,
        }
    }
    let graphs: Vec<Graph> = all_graphs(2 * n).collect();
    let total: f64 = graphs
        .iter()
        .map(|g| walk(g, g.vertices(), VertexSet::EMPTY, n, true, n, t, a))
        .sum();
    total / graphs.len() as f64
}

#[test]
fn removal_process_matches_exhaustive_tree_at_two() {
    for (t, a) in [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2)] {
        let exact = removal_exact(2, t, a);
        let r = removal_process_stats(2, t, a, 100_000, 31, opts(2)).unwrap();
        assert!(
            within_sigmas(r.estimate, r.sigma(), exact, 3.0),
            "t={t} a={a}: {r:?} vs {exact}"
        );
    }
}

#[test]
fn removal_event_is_monotone_in_the_shape() {
    let tight = removal_process_stats(30, 10, 3, 20_000, 2, opts(2)).unwrap();
    let loose = removal_process_stats(30, 30, 30, 20_000, 2, opts(2)).unwrap();
    assert!(loose.tally("event_f") >= tight.tally("event_f"));
    assert!(tight.estimate >= removal_bound(10, 3) - 3.0 * tight.sigma());
}

#[test]
fn even_sampler_mean_matches_enumeration() {
    let even: Vec<usize> = all_graphs(4)
        .map(|g| g.edge_count())
        .filter(|e| e % 2 == 0)
        .collect();
    let mean = even.iter().sum::<usize>() as f64 / even.len() as f64;
    let var = even.iter().map(|&e| (e as f64 - mean).powi(2)).sum::<f64>() / even.len() as f64;
    let samples = 1_000_000u64;
    let total: u64 = (0..samples)
        .map(|i| {
            sample_gnp_even(SamplerSpec::new(4, 0.5, 6).with_stream(i))
                .unwrap()
                .edge_count() as u64
        })
        .sum();
    let got = total as f64 / samples as f64;
    assert!(
        (got - mean).abs() <= 3.0 * (var / samples as f64).sqrt(),
        "{got} vs {mean}"
    );
}

#[test]
fn records_do_not_depend_on_worker_count() {
    let run = |w| {
        vec![
            estimate_c(9, 30_000, 1, opts(w)).unwrap(),
            estimate_b_star(6, 5, 30_000, 1, opts(w)).unwrap(),
            removal_process_stats(10, 4, 2, 10_000, 1, opts(w)).unwrap(),
            degree_parity_gof(6, 30_000, 1, opts(w)).unwrap(),
            forgetfulness_gof(4, 0, 0b0011, 30_000, 1, opts(w)).unwrap(),
            estimate_nondecomposable(8, 0.5, 18, 5_000, 1, opts(w)).unwrap(),
        ]
    };
    let one = run(1);
    assert_eq!(one, run(2));
    assert_eq!(one, run(8));
}

#[test]
fn parameter_checks() {
    assert!(estimate_c(25, 10, 0, opts(1)).is_err());
    assert!(removal_process_stats(33, 10, 3, 10, 0, opts(1)).is_err());
    assert!(removal_process_stats(30, 10, 11, 10, 0, opts(1)).is_err());
    assert!(forgetfulness_gof(5, 4, 0b00001, 10, 0, opts(1)).is_err());
    assert!(estimate_nondecomposable(10, 1.5, 18, 10, 0, opts(1)).is_err());
    assert!(estimate_b_star(5, 6, 10, 0, opts(1)).is_err());
}

#[test]
fn timing_is_opt_in() {
    let r = estimate_c(5, 1000, 0, opts(1)).unwrap();
    assert_eq!(r.runtime_s, None);
    let r = estimate_c(
        5,
        1000,
        0,
        RunOptions {
            workers: 1,
            timing: true,
        },
    )
    .unwrap();
    assert!(r.runtime_s.is_some());
}
