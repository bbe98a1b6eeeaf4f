use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use evendecomp::degeneracy::{exact_even_degenerate_capped, DEGENERATE_CAP};
use evendecomp::experiments::{self as exp, ExperimentRecord, RunOptions};
use evendecomp::oracle::{exact_even_decomposable_capped, DECOMPOSABLE_CAP, DECOMPOSABLE_HARD_CAP};
use evendecomp::pattern::{find_disjoint_induced, Pattern, DEFAULT_BUDGET};
use evendecomp::planted::PlantedKind;
use evendecomp::results::{self, Format};
use evendecomp::rigs::{self, RigResult};
use evendecomp::{
    census, decompose_auto, decompose_dense, decompose_sparse, decompose_uniform, greedy_ordering,
    parse_edge_list, parse_graph6, AutoOptions, CapExceeded, CensusOptions, EngineOutcome,
    EngineStatus, ExperimentError, Graph, Thresholds,
};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_FAULT: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "evendecomp", version = evendecomp::BUILD, about = "Even-decomposition and even-degeneracy of graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact verdicts: even-decomposable and even-degenerate.
    Decide(DecideArgs),
    /// Run a constructive decomposer and print its outcome and witness.
    Decompose(DecomposeArgs),
    /// Even-degenerate ordering, or the set where greedy removal got stuck.
    Degenerate(DegenerateArgs),
    /// Count every labelled graph on n vertices.
    Census(CensusArgs),
    /// Monte-Carlo experiments.
    Mc(McArgs),
    /// Replay the parity-rig suites for the absorption steps.
    VerifyLemmas(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum OutFormat {
    Json,
    Csv,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Format {
        match f {
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
struct GraphInput {
    /// Graph in graph6 format.
    #[arg(long, conflicts_with = "edges")]
    g6: Option<String>,
    /// Edge-list file: vertex count, then one `u v` pair per line.
    #[arg(long, value_name = "FILE")]
    edges: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
struct OutputArgs {
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
}

#[derive(Debug, Args, Serialize)]
struct DecideArgs {
    #[command(flatten)]
    input: GraphInput,
    #[command(flatten)]
    output: OutputArgs,
    /// Largest n handed to the exact decomposability search.
    #[arg(long, default_value_t = DECOMPOSABLE_CAP)]
    exact_cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Auto,
    Uniform,
    Dense,
    Sparse,
}

#[derive(Debug, Args, Serialize)]
struct DecomposeArgs {
    #[command(flatten)]
    input: GraphInput,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    /// Minimum number of disjoint induced P3s.
    #[arg(long)]
    tau1: Option<usize>,
    /// Forbidden clique size.
    #[arg(long)]
    tau2: Option<usize>,
    /// Degree cap (complement degree for the dense method).
    #[arg(long)]
    tau3: Option<usize>,
    /// Number of F gadgets for the uniform method (default: clique number).
    #[arg(short, long)]
    t: Option<usize>,
    #[arg(long, default_value_t = DECOMPOSABLE_CAP)]
    exact_cap: usize,
}

#[derive(Debug, Args, Serialize)]
struct DegenerateArgs {
    #[command(flatten)]
    input: GraphInput,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
struct CensusArgs {
    #[arg(short, long)]
    n: usize,
    /// Count even-decomposable graphs (n <= 7).
    #[arg(long)]
    decomposability: bool,
    /// Count even-degenerate graphs (n <= 8).
    #[arg(long)]
    degeneracy: bool,
    /// Exemplars kept per class, as graph6.
    #[arg(long, default_value_t = 3)]
    exemplars: usize,
    #[arg(long)]
    workers: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Experiment {
    /// Three-way decomposability split of even G(n, p).
    Nondecomposable,
    /// Non-even-degeneracy rate c_n of G(n, 1/2).
    C,
    /// Both members of a parity-linked pair non-even-degenerate.
    BStar,
    /// Removal process on G(2n, 1/2).
    Removal,
    /// Uniformity of degree-parity vectors.
    DegreeParity,
    /// Uniformity of G - i given the degree-parity vector.
    Forgetfulness,
    /// Soundness over planted instances.
    Planted,
}

#[derive(Debug, Args, Serialize)]
struct McArgs {
    #[arg(value_enum)]
    experiment: Experiment,
    #[arg(short, long)]
    n: usize,
    /// Sweep n up to this value, inclusive.
    #[arg(long)]
    n_to: Option<usize>,
    #[arg(short, long, default_value_t = 0.5)]
    p: f64,
    #[arg(short, long)]
    t: Option<usize>,
    #[arg(short, long)]
    a: Option<usize>,
    /// Shared labels of a linked pair (default n - 1).
    #[arg(short, long)]
    s: Option<usize>,
    /// Deleted vertex for the forgetfulness test.
    #[arg(long, default_value_t = 0)]
    vertex: usize,
    /// Conditioning degree-parity vector, as a bit mask.
    #[arg(long)]
    parities: Option<u64>,
    #[arg(long, value_enum, default_value_t = Kind::Sparse)]
    kind: Kind,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value_t = DECOMPOSABLE_CAP)]
    exact_cap: usize,
    /// Record wall-clock time (makes records differ between runs).
    #[arg(long)]
    timing: bool,
    /// Skip runs already recorded in the output file.
    #[arg(long, requires = "out")]
    resume: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Uniform,
    Dense,
    Sparse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Suite {
    All,
    AbsorbVertex,
    AbsorbClique,
    Dense,
    Sparse,
}

#[derive(Debug, Args, Serialize)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Cap(CapExceeded),
    Fault(String),
}

impl From<CapExceeded> for Failure {
    fn from(e: CapExceeded) -> Self {
        Failure::Cap(e)
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Cap(c) => Failure::Cap(c),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<evendecomp::ResultsError> for Failure {
    fn from(e: evendecomp::ResultsError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decide(a) => decide(a),
        Command::Decompose(a) => decompose(a),
        Command::Degenerate(a) => degenerate(a),
        Command::Census(a) => run_census(a),
        Command::Mc(a) => mc(a),
        Command::VerifyLemmas(a) => verify(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("usage: evendecomp <decide|decompose|degenerate|census|mc|verify-lemmas> [options]; see --help");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Cap(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CAP)
        }
        Err(Failure::Fault(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(EXIT_FAULT)
        }
    }
}

fn read_graph(input: &GraphInput) -> Result<Graph, Failure> {
    match (&input.g6, &input.edges) {
        (Some(s), None) => parse_graph6(s.trim()).map_err(|e| Failure::Usage(e.to_string())),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            parse_edge_list(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
        }
        _ => Err(Failure::Usage("give exactly one of --g6 or --edges".into())),
    }
}

fn config<T: Serialize>(command: &str, args: &T) -> Value {
    let mut v = serde_json::to_value(args).expect("arguments serialize");
    if let Value::Object(m) = &mut v {
        m.insert("command".into(), json!(command));
    }
    v
}

/// Writes `text` to `--out` (replacing it) or to standard output.
fn emit(out: &OutputArgs, text: &str) -> Result<(), Failure> {
    match &out.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Usage(format!("stdout: {e}")))
        }
    }
}

/// A single-object report: JSON with a `config` field, or CSV with a
/// `# config:` line, a header and one row.
fn emit_report(out: &OutputArgs, cfg: Value, fields: Vec<(&str, Value)>) -> Result<(), Failure> {
    match out.format {
        OutFormat::Json => {
            let mut m = serde_json::Map::new();
            m.insert("config".into(), cfg);
            for (k, v) in fields {
                m.insert(k.into(), v);
            }
            emit(out, &format!("{}\n", Value::Object(m)))
        }
        OutFormat::Csv => {
            let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let row: Vec<String> = fields.iter().map(|(_, v)| csv_cell(v)).collect();
            emit(
                out,
                &format!(
                    "# config: {cfg}\n{}",
                    csv_lines(&[header.iter().map(|s| s.to_string()).collect(), row])
                ),
            )
        }
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_lines(rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn decide(a: DecideArgs) -> Outcome {
    let g = read_graph(&a.input)?;
    let cfg = config("decide", &a);
    if a.exact_cap > DECOMPOSABLE_HARD_CAP {
        return Err(Failure::Usage(format!(
            "--exact-cap is at most {DECOMPOSABLE_HARD_CAP}"
        )));
    }
    let even = g.edge_count() % 2 == 0;
    let witness = if even {
        exact_even_decomposable_capped(&g, a.exact_cap)?
    } else {
        None
    };
    let ordering = exact_even_degenerate_capped(&g, DEGENERATE_CAP)?;
    let verdict = match (even, &witness) {
        (false, _) => "odd-edge-count",
        (true, Some(_)) => "even-decomposable",
        (true, None) => "non-even-decomposable",
    };
    let degeneracy = if ordering.is_some() {
        "even-degenerate"
    } else {
        "non-even-degenerate"
    };
    emit_report(
        &a.output,
        cfg,
        vec![
            ("n", json!(g.n())),
            ("edges", json!(g.edge_count())),
            ("verdict", json!(verdict)),
            ("degeneracy", json!(degeneracy)),
            ("witness", json!(witness.map(|w| w.step_lists()))),
            ("ordering", json!(ordering.map(|o| o.perm))),
        ],
    )?;
    Ok(if verdict == "even-decomposable" {
        0
    } else {
        EXIT_NEGATIVE
    })
}

fn decompose(a: DecomposeArgs) -> Outcome {
    let g = read_graph(&a.input)?;
    let cfg = config("decompose", &a);
    if a.exact_cap > DECOMPOSABLE_HARD_CAP {
        return Err(Failure::Usage(format!(
            "--exact-cap is at most {DECOMPOSABLE_HARD_CAP}"
        )));
    }
    let thresholds = |dense: bool| {
        let base = Thresholds::permissive(&g, dense);
        Thresholds::new(
            a.tau1.unwrap_or(base.packing),
            a.tau2.unwrap_or(base.clique_cap),
            a.tau3.unwrap_or(base.degree_cap),
        )
    };
    let outcome: EngineOutcome = match a.method {
        Method::Auto => decompose_auto(
            &g,
            AutoOptions {
                exact_cap: a.exact_cap,
            },
        ),
        Method::Dense => decompose_dense(&g, thresholds(true)),
        Method::Sparse => decompose_sparse(&g, thresholds(false)),
        Method::Uniform => {
            let t = a.t.unwrap_or_else(|| g.clique_number());
            let packing = find_disjoint_induced(&g, Pattern::F, t, DEFAULT_BUDGET);
            decompose_uniform(&g, &packing, t)
        }
    };
    let status = serde_json::to_value(&outcome.status).expect("outcome serializes");
    let mut fields = vec![("n", json!(g.n())), ("edges", json!(g.edge_count()))];
    if let Value::Object(m) = status {
        for key in ["status", "witness", "remaining", "condition", "reason"] {
            if let Some(v) = m.get(key) {
                fields.push((key, v.clone()));
            }
        }
    }
    fields.push(("trace", json!(outcome.trace)));
    emit_report(&a.output, cfg, fields)?;
    match outcome.status {
        EngineStatus::Decomposed { .. } => Ok(0),
        EngineStatus::Fault { reason } => Err(Failure::Fault(reason)),
        _ => Ok(EXIT_NEGATIVE),
    }
}

fn degenerate(a: DegenerateArgs) -> Outcome {
    let g = read_graph(&a.input)?;
    let cfg = config("degenerate", &a);
    let greedy = greedy_ordering(&g);
    let exact = exact_even_degenerate_capped(&g, DEGENERATE_CAP)?;
    let verdict = if exact.is_some() {
        "even-degenerate"
    } else {
        "non-even-degenerate"
    };
    let ok = exact.is_some();
    emit_report(
        &a.output,
        cfg,
        vec![
            ("n", json!(g.n())),
            ("verdict", json!(verdict)),
            ("ordering", json!(exact.map(|o| o.perm))),
            (
                "greedy_ordering",
                json!(greedy.as_ref().ok().map(|o| o.perm.clone())),
            ),
            ("stuck", json!(greedy.err().map(|s| s.to_vec()))),
        ],
    )?;
    Ok(if ok { 0 } else { EXIT_NEGATIVE })
}

fn workers(w: Option<usize>) -> Result<usize, Failure> {
    match w {
        Some(0) => Err(Failure::Usage("--workers must be positive".into())),
        Some(w) => Ok(w),
        None => Ok(RunOptions::default().workers),
    }
}

fn run_census(mut a: CensusArgs) -> Outcome {
    if !a.decomposability && !a.degeneracy {
        a.decomposability = true;
        a.degeneracy = true;
    }
    a.workers = Some(workers(a.workers)?);
    let cfg = config("census", &a);
    let report = census(
        a.n,
        CensusOptions {
            decomposability: a.decomposability,
            degeneracy: a.degeneracy,
            exemplars: a.exemplars,
            workers: a.workers.unwrap_or(1),
        },
    )?;
    match a.output.format {
        OutFormat::Json => {
            let mut v = serde_json::to_value(&report).expect("report serializes");
            if let Value::Object(m) = &mut v {
                m.insert("config".into(), cfg);
            }
            emit(&a.output, &format!("{v}\n"))?;
        }
        OutFormat::Csv => emit(&a.output, &format!("# config: {cfg}\n{}", report.to_csv()))?,
    }
    Ok(0)
}

fn mc(mut a: McArgs) -> Outcome {
    let w = workers(a.workers)?;
    a.workers = Some(w);
    let opts = RunOptions {
        workers: w,
        timing: a.timing,
    };
    let last = a.n_to.unwrap_or(a.n);
    if last < a.n {
        return Err(Failure::Usage("--n-to is below -n".into()));
    }
    let cfg = config("mc", &a);
    let format: Format = a.output.format.into();
    let existing = match (&a.output.out, a.resume) {
        (Some(path), true) if path.exists() => results::read_results(path, format)?,
        _ => Vec::new(),
    };
    let mut records = Vec::new();
    for n in a.n..=last {
        let rec = run_experiment(&a, n, opts)?;
        if existing.iter().any(|r| r.same_run(&rec)) {
            eprintln!("skipping {} n={n}: already recorded", rec.experiment);
            continue;
        }
        eprintln!(
            "{} n={n}: estimate {} (stderr {})",
            rec.experiment,
            rec.estimate,
            rec.sigma()
        );
        records.push(rec);
    }
    match &a.output.out {
        Some(path) => results::write_results(&records, path, format, Some(&cfg))?,
        None => emit(
            &a.output,
            &results::render_records(&records, format, Some(&cfg), true).map_err(Failure::Usage)?,
        )?,
    }
    Ok(0)
}

fn run_experiment(a: &McArgs, n: usize, opts: RunOptions) -> Result<ExperimentRecord, Failure> {
    let need = |x: Option<usize>, flag: &str| {
        x.ok_or_else(|| Failure::Usage(format!("this experiment needs {flag}")))
    };
    Ok(match a.experiment {
        Experiment::Nondecomposable => {
            if a.exact_cap > DECOMPOSABLE_HARD_CAP {
                return Err(Failure::Usage(format!(
                    "--exact-cap is at most {DECOMPOSABLE_HARD_CAP}"
                )));
            }
            exp::estimate_nondecomposable(n, a.p, a.exact_cap, a.samples, a.seed, opts)?
        }
        Experiment::C => exp::estimate_c(n, a.samples, a.seed, opts)?,
        Experiment::BStar => exp::estimate_b_star(
            n,
            a.s.unwrap_or(n.saturating_sub(1)),
            a.samples,
            a.seed,
            opts,
        )?,
        Experiment::Removal => exp::removal_process_stats(
            n,
            need(a.t, "-t")?,
            need(a.a, "-a")?,
            a.samples,
            a.seed,
            opts,
        )?,
        Experiment::DegreeParity => exp::degree_parity_gof(n, a.samples, a.seed, opts)?,
        Experiment::Forgetfulness => {
            let default = if n.is_multiple_of(2) {
                (1 << n) - 1
            } else {
                (1 << (n - 1)) - 1
            };
            exp::forgetfulness_gof(
                n,
                a.vertex,
                a.parities.unwrap_or(default),
                a.samples,
                a.seed,
                opts,
            )?
        }
        Experiment::Planted => {
            let kind = match a.kind {
                Kind::Uniform => PlantedKind::Uniform,
                Kind::Dense => PlantedKind::Dense,
                Kind::Sparse => PlantedKind::Sparse,
            };
            exp::planted_soundness(kind, a.samples, a.seed, opts)?
        }
    })
}

fn verify(a: VerifyArgs) -> Outcome {
    let cfg = config("verify-lemmas", &a);
    let cases: Vec<RigResult> = match a.suite {
        Suite::All => rigs::all_suites(),
        Suite::AbsorbVertex => rigs::absorb_vertex_suite(),
        Suite::AbsorbClique => rigs::absorb_clique_suite(32, 0x1a5e),
        Suite::Dense => rigs::dense_suite(),
        Suite::Sparse => rigs::sparse_suite(),
    };
    let failed = cases.iter().filter(|c| !c.passed).count();
    let text = match a.output.format {
        OutFormat::Json => {
            let mut s = format!("{}\n", json!({ "config": cfg }));
            for c in &cases {
                s.push_str(&serde_json::to_string(c).expect("rig result serializes"));
                s.push('\n');
            }
            s
        }
        OutFormat::Csv => {
            let mut rows = vec![vec![
                "suite".into(),
                "case".into(),
                "result".into(),
                "detail".into(),
            ]];
            rows.extend(cases.iter().map(|c| {
                vec![
                    c.suite.to_string(),
                    c.case.clone(),
                    if c.passed { "PASS" } else { "FAIL" }.to_string(),
                    c.detail.clone(),
                ]
            }));
            format!("# config: {cfg}\n{}", csv_lines(&rows))
        }
    };
    emit(&a.output, &text)?;
    eprintln!(
        "{} cases, {} passed, {failed} failed",
        cases.len(),
        cases.len() - failed
    );
    Ok(if failed == 0 { 0 } else { EXIT_NEGATIVE })
}
