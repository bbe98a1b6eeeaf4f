//! Experiment records on disk: CSV with a fixed header, or one JSON object
//! per line. Every write replaces the file through a temporary sibling and
//! a rename, so readers see either the old or the new contents.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::ResultsError;
use crate::experiments::ExperimentRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

const LEADING: [&str; 8] = ["experiment", "n", "p", "t", "a", "s", "samples", "seed"];
const TRAILING: [&str; 5] = ["statistic", "estimate", "stderr", "runtime_s", "build"];

/// CSV header for records with these tally names.
pub fn csv_header<'a>(tallies: impl IntoIterator<Item = &'a String>) -> Vec<String> {
    LEADING
        .iter()
        .map(|s| s.to_string())
        .chain(tallies.into_iter().map(|k| format!("tally_{k}")))
        .chain(TRAILING.iter().map(|s| s.to_string()))
        .collect()
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

fn csv_row(r: &ExperimentRecord) -> Vec<String> {
    let mut row = vec![
        r.experiment.clone(),
        r.n.to_string(),
        opt(r.p),
        opt(r.t),
        opt(r.a),
        opt(r.s),
        r.samples.to_string(),
        r.seed.to_string(),
    ];
    row.extend(r.tallies.values().map(|v| v.to_string()));
    row.extend([
        opt(r.statistic),
        r.estimate.to_string(),
        opt(r.stderr),
        opt(r.runtime_s),
        r.build.clone(),
    ]);
    row
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> ResultsError + '_ {
    move |source| ResultsError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn format_err(path: &Path, reason: impl Into<String>) -> ResultsError {
    ResultsError::Format {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

/// Writes `path` as `existing ++ body()` via a temporary file in the same
/// directory. If `body` fails, `path` is left as it was.
pub fn write_atomic(
    path: &Path,
    body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<(), ResultsError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(path))?;
    if path.exists() {
        let old = fs::read(path).map_err(io_err(path))?;
        tmp.write_all(&old).map_err(io_err(path))?;
    }
    body(&mut tmp).map_err(io_err(path))?;
    tmp.flush().map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| io_err(path)(e.error))?;
    Ok(())
}

/// First non-comment line of a CSV file, if any.
fn existing_header(path: &Path) -> Result<Option<String>, ResultsError> {
    if !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    Ok(text
        .lines()
        .find(|l| !l.starts_with('#') && !l.is_empty())
        .map(str::to_string))
}

/// Renders `records`, preceded by the config line and, for CSV when
/// `header` is set, the header row.
pub fn render_records(
    records: &[ExperimentRecord],
    format: Format,
    config: Option<&serde_json::Value>,
    header: bool,
) -> Result<String, String> {
    let mut out = Vec::new();
    match format {
        Format::Csv => {
            if let Some(c) = config {
                writeln!(out, "# config: {c}").map_err(|e| e.to_string())?;
            }
            let Some(first) = records.first() else {
                return String::from_utf8(out).map_err(|e| e.to_string());
            };
            let columns = csv_header(first.tallies.keys());
            if records
                .iter()
                .any(|r| csv_header(r.tallies.keys()) != columns)
            {
                return Err("records with different tallies cannot share a CSV file".into());
            }
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(&mut out);
            if header {
                w.write_record(&columns).map_err(|e| e.to_string())?;
            }
            for r in records {
                w.write_record(csv_row(r)).map_err(|e| e.to_string())?;
            }
            w.flush().map_err(|e| e.to_string())?;
        }
        Format::Json => {
            if let Some(c) = config {
                writeln!(out, "{}", serde_json::json!({ "config": c }))
                    .map_err(|e| e.to_string())?;
            }
            for r in records {
                let line = serde_json::to_string(r).map_err(|e| e.to_string())?;
                writeln!(out, "{line}").map_err(|e| e.to_string())?;
            }
        }
    }
    String::from_utf8(out).map_err(|e| e.to_string())
}

/// Appends `records`. A `config` object is written first, as a `# config:`
/// comment line in CSV or a `{"config": ...}` line in JSON.
pub fn write_results(
    records: &[ExperimentRecord],
    path: &Path,
    format: Format,
    config: Option<&serde_json::Value>,
) -> Result<(), ResultsError> {
    if records.is_empty() {
        return Ok(());
    }
    let header = match format {
        Format::Json => false,
        Format::Csv => {
            let joined = csv_header(records[0].tallies.keys()).join(",");
            match existing_header(path)? {
                Some(h) if h == joined => false,
                Some(h) => {
                    return Err(format_err(
                        path,
                        format!("existing header `{h}` differs from `{joined}`"),
                    ))
                }
                None => true,
            }
        }
    };
    let text = render_records(records, format, config, header).map_err(|e| format_err(path, e))?;
    write_atomic(path, |w| w.write_all(text.as_bytes()))
}

fn parse_opt<T: std::str::FromStr>(
    s: &str,
    path: &Path,
    col: &str,
) -> Result<Option<T>, ResultsError> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| format_err(path, format!("column {col}: cannot parse `{s}`")))
}

fn parse_req<T: std::str::FromStr>(s: &str, path: &Path, col: &str) -> Result<T, ResultsError> {
    parse_opt(s, path, col)?.ok_or_else(|| format_err(path, format!("column {col} is empty")))
}

/// Reads every record back, skipping config lines.
pub fn read_results(path: &Path, format: Format) -> Result<Vec<ExperimentRecord>, ResultsError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    match format {
        Format::Json => text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .filter(|l| !l.starts_with("{\"config\""))
            .map(|l| serde_json::from_str(l).map_err(|e| format_err(path, e.to_string())))
            .collect(),
        Format::Csv => {
            let mut rd = csv::ReaderBuilder::new()
                .comment(Some(b'#'))
                .from_reader(text.as_bytes());
            let header: Vec<String> = rd
                .headers()
                .map_err(|e| format_err(path, e.to_string()))?
                .iter()
                .map(str::to_string)
                .collect();
            let lead = LEADING.len();
            let tail = TRAILING.len();
            if header.len() < lead + tail
                || header[..lead] != LEADING
                || header[header.len() - tail..] != TRAILING
            {
                return Err(format_err(path, "unexpected CSV header"));
            }
            let tally_names: Vec<String> = header[lead..header.len() - tail]
                .iter()
                .map(|h| h.strip_prefix("tally_").map(str::to_string))
                .collect::<Option<_>>()
                .ok_or_else(|| format_err(path, "tally columns must start with tally_"))?;
            let mut out = Vec::new();
            for row in rd.records() {
                let row = row.map_err(|e| format_err(path, e.to_string()))?;
                let f: Vec<&str> = row.iter().collect();
                let m = tally_names.len();
                let mut tallies = BTreeMap::new();
                for (k, name) in tally_names.iter().enumerate() {
                    tallies.insert(name.clone(), parse_req(f[lead + k], path, name)?);
                }
                let t = lead + m;
                out.push(ExperimentRecord {
                    experiment: f[0].to_string(),
                    n: parse_req(f[1], path, "n")?,
                    p: parse_opt(f[2], path, "p")?,
                    t: parse_opt(f[3], path, "t")?,
                    a: parse_opt(f[4], path, "a")?,
                    s: parse_opt(f[5], path, "s")?,
                    samples: parse_req(f[6], path, "samples")?,
                    seed: parse_req(f[7], path, "seed")?,
                    tallies,
                    statistic: parse_opt(f[t], path, "statistic")?,
                    estimate: parse_req(f[t + 1], path, "estimate")?,
                    stderr: parse_opt(f[t + 2], path, "stderr")?,
                    runtime_s: parse_opt(f[t + 3], path, "runtime_s")?,
                    build: f[t + 4].to_string(),
                });
            }
            Ok(out)
        }
    }
}
